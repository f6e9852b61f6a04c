//! Small dense Levenberg–Marquardt for square-ish residual systems.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop once the residual norm drops below this.
    pub residual_tolerance: f64,
    /// Central-difference step for the Jacobian.
    pub jacobian_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iterations: 200, residual_tolerance: 1e-14, jacobian_step: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LmReport<const N: usize> {
    pub x: SVector<f64, N>,
    pub residual: f64,
    pub iterations: usize,
}

/// Minimizes `‖f(x)‖²` starting from `x0`. `f` returns `None` where it is
/// undefined; such points are treated as rejected steps.
pub fn minimize<const N: usize, const M: usize, F>(f: F, x0: SVector<f64, N>, opts: LmOptions) -> Option<LmReport<N>>
where
    F: Fn(&SVector<f64, N>) -> Option<SVector<f64, M>>,
{
    let mut x = x0;
    let mut r = f(&x)?;
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;

    while iterations < opts.max_iterations && cost.sqrt() > opts.residual_tolerance {
        iterations += 1;
        let mut jac = SMatrix::<f64, M, N>::zeros();
        for k in 0..N {
            let mut plus = x;
            let mut minus = x;
            plus[k] += opts.jacobian_step;
            minus[k] -= opts.jacobian_step;
            let (Some(rp), Some(rm)) = (f(&plus), f(&minus)) else {
                return Some(LmReport { x, residual: cost.sqrt(), iterations });
            };
            jac.set_column(k, &((rp - rm) / (2.0 * opts.jacobian_step)));
        }
        let jtj = jac.transpose() * jac;
        let grad = jac.transpose() * r;

        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj;
            for k in 0..N {
                damped[(k, k)] += lambda * (jtj[(k, k)] + 1e-12);
            }
            let lhs = DMatrix::from_column_slice(N, N, damped.as_slice());
            let rhs = DVector::from_column_slice((-grad).as_slice());
            let Some(step) = lhs.lu().solve(&rhs) else {
                lambda *= 4.0;
                continue;
            };
            let candidate = x + SVector::<f64, N>::from_column_slice(step.as_slice());
            if let Some(rc) = f(&candidate) {
                let c = rc.norm_squared();
                if c < cost {
                    x = candidate;
                    r = rc;
                    cost = c;
                    lambda = (lambda / 3.0).max(1e-15);
                    improved = true;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Some(LmReport { x, residual: cost.sqrt(), iterations })
}
