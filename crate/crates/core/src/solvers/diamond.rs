use nalgebra::{Vector3, Vector4};

use super::lm::{self, LmOptions};
use super::{Ansatz, LevelConfig, SolvedAngles, TargetSpec};
use crate::error::{Error, Result};
use crate::rotation_engine::AnglePair;

/// A branch is accepted when it reproduces `b` to this accuracy.
const BRANCH_TOLERANCE: f64 = 1e-9;

/// Final amplitudes of `U_r(T)|1⟩` under the diamond constraints
/// `φ₁ = φ₂ = 0` with constant `θ₁, θ₂`.
pub fn diamond_final_state(gamma1: f64, gamma2: f64, theta1: f64, theta2: f64) -> Vector4<f64> {
    let (c, a) = gamma1.sin_cos();
    let (d, b) = gamma2.sin_cos();
    let (g, e) = theta1.sin_cos();
    let (h, f) = theta2.sin_cos();
    Vector4::new(
        a * b - c * d * (e * f + g * h),
        c * b * e + a * d * f,
        c * b * g + a * d * h,
        c * d * (h * e - g * f),
    )
}

/// Cosines and sines of the final angles:
/// `A, C` of γ₁(T), `B, D` of γ₂(T) and `F, H` of θ₂.
#[derive(Debug, Clone, Copy)]
struct DiamondVariables {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    f: f64,
    h: f64,
}

impl DiamondVariables {
    fn angles(&self) -> (f64, f64, f64) {
        (self.c.atan2(self.a), self.d.atan2(self.b), self.h.atan2(self.f))
    }
}

/// Closed-form inversion for a given sign of `D = sin γ₂(T)`. Returns
/// `None` when the common denominator vanishes for this `θ₁`.
fn closed_form(target: &[f64; 4], theta1: f64, d_sign: f64) -> Option<DiamondVariables> {
    let [b1, b2, b3, b4] = *target;
    let (g, e) = theta1.sin_cos();
    let cross = b3 * e - b2 * g;
    // (b₃² + b₄²)E² − 2b₂b₃EG + (b₂² + b₄²)G², which equals b₄² + (b₃E − b₂G)².
    let denom = b4 * b4 + cross * cross;
    if denom < 1e-24 {
        return None;
    }
    let root = denom.sqrt();

    let a = cross / root;
    let c = b4 / root;
    let b = ((b1 * b3 + b2 * b4) * e + (b3 * b4 - b1 * b2) * g) / root;
    let d = d_sign * (1.0 - b * b).max(0.0).sqrt();
    let (f, h) = if d.abs() < 1e-12 {
        // sin γ₂ = 0 removes θ₂ from the final state.
        (1.0, 0.0)
    } else {
        (
            -((b4 * b1 - b2 * b3) * e + (b2 * b2 + b4 * b4) * g) / (root * d),
            ((b3 * b3 + b4 * b4) * e - (b2 * b3 + b1 * b4) * g) / (root * d),
        )
    };
    Some(DiamondVariables { a, b, c, d, f, h })
}

/// Diamond configuration: `φ₁ = φ₂ = 0` and constant `θ₁, θ₂` cancel
/// `Ω₁₄` and `Ω₂₃`. `θ₁` is free and must be supplied as the `theta1`
/// parameter of the target.
///
/// The closed-form inversion is tried for both signs of `sin γ₂(T)`; the
/// first branch reproducing `b` within 1e-9 wins. If round-off near
/// `|cos γ₂| = 1` spoils both, the best branch is polished with a few
/// Levenberg–Marquardt iterations on the same equations.
pub fn solve_diamond(target: &TargetSpec, ansatz: &Ansatz) -> Result<SolvedAngles> {
    target.validate()?;
    ansatz.validate()?;
    let theta1 = target
        .param("theta1")
        .ok_or_else(|| Error::InvalidArgument("diamond solver needs the free parameter theta1".into()))?;

    let finish = |gamma1: f64, gamma2: f64, theta2: f64| {
        let start = AnglePair::new(0.0, theta1, 0.0, 0.0, theta2, 0.0);
        let end = AnglePair::new(gamma1, theta1, 0.0, gamma2, theta2, 0.0);
        SolvedAngles::from_ramp(LevelConfig::Diamond, start, end, ansatz, target)
    };

    if target.is_ground_state() {
        return Ok(finish(0.0, 0.0, 0.0));
    }

    let b_vec = target.vector();
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for sign in [1.0, -1.0] {
        let v = closed_form(&target.b, theta1, sign).ok_or(Error::SingularParameterization { theta1 })?;
        let (gamma1, gamma2, theta2) = v.angles();
        let residual = (diamond_final_state(gamma1, gamma2, theta1, theta2) - b_vec).norm();
        if residual < BRANCH_TOLERANCE {
            return Ok(finish(gamma1, gamma2, theta2));
        }
        if best.is_none_or(|(r, ..)| residual < r) {
            best = Some((residual, gamma1, gamma2, theta2));
        }
    }

    let (best_residual, g1, g2, t2) = best.expect("two branches evaluated");
    let residuals = |x: &Vector3<f64>| Some(diamond_final_state(x[0], x[1], theta1, x[2]) - b_vec);
    if let Some(rep) = lm::minimize(residuals, Vector3::new(g1, g2, t2), LmOptions::default()) {
        if rep.residual < BRANCH_TOLERANCE {
            return Ok(finish(rep.x[0], rep.x[1], rep.x[2]));
        }
    }
    Err(Error::Branch { best_residual })
}
