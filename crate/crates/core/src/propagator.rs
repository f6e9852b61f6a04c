//! Time-dependent Schrödinger equation `iψ̇ = H(t)ψ` on four levels.
//!
//! Steps use the fourth-order commutator-free Magnus scheme
//!
//! ```text
//! ψ ← exp(−iδ(α₁H₁ + α₂H₂)) · exp(−iδ(α₂H₁ + α₁H₂)) ψ
//! ```
//!
//! with `H₁, H₂` sampled at the Gauss points `t + (1/2 ∓ √3/6)δ`,
//! `α₁ = 1/4 − √3/6` and `α₂ = 1/4 + √3/6`. Each factor is unitary, so the
//! norm is only affected by round-off.

use std::sync::atomic::{AtomicBool, Ordering};

use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{analytic_evolution, hermiticity_residual, Matrix4C, PhaseSchedule};
use crate::solvers::SolvedAngles;

pub type StateVector = Vector4<Complex64>;

pub const DEFAULT_STEPS: usize = 2000;
pub const MIN_STEPS: usize = 100;
/// Samples of `H` further than this from Hermitian are rejected.
pub const HERMITIAN_LIMIT: f64 = 1e-9;
/// Norm drift beyond this is reported as an accuracy failure.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Input states must be normalized to this accuracy.
pub const STATE_NORM_TOLERANCE: f64 = 1e-10;
/// Below this `|c₁|`, phases are read out without a reference.
const PHASE_REFERENCE_FLOOR: f64 = 1e-8;

/// Basis state `|k⟩`, one-based.
pub fn basis_state(k: usize) -> StateVector {
    assert!((1..=4).contains(&k), "basis index {k} outside 1..=4");
    let mut v = StateVector::zeros();
    v[k - 1] = Complex64::new(1.0, 0.0);
    v
}

pub fn check_state(psi: &StateVector) -> Result<()> {
    let n2 = psi.norm_squared();
    if !n2.is_finite() || (n2 - 1.0).abs() > STATE_NORM_TOLERANCE {
        return Err(Error::InvalidArgument(format!("state is not normalized: ‖ψ‖² = {n2}")));
    }
    Ok(())
}

/// How the phases of a sample were read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseReference {
    /// `arg c_k − arg c₁`.
    Ground,
    /// `arg c_k`, used when `|c₁|` is negligible.
    Absolute,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub populations: Vec<[f64; 4]>,
    /// Phases of levels 2–4 in `(−π, π]`.
    pub phases: Vec<[f64; 3]>,
    pub phase_reference: Vec<PhaseReference>,
    /// `max |‖ψ‖ − 1|` over the grid.
    pub norm_drift: f64,
}

impl Trajectory {
    fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            populations: Vec::with_capacity(n),
            phases: Vec::with_capacity(n),
            phase_reference: Vec::with_capacity(n),
            norm_drift: 0.0,
        }
    }

    fn push(&mut self, t: f64, psi: StateVector) {
        let (phases, reference) = read_phases(&psi);
        self.times.push(t);
        self.populations.push(std::array::from_fn(|k| psi[k].norm_sqr()));
        self.phases.push(phases);
        self.phase_reference.push(reference);
        self.norm_drift = self.norm_drift.max((psi.norm() - 1.0).abs());
        self.states.push(psi);
    }

    pub fn final_state(&self) -> StateVector {
        *self.states.last().expect("trajectory has at least one sample")
    }

    pub fn final_populations(&self) -> [f64; 4] {
        *self.populations.last().expect("trajectory has at least one sample")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn read_phases(psi: &StateVector) -> ([f64; 3], PhaseReference) {
    if psi[0].norm() > PHASE_REFERENCE_FLOOR {
        let r = psi[0].conj();
        (std::array::from_fn(|k| (psi[k + 1] * r).arg()), PhaseReference::Ground)
    } else {
        (std::array::from_fn(|k| psi[k + 1].arg()), PhaseReference::Absolute)
    }
}

const SQRT3: f64 = 1.732_050_807_568_877_2;
const C1: f64 = 0.5 - SQRT3 / 6.0;
const C2: f64 = 0.5 + SQRT3 / 6.0;
const A1: f64 = 0.25 - SQRT3 / 6.0;
const A2: f64 = 0.25 + SQRT3 / 6.0;

fn sample<H: Fn(f64) -> Matrix4C>(h: &H, t: f64) -> Result<Matrix4C> {
    let m = h(t);
    let residual = hermiticity_residual(&m);
    if !(residual <= HERMITIAN_LIMIT) {
        return Err(Error::InvalidHamiltonian { t, residual });
    }
    Ok(m)
}

/// One step of length `dt` from `t`.
fn cf4_step<H: Fn(f64) -> Matrix4C>(h: &H, t: f64, dt: f64, psi: &StateVector) -> Result<StateVector> {
    let h1 = sample(h, t + C1 * dt)?;
    let h2 = sample(h, t + C2 * dt)?;
    let (a1, a2) = (Complex64::new(0.0, -dt * A1), Complex64::new(0.0, -dt * A2));
    let first = (h1 * a2 + h2 * a1).exp();
    let second = (h1 * a1 + h2 * a2).exp();
    Ok(second * (first * psi))
}

fn validate(psi0: &StateVector, horizon: f64, steps: usize) -> Result<()> {
    check_state(psi0)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    if steps < MIN_STEPS {
        return Err(Error::InvalidArgument(format!("at least {MIN_STEPS} steps are required, got {steps}")));
    }
    Ok(())
}

/// Integrates over `[0, T]` on a uniform grid and records every step.
pub fn propagate<H: Fn(f64) -> Matrix4C>(h_of_t: H, psi0: StateVector, horizon: f64, steps: usize) -> Result<Trajectory> {
    propagate_sampled(h_of_t, psi0, horizon, steps, 1)
}

/// As [`propagate`] but records only every `stride`-th step (and the last).
pub fn propagate_sampled<H: Fn(f64) -> Matrix4C>(
    h_of_t: H,
    psi0: StateVector,
    horizon: f64,
    steps: usize,
    stride: usize,
) -> Result<Trajectory> {
    propagate_cancellable(h_of_t, psi0, horizon, steps, stride, None)
}

/// As [`propagate_sampled`], polling `cancel` between steps. A raised flag
/// ends the run with [`Error::Cancelled`].
pub fn propagate_cancellable<H: Fn(f64) -> Matrix4C>(
    h_of_t: H,
    psi0: StateVector,
    horizon: f64,
    steps: usize,
    stride: usize,
    cancel: Option<&AtomicBool>,
) -> Result<Trajectory> {
    validate(&psi0, horizon, steps)?;
    let stride = stride.max(1);
    let dt = horizon / steps as f64;
    let mut traj = Trajectory::with_capacity(steps / stride + 2);
    let mut psi = psi0;
    traj.push(0.0, psi);
    for k in 0..steps {
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            return Err(Error::Cancelled { t: k as f64 * dt });
        }
        psi = cf4_step(&h_of_t, k as f64 * dt, dt, &psi)?;
        let t = if k + 1 == steps { horizon } else { (k + 1) as f64 * dt };
        if (k + 1) % stride == 0 || k + 1 == steps {
            traj.push(t, psi);
        } else {
            traj.norm_drift = traj.norm_drift.max((psi.norm() - 1.0).abs());
        }
    }
    if traj.norm_drift > NORM_DRIFT_LIMIT {
        return Err(Error::Accuracy { drift: traj.norm_drift, limit: NORM_DRIFT_LIMIT });
    }
    Ok(traj)
}

/// `|⟨target|ψ⟩|²` modulo global phase, otherwise `max(0, Re⟨target|ψ⟩)²`,
/// which equals one only for identical amplitude vectors.
pub fn fidelity(psi: &StateVector, target: &StateVector, mod_global_phase: bool) -> f64 {
    let overlap = target.dotc(psi);
    let f = if mod_global_phase { overlap.norm_sqr() } else { overlap.re.max(0.0).powi(2) };
    f.min(1.0)
}

/// `max_t ‖ψ(t) − U(t)ψ(0)‖` against the exact evolution of `solved`.
pub fn compare_with_analytic(traj: &Trajectory, solved: &SolvedAngles, ph: &PhaseSchedule) -> f64 {
    let Some(psi0) = traj.states.first() else {
        return 0.0;
    };
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(&t, psi)| (psi - analytic_evolution(solved, ph, t) * psi0).norm())
        .fold(0.0, f64::max)
}
