//! Quantum-optical realization of the diamond configuration.
//!
//! A four-level atom with level frequencies `ω₂, ω₃, ω₄` (`ω₁ = 0`) is driven
//! on the transitions 1↔2, 1↔3, 2↔4 and 3↔4 by fields of frequency `ω_ij`,
//! phase `φ_ij` and real quadratures `Ω̃_ij(t), Ω̃′_ij(t)`. In the rotating
//! frame `U₀ = diag(1, e^{i(ω₁₂t+φ₁₂)}, e^{i(ω₁₃t+φ₁₃)}, e^{i((ω₁₂+ω₂₄)t+φ₁₂+φ₂₄)})`
//! and under four-photon resonance `ω₁₃ + ω₃₄ = ω₁₂ + ω₂₄`, dropping the
//! terms at `2ω_ij` leaves a Hamiltonian of the same shape as the engineered
//! one. This module builds all three pictures and the map between them.

use std::fmt;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{Matrix4C, PhaseSchedule};
use crate::propagator::{propagate_cancellable, StateVector, Trajectory};
use crate::rotation_engine::CouplingSet;

/// Driven transitions in the order `12, 13, 24, 34` (zero-based levels).
pub const TRANSITIONS: [(usize, usize); 4] = [(0, 1), (0, 2), (1, 3), (2, 3)];

/// Resonance residual accepted by [`rwa_hamiltonian`].
pub const RESONANCE_TOLERANCE: f64 = 1e-9;

/// Lab-frame runs resolve the fastest frequency with at least this many steps per period.
pub const SAMPLES_PER_PERIOD: f64 = 40.0;

/// Quadratures `(Ω̃, Ω̃′)` of the four fields at time `t`.
pub type RabiFn = Arc<dyn Fn(f64) -> [(f64, f64); 4] + Send + Sync>;

#[derive(Clone)]
pub struct QOParams {
    /// `ω₂, ω₃, ω₄`.
    pub omega_levels: [f64; 3],
    /// `ω₁₂, ω₁₃, ω₂₄, ω₃₄`.
    pub omega_fields: [f64; 4],
    /// `φ₁₂, φ₁₃, φ₂₄, φ₃₄`.
    pub field_phases: [f64; 4],
    pub rabi: RabiFn,
}

impl fmt::Debug for QOParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QOParams")
            .field("omega_levels", &self.omega_levels)
            .field("omega_fields", &self.omega_fields)
            .field("field_phases", &self.field_phases)
            .finish_non_exhaustive()
    }
}

impl QOParams {
    /// Closed-loop phase `Φ = φ₁₂ − φ₁₃ + φ₂₄ − φ₃₄`.
    pub fn loop_phase(&self) -> f64 {
        let [p12, p13, p24, p34] = self.field_phases;
        p12 - p13 + p24 - p34
    }

    /// `Δ̃₂ = 2(ω₂ − ω₁₂)`, `Δ̃₃ = 2(ω₃ − ω₁₃)`, `Δ̃₄ = 2(ω₄ − ω₁₂ − ω₂₄)`.
    pub fn detunings(&self) -> [f64; 3] {
        let [w2, w3, w4] = self.omega_levels;
        let [w12, w13, w24, _] = self.omega_fields;
        [2.0 * (w2 - w12), 2.0 * (w3 - w13), 2.0 * (w4 - w12 - w24)]
    }

    /// Largest angular frequency present in the lab-frame Hamiltonian.
    pub fn max_frequency(&self) -> f64 {
        self.omega_levels.iter().chain(&self.omega_fields).fold(0.0, |m, w| m.max(w.abs()))
    }

    /// Smallest carrier frequency.
    pub fn min_field(&self) -> f64 {
        self.omega_fields.iter().fold(f64::INFINITY, |m, w| m.min(w.abs()))
    }

    pub fn summary(&self) -> QOSummary {
        QOSummary {
            omega_levels: self.omega_levels,
            omega_fields: self.omega_fields,
            field_phases: self.field_phases,
            detunings: self.detunings(),
            loop_phase: self.loop_phase(),
            resonance_residual: check_resonance(self),
        }
    }
}

/// Static part of [`QOParams`] for reports.
#[derive(Debug, Clone, Serialize)]
pub struct QOSummary {
    pub omega_levels: [f64; 3],
    pub omega_fields: [f64; 4],
    pub field_phases: [f64; 4],
    pub detunings: [f64; 3],
    pub loop_phase: f64,
    pub resonance_residual: f64,
}

/// `|ω₁₃ + ω₃₄ − ω₁₂ − ω₂₄|`.
pub fn check_resonance(qo: &QOParams) -> f64 {
    let [w12, w13, w24, w34] = qo.omega_fields;
    (w13 + w34 - w12 - w24).abs()
}

pub fn lab_hamiltonian(qo: &QOParams, t: f64) -> Matrix4C {
    let mut h = Matrix4C::zeros();
    for k in 0..3 {
        h[(k + 1, k + 1)] = Complex64::new(qo.omega_levels[k], 0.0);
    }
    let rabi = (qo.rabi)(t);
    for (idx, &(i, j)) in TRANSITIONS.iter().enumerate() {
        let (s, c) = (qo.omega_fields[idx] * t + qo.field_phases[idx]).sin_cos();
        let (re, im) = rabi[idx];
        let v = Complex64::new(re * c - im * s, 0.0);
        h[(i, j)] = v;
        h[(j, i)] = v;
    }
    h
}

fn frame_phases(qo: &QOParams, t: f64) -> [f64; 4] {
    let [w12, w13, w24, _] = qo.omega_fields;
    let [p12, p13, p24, _] = qo.field_phases;
    [0.0, w12 * t + p12, w13 * t + p13, (w12 + w24) * t + p12 + p24]
}

/// `U₀ H U₀† + iU̇₀U₀†` with every counter-rotating term kept.
pub fn interaction_picture_hamiltonian(qo: &QOParams, t: f64) -> Matrix4C {
    let h = lab_hamiltonian(qo, t);
    let a = frame_phases(qo, t);
    let [w12, w13, w24, _] = qo.omega_fields;
    let rates = [0.0, w12, w13, w12 + w24];
    Matrix4C::from_fn(|i, j| {
        let rotated = h[(i, j)] * Complex64::from_polar(1.0, a[i] - a[j]);
        if i == j {
            rotated - rates[i]
        } else {
            rotated
        }
    })
}

/// Rotating-wave Hamiltonian. Requires four-photon resonance.
pub fn rwa_hamiltonian(qo: &QOParams, t: f64) -> Result<Matrix4C> {
    let residual = check_resonance(qo);
    if !(residual <= RESONANCE_TOLERANCE) {
        return Err(Error::ResonanceViolation { residual });
    }
    let d = qo.detunings();
    let rabi = (qo.rabi)(t);
    let loop_factor = Complex64::from_polar(1.0, -qo.loop_phase());
    let mut h = Matrix4C::zeros();
    for k in 0..3 {
        h[(k + 1, k + 1)] = Complex64::new(0.5 * d[k], 0.0);
    }
    for (idx, &(i, j)) in TRANSITIONS.iter().enumerate() {
        let (re, im) = rabi[idx];
        let mut v = Complex64::new(0.5 * re, 0.5 * im);
        if idx == 3 {
            v *= loop_factor;
        }
        h[(i, j)] = v;
        h[(j, i)] = v.conj();
    }
    Ok(h)
}

/// Largest forbidden coupling accepted by [`engineered_to_qo`], relative to
/// the coupling scale.
const FORBIDDEN_RELATIVE: f64 = 1e-9;
const FORBIDDEN_GRID: usize = 200;

/// Field parameters whose rotating-wave Hamiltonian equals the engineered
/// `H(t)` of `couplings` and `ph`.
///
/// Equating diagonals gives `ω₁₂ = ω₂ + Δ₂`, `ω₁₃ = ω₃ + Δ₃` and
/// `ω₂₄ = ω₄ − ω₂ + Δ₄ − Δ₂`; `ω₃₄` follows from resonance. Off-diagonals
/// give `Ω̃_jk + iΩ̃′_jk = 2i e^{i(φ_j(t) − φ_k(t))} Ω_jk(t)`. Field phases
/// are zero, so `Φ = 0`.
pub fn engineered_to_qo<C>(couplings: C, ph: &PhaseSchedule, omega_levels: [f64; 3]) -> Result<QOParams>
where
    C: Fn(f64) -> CouplingSet + Send + Sync + 'static,
{
    if !omega_levels.iter().all(|w| w.is_finite()) {
        return Err(Error::InvalidArgument("level frequencies must be finite".into()));
    }
    let horizon = ph.horizon;
    let mut scale: f64 = 0.0;
    let mut forbidden: f64 = 0.0;
    for k in 0..FORBIDDEN_GRID {
        let c = couplings(horizon * k as f64 / (FORBIDDEN_GRID - 1) as f64);
        scale = scale.max(c.max_abs());
        forbidden = forbidden.max(c.omega14.abs()).max(c.omega23.abs());
    }
    if forbidden > FORBIDDEN_RELATIVE * scale.max(1.0) {
        return Err(Error::UnsupportedConfiguration(format!(
            "diamond realization needs Ω₁₄ = Ω₂₃ = 0, found |Ω| = {forbidden:e}"
        )));
    }

    let [w2, w3, w4] = omega_levels;
    let [d2, d3, d4] = ph.detunings();
    let w12 = w2 + d2;
    let w13 = w3 + d3;
    let w24 = w4 - w2 + d4 - d2;
    let w34 = w12 + w24 - w13;
    let omega_fields = [w12, w13, w24, w34];
    if omega_fields.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "level frequencies {omega_levels:?} give a non-positive field frequency {omega_fields:?}"
        )));
    }

    let min_field = omega_fields.iter().fold(f64::INFINITY, |m, w| m.min(*w));
    let phase_rates = [0.0, d2, d3, d4];
    for &(j, k) in &TRANSITIONS {
        let drift = (phase_rates[j] - phase_rates[k]).abs();
        if drift > 1e-2 * min_field {
            log::warn!(
                "quadratures of transition {}{} rotate at {drift:.3e}, not slow against the carrier {min_field:.3e}",
                j + 1,
                k + 1
            );
        }
    }

    let ph = *ph;
    let rabi: RabiFn = Arc::new(move |t| {
        let c = couplings(t);
        let p = ph.phases(t);
        let omega = [c.omega12, c.omega13, c.omega24, c.omega34];
        std::array::from_fn(|idx| {
            let (j, k) = TRANSITIONS[idx];
            let z = Complex64::new(0.0, 2.0) * Complex64::from_polar(omega[idx], p[j] - p[k]);
            (z.re, z.im)
        })
    });
    Ok(QOParams { omega_levels, omega_fields, field_phases: [0.0; 4], rabi })
}

/// Step count giving [`SAMPLES_PER_PERIOD`] steps per period of the fastest
/// lab-frame frequency.
pub fn lab_steps(qo: &QOParams, horizon: f64) -> usize {
    let periods = horizon * qo.max_frequency() / std::f64::consts::TAU;
    ((periods * SAMPLES_PER_PERIOD).ceil() as usize).max(crate::propagator::MIN_STEPS)
}

/// Propagates the lab-frame Hamiltonian at [`lab_steps`] resolution, keeping
/// about `samples` points. `cancel` is polled between steps.
pub fn propagate_lab(
    qo: &QOParams,
    psi0: StateVector,
    horizon: f64,
    samples: usize,
    cancel: Option<&AtomicBool>,
) -> Result<Trajectory> {
    let steps = lab_steps(qo, horizon);
    let stride = (steps / samples.max(1)).max(1);
    propagate_cancellable(|t| lab_hamiltonian(qo, t), psi0, horizon, steps, stride, cancel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{hermiticity_residual, total_hamiltonian};
    use crate::solvers::{coupling_schedules, solve, Ansatz, LevelConfig, SolvedAngles, TargetSpec};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn fixed(omega_fields: [f64; 4], rabi: [(f64, f64); 4]) -> QOParams {
        QOParams {
            omega_levels: [5.0, 7.0, 12.0],
            omega_fields,
            field_phases: [0.0; 4],
            rabi: Arc::new(move |_| rabi),
        }
    }

    fn diamond() -> (SolvedAngles, PhaseSchedule) {
        let t = TargetSpec::new([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap().with_param("theta1", PI / 2.0);
        let s = solve(LevelConfig::Diamond, &t, &Ansatz::cosine(1.0)).unwrap();
        (s, PhaseSchedule::new([0.0; 3], [0.0, PI / 2.0, 0.0], 1.0).unwrap())
    }

    fn mapped(s: &SolvedAngles, ph: &PhaseSchedule, levels: [f64; 3]) -> QOParams {
        let s2 = s.clone();
        engineered_to_qo(move |t| coupling_schedules(LevelConfig::Diamond, &s2, t), ph, levels).unwrap()
    }

    #[test]
    fn lab_without_drive_is_diagonal() {
        let qo = fixed([1.0; 4], [(0.0, 0.0); 4]);
        let h = lab_hamiltonian(&qo, 0.3);
        let expected = Matrix4C::from_diagonal(&nalgebra::Vector4::new(0.0, 5.0, 7.0, 12.0).map(|v| Complex64::new(v, 0.0)));
        assert_eq!(h, expected);
    }

    #[test]
    fn lab_entry_at_origin() {
        let qo = fixed([1.0; 4], [(0.7, 0.3), (0.1, 0.2), (0.3, 0.4), (0.5, 0.6)]);
        let h = lab_hamiltonian(&qo, 0.0);
        assert_eq!(h[(0, 1)], Complex64::new(0.7, 0.0));
        assert_eq!(h[(0, 3)], Complex64::new(0.0, 0.0));
        assert_eq!(h[(1, 2)], Complex64::new(0.0, 0.0));
        assert!(hermiticity_residual(&lab_hamiltonian(&qo, 1.7)) < 1e-14);
    }

    #[test]
    fn detuning_example_and_structural_zeros() {
        let mut qo = fixed([4.9, 7.0, 7.1, 5.0], [(0.7, 0.3), (0.1, 0.2), (0.3, 0.4), (0.5, 0.6)]);
        assert!((qo.detunings()[0] - 0.2).abs() < 1e-14);
        let h = rwa_hamiltonian(&qo, 0.4).unwrap();
        assert_eq!(h[(0, 3)], Complex64::new(0.0, 0.0));
        assert_eq!(h[(1, 2)], Complex64::new(0.0, 0.0));
        qo.omega_fields[3] += 1e-6;
        assert!(matches!(rwa_hamiltonian(&qo, 0.4), Err(Error::ResonanceViolation { .. })));
    }

    #[test]
    fn resonant_fields_without_drive_give_zero() {
        let qo = fixed([5.0, 7.0, 7.0, 5.0], [(0.0, 0.0); 4]);
        assert_eq!(rwa_hamiltonian(&qo, 0.1).unwrap(), Matrix4C::zeros());
    }

    #[test]
    fn resonance_residual() {
        let mut qo = fixed([1.0; 4], [(0.0, 0.0); 4]);
        assert_eq!(check_resonance(&qo), 0.0);
        qo.omega_fields[3] = 1.5;
        assert_eq!(check_resonance(&qo), 0.5);
    }

    #[test]
    fn zero_phases_map_to_level_resonance() {
        let (s, _) = diamond();
        let qo = mapped(&s, &PhaseSchedule::zero(1.0), [100.0, 130.0, 250.0]);
        assert_eq!(qo.omega_fields, [100.0, 130.0, 150.0, 120.0]);
    }

    #[test]
    fn diamond_mapping_closes() {
        let (s, ph) = diamond();
        let qo = mapped(&s, &ph, [100.0, 130.0, 250.0]);
        assert!((qo.omega_fields[1] - (130.0 + PI / 2.0)).abs() < 1e-12);
        assert!(check_resonance(&qo) < 1e-12);
        for k in 0..=50 {
            let t = k as f64 / 50.0;
            let rwa = rwa_hamiltonian(&qo, t).unwrap();
            let eng = total_hamiltonian(&coupling_schedules(LevelConfig::Diamond, &s, t), &ph, t);
            assert!((rwa - eng).iter().all(|z| z.norm() < 1e-10), "t = {t}");
        }
    }

    #[test]
    fn non_diamond_couplings_rejected() {
        let r = 1.0 / 3f64.sqrt();
        let s = solve(LevelConfig::NType, &TargetSpec::new([0.0, r, r, r]).unwrap(), &Ansatz::cosine(1.0)).unwrap();
        let r = engineered_to_qo(move |t| coupling_schedules(LevelConfig::NType, &s, t), &PhaseSchedule::zero(1.0), [10.0, 20.0, 30.0]);
        assert!(matches!(r, Err(Error::UnsupportedConfiguration(_))));
    }

    /// Interaction-picture entries against the expanded form with explicit
    /// co- and counter-rotating exponentials.
    #[test]
    fn interaction_picture_expansion() {
        let mut qo = fixed([4.9, 7.2, 7.3, 5.0], [(0.7, 0.3), (0.1, -0.2), (0.3, 0.4), (-0.5, 0.6)]);
        qo.field_phases = [0.3, -0.2, 0.5, 1.1];
        let t = 0.37;
        let h = interaction_picture_hamiltonian(&qo, t);
        let rabi = (qo.rabi)(t);
        let phi = qo.loop_phase();
        let i = Complex64::i();
        for (idx, &(a, b)) in TRANSITIONS.iter().enumerate() {
            let x = qo.omega_fields[idx] * t + qo.field_phases[idx];
            let e = Complex64::from_polar(1.0, -2.0 * x);
            let (re, im) = rabi[idx];
            let mut v = (re * (1.0 + e) + i * im * (1.0 - e)) * 0.5;
            if idx == 3 {
                v *= Complex64::from_polar(1.0, -phi);
            }
            // The 3↔4 entry also carries the resonance mismatch.
            let mismatch = if idx == 3 {
                let [w12, w13, w24, w34] = qo.omega_fields;
                Complex64::from_polar(1.0, (w13 + w34 - w12 - w24) * t)
            } else {
                Complex64::new(1.0, 0.0)
            };
            assert!((h[(a, b)] - v * mismatch).norm() < 1e-12, "transition {idx}");
        }
        let d = qo.detunings();
        for k in 0..3 {
            assert!((h[(k + 1, k + 1)].re - 0.5 * d[k]).abs() < 1e-12);
        }
    }

    /// Windowed average of the interaction-picture Hamiltonian approaches
    /// the RWA form as the carriers speed up.
    #[test]
    fn averaged_interaction_picture_approaches_rwa() {
        let (s, ph) = diamond();
        let gap = |scale: f64| {
            let qo = mapped(&s, &ph, [scale, 1.3 * scale, 2.5 * scale]);
            let t = 0.4;
            let window = 50.0 * std::f64::consts::TAU / qo.min_field();
            let n = 4000;
            let mut avg = Matrix4C::zeros();
            for k in 0..n {
                let tk = t - 0.5 * window + window * (k as f64 + 0.5) / n as f64;
                avg += interaction_picture_hamiltonian(&qo, tk) / Complex64::new(n as f64, 0.0);
            }
            let rwa = rwa_hamiltonian(&qo, t).unwrap();
            (avg - rwa).iter().fold(0.0, |m: f64, z| m.max(z.norm()))
        };
        let g3 = gap(1e3);
        let g4 = gap(1e4);
        assert!(g4 < g3, "{g3} {g4}");
        assert!(g4 < 1e-2);
    }

    #[test]
    fn lab_step_count_resolves_carrier() {
        let (s, ph) = diamond();
        let qo = mapped(&s, &ph, [1000.0, 1300.0, 2500.0]);
        let steps = lab_steps(&qo, 1.0);
        assert!(steps as f64 * std::f64::consts::TAU / 2500.0 >= 40.0 - 1e-9);
    }
}
