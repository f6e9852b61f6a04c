//! Physical Hamiltonian assembled from rotation couplings and bare-state phases.
//!
//! With `|ψ⟩ = K|ψ_r⟩` and `K = diag(1, e^{iφ₂}, e^{iφ₃}, e^{iφ₄})` the total
//! Hamiltonian is `H = iK̇K† + K H_r K†` (ħ = 1). Phases are interpolated
//! linearly, so `iK̇K† = −diag(0, Δ₂, Δ₃, Δ₄)`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rotation_engine::{ur_of_angles, CouplingSet, COUPLING_PAIRS};
use crate::solvers::{coupling_schedules, SolvedAngles};

pub type Matrix4C = Matrix4<Complex64>;

/// Hermiticity tolerance for Hamiltonians.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Linear phases `φ_k(t) = ε_k + Δ_k t` of levels 2–4, `Δ_k = (ε′_k − ε_k)/T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSchedule {
    pub eps: [f64; 3],
    pub eps_prime: [f64; 3],
    pub horizon: f64,
}

impl PhaseSchedule {
    pub fn new(eps: [f64; 3], eps_prime: [f64; 3], horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
        }
        if !eps.iter().chain(&eps_prime).all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("phases must be finite".into()));
        }
        Ok(Self { eps, eps_prime, horizon })
    }

    /// No phases at all.
    pub fn zero(horizon: f64) -> Self {
        Self { eps: [0.0; 3], eps_prime: [0.0; 3], horizon }
    }

    pub fn detunings(&self) -> [f64; 3] {
        std::array::from_fn(|k| (self.eps_prime[k] - self.eps[k]) / self.horizon)
    }

    /// `(0, φ₂, φ₃, φ₄)` at time `t`. The end point is returned exactly.
    pub fn phases(&self, t: f64) -> [f64; 4] {
        if t == self.horizon {
            return [0.0, self.eps_prime[0], self.eps_prime[1], self.eps_prime[2]];
        }
        let d = self.detunings();
        [0.0, self.eps[0] + d[0] * t, self.eps[1] + d[1] * t, self.eps[2] + d[2] * t]
    }
}

pub fn phase_operator(ph: &PhaseSchedule, t: f64) -> Matrix4C {
    let p = ph.phases(t);
    Matrix4C::from_diagonal(&nalgebra::Vector4::from(p.map(|a| Complex64::from_polar(1.0, a))))
}

/// `H(t)`: diagonal `(0, −Δ₂, −Δ₃, −Δ₄)` and `H_nm = i e^{i(φ_n − φ_m)} Ω_nm`
/// above the diagonal, mirrored by conjugation below.
pub fn total_hamiltonian(couplings: &CouplingSet, ph: &PhaseSchedule, t: f64) -> Matrix4C {
    let p = ph.phases(t);
    let d = ph.detunings();
    let omega = couplings.to_array();
    let mut h = Matrix4C::zeros();
    for k in 0..3 {
        h[(k + 1, k + 1)] = Complex64::new(-d[k], 0.0);
    }
    for (idx, &(n, m)) in COUPLING_PAIRS.iter().enumerate() {
        let v = Complex64::i() * Complex64::from_polar(omega[idx], p[n] - p[m]);
        h[(n, m)] = v;
        h[(m, n)] = v.conj();
    }
    h
}

/// `t ↦ H(t)` built from the closed-form couplings of the solved
/// configuration, so forbidden couplings are exactly zero.
pub fn engineered_hamiltonian<'a>(solved: &'a SolvedAngles, ph: &'a PhaseSchedule) -> impl Fn(f64) -> Matrix4C + 'a {
    move |t| total_hamiltonian(&coupling_schedules(solved.config, solved, t), ph, t)
}

/// Largest entry of `H − H†`.
pub fn hermiticity_residual(h: &Matrix4C) -> f64 {
    (h - h.adjoint()).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Exact propagator `U(t) = K(t) U_r(t) K†(0)`.
pub fn analytic_evolution(solved: &SolvedAngles, ph: &PhaseSchedule, t: f64) -> Matrix4C {
    let ur = ur_of_angles(&solved.schedule.value(t)).map(|v| Complex64::new(v, 0.0));
    phase_operator(ph, t) * ur * phase_operator(ph, 0.0).adjoint()
}

/// Largest entry of `U†U − I`.
pub fn unitarity_residual(u: &Matrix4C) -> f64 {
    (u.adjoint() * u - Matrix4C::identity()).iter().fold(0.0, |m, z| m.max(z.norm()))
}
