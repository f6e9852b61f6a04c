use std::f64::consts::PI;

use super::{Ansatz, LevelConfig, SolvedAngles, TargetSpec};
use crate::error::Result;
use crate::rotation_engine::AnglePair;

const DEGENERATE: f64 = 1e-14;

/// Inverse tripod: both quaternions share `(γ, θ, φ)`, which makes `U_r` a
/// simple rotation in the plane of `|1⟩` and the unit vector
/// `(cos θ, sin θ cos φ, sin θ sin φ)` over levels 2–4.
///
/// The final state is `b = (cos 2γ, sin 2γ cos θ, sin 2γ sin θ cos φ,
/// sin 2γ sin θ sin φ)`, which is inverted with non-negative square roots.
/// Degenerate directions are fixed at zero: `φ = 0` when `b₃ = b₄ = 0`, and
/// `θ = φ = 0` when `b₂ = b₃ = b₄ = 0`.
pub fn solve_tripod(target: &TargetSpec, ansatz: &Ansatz) -> Result<SolvedAngles> {
    target.validate()?;
    ansatz.validate()?;
    let [b1, b2, b3, b4] = target.b;

    let transverse = (b3 * b3 + b4 * b4).sqrt();
    let excited = (b2 * b2 + transverse * transverse).sqrt();

    let gamma = 0.5 * excited.atan2(b1);
    let (theta, phi) = if excited <= DEGENERATE {
        (0.0, 0.0)
    } else if transverse <= DEGENERATE {
        (transverse.atan2(b2), 0.0)
    } else {
        (transverse.atan2(b2), b4.atan2(b3).rem_euclid(2.0 * PI))
    };

    let start = AnglePair::new(0.0, theta, phi, 0.0, theta, phi);
    let end = AnglePair::new(gamma, theta, phi, gamma, theta, phi);
    Ok(SolvedAngles::from_ramp(LevelConfig::InverseTripod, start, end, ansatz, target))
}
