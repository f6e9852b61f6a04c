use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lm::{self, LmOptions};
use super::{Ansatz, LevelConfig, SolvedAngles, TargetSpec};
use crate::error::{Error, Result};
use crate::rotation_engine::{ur_of_angles, AnglePair};

/// A root is reported when `‖U_r(T)|1⟩ − b‖` falls below this.
pub const NTYPE_TOLERANCE: f64 = 1e-8;
/// Roots at least this accurate compete on pulse area.
const CLEAN_ROOT: f64 = 1e-12;
/// |sin θ₁| below this is treated as the constraint singularity.
const MIN_SIN_THETA1: f64 = 1e-6;

/// Starting point `(θ₁, θ₂, γ₂(T))` for the N-type root finder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NTypeSeed {
    pub theta1: f64,
    pub theta2: f64,
    pub gamma2: f64,
}

impl NTypeSeed {
    /// Reads `theta1`, `theta2` and `gamma2` from the target parameters.
    pub fn from_target(target: &TargetSpec) -> Option<Self> {
        Some(Self {
            theta1: target.param("theta1")?,
            theta2: target.param("theta2")?,
            gamma2: target.param("gamma2")?,
        })
    }

    fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.theta1, self.theta2, self.gamma2)
    }
}

/// Full angle set on the N-type constraint manifold: `φ₁ = φ₂ = π/2`,
/// constant `θ`'s and `γ₁ = −(sin θ₂ / sin θ₁) γ₂`.
pub fn ntype_angles(theta1: f64, theta2: f64, gamma2: f64) -> Result<AnglePair> {
    let s1 = theta1.sin();
    if s1.abs() < MIN_SIN_THETA1 {
        return Err(Error::ConstraintSingularity);
    }
    let gamma1 = -(theta2.sin() / s1) * gamma2;
    Ok(AnglePair::new(gamma1, theta1, FRAC_PI_2, gamma2, theta2, FRAC_PI_2))
}

fn residuals(x: &Vector3<f64>, b: &Vector4<f64>) -> Option<Vector4<f64>> {
    let angles = ntype_angles(x[0], x[1], x[2]).ok()?;
    Some(ur_of_angles(&angles).column(0) - b)
}

fn build(target: &TargetSpec, ansatz: &Ansatz, x: &Vector3<f64>) -> Result<SolvedAngles> {
    let end = ntype_angles(x[0], x[1], x[2])?;
    let start = AnglePair { gamma1: 0.0, gamma2: 0.0, ..end };
    Ok(SolvedAngles::from_ramp(LevelConfig::NType, start, end, ansatz, target))
}

/// Runs the root finder from a single seed.
pub fn solve_ntype_from_seed(target: &TargetSpec, ansatz: &Ansatz, seed: NTypeSeed) -> Result<SolvedAngles> {
    target.validate()?;
    ansatz.validate()?;
    ntype_angles(seed.theta1, seed.theta2, seed.gamma2)?;
    let b = target.vector();
    let rep = lm::minimize(|x| residuals(x, &b), seed.to_vector(), LmOptions::default())
        .ok_or(Error::ConstraintSingularity)?;
    if rep.residual >= NTYPE_TOLERANCE {
        return Err(Error::NoSolution { starts: 1, best_residual: rep.residual });
    }
    build(target, ansatz, &rep.x)
}

/// Deterministic starting points: an optional caller seed, a coarse grid
/// over `(θ₁, θ₂, γ₂)` and then seeded pseudo-random draws.
pub fn ntype_starts(target: &TargetSpec, rng_seed: u64, random_starts: usize) -> Vec<Vector3<f64>> {
    let mut starts = Vec::new();
    if let Some(seed) = NTypeSeed::from_target(target) {
        starts.push(seed.to_vector());
    }
    for theta1 in [PI / 6.0, PI / 3.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0] {
        for theta2 in [-3.0 * PI / 4.0, -PI / 4.0, PI / 4.0, 3.0 * PI / 4.0] {
            for gamma2 in [-PI / 3.0, PI / 3.0] {
                starts.push(Vector3::new(theta1, theta2, gamma2));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..random_starts {
        starts.push(Vector3::new(
            rng.random_range(0.15..PI - 0.15),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        ));
    }
    starts
}

/// N-type configuration solved numerically; there is no closed form.
///
/// A caller seed (`theta1`, `theta2`, `gamma2` in the target parameters) is
/// tried first and kept if it converges. Otherwise every start is run and,
/// among the roots reaching 1e-12, the one with the smallest pulse area
/// `|γ₁(T)| + |γ₂(T)|` wins (ties go to the earlier start). Without such a
/// root the best residual below [`NTYPE_TOLERANCE`] is accepted.
pub fn solve_ntype_multistart(
    target: &TargetSpec,
    ansatz: &Ansatz,
    rng_seed: u64,
    random_starts: usize,
) -> Result<SolvedAngles> {
    target.validate()?;
    ansatz.validate()?;
    if target.is_ground_state() {
        return build(target, ansatz, &Vector3::new(FRAC_PI_2, FRAC_PI_2, 0.0));
    }
    let b = target.vector();
    let starts = ntype_starts(target, rng_seed, random_starts);
    let user_seed = NTypeSeed::from_target(target).is_some();

    let area = |x: &Vector3<f64>| ntype_angles(x[0], x[1], x[2]).map_or(f64::INFINITY, |a| a.gamma1.abs() + a.gamma2.abs());
    let mut best: Option<(f64, Vector3<f64>)> = None;
    let mut cleanest: Option<(f64, Vector3<f64>)> = None;
    for (i, x0) in starts.iter().enumerate() {
        let Some(rep) = lm::minimize(|x| residuals(x, &b), *x0, LmOptions::default()) else {
            continue;
        };
        if i == 0 && user_seed && rep.residual < NTYPE_TOLERANCE {
            return build(target, ansatz, &rep.x);
        }
        if best.is_none_or(|(r, _)| rep.residual < r) {
            best = Some((rep.residual, rep.x));
        }
        if rep.residual < CLEAN_ROOT {
            let a = area(&rep.x);
            if cleanest.is_none_or(|(c, _)| a < c) {
                cleanest = Some((a, rep.x));
            }
        }
    }
    if let Some((_, x)) = cleanest {
        return build(target, ansatz, &x);
    }
    match best {
        Some((r, x)) if r < NTYPE_TOLERANCE => build(target, ansatz, &x),
        Some((r, _)) => Err(Error::NoSolution { starts: starts.len(), best_residual: r }),
        None => Err(Error::NoSolution { starts: starts.len(), best_residual: f64::INFINITY }),
    }
}

/// [`solve_ntype_multistart`] with 32 grid starts and 32 random ones.
pub fn solve_ntype(target: &TargetSpec, ansatz: &Ansatz) -> Result<SolvedAngles> {
    solve_ntype_multistart(target, ansatz, 0x4e54_7970, 32)
}
