//! Boundary-value solvers for the three coupling topologies.
//!
//! Each solver starts from `|1⟩`, imposes angle constraints that cancel the
//! couplings forbidden by its topology and finds the final angles that carry
//! `|1⟩` to the requested real amplitude vector `b`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rotation_engine::{
    hr_analytic, ur_of_angles, AnglePair, AngleSchedule, CouplingSet, RampSchedule, RampShape,
};

mod diamond;
pub mod lm;
mod ntype;
mod tripod;

pub use diamond::{diamond_final_state, solve_diamond};
pub use ntype::{
    ntype_angles, ntype_starts, solve_ntype, solve_ntype_from_seed, solve_ntype_multistart, NTypeSeed, NTYPE_TOLERANCE,
};
pub use tripod::solve_tripod;

/// Tolerance on `Σ b² = 1` for targets.
pub const TARGET_NORM_TOLERANCE: f64 = 1e-10;

/// Forbidden couplings must stay below this over the sampled grid.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// Grid used when sampling the forbidden couplings of a solution.
pub const CONSTRAINT_GRID: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelConfig {
    /// `|1⟩` coupled to each of `|2⟩, |3⟩, |4⟩`.
    InverseTripod,
    /// Closed loop 1–2–4–3–1.
    Diamond,
    /// Chain 1–2–3–4.
    NType,
}

impl LevelConfig {
    /// One-based level pairs whose coupling must vanish.
    pub fn forbidden_pairs(self) -> &'static [(usize, usize)] {
        match self {
            LevelConfig::InverseTripod => &[(2, 3), (2, 4), (3, 4)],
            LevelConfig::Diamond => &[(1, 4), (2, 3)],
            LevelConfig::NType => &[(1, 3), (1, 4), (2, 4)],
        }
    }

    pub fn allowed_pairs(self) -> Vec<(usize, usize)> {
        let forbidden = self.forbidden_pairs();
        [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
            .into_iter()
            .filter(|p| !forbidden.contains(p))
            .collect()
    }

    /// Largest forbidden coupling in `c`.
    pub fn forbidden_magnitude(self, c: &CouplingSet) -> f64 {
        self.forbidden_pairs().iter().fold(0.0, |m, &(a, b)| m.max(c.get(a, b).abs()))
    }

    pub fn name(self) -> &'static str {
        match self {
            LevelConfig::InverseTripod => "inverse_tripod",
            LevelConfig::Diamond => "diamond",
            LevelConfig::NType => "n_type",
        }
    }
}

impl fmt::Display for LevelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Target amplitudes `b` of `U_r(T)|1⟩` plus solver-specific parameters
/// (`theta1` for the diamond; optional `theta1`, `theta2`, `gamma2` seed
/// for the N-type root finder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub b: [f64; 4],
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub free_params: BTreeMap<String, f64>,
}

impl TargetSpec {
    pub fn new(b: [f64; 4]) -> Result<Self> {
        let t = Self { b, free_params: BTreeMap::new() };
        t.validate()?;
        Ok(t)
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.free_params.insert(key.to_owned(), value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.b.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("target amplitudes must be finite".into()));
        }
        let n2: f64 = self.b.iter().map(|v| v * v).sum();
        if (n2 - 1.0).abs() > TARGET_NORM_TOLERANCE {
            return Err(Error::InvalidArgument(format!("target is not normalized: Σb² = {n2}")));
        }
        if let Some((k, _)) = self.free_params.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("free parameter {k} is not finite")));
        }
        Ok(())
    }

    pub fn vector(&self) -> Vector4<f64> {
        Vector4::from(self.b)
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.free_params.get(key).copied()
    }

    pub(crate) fn is_ground_state(&self) -> bool {
        (self.vector() - Vector4::x()).norm() < 1e-12
    }
}

/// Time profile used to interpolate the angles between `t = 0` and `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ansatz {
    pub horizon: f64,
    pub shape: RampShape,
}

impl Ansatz {
    pub fn cosine(horizon: f64) -> Self {
        Self { horizon, shape: RampShape::Cosine }
    }

    fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("horizon must be positive, got {}", self.horizon)));
        }
        Ok(())
    }
}

/// Outcome of a solver: angle schedule, its end point and diagnostics.
#[derive(Clone)]
pub struct SolvedAngles {
    pub config: LevelConfig,
    pub schedule: Arc<dyn AngleSchedule>,
    /// Angles at `t = T`.
    pub boundary: AnglePair,
    /// Largest forbidden coupling over a [`CONSTRAINT_GRID`]-point grid.
    pub constraint_residual: f64,
    /// `‖U_r(T)|1⟩ − b‖`.
    pub final_residual: f64,
}

impl fmt::Debug for SolvedAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolvedAngles")
            .field("config", &self.config)
            .field("horizon", &self.horizon())
            .field("boundary", &self.boundary)
            .field("constraint_residual", &self.constraint_residual)
            .field("final_residual", &self.final_residual)
            .finish()
    }
}

impl SolvedAngles {
    pub(crate) fn from_ramp(
        config: LevelConfig,
        start: AnglePair,
        boundary: AnglePair,
        ansatz: &Ansatz,
        target: &TargetSpec,
    ) -> Self {
        let schedule = RampSchedule::new(start, boundary, ansatz.horizon, ansatz.shape);
        Self::with_schedule(config, Arc::new(schedule), target)
    }

    /// Wraps an arbitrary schedule and evaluates its diagnostics.
    pub fn with_schedule(config: LevelConfig, schedule: Arc<dyn AngleSchedule>, target: &TargetSpec) -> Self {
        let horizon = schedule.horizon();
        let boundary = schedule.value(horizon);
        let constraint_residual = (0..CONSTRAINT_GRID)
            .map(|k| {
                let t = horizon * k as f64 / (CONSTRAINT_GRID - 1) as f64;
                config.forbidden_magnitude(&hr_analytic(&schedule.value(t), &schedule.rate(t)))
            })
            .fold(0.0, f64::max);
        let final_residual = (ur_of_angles(&boundary).column(0) - target.vector()).norm();
        Self { config, schedule, boundary, constraint_residual, final_residual }
    }

    pub fn horizon(&self) -> f64 {
        self.schedule.horizon()
    }

    /// Whether the end angles sit inside `γ, θ ∈ [0, π]`, `φ ∈ [0, 2π]`.
    pub fn within_nominal_ranges(&self) -> bool {
        let a = self.boundary;
        let in_pi = |v: f64| (-1e-12..=PI + 1e-12).contains(&v);
        let in_2pi = |v: f64| (-1e-12..=2.0 * PI + 1e-12).contains(&v);
        in_pi(a.gamma1) && in_pi(a.gamma2) && in_pi(a.theta1) && in_pi(a.theta2) && in_2pi(a.phi1) && in_2pi(a.phi2)
    }
}

/// Dispatches to the solver of `config`.
pub fn solve(config: LevelConfig, target: &TargetSpec, ansatz: &Ansatz) -> Result<SolvedAngles> {
    match config {
        LevelConfig::InverseTripod => solve_tripod(target, ansatz),
        LevelConfig::Diamond => solve_diamond(target, ansatz),
        LevelConfig::NType => solve_ntype(target, ansatz),
    }
}

/// Closed-form couplings of a configuration evaluated on its schedule.
/// Couplings outside the configuration's allowed set are exactly zero.
pub fn coupling_schedules(config: LevelConfig, solved: &SolvedAngles, t: f64) -> CouplingSet {
    let a = solved.schedule.value(t);
    let r = solved.schedule.rate(t);
    match config {
        LevelConfig::InverseTripod => {
            let (st, ct) = a.theta1.sin_cos();
            let (sp, cp) = a.phi1.sin_cos();
            let g = -2.0 * r.gamma1;
            CouplingSet {
                omega12: g * ct,
                omega13: g * st * cp,
                omega14: g * st * sp,
                ..CouplingSet::default()
            }
        }
        LevelConfig::Diamond => {
            let (s1, c1) = a.theta1.sin_cos();
            let (s2, c2) = a.theta2.sin_cos();
            let (d1, d2) = (r.gamma1, r.gamma2);
            CouplingSet {
                omega12: -(d1 * c1 + d2 * c2),
                omega13: -(d1 * s1 + d2 * s2),
                omega24: d1 * s1 - d2 * s2,
                omega34: -(d1 * c1 - d2 * c2),
                ..CouplingSet::default()
            }
        }
        LevelConfig::NType => {
            let (s1, c1) = a.theta1.sin_cos();
            let (s2, c2) = a.theta2.sin_cos();
            let cot = c1 / s1;
            let d2 = r.gamma2;
            CouplingSet {
                omega12: d2 * (s2 * cot - c2),
                omega23: 2.0 * d2 * s2,
                omega34: d2 * (s2 * cot + c2),
                ..CouplingSet::default()
            }
        }
    }
}
