//! JSON scenario files.
//!
//! ```json
//! {
//!   "config": "diamond",
//!   "target": { "b": [0.0, 0.7071067811865476, 0.7071067811865476, 0.0],
//!               "free_params": { "theta1": 1.5707963267948966 } },
//!   "horizon": 1.0,
//!   "phases": { "eps": [0.0, 0.0, 0.0], "eps_prime": [0.0, 1.5707963267948966, 0.0] },
//!   "ansatz": { "family": "cosine" },
//!   "steps": 2000,
//!   "qo": { "omega_levels": [1000.0, 1300.0, 2500.0] }
//! }
//! ```
//!
//! Only `config`, `target` and `horizon` are required. Unknown keys are
//! rejected at every level.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::PhaseSchedule;
use crate::propagator::{DEFAULT_STEPS, MIN_STEPS};
use crate::rotation_engine::RampShape;
use crate::solvers::{self, Ansatz, LevelConfig, SolvedAngles, TargetSpec};

/// Seed for the N-type random starts when neither the scenario nor the
/// command line gives one.
pub const DEFAULT_SEED: u64 = 0x4e54_7970;

/// Random starts added after the deterministic grid.
pub const RANDOM_STARTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseBoundaries {
    pub eps: [f64; 3],
    pub eps_prime: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSpec {
    pub family: RampShape,
}

impl Default for AnsatzSpec {
    fn default() -> Self {
        Self { family: RampShape::Cosine }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QOSeed {
    pub omega_levels: [f64; 3],
}

fn default_steps() -> usize {
    DEFAULT_STEPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub config: LevelConfig,
    pub target: TargetSpec,
    pub horizon: f64,
    #[serde(default)]
    pub phases: PhaseBoundaries,
    #[serde(default)]
    pub ansatz: AnsatzSpec,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qo: Option<QOSeed>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.target.validate()?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Scenario(format!("horizon must be positive, got {}", self.horizon)));
        }
        if self.steps < MIN_STEPS {
            return Err(Error::Scenario(format!("steps must be at least {MIN_STEPS}, got {}", self.steps)));
        }
        if self.config == LevelConfig::Diamond && self.target.param("theta1").is_none() {
            return Err(Error::Scenario("diamond scenarios need target.free_params.theta1".into()));
        }
        if let Some(k) = self.target.free_params.keys().find(|k| !["theta1", "theta2", "gamma2"].contains(&k.as_str())) {
            return Err(Error::Scenario(format!("unknown free parameter {k}")));
        }
        PhaseSchedule::new(self.phases.eps, self.phases.eps_prime, self.horizon)?;
        Ok(())
    }

    pub fn phase_schedule(&self) -> PhaseSchedule {
        PhaseSchedule { eps: self.phases.eps, eps_prime: self.phases.eps_prime, horizon: self.horizon }
    }

    pub fn ansatz(&self) -> Ansatz {
        Ansatz { horizon: self.horizon, shape: self.ansatz.family }
    }

    /// Solves the boundary problem; `seed` overrides the scenario seed for
    /// the N-type random starts.
    pub fn solve(&self, seed: Option<u64>) -> Result<SolvedAngles> {
        match self.config {
            LevelConfig::NType => {
                let seed = seed.or(self.seed).unwrap_or(DEFAULT_SEED);
                solvers::solve_ntype_multistart(&self.target, &self.ansatz(), seed, RANDOM_STARTS)
            }
            c => solvers::solve(c, &self.target, &self.ansatz()),
        }
    }
}
