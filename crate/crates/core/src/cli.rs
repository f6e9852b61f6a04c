//! `isoclinic <solve|simulate|qomap|verify> --scenario FILE --out DIR`.
//!
//! * `solve` writes `angles.json`.
//! * `simulate` writes `couplings.csv` and `populations.csv`.
//! * `qomap` (diamond only) writes `qomap.json` and `rabi.csv`.
//! * `verify` writes `verify.txt` and fails with status 3 if any check fails.
//!
//! CSV files have a header row, comma separators, LF line endings and
//! twelve significant digits.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{engineered_hamiltonian, hermiticity_residual, phase_operator, total_hamiltonian};
use crate::propagator::{basis_state, compare_with_analytic, fidelity, propagate, StateVector, Trajectory};
use crate::qo_map::{check_resonance, engineered_to_qo, rwa_hamiltonian, QOParams};
use crate::rotation_engine::{default_step, hr_numeric, AnglePair};
use crate::scenario::Scenario;
use crate::solvers::{coupling_schedules, LevelConfig, SolvedAngles, CONSTRAINT_GRID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Solve,
    Simulate,
    Qomap,
    Verify,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "isoclinic", version, about = "Four-level state transfer from 4D rotations")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the scenario step count.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Seed for the N-type random starts.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Runs one command and returns the lines to print on success.
pub fn run(cli: &Cli) -> Result<Vec<String>> {
    let mut scenario = Scenario::load(&cli.scenario)?;
    if let Some(steps) = cli.steps {
        scenario.steps = steps;
        scenario.validate()?;
    }
    fs::create_dir_all(&cli.out)?;
    let solved = scenario.solve(cli.seed)?;
    match cli.command {
        Command::Solve => solve(&scenario, &solved, &cli.out),
        Command::Simulate => simulate(&scenario, &solved, &cli.out),
        Command::Qomap => qomap(&scenario, &solved, &cli.out),
        Command::Verify => verify(&scenario, &solved, &cli.out),
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_num).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    fs::File::create(path)?.write_all(text.as_bytes())?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct AnglesReport {
    config: LevelConfig,
    horizon: f64,
    start: AnglePair,
    boundary: AnglePair,
    final_residual: f64,
    constraint_residual: f64,
    within_nominal_ranges: bool,
}

fn solve(scenario: &Scenario, solved: &SolvedAngles, out: &Path) -> Result<Vec<String>> {
    let report = AnglesReport {
        config: scenario.config,
        horizon: scenario.horizon,
        start: solved.schedule.value(0.0),
        boundary: solved.boundary,
        final_residual: solved.final_residual,
        constraint_residual: solved.constraint_residual,
        within_nominal_ranges: solved.within_nominal_ranges(),
    };
    let path = out.join("angles.json");
    write_json(&path, &report)?;
    let a = solved.boundary;
    Ok(vec![
        format!(
            "{}: gamma1={:.12} theta1={:.12} phi1={:.12} gamma2={:.12} theta2={:.12} phi2={:.12}",
            scenario.config, a.gamma1, a.theta1, a.phi1, a.gamma2, a.theta2, a.phi2
        ),
        format!("final residual {:e}, constraint residual {:e}", solved.final_residual, solved.constraint_residual),
        format!("wrote {}", path.display()),
    ])
}

fn run_dynamics(scenario: &Scenario, solved: &SolvedAngles) -> Result<Trajectory> {
    let ph = scenario.phase_schedule();
    propagate(engineered_hamiltonian(solved, &ph), basis_state(1), scenario.horizon, scenario.steps)
}

/// `K(T) b`, the state the scenario is designed to reach.
fn designed_final_state(scenario: &Scenario) -> StateVector {
    let b = scenario.target.vector().map(|v| Complex64::new(v, 0.0));
    phase_operator(&scenario.phase_schedule(), scenario.horizon) * b
}

fn simulate(scenario: &Scenario, solved: &SolvedAngles, out: &Path) -> Result<Vec<String>> {
    let traj = run_dynamics(scenario, solved)?;
    let couplings = out.join("couplings.csv");
    write_csv(
        &couplings,
        &["t", "omega12", "omega13", "omega14", "omega23", "omega24", "omega34"],
        traj.times.iter().map(|&t| {
            let c = coupling_schedules(scenario.config, solved, t).to_array();
            std::iter::once(t).chain(c).collect()
        }),
    )?;
    let populations = out.join("populations.csv");
    write_csv(
        &populations,
        &["t", "P1", "P2", "P3", "P4", "phi2", "phi3", "phi4"],
        traj.times
            .iter()
            .zip(traj.populations.iter().zip(&traj.phases))
            .map(|(&t, (p, f))| std::iter::once(t).chain(*p).chain(*f).collect()),
    )?;
    let p = traj.final_populations();
    let f = traj.phases.last().copied().unwrap_or_default();
    Ok(vec![
        format!("final populations {:.6} {:.6} {:.6} {:.6}", p[0], p[1], p[2], p[3]),
        format!("final phases {:.6} {:.6} {:.6}", f[0], f[1], f[2]),
        format!(
            "fidelity {:.12}, norm drift {:e}",
            fidelity(&traj.final_state(), &designed_final_state(scenario), false),
            traj.norm_drift
        ),
        format!("wrote {} and {}", couplings.display(), populations.display()),
    ])
}

fn qo_params(scenario: &Scenario, solved: &SolvedAngles) -> Result<QOParams> {
    if scenario.config != LevelConfig::Diamond {
        return Err(Error::UnsupportedConfiguration(format!(
            "the quantum-optical map covers the diamond configuration, not {}",
            scenario.config
        )));
    }
    let seed = scenario
        .qo
        .ok_or_else(|| Error::Scenario("qomap needs qo.omega_levels in the scenario".into()))?;
    let s = solved.clone();
    engineered_to_qo(move |t| coupling_schedules(LevelConfig::Diamond, &s, t), &scenario.phase_schedule(), seed.omega_levels)
}

fn qomap(scenario: &Scenario, solved: &SolvedAngles, out: &Path) -> Result<Vec<String>> {
    let qo = qo_params(scenario, solved)?;
    let summary = qo.summary();
    let json = out.join("qomap.json");
    write_json(&json, &summary)?;
    let rabi = out.join("rabi.csv");
    let n = scenario.steps;
    write_csv(
        &rabi,
        &["t", "re12", "im12", "re13", "im13", "re24", "im24", "re34", "im34"],
        (0..=n).map(|k| {
            let t = if k == n { scenario.horizon } else { scenario.horizon * k as f64 / n as f64 };
            let r = (qo.rabi)(t);
            std::iter::once(t).chain(r.iter().flat_map(|&(a, b)| [a, b])).collect()
        }),
    )?;
    let w = summary.omega_fields;
    Ok(vec![
        format!("fields w12={:.12} w13={:.12} w24={:.12} w34={:.12}", w[0], w[1], w[2], w[3]),
        format!(
            "detunings {:.12} {:.12} {:.12}, resonance residual {:e}",
            summary.detunings[0], summary.detunings[1], summary.detunings[2], summary.resonance_residual
        ),
        format!("wrote {} and {}", json.display(), rabi.display()),
    ])
}

struct Check {
    name: &'static str,
    value: f64,
    limit: f64,
    /// `true` when the value must stay below the limit.
    below: bool,
}

impl Check {
    fn passed(&self) -> bool {
        if self.below {
            self.value < self.limit
        } else {
            self.value >= self.limit
        }
    }

    fn line(&self) -> String {
        let op = if self.below { "<" } else { ">=" };
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("{status} {}: {:e} {op} {:e}", self.name, self.value, self.limit)
    }
}

fn verify(scenario: &Scenario, solved: &SolvedAngles, out: &Path) -> Result<Vec<String>> {
    let ph = scenario.phase_schedule();
    let horizon = scenario.horizon;
    let grid = |k: usize| horizon * k as f64 / (CONSTRAINT_GRID - 1) as f64;

    let mut forbidden: f64 = 0.0;
    let mut hermiticity: f64 = 0.0;
    for k in 0..CONSTRAINT_GRID {
        let t = grid(k);
        let numeric = hr_numeric(solved.schedule.as_ref(), t, default_step(horizon))?;
        forbidden = forbidden.max(scenario.config.forbidden_magnitude(&numeric.couplings));
        let h = total_hamiltonian(&coupling_schedules(scenario.config, solved, t), &ph, t);
        hermiticity = hermiticity.max(hermiticity_residual(&h));
    }
    let traj = run_dynamics(scenario, solved)?;

    let mut checks = vec![
        Check { name: "boundary residual", value: solved.final_residual, limit: 1e-8, below: true },
        Check { name: "forbidden couplings", value: forbidden, limit: 1e-8, below: true },
        Check { name: "hermiticity", value: hermiticity, limit: 1e-12, below: true },
        Check { name: "norm drift", value: traj.norm_drift, limit: 1e-8, below: true },
        Check { name: "analytic vs numeric", value: compare_with_analytic(&traj, solved, &ph), limit: 1e-6, below: true },
        Check {
            name: "final fidelity",
            value: fidelity(&traj.final_state(), &designed_final_state(scenario), false),
            limit: 1.0 - 1e-6,
            below: false,
        },
    ];
    if scenario.config == LevelConfig::Diamond && scenario.qo.is_some() {
        let qo = qo_params(scenario, solved)?;
        let mut closure: f64 = 0.0;
        for k in 0..CONSTRAINT_GRID {
            let t = grid(k);
            let rwa = rwa_hamiltonian(&qo, t)?;
            let eng = total_hamiltonian(&coupling_schedules(LevelConfig::Diamond, solved, t), &ph, t);
            closure = closure.max((rwa - eng).iter().fold(0.0, |m: f64, z| m.max(z.norm())));
        }
        checks.push(Check { name: "four-photon resonance", value: check_resonance(&qo), limit: 1e-12, below: true });
        checks.push(Check { name: "rotating-wave closure", value: closure, limit: 1e-10, below: true });
    }

    let lines: Vec<String> = checks.iter().map(Check::line).collect();
    let mut text = String::new();
    for l in &lines {
        writeln!(text, "{l}").expect("writing to a String");
    }
    fs::write(out.join("verify.txt"), &text)?;

    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if !failed.is_empty() {
        for l in &lines {
            eprintln!("{l}");
        }
        return Err(Error::CheckFailed(failed.join(", ")));
    }
    Ok(lines)
}

