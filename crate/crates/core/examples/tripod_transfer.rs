//! Equal three-way split from the ground state through an inverse tripod,
//! checked against the exact evolution.

use std::f64::consts::PI;

use isoclinic::hamiltonian::{engineered_hamiltonian, PhaseSchedule};
use isoclinic::propagator::{basis_state, compare_with_analytic, propagate, DEFAULT_STEPS};
use isoclinic::solvers::{coupling_schedules, solve, Ansatz, LevelConfig, TargetSpec};

fn main() -> isoclinic::Result<()> {
    let r = 1.0 / 3f64.sqrt();
    let target = TargetSpec::new([0.0, r, r, r])?;
    let solved = solve(LevelConfig::InverseTripod, &target, &Ansatz::cosine(1.0))?;
    let a = solved.boundary;
    println!("gamma {:.6}  theta {:.6}  phi {:.6}", a.gamma1, a.theta1, a.phi1);

    let ph = PhaseSchedule::new([0.0; 3], [PI / 3.0; 3], 1.0)?;
    let traj = propagate(engineered_hamiltonian(&solved, &ph), basis_state(1), 1.0, DEFAULT_STEPS)?;

    for k in (0..=DEFAULT_STEPS).step_by(DEFAULT_STEPS / 5) {
        let t = traj.times[k];
        let c = coupling_schedules(LevelConfig::InverseTripod, &solved, t);
        let p = traj.populations[k];
        println!(
            "t={t:.2}  O12={:+.4} O13={:+.4} O14={:+.4}  P={:.4} {:.4} {:.4} {:.4}",
            c.omega12, c.omega13, c.omega14, p[0], p[1], p[2], p[3]
        );
    }
    println!("final phases {:?}", traj.phases.last().unwrap());
    println!("max deviation from exact evolution {:e}", compare_with_analytic(&traj, &solved, &ph));
    Ok(())
}
