//! N-type transfer 1 -> 4, solved by multistart Levenberg-Marquardt.
//! Pass a seed as the first argument to change the random starts.

use std::f64::consts::PI;

use isoclinic::hamiltonian::{engineered_hamiltonian, PhaseSchedule};
use isoclinic::propagator::{basis_state, propagate};
use isoclinic::solvers::{coupling_schedules, solve_ntype_multistart, Ansatz, LevelConfig, TargetSpec};

fn main() -> isoclinic::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let target = TargetSpec::new([0.0, 0.0, 0.0, 1.0])?;
    let solved = solve_ntype_multistart(&target, &Ansatz::cosine(1.0), seed, 32)?;
    println!("{solved:#?}");

    let mid = coupling_schedules(LevelConfig::NType, &solved, 0.5);
    println!("couplings at T/2: {:?}", mid.to_array());

    let ph = PhaseSchedule::new([0.0; 3], [0.0, 0.0, PI / 6.0], 1.0)?;
    let traj = propagate(engineered_hamiltonian(&solved, &ph), basis_state(1), 1.0, 2000)?;
    println!("final populations {:?}", traj.final_populations());
    println!("final phase of level 4 {:.6}", traj.phases.last().unwrap()[2]);
    Ok(())
}
