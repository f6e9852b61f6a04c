//! Drives a hand-written angle schedule through the engine. The numeric
//! couplings from finite differences must agree with the closed forms.

use std::sync::Arc;

use isoclinic::hamiltonian::{engineered_hamiltonian, PhaseSchedule};
use isoclinic::propagator::{basis_state, compare_with_analytic, propagate};
use isoclinic::rotation_engine::{
    default_step, hr_analytic, hr_numeric, ur_of_angles, AngleSchedule, AnglePair, FnSchedule, RampSchedule, RampShape,
};
use isoclinic::solvers::{LevelConfig, SolvedAngles, TargetSpec};

fn main() -> isoclinic::Result<()> {
    let horizon = 2.0;
    let end = AnglePair::new(0.6, 0.9, 0.3, 0.6, 0.9, 0.3);
    let start = AnglePair::new(0.0, 0.9, 0.3, 0.0, 0.9, 0.3);

    // gamma(t) = g (t/T)^2 (3 - 2t/T) written out by hand.
    let g = end.gamma1;
    let custom = FnSchedule::new(
        horizon,
        move |t| {
            let s = t / horizon;
            AnglePair { gamma1: g * s * s * (3.0 - 2.0 * s), gamma2: g * s * s * (3.0 - 2.0 * s), ..start }
        },
        move |t| {
            let s = t / horizon;
            let d = 6.0 * g * s * (1.0 - s) / horizon;
            AnglePair { gamma1: d, gamma2: d, ..AnglePair::default() }
        },
    );
    let ramp = RampSchedule::new(start, end, horizon, RampShape::Smoothstep);

    let h = default_step(horizon);
    for t in [0.25, 1.0, 1.75] {
        let exact = hr_analytic(&ramp.value(t), &ramp.rate(t)).to_array();
        let numeric = hr_numeric(&custom, t, h)?.couplings.to_array();
        let gap = exact.iter().zip(&numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("t={t}: O12={:+.6} O13={:+.6} O14={:+.6}  finite-difference gap {gap:.2e}", numeric[0], numeric[1], numeric[2]);
    }

    let b = ur_of_angles(&end).column(0).into_owned();
    let target = TargetSpec::new([b[0], b[1], b[2], b[3]])?;
    let solved = SolvedAngles::with_schedule(LevelConfig::InverseTripod, Arc::new(custom), &target);
    println!("forbidden coupling residual {:e}, final residual {:e}", solved.constraint_residual, solved.final_residual);

    let ph = PhaseSchedule::new([0.1, -0.2, 0.0], [0.4, 0.3, -0.5], horizon)?;
    let traj = propagate(engineered_hamiltonian(&solved, &ph), basis_state(1), horizon, 1000)?;
    println!("final populations {:?}", traj.final_populations());
    println!("deviation from exact evolution {:e}", compare_with_analytic(&traj, &solved, &ph));
    Ok(())
}
