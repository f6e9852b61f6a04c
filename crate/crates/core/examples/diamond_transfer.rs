//! Diamond configuration: the 1 -> (2+3)/sqrt2 transfer with a relative
//! phase of pi/2 between the two upper amplitudes.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use isoclinic::hamiltonian::{engineered_hamiltonian, PhaseSchedule};
use isoclinic::propagator::{basis_state, fidelity, propagate};
use isoclinic::solvers::{solve, Ansatz, LevelConfig, TargetSpec};
use num_complex::Complex64;

fn main() -> isoclinic::Result<()> {
    let target = TargetSpec::new([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])?.with_param("theta1", PI / 2.0);
    let solved = solve(LevelConfig::Diamond, &target, &Ansatz::cosine(1.0))?;
    println!("{solved:#?}");

    let ph = PhaseSchedule::new([0.0; 3], [0.0, PI / 2.0, 0.0], 1.0)?;
    let traj = propagate(engineered_hamiltonian(&solved, &ph), basis_state(1), 1.0, 2000)?;
    let psi = traj.final_state();
    for (k, z) in psi.iter().enumerate() {
        println!("c{} = {:+.6}{:+.6}i", k + 1, z.re, z.im);
    }
    let want = nalgebra::Vector4::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
        Complex64::new(0.0, 0.0),
    );
    println!("fidelity {:.12}", fidelity(&psi, &want, false));
    Ok(())
}
