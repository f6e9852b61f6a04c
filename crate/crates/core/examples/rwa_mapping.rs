//! Maps an engineered diamond Hamiltonian onto four laser fields and
//! compares the lab-frame dynamics against the engineered ones.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use isoclinic::hamiltonian::{engineered_hamiltonian, PhaseSchedule};
use isoclinic::propagator::{basis_state, propagate};
use isoclinic::qo_map::{check_resonance, engineered_to_qo, lab_steps, propagate_lab};
use isoclinic::solvers::{coupling_schedules, solve, Ansatz, LevelConfig, TargetSpec};

fn main() -> isoclinic::Result<()> {
    let target = TargetSpec::new([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])?.with_param("theta1", PI / 2.0);
    let solved = solve(LevelConfig::Diamond, &target, &Ansatz::cosine(1.0))?;
    let ph = PhaseSchedule::new([0.0; 3], [0.0, PI / 2.0, 0.0], 1.0)?;
    let reference = propagate(engineered_hamiltonian(&solved, &ph), basis_state(1), 1.0, 2000)?.final_populations();

    for scale in [100.0, 1000.0, 10000.0] {
        let s = solved.clone();
        let qo = engineered_to_qo(
            move |t| coupling_schedules(LevelConfig::Diamond, &s, t),
            &ph,
            [scale, 1.3 * scale, 2.5 * scale],
        )?;
        let started = Instant::now();
        let lab = propagate_lab(&qo, basis_state(1), 1.0, 200, None)?.final_populations();
        let gap = lab.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!(
            "level scale {scale:>7}: fields {:?}, resonance {:e}, {} steps, population gap {gap:.3e} ({:.2?})",
            qo.omega_fields.map(|w| (w * 1e3).round() / 1e3),
            check_resonance(&qo),
            lab_steps(&qo, 1.0),
            started.elapsed()
        );
    }
    Ok(())
}
