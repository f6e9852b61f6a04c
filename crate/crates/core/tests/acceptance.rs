//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use isoclinic::hamiltonian::{engineered_hamiltonian, total_hamiltonian, PhaseSchedule};
use isoclinic::propagator::{basis_state, compare_with_analytic, fidelity, propagate, StateVector, DEFAULT_STEPS};
use isoclinic::qo_map::{check_resonance, engineered_to_qo, propagate_lab, rwa_hamiltonian, QOParams};
use isoclinic::quat4::{cayley_rotation, decompose_rotation, left_isoclinic, right_isoclinic, Matrix4R};
use isoclinic::rotation_engine::{default_step, hr_analytic, hr_numeric};
use isoclinic::solvers::{
    coupling_schedules, diamond_final_state, solve, solve_ntype, solve_ntype_from_seed, Ansatz, LevelConfig,
    NTypeSeed, SolvedAngles, TargetSpec, CONSTRAINT_GRID,
};
use isoclinic::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{diamond, ntype_phases, ntype_target, random_quaternion, random_unit4, tripod};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { passed: true, detail }
    } else {
        Outcome { passed: false, detail: format!("{detail}; failed: {}", failures.join("; ")) }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_entry(m: &isoclinic::hamiltonian::Matrix4C) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn tripod_example() -> Outcome {
    let mut fail = Vec::new();
    let (s, ph) = tripod();
    let a = s.boundary;
    let angle_err = [
        a.gamma1 - PI / 4.0,
        a.gamma2 - PI / 4.0,
        a.theta1 - 2f64.sqrt().atan(),
        a.theta2 - 2f64.sqrt().atan(),
        a.phi1 - PI / 4.0,
        a.phi2 - PI / 4.0,
    ]
    .iter()
    .fold(0.0f64, |m, e| m.max(e.abs()));
    if angle_err > 1e-15 {
        fail.push(format!("angle error {angle_err:e}"));
    }
    let traj = match propagate(engineered_hamiltonian(&s, &ph), basis_state(1), 1.0, DEFAULT_STEPS) {
        Ok(t) => t,
        Err(e) => return outcome(vec![e.to_string()], String::new()),
    };
    let p = traj.final_populations();
    let pop_err = [p[0], p[1] - 1.0 / 3.0, p[2] - 1.0 / 3.0, p[3] - 1.0 / 3.0]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));
    let phase_err = traj.phases.last().unwrap().iter().fold(0.0f64, |m, f| m.max((f - PI / 3.0).abs()));
    if pop_err >= 1e-6 {
        fail.push(format!("population error {pop_err:e}"));
    }
    if phase_err >= 1e-5 {
        fail.push(format!("phase error {phase_err:e}"));
    }
    outcome(fail, format!("angle err {angle_err:.1e}, population err {pop_err:.1e}, phase err {phase_err:.1e}"))
}

fn diamond_example() -> Outcome {
    let mut fail = Vec::new();
    let (s, ph) = diamond();
    let a = s.boundary;
    let residual = (diamond_final_state(a.gamma1, a.gamma2, a.theta1, a.theta2)
        - nalgebra::Vector4::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0))
    .norm();
    if residual >= 1e-9 {
        fail.push(format!("final-state residual {residual:e}"));
    }
    let reference = (a.gamma1 - PI).abs().max((a.gamma2 - PI / 2.0).abs()).max((a.theta2 + 3.0 * PI / 4.0).abs());
    let traj = match propagate(engineered_hamiltonian(&s, &ph), basis_state(1), 1.0, DEFAULT_STEPS) {
        Ok(t) => t,
        Err(e) => return outcome(vec![e.to_string()], String::new()),
    };
    let target = StateVector::new(c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2), c(0.0, 0.0));
    let f = fidelity(&traj.final_state(), &target, false);
    if f < 1.0 - 1e-6 {
        fail.push(format!("fidelity {f}"));
    }
    outcome(
        fail,
        format!(
            "angles ({:.6}, {:.6}, {:.6}) [distance to (π, π/2, −3π/4): {reference:.1e}], residual {residual:.1e}, 1−F {:.1e}",
            a.gamma1,
            a.gamma2,
            a.theta2,
            1.0 - f
        ),
    )
}

fn ntype_example() -> Outcome {
    let mut fail = Vec::new();
    let target_state = basis_state(4) * Complex64::from_polar(1.0, PI / 6.0);
    let ph = ntype_phases();
    let ansatz = Ansatz::cosine(1.0);

    let found = match solve_ntype(&ntype_target(), &ansatz) {
        Ok(s) => s,
        Err(e) => return outcome(vec![format!("multi-start: {e}")], String::new()),
    };
    if found.final_residual >= 1e-8 {
        fail.push(format!("multi-start residual {:e}", found.final_residual));
    }

    let seed = NTypeSeed { theta1: PI / 6.0, theta2: PI / 2.0, gamma2: -PI / 2.0 };
    let seeded = match solve_ntype_from_seed(&ntype_target(), &ansatz, seed) {
        Ok(s) => s,
        Err(e) => return outcome(vec![format!("seeded: {e}")], String::new()),
    };
    let mut wave_err: f64 = 0.0;
    for k in 0..CONSTRAINT_GRID {
        let t = k as f64 / (CONSTRAINT_GRID - 1) as f64;
        let sin = (PI * t).sin();
        let expected = [-(3f64.sqrt() * PI * PI / 4.0) * sin, -(PI * PI / 2.0) * sin];
        let closed = coupling_schedules(LevelConfig::NType, &seeded, t);
        let general = hr_analytic(&seeded.schedule.value(t), &seeded.schedule.rate(t));
        for cs in [closed, general] {
            for (v, e) in [(cs.omega12, expected[0]), (cs.omega34, expected[0]), (cs.omega23, expected[1])] {
                wave_err = wave_err.max((v - e).abs());
            }
            wave_err = wave_err.max(cs.omega13.abs()).max(cs.omega14.abs()).max(cs.omega24.abs());
        }
    }
    if wave_err >= 1e-9 {
        fail.push(format!("waveform error {wave_err:e}"));
    }

    let mut worst: f64 = 1.0;
    for s in [&found, &seeded] {
        match propagate(engineered_hamiltonian(s, &ph), basis_state(1), 1.0, DEFAULT_STEPS) {
            Ok(traj) => worst = worst.min(fidelity(&traj.final_state(), &target_state, false)),
            Err(e) => fail.push(e.to_string()),
        }
    }
    if worst < 1.0 - 1e-6 {
        fail.push(format!("fidelity {worst}"));
    }
    outcome(
        fail,
        format!(
            "multi-start residual {:.1e}, waveform err {wave_err:.1e}, 1−F {:.1e}",
            found.final_residual,
            1.0 - worst
        ),
    )
}

fn random_solution<R: Rng>(config: LevelConfig, rng: &mut R) -> Result<SolvedAngles, Error> {
    let horizon = rng.random_range(0.5..3.0);
    let ansatz = Ansatz::cosine(horizon);
    loop {
        let mut target = TargetSpec::new(random_unit4(rng))?;
        if config == LevelConfig::Diamond {
            target = target.with_param("theta1", rng.random_range(-PI..PI));
        }
        match solve(config, &target, &ansatz) {
            Err(Error::SingularParameterization { .. }) => continue,
            other => return other,
        }
    }
}

fn forbidden_couplings() -> Outcome {
    let mut fail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = [0.0f64; 3];
    let mut worst_round_trip: f64 = 0.0;
    for (ci, config) in [LevelConfig::InverseTripod, LevelConfig::Diamond, LevelConfig::NType].into_iter().enumerate() {
        for n in 0..50 {
            let s = match random_solution(config, &mut rng) {
                Ok(s) => s,
                Err(e) => {
                    fail.push(format!("{config} #{n}: {e}"));
                    continue;
                }
            };
            worst_round_trip = worst_round_trip.max(s.final_residual);
            let horizon = s.horizon();
            for k in 0..CONSTRAINT_GRID {
                let t = horizon * k as f64 / (CONSTRAINT_GRID - 1) as f64;
                match hr_numeric(s.schedule.as_ref(), t, default_step(horizon)) {
                    Ok(nc) => worst[ci] = worst[ci].max(config.forbidden_magnitude(&nc.couplings)),
                    Err(e) => fail.push(e.to_string()),
                }
            }
        }
        if worst[ci] >= 1e-8 {
            fail.push(format!("{config} forbidden coupling {:e}", worst[ci]));
        }
    }
    if worst_round_trip >= 1e-8 {
        fail.push(format!("round-trip residual {worst_round_trip:e}"));
    }
    outcome(
        fail,
        format!(
            "max forbidden |Ω|: tripod {:.1e}, diamond {:.1e}, N-type {:.1e}; round trip {worst_round_trip:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn analytic_oracle() -> Outcome {
    let mut fail = Vec::new();
    let mut cases: Vec<(String, SolvedAngles, PhaseSchedule)> = Vec::new();
    let (s, ph) = tripod();
    cases.push(("tripod".into(), s, ph));
    let (s, ph) = diamond();
    cases.push(("diamond".into(), s, ph));
    match solve_ntype_from_seed(
        &ntype_target(),
        &Ansatz::cosine(1.0),
        NTypeSeed { theta1: PI / 6.0, theta2: PI / 2.0, gamma2: -PI / 2.0 },
    ) {
        Ok(s) => cases.push(("n-type".into(), s, ntype_phases())),
        Err(e) => fail.push(e.to_string()),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let configs = [LevelConfig::InverseTripod, LevelConfig::Diamond, LevelConfig::NType];
    for n in 0..20 {
        let config = configs[n % 3];
        match random_solution(config, &mut rng) {
            Ok(s) => {
                let eps = std::array::from_fn(|_| rng.random_range(-PI..PI));
                let eps_prime = std::array::from_fn(|_| rng.random_range(-PI..PI));
                let ph = PhaseSchedule::new(eps, eps_prime, s.horizon()).unwrap();
                cases.push((format!("random {config} #{n}"), s, ph));
            }
            Err(e) => fail.push(format!("random {config} #{n}: {e}")),
        }
    }
    let mut worst: f64 = 0.0;
    for (name, s, ph) in &cases {
        match propagate(engineered_hamiltonian(s, ph), basis_state(1), s.horizon(), DEFAULT_STEPS) {
            Ok(traj) => {
                let d = compare_with_analytic(&traj, s, ph);
                worst = worst.max(d);
                if d >= 1e-6 {
                    fail.push(format!("{name}: {d:e}"));
                }
            }
            Err(e) => fail.push(format!("{name}: {e}")),
        }
    }
    outcome(fail, format!("{} scenarios, max deviation {worst:.1e}", cases.len()))
}

fn quat4_suite() -> Outcome {
    let mut fail = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = [0.0f64; 6];
    for _ in 0..1000 {
        let (q, p) = (random_quaternion(&mut rng), random_quaternion(&mut rng));
        let r = cayley_rotation(q, p).unwrap();
        let id = Matrix4R::identity();
        worst[0] = worst[0].max((r.transpose() * r - id).amax()).max((r * r.transpose() - id).amax());
        worst[1] = worst[1].max((r.determinant() - 1.0).abs());

        let (lq, lp) = (left_isoclinic(q).unwrap(), left_isoclinic(p).unwrap());
        let (rq, rp) = (right_isoclinic(q).unwrap(), right_isoclinic(p).unwrap());
        let hom_left = (lq * lp - left_isoclinic(q * p).unwrap()).amax();
        let hom_right = (rq * rp - right_isoclinic(p * q).unwrap()).amax();
        worst[2] = worst[2].max(hom_left).max(hom_right);
        worst[3] = worst[3].max((lq * rp - rp * lq).amax());

        let d = decompose_rotation(q, p).unwrap();
        let mut eig: Vec<f64> = r.complex_eigenvalues().iter().map(|z| z.arg().abs()).collect();
        eig.sort_by(f64::total_cmp);
        let mut ours = vec![d.angle1, d.angle1, d.angle2, d.angle2];
        ours.sort_by(f64::total_cmp);
        let eig_err = eig.iter().zip(&ours).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst[4] = worst[4].max(eig_err);

        let vectors = [d.plane1.0, d.plane1.1, d.plane2.0, d.plane2.1];
        let mut plane_err: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                plane_err = plane_err.max(vectors[i].dot(&vectors[j]).abs());
            }
        }
        for (u, v) in [d.plane1, d.plane2] {
            for x in [u, v] {
                let image = r * x;
                let projected = u * u.dot(&image) + v * v.dot(&image);
                plane_err = plane_err.max((image - projected).norm());
            }
        }
        worst[5] = worst[5].max(plane_err);
    }
    let limits = [1e-10, 1e-10, 1e-10, 1e-10, 1e-8, 1e-8];
    let names = ["orthogonality", "determinant", "homomorphism", "commutation", "eigen-angle", "plane invariance"];
    for k in 0..6 {
        if worst[k] >= limits[k] {
            fail.push(format!("{} {:e}", names[k], worst[k]));
        }
    }
    outcome(
        fail,
        names.iter().zip(worst).map(|(n, w)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", "),
    )
}

fn mapped(s: &SolvedAngles, ph: &PhaseSchedule, levels: [f64; 3]) -> Result<QOParams, Error> {
    let s2 = s.clone();
    engineered_to_qo(move |t| coupling_schedules(LevelConfig::Diamond, &s2, t), ph, levels)
}

fn rwa_closure() -> Outcome {
    let mut fail = Vec::new();
    let (s, ph) = diamond();
    let base = [1000.0, 1300.0, 2500.0];
    let qo = match mapped(&s, &ph, base) {
        Ok(q) => q,
        Err(e) => return outcome(vec![e.to_string()], String::new()),
    };
    let mut closure: f64 = 0.0;
    for k in 0..CONSTRAINT_GRID {
        let t = k as f64 / (CONSTRAINT_GRID - 1) as f64;
        let rwa = rwa_hamiltonian(&qo, t).unwrap();
        let eng = total_hamiltonian(&coupling_schedules(LevelConfig::Diamond, &s, t), &ph, t);
        closure = closure.max(max_entry(&(rwa - eng)));
    }
    if closure >= 1e-10 {
        fail.push(format!("closure {closure:e}"));
    }
    let resonance = check_resonance(&qo);
    if resonance >= 1e-12 {
        fail.push(format!("resonance {resonance:e}"));
    }

    let mut gaps = Vec::new();
    for scale in [1.0, 10.0] {
        let qo = mapped(&s, &ph, base.map(|w| w * scale)).unwrap();
        let lab = match propagate_lab(&qo, basis_state(1), 1.0, 200, None) {
            Ok(t) => t,
            Err(e) => return outcome(vec![e.to_string()], String::new()),
        };
        let rwa = propagate(|t| rwa_hamiltonian(&qo, t).unwrap(), basis_state(1), 1.0, DEFAULT_STEPS).unwrap();
        let (a, b) = (lab.final_populations(), rwa.final_populations());
        gaps.push((0..4).fold(0.0f64, |m, k| m.max((a[k] - b[k]).abs())));
    }
    if gaps[0] >= 1e-3 {
        fail.push(format!("gap at ω·T = 1e3: {:e}", gaps[0]));
    }
    if gaps[1] >= gaps[0] {
        fail.push(format!("gap did not shrink: {:e} -> {:e}", gaps[0], gaps[1]));
    }
    outcome(
        fail,
        format!(
            "closure {closure:.1e}, resonance {resonance:.1e}, population gap {:.1e} (ω·T = 1e3) / {:.1e} (1e4)",
            gaps[0], gaps[1]
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 7] = [
        ("tripod example", tripod_example, Some(Duration::from_secs(1))),
        ("diamond example", diamond_example, Some(Duration::from_secs(1))),
        ("n-type example", ntype_example, Some(Duration::from_secs(5))),
        ("forbidden couplings", forbidden_couplings, Some(Duration::from_secs(30))),
        ("analytic vs numeric", analytic_oracle, None),
        ("quaternion suite", quat4_suite, Some(Duration::from_secs(5))),
        ("rotating-wave closure", rwa_closure, Some(Duration::from_secs(60))),
    ];
    let mut failures = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        if let Some(budget) = budget.filter(|b| elapsed > *b) {
            o.passed = false;
            o.detail.push_str(&format!("; runtime over {budget:?}"));
        }
        if !o.passed {
            failures += 1;
        }
        println!(
            "criterion {} {:<22} {} ({:.2?}) {}",
            k + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            elapsed,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
