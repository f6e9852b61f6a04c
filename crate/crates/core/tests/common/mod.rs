#![allow(dead_code)]

use isoclinic::hamiltonian::PhaseSchedule;
use isoclinic::quat4::Quaternion;
use isoclinic::solvers::{solve, Ansatz, LevelConfig, SolvedAngles, TargetSpec};
use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub fn random_unit4<R: Rng>(rng: &mut R) -> [f64; 4] {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (0.1..=1.0).contains(&n) {
            return v.map(|x| x / n);
        }
    }
}

pub fn random_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    let [w, x, y, z] = random_unit4(rng);
    Quaternion::new(w, x, y, z)
}

pub fn tripod() -> (SolvedAngles, PhaseSchedule) {
    let r = 1.0 / 3f64.sqrt();
    let t = TargetSpec::new([0.0, r, r, r]).unwrap();
    let s = solve(LevelConfig::InverseTripod, &t, &Ansatz::cosine(1.0)).unwrap();
    (s, PhaseSchedule::new([0.0; 3], [PI / 3.0; 3], 1.0).unwrap())
}

pub fn diamond() -> (SolvedAngles, PhaseSchedule) {
    let t = TargetSpec::new([0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap().with_param("theta1", PI / 2.0);
    let s = solve(LevelConfig::Diamond, &t, &Ansatz::cosine(1.0)).unwrap();
    (s, PhaseSchedule::new([0.0; 3], [0.0, PI / 2.0, 0.0], 1.0).unwrap())
}

pub fn ntype_target() -> TargetSpec {
    TargetSpec::new([0.0, 0.0, 0.0, 1.0]).unwrap()
}

pub fn ntype_phases() -> PhaseSchedule {
    PhaseSchedule::new([0.0; 3], [0.0, 0.0, PI / 6.0], 1.0).unwrap()
}
