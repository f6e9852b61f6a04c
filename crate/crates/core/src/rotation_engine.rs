//! Evolution operator `U_r(t)` and rotation Hamiltonian `H_r = iħ U̇_r U_rᵀ`
//! as functions of the six generalized spherical angles.
//!
//! Two routes are provided: closed-form trigonometric expressions
//! ([`ur_of_angles`], [`hr_analytic`]) and a finite-difference extraction
//! from any [`AngleSchedule`] ([`hr_numeric`]). Units have ħ = 1.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat4::{left_mul_matrix, right_mul_matrix, Matrix4R, Quaternion};

/// Generalized spherical angles `(γ₁, θ₁, φ₁)` of the left quaternion and
/// `(γ₂, θ₂, φ₂)` of the right one. Any finite values are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AnglePair {
    pub gamma1: f64,
    pub theta1: f64,
    pub phi1: f64,
    pub gamma2: f64,
    pub theta2: f64,
    pub phi2: f64,
}

impl AnglePair {
    pub fn new(gamma1: f64, theta1: f64, phi1: f64, gamma2: f64, theta2: f64, phi2: f64) -> Self {
        Self { gamma1, theta1, phi1, gamma2, theta2, phi2 }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.gamma1, self.theta1, self.phi1, self.gamma2, self.theta2, self.phi2]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    fn zip(self, other: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let (a, b) = (self.to_array(), other.to_array());
        Self::from_array(std::array::from_fn(|i| f(a[i], b[i])))
    }
}

impl Add for AnglePair {
    type Output = AnglePair;
    fn add(self, rhs: AnglePair) -> AnglePair {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for AnglePair {
    type Output = AnglePair;
    fn sub(self, rhs: AnglePair) -> AnglePair {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for AnglePair {
    type Output = AnglePair;
    fn mul(self, s: f64) -> AnglePair {
        Self::from_array(self.to_array().map(|a| a * s))
    }
}

/// Time-dependent angles together with their time derivatives on `[0, T]`.
///
/// `value` and `rate` must be consistent and free of side effects; the
/// engine never differentiates `value` symbolically.
pub trait AngleSchedule: Send + Sync {
    fn horizon(&self) -> f64;
    fn value(&self, t: f64) -> AnglePair;
    fn rate(&self, t: f64) -> AnglePair;
}

/// Normalized switching profile `s(τ)` on `τ ∈ [0, 1]` with `s(0) = 0`,
/// `s(1) = 1` and vanishing slope at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampShape {
    /// `s(τ) = [1 − cos(πτ)] / 2`
    Cosine,
    /// `s(τ) = 3τ² − 2τ³`
    Smoothstep,
}

impl RampShape {
    pub fn profile(self, tau: f64) -> f64 {
        match self {
            RampShape::Cosine => 0.5 * (1.0 - (PI * tau).cos()),
            RampShape::Smoothstep => tau * tau * (3.0 - 2.0 * tau),
        }
    }

    pub fn slope(self, tau: f64) -> f64 {
        match self {
            RampShape::Cosine => 0.5 * PI * (PI * tau).sin(),
            RampShape::Smoothstep => 6.0 * tau * (1.0 - tau),
        }
    }
}

/// Every angle moves from `start` to `end` along the same ramp profile.
/// Angles with `start == end` stay constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampSchedule {
    pub start: AnglePair,
    pub end: AnglePair,
    pub horizon: f64,
    pub shape: RampShape,
}

impl RampSchedule {
    pub fn new(start: AnglePair, end: AnglePair, horizon: f64, shape: RampShape) -> Self {
        Self { start, end, horizon, shape }
    }
}

impl AngleSchedule for RampSchedule {
    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn value(&self, t: f64) -> AnglePair {
        let s = self.shape.profile(t / self.horizon);
        self.start + (self.end - self.start) * s
    }

    fn rate(&self, t: f64) -> AnglePair {
        let ds = self.shape.slope(t / self.horizon) / self.horizon;
        (self.end - self.start) * ds
    }
}

/// A schedule assembled from a pair of closures.
pub struct FnSchedule<V, R> {
    pub horizon: f64,
    pub value: V,
    pub rate: R,
}

impl<V, R> FnSchedule<V, R>
where
    V: Fn(f64) -> AnglePair + Send + Sync,
    R: Fn(f64) -> AnglePair + Send + Sync,
{
    pub fn new(horizon: f64, value: V, rate: R) -> Self {
        Self { horizon, value, rate }
    }
}

impl<V, R> AngleSchedule for FnSchedule<V, R>
where
    V: Fn(f64) -> AnglePair + Send + Sync,
    R: Fn(f64) -> AnglePair + Send + Sync,
{
    fn horizon(&self) -> f64 {
        self.horizon
    }
    fn value(&self, t: f64) -> AnglePair {
        (self.value)(t)
    }
    fn rate(&self, t: f64) -> AnglePair {
        (self.rate)(t)
    }
}

impl<V, R> fmt::Debug for FnSchedule<V, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSchedule").field("horizon", &self.horizon).finish_non_exhaustive()
    }
}

/// Largest deviation between the centered difference of `value` and
/// `rate` over `samples` interior points, relative to the largest rate.
pub fn schedule_consistency(schedule: &dyn AngleSchedule, samples: usize) -> f64 {
    let t_end = schedule.horizon();
    let h = 1e-5 * t_end;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..samples {
        let t = h + (t_end - 2.0 * h) * k as f64 / (samples.max(2) - 1) as f64;
        let fd = (schedule.value(t + h) - schedule.value(t - h)) * (0.5 / h);
        let rate = schedule.rate(t);
        for (a, b) in fd.to_array().iter().zip(rate.to_array()) {
            worst = worst.max((a - b).abs());
            scale = scale.max(b.abs());
        }
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

/// Real amplitudes `Ω_nm` (n < m) of `H_r = iħ Σ Ω_nm (|n⟩⟨m| − |m⟩⟨n|)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CouplingSet {
    pub omega12: f64,
    pub omega13: f64,
    pub omega14: f64,
    pub omega23: f64,
    pub omega24: f64,
    pub omega34: f64,
}

/// Level pairs in the order of [`CouplingSet::to_array`] (zero-based).
pub const COUPLING_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl CouplingSet {
    pub fn to_array(self) -> [f64; 6] {
        [self.omega12, self.omega13, self.omega14, self.omega23, self.omega24, self.omega34]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            omega12: a[0],
            omega13: a[1],
            omega14: a[2],
            omega23: a[3],
            omega24: a[4],
            omega34: a[5],
        }
    }

    /// Reads the strict upper triangle of `m`.
    pub fn from_upper(m: &Matrix4R) -> Self {
        Self::from_array(COUPLING_PAIRS.map(|(n, k)| m[(n, k)]))
    }

    /// The real antisymmetric generator with `Ω_nm` above the diagonal.
    pub fn generator(&self) -> Matrix4R {
        let mut m = Matrix4R::zeros();
        for ((n, k), v) in COUPLING_PAIRS.iter().zip(self.to_array()) {
            m[(*n, *k)] = v;
            m[(*k, *n)] = -v;
        }
        m
    }

    /// Coupling between levels `n` and `m` (one-based, order-insensitive,
    /// so `get(2, 1) == get(1, 2)`).
    pub fn get(&self, n: usize, m: usize) -> f64 {
        let (a, b) = if n < m { (n, m) } else { (m, n) };
        COUPLING_PAIRS
            .iter()
            .position(|&p| p == (a - 1, b - 1))
            .map(|i| self.to_array()[i])
            .unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Quaternions of the generalized spherical angles.
pub fn spherical_to_quats(a: &AnglePair) -> (Quaternion, Quaternion) {
    fn quat(gamma: f64, theta: f64, phi: f64) -> Quaternion {
        let (sg, cg) = gamma.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Quaternion::new(cg, sg * ct, sg * st * cp, sg * st * sp)
    }
    (quat(a.gamma1, a.theta1, a.phi1), quat(a.gamma2, a.theta2, a.phi2))
}

/// Time derivatives of the two quaternions for given angle rates.
pub fn spherical_quat_rates(a: &AnglePair, rates: &AnglePair) -> (Quaternion, Quaternion) {
    fn rate(gamma: f64, theta: f64, phi: f64, dg: f64, dt: f64, dp: f64) -> Quaternion {
        let (sg, cg) = gamma.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Quaternion::new(
            -sg * dg,
            cg * ct * dg - sg * st * dt,
            cg * st * cp * dg + sg * ct * cp * dt - sg * st * sp * dp,
            cg * st * sp * dg + sg * ct * sp * dt + sg * st * cp * dp,
        )
    }
    (
        rate(a.gamma1, a.theta1, a.phi1, rates.gamma1, rates.theta1, rates.phi1),
        rate(a.gamma2, a.theta2, a.phi2, rates.gamma2, rates.theta2, rates.phi2),
    )
}

/// `U_r = M_L(q) M_R(p)` built from the quaternion product.
pub fn rotation_of_angles(a: &AnglePair) -> Matrix4R {
    let (q, p) = spherical_to_quats(a);
    left_mul_matrix(q) * right_mul_matrix(p)
}

struct Trig {
    s1: f64,
    c1: f64,
    s2: f64,
    c2: f64,
    st1: f64,
    ct1: f64,
    st2: f64,
    ct2: f64,
    sf1: f64,
    cf1: f64,
    sf2: f64,
    cf2: f64,
}

impl Trig {
    fn new(a: &AnglePair) -> Self {
        let (s1, c1) = a.gamma1.sin_cos();
        let (s2, c2) = a.gamma2.sin_cos();
        let (st1, ct1) = a.theta1.sin_cos();
        let (st2, ct2) = a.theta2.sin_cos();
        let (sf1, cf1) = a.phi1.sin_cos();
        let (sf2, cf2) = a.phi2.sin_cos();
        Self { s1, c1, s2, c2, st1, ct1, st2, ct2, sf1, cf1, sf2, cf2 }
    }
}

/// Closed-form evolution operator in terms of the spherical angles.
pub fn ur_of_angles(a: &AnglePair) -> Matrix4R {
    let Trig { s1, c1, s2, c2, st1, ct1, st2, ct2, sf1, cf1, sf2, cf2 } = Trig::new(a);
    let (sd, cd) = (a.phi1 - a.phi2).sin_cos();
    let (ss, cs) = (a.phi1 + a.phi2).sin_cos();
    let mut u = Matrix4R::zeros();

    u[(0, 0)] = c1 * c2 - s1 * s2 * (st1 * st2 * cd + ct1 * ct2);
    u[(1, 0)] = s2 * (ct2 * c1 - st1 * st2 * s1 * sd) + ct1 * s1 * c2;
    u[(2, 0)] = s2 * (s1 * (st1 * ct2 * sf1 - ct1 * st2 * sf2) + st2 * c1 * cf2) + st1 * s1 * c2 * cf1;
    u[(3, 0)] = s2 * (s1 * (ct1 * st2 * cf2 - st1 * ct2 * cf1) + st2 * c1 * sf2) + st1 * s1 * c2 * sf1;

    u[(0, 1)] = -s2 * (st1 * st2 * s1 * sd + ct2 * c1) - ct1 * s1 * c2;
    u[(1, 1)] = s1 * s2 * (st1 * st2 * cd - ct1 * ct2) + c1 * c2;
    u[(2, 1)] = st1 * s1 * c2 * sf1 - s2 * (s1 * (st1 * ct2 * cf1 + ct1 * st2 * cf2) + st2 * c1 * sf2);
    u[(3, 1)] = st2 * c1 * s2 * cf2 - s1 * (s2 * (st1 * ct2 * sf1 + ct1 * st2 * sf2) + st1 * c2 * cf1);

    u[(0, 2)] = -st1 * s1 * c2 * cf1 - s2 * (s1 * (ct1 * st2 * sf2 - st1 * ct2 * sf1) + st2 * c1 * cf2);
    u[(1, 2)] = st2 * c1 * s2 * sf2 - s1 * (s2 * (st1 * ct2 * cf1 + ct1 * st2 * cf2) + st1 * c2 * sf1);
    u[(2, 2)] = s1 * s2 * (ct1 * ct2 - st1 * st2 * cs) + c1 * c2;
    u[(3, 2)] = ct1 * s1 * c2 - s2 * (st1 * st2 * s1 * ss + ct2 * c1);

    u[(0, 3)] = -st1 * s1 * c2 * sf1 - s2 * (s1 * (st1 * ct2 * cf1 - ct1 * st2 * cf2) + st2 * c1 * sf2);
    u[(1, 3)] = st1 * s1 * c2 * cf1 - s2 * (s1 * (st1 * ct2 * sf1 + ct1 * st2 * sf2) + st2 * c1 * cf2);
    u[(2, 3)] = ct2 * c1 * s2 - s1 * (st1 * st2 * s2 * ss + ct1 * c2);
    u[(3, 3)] = s1 * s2 * (st1 * st2 * cs + ct1 * ct2) + c1 * c2;
    u
}

/// Closed-form couplings `Ω_nm` of `H_r` for given angles and angle rates.
pub fn hr_analytic(a: &AnglePair, rates: &AnglePair) -> CouplingSet {
    let Trig { s1, c1, s2, c2, st1, ct1, st2, ct2, sf1, cf1, sf2, cf2 } = Trig::new(a);
    let AnglePair {
        gamma1: dg1,
        theta1: dt1,
        phi1: df1,
        gamma2: dg2,
        theta2: dt2,
        phi2: df2,
    } = *rates;

    let omega12 = s1 * st1 * (dt1 * c1 - df1 * s1 * st1) + s2 * st2 * (dt2 * c2 + df2 * s2 * st2)
        - dg1 * ct1
        - dg2 * ct2;
    let omega13 = dt1 * s1 * (s1 * sf1 - c1 * ct1 * cf1) - dt2 * s2 * (s2 * sf2 + c2 * ct2 * cf2)
        - dg1 * st1 * cf1
        - dg2 * st2 * cf2
        + df1 * s1 * st1 * (c1 * sf1 + s1 * ct1 * cf1)
        + df2 * s2 * st2 * (c2 * sf2 - s2 * ct2 * cf2);
    let omega14 = -dt1 * s1 * (s1 * cf1 + c1 * ct1 * sf1) + dt2 * s2 * (s2 * cf2 - c2 * ct2 * sf2)
        - dg1 * st1 * sf1
        - dg2 * st2 * sf2
        - df1 * s1 * st1 * (c1 * cf1 - s1 * ct1 * sf1)
        - df2 * s2 * st2 * (c2 * cf2 + s2 * ct2 * sf2);
    let omega23 = -dt1 * s1 * (s1 * cf1 + c1 * ct1 * sf1) - dt2 * s2 * (s2 * cf2 - c2 * ct2 * sf2)
        - dg1 * st1 * sf1
        + dg2 * st2 * sf2
        - df1 * s1 * st1 * (c1 * cf1 - s1 * ct1 * sf1)
        + df2 * s2 * st2 * (c2 * cf2 + s2 * ct2 * sf2);
    let omega24 = -dt1 * s1 * (s1 * sf1 - c1 * ct1 * cf1) - dt2 * s2 * (s2 * sf2 + c2 * ct2 * cf2)
        + dg1 * st1 * cf1
        - dg2 * st2 * cf2
        - df1 * s1 * st1 * (c1 * sf1 + s1 * ct1 * cf1)
        + df2 * s2 * st2 * (c2 * sf2 - s2 * ct2 * cf2);
    let omega34 = s1 * st1 * (dt1 * c1 - df1 * s1 * st1) - s2 * st2 * (dt2 * c2 + df2 * s2 * st2)
        - dg1 * ct1
        + dg2 * ct2;

    CouplingSet { omega12, omega13, omega14, omega23, omega24, omega34 }
}

/// Default finite-difference step for [`hr_numeric`].
pub fn default_step(horizon: f64) -> f64 {
    1e-5 * horizon
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericCouplings {
    pub couplings: CouplingSet,
    /// Largest entry of `M + Mᵀ` for the raw difference matrix `M = U̇ U_rᵀ`.
    pub antisymmetry_residual: f64,
    /// A one-sided stencil was used because `t ± h` left `[0, T]`.
    pub one_sided: bool,
}

/// Extracts `Ω_nm` from `U̇_r U_rᵀ` with a centered difference of step `h`.
///
/// Near the ends of `[0, T]` a three-point one-sided stencil is used and
/// flagged. The difference matrix is antisymmetrized before read-off.
pub fn hr_numeric(schedule: &dyn AngleSchedule, t: f64, h: f64) -> Result<NumericCouplings> {
    let horizon = schedule.horizon();
    if !(h > 0.0) || 2.0 * h > horizon {
        return Err(Error::InvalidArgument(format!("step {h} must lie in (0, T/2]")));
    }
    // Grid points computed as T·k/n may overshoot T by an ulp.
    let slack = 1e-12 * horizon;
    if !(-slack..=horizon + slack).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, {horizon}]")));
    }
    let t = t.clamp(0.0, horizon);
    let at = |s: f64| rotation_of_angles(&schedule.value(s));
    let (derivative, one_sided) = if t - h < 0.0 {
        ((at(t) * -3.0 + at(t + h) * 4.0 - at(t + 2.0 * h)) / (2.0 * h), true)
    } else if t + h > horizon {
        ((at(t) * 3.0 - at(t - h) * 4.0 + at(t - 2.0 * h)) / (2.0 * h), true)
    } else {
        ((at(t + h) - at(t - h)) / (2.0 * h), false)
    };
    let m = derivative * at(t).transpose();
    let antisymmetry_residual = (m + m.transpose()).amax();
    let antisym = (m - m.transpose()) * 0.5;
    Ok(NumericCouplings {
        couplings: CouplingSet::from_upper(&antisym),
        antisymmetry_residual,
        one_sided,
    })
}
