//! Quaternion algebra and the geometry of rotations in four dimensions.
//!
//! A point of E⁴ is identified with the quaternion `w + x i + y j + z k`.
//! Every rotation of E⁴ can be written as `C ↦ q C p` for a pair of unit
//! quaternions, equivalently as the commuting product `M_L(q) M_R(p)` of a
//! left- and a right-isoclinic matrix.

use std::f64::consts::PI;
use std::ops::{Mul, Neg};

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};

/// Real 4×4 matrix; rows and columns are indexed `(w, x, y, z)`.
pub type Matrix4R = Matrix4<f64>;

/// Inputs within this distance of unit norm are renormalized, anything
/// further away is rejected.
pub const UNIT_TOLERANCE: f64 = 1e-6;

/// Tolerance used when labelling angles as zero or equal.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Builds a unit quaternion, renormalizing inputs that are within
    /// [`UNIT_TOLERANCE`] of unit norm.
    pub fn unit(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(w, x, y, z).to_unit()
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.w, self.x, self.y, self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn vector_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn is_unit(self) -> bool {
        (self.norm_squared() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn is_pure_unit(self) -> bool {
        self.w.abs() <= UNIT_TOLERANCE && self.is_unit()
    }

    /// Validates and renormalizes a near-unit quaternion.
    pub fn to_unit(self) -> Result<Self> {
        let n2 = self.norm_squared();
        if !n2.is_finite() || (n2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "quaternion {self:?} is not unit (|q|² = {n2})"
            )));
        }
        Ok(self.scale(1.0 / n2.sqrt()))
    }

    /// Splits a unit quaternion as `cos γ + u sin γ` with `γ ∈ [0, π]`.
    /// Returns `None` for the axis when `q = ±1`.
    pub fn to_axis_angle(self) -> (Option<Quaternion>, f64) {
        let s = self.vector_norm();
        let gamma = s.atan2(self.w);
        if s <= ANGLE_TOLERANCE {
            (None, gamma)
        } else {
            (Some(Self::new(0.0, self.x / s, self.y / s, self.z / s)), gamma)
        }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product, `i² = j² = k² = ijk = −1`.
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

/// `e^{u γ} = cos γ + u sin γ` for a pure unit quaternion `u`.
pub fn quat_exp(u: Quaternion, gamma: f64) -> Result<Quaternion> {
    if !u.is_pure_unit() {
        return Err(Error::InvalidArgument(format!(
            "exponent axis {u:?} is not a pure unit quaternion"
        )));
    }
    let u = Quaternion::new(0.0, u.x, u.y, u.z).to_unit()?;
    let (s, c) = gamma.sin_cos();
    Ok(Quaternion::new(c, u.x * s, u.y * s, u.z * s))
}

// Unchecked matrix builders; the public entry points validate first.
fn left_matrix(q: Quaternion) -> Matrix4R {
    Matrix4R::new(
        q.w, -q.x, -q.y, -q.z, //
        q.x, q.w, -q.z, q.y, //
        q.y, q.z, q.w, -q.x, //
        q.z, -q.y, q.x, q.w,
    )
}

fn right_matrix(p: Quaternion) -> Matrix4R {
    Matrix4R::new(
        p.w, -p.x, -p.y, -p.z, //
        p.x, p.w, p.z, -p.y, //
        p.y, -p.z, p.w, p.x, //
        p.z, p.y, -p.x, p.w,
    )
}

/// Matrix of `C ↦ q C` (Van Elfrinkhof's left factor).
pub fn left_isoclinic(q: Quaternion) -> Result<Matrix4R> {
    Ok(left_matrix(q.to_unit()?))
}

/// Matrix of `C ↦ C p` (Van Elfrinkhof's right factor).
pub fn right_isoclinic(p: Quaternion) -> Result<Matrix4R> {
    Ok(right_matrix(p.to_unit()?))
}

/// Left-multiplication matrix for an arbitrary (not necessarily unit)
/// quaternion. Used for generators such as `q̇ q̄`.
pub fn left_mul_matrix(q: Quaternion) -> Matrix4R {
    left_matrix(q)
}

/// Right-multiplication matrix for an arbitrary quaternion.
pub fn right_mul_matrix(p: Quaternion) -> Matrix4R {
    right_matrix(p)
}

/// The rotation `C ↦ q C p` as `M_L(q) M_R(p)`.
pub fn cayley_rotation(q: Quaternion, p: Quaternion) -> Result<Matrix4R> {
    let q = q.to_unit()?;
    let p = p.to_unit()?;
    Ok(left_matrix(q) * right_matrix(p))
}

/// `MᵀM = I` and `det M = +1`, both within `tol`.
pub fn is_rotation(m: &Matrix4R, tol: f64) -> bool {
    let gram = m.transpose() * m - Matrix4R::identity();
    gram.amax() <= tol && (m.determinant() - 1.0).abs() <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationKind {
    Identity,
    Simple,
    LeftIsoclinic,
    RightIsoclinic,
    Double,
}

/// An oriented plane given by an orthonormal pair of 4-vectors.
pub type Plane = (Vector4<f64>, Vector4<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct RotationDecomposition {
    pub plane1: Plane,
    pub plane2: Plane,
    /// Rotation angle inside `plane1`, in `[0, π]`.
    pub angle1: f64,
    /// Rotation angle inside `plane2`, in `[0, π]`.
    pub angle2: f64,
    pub kind: RotationKind,
    /// Canonical left angle γ₁ after resolving the `(q, p) ~ (−q, −p)` sign.
    pub left_angle: f64,
    /// Canonical right angle γ₂.
    pub right_angle: f64,
}

/// Magnitude of an angle reduced to `[0, π]`.
fn reduced_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        2.0 * PI - r
    } else {
        r
    }
}

/// Some unit pure quaternion orthogonal to the pure unit `u`.
fn orthogonal_pure(u: Quaternion) -> Quaternion {
    // Cross with the coordinate axis least aligned with u.
    let axis = if u.x.abs() <= u.y.abs() && u.x.abs() <= u.z.abs() {
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    } else if u.y.abs() <= u.z.abs() {
        Quaternion::new(0.0, 0.0, 1.0, 0.0)
    } else {
        Quaternion::new(0.0, 0.0, 0.0, 1.0)
    };
    let c = Quaternion::new(
        0.0,
        u.y * axis.z - u.z * axis.y,
        u.z * axis.x - u.x * axis.z,
        u.x * axis.y - u.y * axis.x,
    );
    c.scale(1.0 / c.norm())
}

fn plane_from(a: Quaternion, b: Quaternion) -> Plane {
    (
        a.to_vector().normalize(),
        b.to_vector().normalize(),
    )
}

/// Rotation angle of `r` inside an invariant plane, in `[0, π]`.
fn angle_in_plane(r: &Matrix4R, plane: &Plane) -> f64 {
    let image = r * plane.0;
    plane.1.dot(&image).atan2(plane.0.dot(&image)).abs()
}

/// Splits the rotation `C ↦ q C p` into its two completely orthogonal
/// invariant planes and their rotation angles.
///
/// With `q = e^{u γ₁}` and `p = e^{v γ₂}`, the plane spanned by `u + v` and
/// `uv − 1` turns through `|γ₁ + γ₂|` and the one spanned by `v − u` and
/// `uv + 1` through `|γ₁ − γ₂|`. When `u = ±v` (or one factor is `±1`) those
/// spans degenerate and the planes `{1, u}` and its orthogonal complement are
/// used instead.
pub fn decompose_rotation(q: Quaternion, p: Quaternion) -> Result<RotationDecomposition> {
    let mut q = q.to_unit()?;
    let mut p = p.to_unit()?;
    // (q, p) and (−q, −p) describe the same rotation; pick q_w ≥ 0, then p_w ≥ 0.
    if q.w < -ANGLE_TOLERANCE || (q.w.abs() <= ANGLE_TOLERANCE && p.w < 0.0) {
        q = -q;
        p = -p;
    }
    let r = left_matrix(q) * right_matrix(p);
    let (u, gamma1) = q.to_axis_angle();
    let (v, gamma2) = p.to_axis_angle();

    let one = Quaternion::IDENTITY;
    let (plane1, plane2) = match (u, v) {
        (None, None) => (
            (Vector4::x(), Vector4::y()),
            (Vector4::z(), Vector4::w()),
        ),
        (Some(axis), None) | (None, Some(axis)) => {
            let w = orthogonal_pure(axis);
            (plane_from(one, axis), plane_from(w, axis * w))
        }
        (Some(u), Some(v)) => {
            let sum = Quaternion::new(0.0, u.x + v.x, u.y + v.y, u.z + v.z);
            let diff = Quaternion::new(0.0, v.x - u.x, v.y - u.y, v.z - u.z);
            // |u + v|² + |v − u|² = 4, so at least one span is well conditioned.
            if sum.norm() <= 1e-6 || diff.norm() <= 1e-6 {
                let w = orthogonal_pure(u);
                (plane_from(one, u), plane_from(w, u * w))
            } else {
                let uv = u * v;
                let minus_one = Quaternion::new(uv.w - 1.0, uv.x, uv.y, uv.z);
                let plus_one = Quaternion::new(uv.w + 1.0, uv.x, uv.y, uv.z);
                (plane_from(sum, minus_one), plane_from(diff, plus_one))
            }
        }
    };

    let angle1 = reduced_angle(angle_in_plane(&r, &plane1));
    let angle2 = reduced_angle(angle_in_plane(&r, &plane2));
    let zero1 = angle1 <= ANGLE_TOLERANCE;
    let zero2 = angle2 <= ANGLE_TOLERANCE;
    let p_trivial = p.vector_norm() <= ANGLE_TOLERANCE;
    let kind = if zero1 && zero2 {
        RotationKind::Identity
    } else if zero1 || zero2 {
        RotationKind::Simple
    } else if (angle1 - angle2).abs() <= ANGLE_TOLERANCE {
        if p_trivial {
            RotationKind::LeftIsoclinic
        } else {
            RotationKind::RightIsoclinic
        }
    } else {
        RotationKind::Double
    };

    Ok(RotationDecomposition {
        plane1,
        plane2,
        angle1,
        angle2,
        kind,
        left_angle: gamma1,
        right_angle: gamma2,
    })
}
