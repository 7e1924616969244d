//! Quaternion algebra over `[r, v]` pairs: cross-ratios of points embedded as
//! pure-imaginary quaternions, the polar square root, and the diagonal
//! (inserting) point construction.
//!
//! Points of R³ are identified with the imaginary quaternions `[0, v]`. The
//! cross-ratio `cr(a,b,c,d) = (a-b)(b-c)⁻¹(c-d)(d-a)⁻¹` is real exactly when
//! the four points are concyclic, and its imaginary part is normal to their
//! circumsphere at `a`.

use crate::Vec3;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuatError {
    #[error("cannot invert the zero quaternion")]
    ZeroQuaternion,
    #[error("square root branch undefined for non-positive reals")]
    NonPositiveRealBranch,
    #[error("coincident points: {0}")]
    CoincidentPoints(&'static str),
    #[error("degenerate quadruple: {0}")]
    DegenerateQuadruple(&'static str),
    #[error("square-root branch failure inside diagonal point")]
    BranchFailure,
}

/// Quaternion as a scalar plus 3-vector pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub re: f64,
    pub im: Vec3,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        re: 1.0,
        im: Vec3::new(0.0, 0.0, 0.0),
    };

    pub fn new(re: f64, im: Vec3) -> Self {
        Quaternion { re, im }
    }

    /// Real quaternion `[r, 0]`.
    pub fn scalar(re: f64) -> Self {
        Quaternion::new(re, Vec3::zeros())
    }

    /// Pure-imaginary embedding of a point of R³.
    pub fn from_point(v: Vec3) -> Self {
        Quaternion::new(0.0, v)
    }

    pub fn conjugate(self) -> Self {
        Quaternion::new(self.re, -self.im)
    }

    pub fn norm_squared(self) -> f64 {
        self.re * self.re + self.im.norm_squared()
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.iter().all(|x| x.is_finite())
    }

    /// `q⁻¹ = q̄ / |q|²`.
    pub fn inverse(self) -> Result<Self, QuatError> {
        let n = self.norm_squared();
        if n < f64::MIN_POSITIVE {
            return Err(QuatError::ZeroQuaternion);
        }
        let c = self.conjugate();
        Ok(Quaternion::new(c.re / n, c.im / n))
    }

    /// Square root through the polar form `q = |q|[cos φ, v sin φ]` with
    /// `φ ∈ [0, π]`: `√q = √|q| [cos(φ/2), v sin(φ/2)]`.
    ///
    /// The branch is undefined for `q ∈ R≤0`; callers decide how to treat
    /// that case.
    pub fn sqrt_polar(self) -> Result<Self, QuatError> {
        let im_norm = self.im.norm();
        if im_norm == 0.0 {
            if self.re > 0.0 {
                return Ok(Quaternion::scalar(self.re.sqrt()));
            }
            return Err(QuatError::NonPositiveRealBranch);
        }
        let n = self.norm();
        let half = f64::atan2(im_norm, self.re) / 2.0;
        let root = n.sqrt();
        Ok(Quaternion::new(
            root * half.cos(),
            self.im * (root * half.sin() / im_norm),
        ))
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// `[r,v]·[s,w] = [rs − ⟨v,w⟩, rw + sv + v×w]`.
    fn mul(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.re * rhs.re - self.im.dot(&rhs.im),
            self.re * rhs.im + rhs.re * self.im + self.im.cross(&rhs.im),
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        Quaternion::new(self.re * rhs, self.im * rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.re, -self.im)
    }
}

/// Largest pairwise distance of a quadruple; used to scale tolerances so the
/// algebra behaves the same at Ångström and unit magnitudes.
pub(crate) fn quadruple_scale(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> f64 {
    let pts = [a, b, c, d];
    let mut scale = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            scale = scale.max((pts[i] - pts[j]).norm());
        }
    }
    scale
}

/// Quaternionic cross-ratio `cr(a,b,c,d) = (a−b)(b−c)⁻¹(c−d)(d−a)⁻¹` of four
/// points embedded as pure-imaginary quaternions.
///
/// Real iff the points are concyclic; for non-concyclic quadruples the
/// imaginary part is parallel to the circumsphere normal at `a`.
pub fn cross_ratio(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> Result<Quaternion, QuatError> {
    let ab = Quaternion::from_point(a - b);
    let bc = Quaternion::from_point(b - c);
    let cd = Quaternion::from_point(c - d);
    let da = Quaternion::from_point(d - a);
    if bc.norm_squared() < f64::MIN_POSITIVE {
        return Err(QuatError::CoincidentPoints("b = c"));
    }
    if da.norm_squared() < f64::MIN_POSITIVE {
        return Err(QuatError::CoincidentPoints("d = a"));
    }
    Ok(ab * bc.inverse()? * cd * da.inverse()?)
}

/// Diagonal point
/// `f(a,b,c,d) = ((b−a)(c−a)⁻¹√cr(c,a,b,d) + 1)⁻¹ ((b−a)(c−a)⁻¹√cr(c,a,b,d)·c + b)`.
///
/// The result is pure-imaginary, lies on the circumsphere of the quadruple and
/// satisfies `cr(c,a,b,f) = −√cr(c,a,b,d)`.
pub fn diagonal_point(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> Result<Vec3, QuatError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (pts[i] - pts[j]).norm_squared() < f64::MIN_POSITIVE {
                return Err(QuatError::DegenerateQuadruple("coincident input points"));
            }
        }
    }
    let scale = quadruple_scale(a, b, c, d);
    let root = cross_ratio(c, a, b, d)?
        .sqrt_polar()
        .map_err(|_| QuatError::BranchFailure)?;
    let u = Quaternion::from_point(b - a) * Quaternion::from_point(c - a).inverse()?;
    let m = u * root;
    let denom = m + Quaternion::ONE;
    if denom.norm() < 1e-12 {
        return Err(QuatError::DegenerateQuadruple("diagonal point at infinity"));
    }
    let f = denom.inverse()? * (m * Quaternion::from_point(c) + Quaternion::from_point(b));
    if !f.is_finite() || f.re.abs() > 1e-6 * scale {
        return Err(QuatError::DegenerateQuadruple(
            "diagonal point failed purity check",
        ));
    }
    Ok(f.im)
}
