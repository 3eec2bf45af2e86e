//! Quaternion scalars, slice planes and similarity classes.
//!
//! A quaternion `q = w + xi + yj + zk` is stored by its four real
//! components. Equality is always tolerance based; see [`Quaternion::approx_eq`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        self.into()
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part `xi + yj + zk`.
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn im_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Modulus `|q|`.
    pub fn norm(self) -> f64 {
        // hypot-style scaling is unnecessary at the magnitudes handled here
        self.norm_sqr().sqrt()
    }

    pub fn inverse(self) -> Result<Quaternion> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        Ok(self.conj() / n2)
    }

    /// Euclidean dot product of the component 4-vectors, `Re(conj(p) q)`.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, r: f64) -> Quaternion {
        Quaternion::new(self.w * r, self.x * r, self.y * r, self.z * r)
    }

    pub fn approx_eq(self, other: Quaternion, tol: f64) -> bool {
        (self - other).norm() <= tol
    }

    /// Canonical representative of the similarity class in the closed upper
    /// half of `C_i`, together with the class key.
    pub fn standardize(self) -> (Quaternion, EigenClass) {
        let im = self.im_norm();
        (
            Quaternion::new(self.w, im, 0.0, 0.0),
            EigenClass {
                re: self.w,
                im_mod: im,
            },
        )
    }

    pub fn class(self) -> EigenClass {
        self.standardize().1
    }

    /// Unit quaternion `s` with `s⁻¹·q·s` equal to the standardized
    /// representative of `q`.
    pub fn standardizing_conjugator(self) -> Quaternion {
        let im = self.im_norm();
        if im == 0.0 {
            return Quaternion::ONE;
        }
        let u = self.im().scale(1.0 / im);
        // s maps i to u under v -> s v s⁻¹
        let s = Quaternion::ONE - u * Quaternion::I;
        let n = s.norm();
        if n < 1e-8 {
            // u is (numerically) -i; conjugation by j flips it
            Quaternion::J
        } else {
            s.scale(1.0 / n)
        }
    }

    /// Split `q = a + b·j` with `a, b ∈ C_i`.
    pub fn split_ci(self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.w, self.x),
            Complex64::new(self.y, self.z),
        )
    }

    pub fn join_ci(a: Complex64, b: Complex64) -> Quaternion {
        Quaternion::new(a.re, a.im, b.re, b.im)
    }

    pub fn from_complex(a: Complex64) -> Quaternion {
        Quaternion::new(a.re, a.im, 0.0, 0.0)
    }

    /// True when `q = α + mβ` for real `α, β`.
    pub fn in_slice(self, m: ImaginaryUnit, tol: f64) -> bool {
        let im = self.im();
        let along = m.0.dot(im);
        (im - m.0.scale(along)).norm() <= tol
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: f64) -> Quaternion {
        self.scale(r)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, r: f64) -> Quaternion {
        self.scale(1.0 / r)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

/// Unit imaginary quaternion, an element of the sphere `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub const I: ImaginaryUnit = ImaginaryUnit(Quaternion::I);
    pub const J: ImaginaryUnit = ImaginaryUnit(Quaternion::J);
    pub const K: ImaginaryUnit = ImaginaryUnit(Quaternion::K);

    /// Accepts `m` when `Re m = 0` and `|m| = 1` within `tol`, then
    /// renormalizes it exactly onto the sphere.
    pub fn new(m: Quaternion, tol: f64) -> Result<Self> {
        if !m.is_finite() || m.w.abs() > tol || (m.norm() - 1.0).abs() > tol {
            return Err(Error::Domain(format!(
                "{m} is not a unit imaginary quaternion"
            )));
        }
        let im = m.im();
        Ok(ImaginaryUnit(im.scale(1.0 / im.norm())))
    }

    pub fn get(self) -> Quaternion {
        self.0
    }
}

/// Similarity class `[q]`, keyed by `(Re q, |Im q|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct EigenClass {
    pub re: f64,
    pub im_mod: f64,
}

impl From<[f64; 2]> for EigenClass {
    fn from(c: [f64; 2]) -> Self {
        EigenClass {
            re: c[0],
            im_mod: c[1],
        }
    }
}

impl From<EigenClass> for [f64; 2] {
    fn from(c: EigenClass) -> Self {
        [c.re, c.im_mod]
    }
}

impl EigenClass {
    pub fn representative(self) -> Quaternion {
        Quaternion::new(self.re, self.im_mod, 0.0, 0.0)
    }

    pub fn approx_eq(self, other: EigenClass, tol: f64) -> bool {
        (self.re - other.re).abs() <= tol && (self.im_mod - other.im_mod).abs() <= tol
    }
}

pub fn same_class(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    p.class().approx_eq(q.class(), tol)
}
