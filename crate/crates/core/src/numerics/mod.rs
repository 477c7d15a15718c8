//! Complex arithmetic on the Riemann sphere, polynomials and rational maps.

mod dd;
mod mobius;
mod poly;
mod rational;
mod roots;

pub use dd::DdComplex;
pub use mobius::MobiusMap;
pub use poly::Polynomial;
pub use rational::{CriticalPoint, RationalMap};
pub use roots::{cluster_roots, polynomial_roots, simultaneous_roots, RootCluster};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

pub type Complex = num_complex::Complex64;

/// Points with modulus above this are stored in the inverted chart `w = 1/z`.
pub const CHART_SWITCH: f64 = 1e8;

pub(crate) const fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// A point of the Riemann sphere expressed in one of its two standard charts.
///
/// `Finite(z)` always satisfies `|z| <= CHART_SWITCH`; everything further out
/// is `Inverted(w)` with `w = 1/z`, and `Inverted(0)` is the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "chart", content = "value", rename_all = "lowercase"))]
pub enum SpherePoint {
    Finite(Complex),
    Inverted(Complex),
}

impl SpherePoint {
    pub const INFINITY: SpherePoint = SpherePoint::Inverted(c(0.0, 0.0));
    pub const ZERO: SpherePoint = SpherePoint::Finite(c(0.0, 0.0));

    /// Normalizes `z` into the proper chart.
    pub fn new(z: Complex) -> Self {
        if z.norm() > CHART_SWITCH {
            SpherePoint::Inverted(z.inv())
        } else {
            SpherePoint::Finite(z)
        }
    }

    pub fn real(x: f64) -> Self {
        Self::new(c(x, 0.0))
    }

    /// Builds the point `1/w`.
    pub fn from_inverted(w: Complex) -> Self {
        if w.norm() * CHART_SWITCH >= 1.0 {
            SpherePoint::Finite(w.inv())
        } else {
            SpherePoint::Inverted(w)
        }
    }

    /// The point `[a : b] = a / b`; `None` when both coordinates vanish.
    pub fn from_homogeneous(a: Complex, b: Complex) -> Option<Self> {
        let (na, nb) = (a.norm(), b.norm());
        if na == 0.0 && nb == 0.0 {
            return None;
        }
        if na <= CHART_SWITCH * nb {
            Some(SpherePoint::Finite(a / b))
        } else {
            Some(SpherePoint::Inverted(b / a))
        }
    }

    /// Homogeneous coordinates `(a, b)` with the point equal to `a / b`.
    pub fn homogeneous(&self) -> (Complex, Complex) {
        match *self {
            SpherePoint::Finite(z) => (z, c(1.0, 0.0)),
            SpherePoint::Inverted(w) => (c(1.0, 0.0), w),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Inverted(w) if *w == c(0.0, 0.0))
    }

    /// The affine coordinate, `None` at infinity.
    pub fn to_complex(&self) -> Option<Complex> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Inverted(w) if w == c(0.0, 0.0) => None,
            SpherePoint::Inverted(w) => Some(w.inv()),
        }
    }

    /// The antipodal-free inversion `z ↦ 1/z`.
    pub fn inverted(&self) -> Self {
        let (a, b) = self.homogeneous();
        SpherePoint::from_homogeneous(b, a).expect("homogeneous coordinates never both vanish")
    }

    /// Chordal distance `2|z−w| / sqrt((1+|z|²)(1+|w|²))`, in `[0, 2]`.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        libm::sqrt(self.chordal_distance_sqr(other))
    }

    pub(crate) fn chordal_distance_sqr(&self, other: &SpherePoint) -> f64 {
        let (a1, b1) = self.homogeneous();
        let (a2, b2) = other.homogeneous();
        let cross = (a1 * b2 - a2 * b1).norm_sqr();
        4.0 * cross / ((a1.norm_sqr() + b1.norm_sqr()) * (a2.norm_sqr() + b2.norm_sqr()))
    }
}
