use super::{c, Complex, Polynomial, RationalMap, SpherePoint};
use crate::{Error, Result};

/// `z ↦ (az + b) / (cz + d)` with `ad − bc ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl MobiusMap {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        if a * d - b * c == Complex::new(0.0, 0.0) {
            return Err(Error::argument("Möbius determinant vanishes"));
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap { a: c(1.0, 0.0), b: c(0.0, 0.0), c: c(0.0, 0.0), d: c(1.0, 0.0) }
    }

    /// `z ↦ 1/z`.
    pub fn inversion() -> Self {
        MobiusMap { a: c(0.0, 0.0), b: c(1.0, 0.0), c: c(1.0, 0.0), d: c(0.0, 0.0) }
    }

    pub fn determinant(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        let (x, y) = z.homogeneous();
        SpherePoint::from_homogeneous(self.a * x + self.b * y, self.c * x + self.d * y).expect("nonsingular Möbius map")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `φ⁻¹ ∘ f ∘ φ` where `φ = self`; the degree is preserved.
    pub fn conjugate(&self, f: &RationalMap) -> RationalMap {
        let deg = f.degree();
        let top = Polynomial::new(alloc::vec![self.b, self.a]);
        let bottom = Polynomial::new(alloc::vec![self.d, self.c]);
        let homogenize = |p: &Polynomial| {
            (0..=deg).fold(Polynomial::zero(), |acc, k| {
                let term = &(&top.pow(k) * &bottom.pow(deg - k)).scale(p.coeff(k));
                &acc + term
            })
        };
        let p = homogenize(f.numerator());
        let q = homogenize(f.denominator());
        let inv = self.inverse();
        let num = &p.scale(inv.a) + &q.scale(inv.b);
        let den = &p.scale(inv.c) + &q.scale(inv.d);
        RationalMap::from_parts_unchecked(num, den)
    }
}
