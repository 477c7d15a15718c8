//! Double-double complex arithmetic for small, badly conditioned solves.

use core::ops::{Add, Div, Mul, Neg, Sub};

use super::Complex;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: libm::fma(a, b, -p) }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let u = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(u.hi, u.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }
}

/// A complex number carried as a pair of double-double reals (~32 digits).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex { re: Dd::ZERO, im: Dd::ZERO };

    pub fn from_complex(z: Complex) -> Self {
        DdComplex { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    pub fn from_real(x: f64) -> Self {
        DdComplex { re: Dd::from(x), im: Dd::ZERO }
    }

    pub fn to_complex(self) -> Complex {
        Complex::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }

    /// Modulus rounded to `f64`.
    pub fn norm(self) -> f64 {
        self.to_complex().norm()
    }
}

impl Add for DdComplex {
    type Output = DdComplex;
    fn add(self, o: Self) -> Self {
        DdComplex { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for DdComplex {
    type Output = DdComplex;
    fn sub(self, o: Self) -> Self {
        DdComplex { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for DdComplex {
    type Output = DdComplex;
    fn neg(self) -> Self {
        DdComplex { re: -self.re, im: -self.im }
    }
}

impl Mul for DdComplex {
    type Output = DdComplex;
    fn mul(self, o: Self) -> Self {
        DdComplex { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Div for DdComplex {
    type Output = DdComplex;
    fn div(self, o: Self) -> Self {
        let den = o.re * o.re + o.im * o.im;
        let num = self * DdComplex { re: o.re, im: -o.im };
        DdComplex { re: num.re / den, im: num.im / den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        // (1 + 1e-20) - 1 is invisible in f64 but exact in double-double.
        let tiny = DdComplex::from_real(1e-20);
        let one = DdComplex::from_real(1.0);
        let diff = (one + tiny) - one;
        assert_eq!(diff.to_complex(), Complex::new(1e-20, 0.0));
    }

    #[test]
    fn division_round_trip() {
        let a = DdComplex::from_complex(Complex::new(1.0, 3.0));
        let b = DdComplex::from_complex(Complex::new(-0.7, 0.2));
        let back = (a / b) * b;
        assert!((back - a).norm() < 1e-30);
    }
}
