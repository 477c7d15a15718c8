use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::{c, Complex};

/// Polynomial with complex coefficients, lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so `leading()` is nonzero
/// unless the polynomial itself is zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last().is_some_and(|a| *a == c(0.0, 0.0)) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(a: Complex) -> Self {
        Self::new(vec![a])
    }

    pub fn one() -> Self {
        Self::constant(c(1.0, 0.0))
    }

    /// `a · z^k`.
    pub fn monomial(k: usize, a: Complex) -> Self {
        let mut coeffs = vec![c(0.0, 0.0); k + 1];
        coeffs[k] = a;
        Self::new(coeffs)
    }

    /// `z − r`.
    pub fn linear_factor(r: Complex) -> Self {
        Self::new(vec![-r, c(1.0, 0.0)])
    }

    /// `lead · Π (z − r)`.
    pub fn from_roots(lead: Complex, roots: &[Complex]) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, &r| &acc * &Self::linear_factor(r))
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex {
        self.coeffs.last().copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `(p(z), p'(z))` by a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut p = c(0.0, 0.0);
        let mut dp = c(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    /// `Σ |a_k| r^k`, the natural scale for rounding error of `eval` at `|z| = r`.
    pub fn magnitude_at(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect())
    }

    /// `w^n · p(1/w)`; requires `n >= degree`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.is_zero() || n >= self.degree(), "reversal order below degree");
        let mut coeffs = vec![c(0.0, 0.0); n + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = a;
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, a: Complex) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * a).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Number of exactly-zero low-order coefficients (multiplicity of the root 0).
    pub fn low_order_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|a| **a == c(0.0, 0.0)).count()
    }

    /// Divides out `z^k`; the caller guarantees the low coefficients vanish.
    pub(crate) fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    /// Quotient and remainder of division by `z − r`.
    pub fn deflate(&self, r: Complex) -> (Self, Complex) {
        if self.coeffs.is_empty() {
            return (Self::zero(), c(0.0, 0.0));
        }
        let mut quotient = vec![c(0.0, 0.0); self.coeffs.len() - 1];
        let mut acc = c(0.0, 0.0);
        for k in (0..self.coeffs.len()).rev() {
            acc = acc * r + self.coeffs[k];
            if k > 0 {
                quotient[k - 1] = acc;
            }
        }
        (Self::new(quotient), acc)
    }

    /// Order of vanishing at `r`: the number of leading Taylor coefficients
    /// `p^(k)(r)/k!` with modulus at most `tol · Σ|a_j|(1+|r|)^j`.
    pub fn vanishing_order(&self, r: Complex, tol: f64) -> usize {
        let bound = tol * self.magnitude_at(1.0 + r.norm());
        let mut p = self.clone();
        let mut order = 0;
        while !p.is_zero() {
            let (q, rem) = p.deflate(r);
            if rem.norm() > bound {
                break;
            }
            order += 1;
            p = q;
        }
        order
    }

    /// Drops leading coefficients whose modulus is at most `tol`.
    pub(crate) fn trim_top(&self, tol: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|a| a.norm() <= tol) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![c(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| -a).collect())
    }
}
