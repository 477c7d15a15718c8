use alloc::vec::Vec;

use super::roots::{cluster_roots, polynomial_roots};
use super::{c, Complex, Polynomial, SpherePoint};
use crate::{Error, Result};

/// Minimum distance between a numerator and a denominator root.
pub const COPRIME_TOL: f64 = 1e-9;
/// Roots of the critical-point equation closer than this are merged.
pub const MULTIPLICITY_TOL: f64 = 1e-7;
/// Relative size under which both homogeneous coordinates count as zero.
const DEGENERATE_TOL: f64 = 1e-13;
/// Relative size under which a Wronskian coefficient is treated as cancelled.
const CANCEL_TOL: f64 = 1e-12;
/// Relative Taylor-coefficient size under which a polynomial vanishes at a point.
const VANISHING_TOL: f64 = 1e-11;
/// Spread of the numerical roots of a multiple root, relative to the root scale.
const ROOT_GROUP_TOL: f64 = 1e-3;

/// Quotient of two polynomials, evaluated on the Riemann sphere.
///
/// The reversed polynomials `w^D p(1/w)` are cached so that evaluation in the
/// inverted chart costs the same as in the standard one.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
    num_rev: Polynomial,
    den_rev: Polynomial,
    degree: usize,
}

/// A critical point together with its multiplicity (local degree minus one).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalPoint {
    pub point: SpherePoint,
    pub multiplicity: usize,
}

impl RationalMap {
    /// Builds `num / den`, rejecting a zero denominator or numerically shared roots.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::argument("zero denominator"));
        }
        if num.degree() >= 1 && den.degree() >= 1 {
            let zn = polynomial_roots(&num)?;
            let zd = root_centers(&polynomial_roots(&den)?);
            let closest = zn.iter().flat_map(|a| zd.iter().map(move |b| (a - b).norm())).fold(f64::INFINITY, f64::min);
            let shared =
                closest <= COPRIME_TOL || root_centers(&zn).iter().any(|&r| den.vanishing_order(r, VANISHING_TOL) > 0);
            if shared {
                return Err(Error::argument("numerator and denominator share a root"));
            }
        }
        Ok(Self::from_parts_unchecked(num, den))
    }

    /// Builds `num / den` without the coprimality check.
    ///
    /// Used for maps whose factorization is known in closed form and for
    /// derivatives, which deliberately keep their shared factors.
    pub fn from_parts_unchecked(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let degree = num.degree().max(den.degree());
        RationalMap { num_rev: num.reversed(degree), den_rev: den.reversed(degree), num, den, degree }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::from_parts_unchecked(p, Polynomial::one())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Homogeneous image `(a, b)` of `z`, with `f(z) = a / b`.
    #[inline]
    pub fn eval_homogeneous(&self, z: SpherePoint) -> Result<(Complex, Complex)> {
        let (a, b, sa, sb) = match z {
            SpherePoint::Finite(z) => {
                let r = z.norm();
                (self.num.eval(z), self.den.eval(z), self.num.magnitude_at(r), self.den.magnitude_at(r))
            }
            SpherePoint::Inverted(w) => {
                let r = w.norm();
                (self.num_rev.eval(w), self.den_rev.eval(w), self.num_rev.magnitude_at(r), self.den_rev.magnitude_at(r))
            }
        };
        if a.norm() <= DEGENERATE_TOL * sa && b.norm() <= DEGENERATE_TOL * sb {
            return Err(Error::DegenerateEvaluation);
        }
        Ok((a, b))
    }

    /// `f(z)`; poles map to [`SpherePoint::INFINITY`].
    #[inline]
    pub fn eval(&self, z: SpherePoint) -> Result<SpherePoint> {
        let (a, b) = self.eval_homogeneous(z)?;
        SpherePoint::from_homogeneous(a, b).ok_or(Error::DegenerateEvaluation)
    }

    pub fn eval_at(&self, z: Complex) -> Result<SpherePoint> {
        self.eval(SpherePoint::new(z))
    }

    /// `num'·den − num·den'`, computed termwise as `Σ (i−j) p_i q_j z^{i+j−1}`
    /// so that the top coefficient cancels exactly when the degrees agree.
    pub fn wronskian(&self) -> Polynomial {
        wronskian(&self.num, &self.den)
    }

    /// `(num'·den − num·den') / den²` with shared factors kept.
    pub fn derivative(&self) -> RationalMap {
        RationalMap::from_parts_unchecked(self.wronskian(), &self.den * &self.den)
    }

    /// The conjugate `w ↦ 1/f(1/w)`, i.e. the map read in the inverted chart.
    pub fn conjugate_by_inversion(&self) -> RationalMap {
        RationalMap::from_parts_unchecked(self.den_rev.clone(), self.num_rev.clone())
    }

    /// All `2d − 2` critical points, counted with multiplicity.
    ///
    /// Finite critical points (including multiple poles) are the roots of the
    /// Wronskian. The multiplicity at infinity is read off the Wronskian of the
    /// inverted-chart conjugate and must agree with the degree deficit.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>> {
        if self.degree < 2 {
            return Err(Error::argument("critical points need degree >= 2"));
        }
        let w = self.wronskian();
        let scale = self.num.max_coeff_norm() * self.den.max_coeff_norm() * self.degree as f64;
        let w = w.trim_top(CANCEL_TOL * scale);

        let g = self.conjugate_by_inversion();
        let wg = g.wronskian();
        let gscale = g.num.max_coeff_norm() * g.den.max_coeff_norm() * self.degree as f64;
        let at_infinity = wg.coeffs().iter().take_while(|a| a.norm() <= CANCEL_TOL * gscale).count();

        let expected = 2 * self.degree - 2;
        let finite = if w.is_zero() { 0 } else { w.degree() };
        if finite + at_infinity != expected {
            return Err(Error::NumericalFailure { what: "critical point count", best: Vec::new() });
        }

        let mut out = Vec::new();
        if finite > 0 {
            let roots = polynomial_roots(&w)?;
            for cluster in cluster_roots(&roots, MULTIPLICITY_TOL) {
                out.push(CriticalPoint { point: SpherePoint::new(cluster.center), multiplicity: cluster.multiplicity });
            }
        }
        if at_infinity > 0 {
            out.push(CriticalPoint { point: SpherePoint::INFINITY, multiplicity: at_infinity });
        }
        Ok(out)
    }

    /// Cancels numerically shared roots, including multiple ones.
    pub fn reduced(&self) -> Result<RationalMap> {
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        if num.degree() == 0 || den.degree() == 0 {
            return Ok(self.clone());
        }
        for r in root_centers(&polynomial_roots(&num)?) {
            let k = num.vanishing_order(r, VANISHING_TOL).min(den.vanishing_order(r, VANISHING_TOL));
            for _ in 0..k {
                num = num.deflate(r).0;
                den = den.deflate(r).0;
            }
        }
        Ok(RationalMap::from_parts_unchecked(num, den))
    }
}

/// Centers of loosely clustered roots.
///
/// The mean of the numerical roots of a multiple root is accurate to near
/// machine precision even when the individual roots are not.
fn root_centers(roots: &[Complex]) -> Vec<Complex> {
    let scale = roots.iter().fold(1.0f64, |m, r| m.max(r.norm()));
    cluster_roots(roots, ROOT_GROUP_TOL * scale).into_iter().map(|k| k.center).collect()
}

pub(crate) fn wronskian(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let (pc, qc) = (p.coeffs(), q.coeffs());
    if pc.is_empty() || qc.is_empty() {
        return Polynomial::zero();
    }
    let top = pc.len() + qc.len() - 2;
    let mut out = alloc::vec![c(0.0, 0.0); top.max(1)];
    for (i, &a) in pc.iter().enumerate() {
        for (j, &b) in qc.iter().enumerate() {
            if i != j && i + j >= 1 {
                out[i + j - 1] += a * b * (i as f64 - j as f64);
            }
        }
    }
    Polynomial::new(out)
}
