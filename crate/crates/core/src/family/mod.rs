//! The explicit maps: the cubic family `f_λ` whose Julia sets are Persian
//! carpets, McMullen maps, post-critically finite quadratic parameters and
//! orbit tracking.
//!
//! `f_λ` has the super-attracting 4-cycle `λ → 1 → ∞ → 0 → λ`, with local
//! degrees 2, 2, 2, 1 along it, and one free critical point `λ′ ≈ −λ`.

mod ladder;
mod orbit;
mod pcf;

pub use ladder::{magnitude_ladder_check, LadderClaim, LadderReport, DEFAULT_LADDER_CONSTANT};
pub use orbit::{orbit, Orbit};
pub use pcf::{has_exact_period, solve_pcf_parameter, PcfParameter, MAX_PCF_PERIOD};

use alloc::vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::numerics::{c, DdComplex};
use crate::{Complex, Error, Polynomial, RationalMap, Result, SpherePoint};

/// Below this modulus the construction is within its small-parameter regime.
pub const VERIFIED_RADIUS: f64 = 0.1;
/// A factor of the coefficients counts as vanishing below this modulus.
const FACTOR_TOL: f64 = 1e-12;

/// `f_λ` together with its marked cycle and free critical point.
#[derive(Clone, Debug, PartialEq)]
pub struct PersianCarpetMap {
    pub parameter: Complex,
    pub map: RationalMap,
    /// `[λ, 1, ∞, 0]` in dynamical order.
    pub cycle: [SpherePoint; 4],
    /// The critical point outside the cycle, `λ′`.
    pub free_critical: Complex,
    /// `|λ| < VERIFIED_RADIUS`.
    pub verified: bool,
}

/// Deviation of each cycle relation from exactness.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CycleResiduals {
    /// `|f(0) − λ| / |λ|`.
    pub zero_to_parameter: f64,
    /// `|f(λ) − 1|`.
    pub parameter_to_one: f64,
    /// Chordal distance from `f(1)` to `∞`.
    pub one_to_infinity: f64,
    /// Chordal distance from `f(∞)` to `0`.
    pub infinity_to_zero: f64,
    /// `|λ · f′(λ)|`, scale-free since `f′` grows like `1/λ` near the cycle.
    pub critical_at_parameter: f64,
}

impl CycleResiduals {
    pub fn max_relation(&self) -> f64 {
        self.zero_to_parameter.max(self.parameter_to_one).max(self.one_to_infinity).max(self.infinity_to_zero)
    }
}

fn quadratic_factor(lam: Complex) -> Complex {
    1.0 - lam - lam * lam
}

fn cubic_factor(lam: Complex) -> Complex {
    1.0 - 4.0 * lam + 6.0 * lam * lam - lam * lam * lam
}

/// Closed form of the free critical point.
pub fn free_critical_point(lam: Complex) -> Complex {
    let l2 = lam * lam;
    let quartic = 1.0 - 6.0 * lam + 11.0 * l2 - 10.0 * l2 * lam + 5.0 * l2 * l2;
    -lam * quartic / (quadratic_factor(lam) * cubic_factor(lam))
}

/// Rejects parameters where the closed form loses degree or acquires a common
/// factor, naming the factor that vanishes.
fn check_parameter(lam: Complex) -> Result<()> {
    let l2 = lam * lam;
    let factors: [(&str, Complex); 5] = [
        ("1 - λ", 1.0 - lam),
        ("1 - λ - λ²", quadratic_factor(lam)),
        ("1 - 4λ + 6λ² - λ³", cubic_factor(lam)),
        // numerator and denominator roots collide
        ("λ² - 3λ + 1", l2 - 3.0 * lam + 1.0),
        // numerator root lands on the double pole at 1
        ("1 - 4λ + 6λ² - 3λ³", 1.0 - 4.0 * lam + 6.0 * l2 - 3.0 * l2 * lam),
    ];
    for (name, value) in factors {
        if value.norm() <= FACTOR_TOL {
            return Err(Error::argument(alloc::format!("degenerate parameter: {name} vanishes")));
        }
    }
    Ok(())
}

/// `f_λ(z) = (1−λ)[(1−4λ+6λ²−λ³)z − 2λ³] / ((z−1)²[(1−λ−λ²)z − 2λ²(1−λ)])`.
///
/// At `λ = 0` the closed form has the common factor `z`; the result is then
/// `f₀(z) = 1/(z−1)²` of degree 2.
pub fn build_f_lambda(lam: Complex) -> Result<PersianCarpetMap> {
    if !(lam.re.is_finite() && lam.im.is_finite()) {
        return Err(Error::argument("parameter must be finite"));
    }
    let one = c(1.0, 0.0);
    let double_pole = Polynomial::new(vec![one, c(-2.0, 0.0), one]);
    if lam == c(0.0, 0.0) {
        let map = RationalMap::from_parts_unchecked(Polynomial::one(), double_pole);
        return Ok(PersianCarpetMap {
            parameter: lam,
            map,
            cycle: [SpherePoint::ZERO, SpherePoint::real(1.0), SpherePoint::INFINITY, SpherePoint::ZERO],
            free_critical: c(0.0, 0.0),
            verified: true,
        });
    }
    check_parameter(lam)?;
    let l2 = lam * lam;
    let num = Polynomial::new(vec![-2.0 * l2 * lam * (1.0 - lam), (1.0 - lam) * cubic_factor(lam)]);
    let linear = Polynomial::new(vec![-2.0 * l2 * (1.0 - lam), quadratic_factor(lam)]);
    let map = RationalMap::from_parts_unchecked(num, &double_pole * &linear);
    Ok(PersianCarpetMap {
        parameter: lam,
        map,
        cycle: [SpherePoint::new(lam), SpherePoint::real(1.0), SpherePoint::INFINITY, SpherePoint::ZERO],
        free_critical: free_critical_point(lam),
        verified: lam.norm() < VERIFIED_RADIUS,
    })
}

impl PersianCarpetMap {
    pub fn residuals(&self) -> Result<CycleResiduals> {
        let lam = self.parameter;
        let f = &self.map;
        let at = |z: SpherePoint| f.eval(z);
        let finite_gap = |p: SpherePoint, target: Complex| match p.to_complex() {
            Some(z) => (z - target).norm(),
            None => f64::INFINITY,
        };
        let scale = if lam == c(0.0, 0.0) { 1.0 } else { lam.norm() };
        let df = f.wronskian().eval(lam) / (f.denominator().eval(lam) * f.denominator().eval(lam));
        Ok(CycleResiduals {
            zero_to_parameter: finite_gap(at(SpherePoint::ZERO)?, lam) / scale,
            parameter_to_one: finite_gap(at(SpherePoint::new(lam))?, c(1.0, 0.0)),
            one_to_infinity: at(SpherePoint::real(1.0))?.chordal_distance(&SpherePoint::INFINITY),
            infinity_to_zero: at(SpherePoint::INFINITY)?.chordal_distance(&SpherePoint::ZERO),
            critical_at_parameter: (df * lam).norm(),
        })
    }
}

/// Solves the 2×2 system for `(a₁, b′₁)`:
///
/// ```text
/// λ a₁ − λ(1−λ)² b′₁     = 1 − 3λ + λ²
///   a₁ − (1−λ)(1−3λ) b′₁ = −2 + 2λ
/// ```
///
/// The system's condition number grows like `1/|λ|`, so the elimination runs
/// in double-double arithmetic.
pub fn derive_coefficients(lam: Complex) -> Result<(Complex, Complex)> {
    if lam == c(0.0, 0.0) || lam == c(1.0, 0.0) {
        return Err(Error::argument("coefficient system needs λ ∉ {0, 1}"));
    }
    if quadratic_factor(lam).norm() <= FACTOR_TOL {
        return Err(Error::argument("degenerate parameter: 1 - λ - λ² vanishes"));
    }
    let dd = DdComplex::from_complex;
    let one = DdComplex::from_real(1.0);
    let l = dd(lam);
    let m = one - l;
    let mut rows = [
        [l, -(l * m * m), one - DdComplex::from_real(3.0) * l + l * l],
        [one, -(m * (one - DdComplex::from_real(3.0) * l)), DdComplex::from_real(2.0) * l - DdComplex::from_real(2.0)],
    ];
    if rows[1][0].norm() > rows[0][0].norm() {
        rows.swap(0, 1);
    }
    let [p, q] = rows;
    let factor = q[0] / p[0];
    let pivot = q[1] - factor * p[1];
    let rhs = q[2] - factor * p[2];
    let scale = p[1].norm().max(q[1].norm());
    if pivot.norm() <= 1e-28 * scale {
        return Err(Error::NumericalFailure { what: "coefficient system is singular", best: vec![] });
    }
    let b = rhs / pivot;
    let a = (p[2] - p[1] * b) / p[0];
    Ok((a.to_complex(), b.to_complex()))
}

/// Closed forms `a₁ = (1−4λ+6λ²−λ³)/(−2λ²)` and `b′₁ = (1−λ−λ²)/(−2λ²(1−λ))`.
pub fn closed_form_coefficients(lam: Complex) -> (Complex, Complex) {
    let l2 = lam * lam;
    (cubic_factor(lam) / (-2.0 * l2), quadratic_factor(lam) / (-2.0 * l2 * (1.0 - lam)))
}

/// `z ↦ (a₁z + λ) / ((z−1)²(b′₁z + 1))`.
pub fn assemble_from_coefficients(lam: Complex, a1: Complex, b1p: Complex) -> RationalMap {
    let one = c(1.0, 0.0);
    let num = Polynomial::new(vec![lam, a1]);
    let den = &Polynomial::new(vec![one, c(-2.0, 0.0), one]) * &Polynomial::new(vec![one, b1p]);
    RationalMap::from_parts_unchecked(num, den)
}

/// `g(z) = z^{d∞} + c + λ/z^{d₀}`.
#[derive(Clone, Debug, PartialEq)]
pub struct McMullenMap {
    pub degree_at_infinity: u32,
    pub degree_at_zero: u32,
    pub c: Complex,
    pub lambda: Complex,
    pub map: RationalMap,
    /// `1/d∞ + 1/d₀ < 1`.
    pub h0: bool,
}

/// Degree `d∞ + d₀` for `λ ≠ 0`; at `λ = 0` the map is the polynomial `z^{d∞} + c`.
pub fn build_mcmullen(d_inf: u32, d_zero: u32, c_param: Complex, lam: Complex) -> Result<McMullenMap> {
    if d_inf == 0 || d_zero == 0 {
        return Err(Error::argument("McMullen degrees must be >= 1"));
    }
    let (di, dz) = (d_inf as usize, d_zero as usize);
    let map = if lam == c(0.0, 0.0) {
        let mut p = Polynomial::monomial(di, c(1.0, 0.0));
        p = &p + &Polynomial::constant(c_param);
        RationalMap::polynomial(p)
    } else {
        let mut coeffs = vec![c(0.0, 0.0); di + dz + 1];
        coeffs[0] = lam;
        coeffs[dz] += c_param;
        coeffs[di + dz] = c(1.0, 0.0);
        RationalMap::from_parts_unchecked(Polynomial::new(coeffs), Polynomial::monomial(dz, c(1.0, 0.0)))
    };
    let h0 = 1.0 / f64::from(d_inf) + 1.0 / f64::from(d_zero) < 1.0;
    Ok(McMullenMap { degree_at_infinity: d_inf, degree_at_zero: d_zero, c: c_param, lambda: lam, map, h0 })
}
