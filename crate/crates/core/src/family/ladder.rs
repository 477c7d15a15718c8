//! Numeric check of the orders of magnitude along the cycle of `f_λ`.
//!
//! With `r = |λ|` the chain is
//!
//! 1. `|f(λ′) − 1| ≤ K r`;
//! 2. `f(D(1, r))` avoids `D(0, r⁻²/K)`;
//! 3. `f({|z| ≥ r⁻²}) ⊂ D(0, K r⁴)`;
//! 4. `f(D(0, r⁴)) ⊂ D(λ, K r²)`;
//! 5. `f(D(λ, r²)) ⊂ D(1, K r³)`.
//!
//! Source regions carry unit constants and targets carry `K`, so the local
//! degree 2 at `1` and `λ` cannot square the constant away.
//!
//! Each region check first confirms that the relevant function is holomorphic
//! on the region, then samples the boundary and the interior critical points;
//! by the maximum principle that bounds the image.

use alloc::vec::Vec;
use core::f64::consts::TAU;

#[cfg(feature = "serde")]
use serde::Serialize;

use super::build_f_lambda;
use crate::numerics::{c, polynomial_roots};
use crate::{Complex, Error, RationalMap, Result, SpherePoint};

pub const DEFAULT_LADDER_CONSTANT: f64 = 20.0;
const BOUNDARY_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct LadderClaim {
    pub holds: bool,
    /// Measured image extent: a maximum distance, or for claim 2 a minimum modulus.
    pub achieved: f64,
    /// The bound it is compared against.
    pub bound: f64,
    /// How far inside the bound the image stays; `> 1` exactly when the claim holds.
    pub margin: f64,
    /// Why the sampling argument does not apply, when it does not.
    pub obstruction: Option<&'static str>,
}

impl LadderClaim {
    fn upper(achieved: f64, bound: f64) -> Self {
        let margin = bound / achieved;
        LadderClaim { holds: achieved <= bound, achieved, bound, margin, obstruction: None }
    }

    fn lower(achieved: f64, bound: f64) -> Self {
        let margin = achieved / bound;
        LadderClaim { holds: achieved >= bound, achieved, bound, margin, obstruction: None }
    }

    fn obstructed(bound: f64, why: &'static str) -> Self {
        LadderClaim { holds: false, achieved: f64::NAN, bound, margin: 0.0, obstruction: Some(why) }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct LadderReport {
    pub parameter: Complex,
    pub constant: f64,
    pub claims: [LadderClaim; 5],
}

impl LadderReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|k| k.holds)
    }
}

struct Sampler<'a> {
    f: &'a RationalMap,
    poles: Vec<Complex>,
    zeros: Vec<Complex>,
    critical: Vec<Complex>,
}

impl Sampler<'_> {
    fn value(&self, z: Complex) -> Option<Complex> {
        self.f.eval_at(z).ok().and_then(|p| p.to_complex())
    }

    /// Boundary samples of `|z − center| = radius` plus interior critical points.
    fn disk_points(&self, center: Complex, radius: f64) -> Vec<Complex> {
        let mut pts: Vec<Complex> = (0..BOUNDARY_SAMPLES)
            .map(|k| center + Complex::from_polar(radius, TAU * k as f64 / BOUNDARY_SAMPLES as f64))
            .collect();
        pts.extend(self.critical.iter().copied().filter(|z| (z - center).norm() < radius));
        pts
    }

    fn max_distance(&self, pts: &[Complex], target: Complex) -> Option<f64> {
        pts.iter().try_fold(0.0f64, |m, &z| self.value(z).map(|w| m.max((w - target).norm())))
    }

    fn disk_image(&self, center: Complex, radius: f64, target: Complex, bound: f64) -> LadderClaim {
        if self.poles.iter().any(|p| (p - center).norm() <= radius) {
            return LadderClaim::obstructed(bound, "pole inside the source disk");
        }
        match self.max_distance(&self.disk_points(center, radius), target) {
            Some(m) => LadderClaim::upper(m, bound),
            None => LadderClaim::obstructed(bound, "degenerate evaluation on the boundary"),
        }
    }

    /// `1/f` is holomorphic on the disk when `f` has no zero there.
    fn disk_min_modulus(&self, center: Complex, radius: f64, bound: f64) -> LadderClaim {
        if self.zeros.iter().any(|z| (z - center).norm() <= radius) {
            return LadderClaim::obstructed(bound, "zero inside the source disk");
        }
        let mut least = f64::INFINITY;
        for z in self.disk_points(center, radius) {
            match self.f.eval_at(z) {
                Ok(w) => least = least.min(w.to_complex().map_or(f64::INFINITY, |w| w.norm())),
                Err(_) => return LadderClaim::obstructed(bound, "degenerate evaluation on the boundary"),
            }
        }
        LadderClaim::lower(least, bound)
    }

    /// `w ↦ f(1/w)` is holomorphic on `|w| ≤ 1/radius` when no pole lies in
    /// `|z| ≥ radius`; `f(∞)` is included as the value at the centre.
    fn exterior_image(&self, radius: f64, target: Complex, bound: f64) -> LadderClaim {
        if self.poles.iter().any(|p| p.norm() >= radius) {
            return LadderClaim::obstructed(bound, "pole outside the source circle");
        }
        let mut pts = self.disk_points(c(0.0, 0.0), radius);
        pts.retain(|z| z.norm() >= radius * (1.0 - 1e-12));
        pts.extend(self.critical.iter().copied().filter(|z| z.norm() > radius));
        let at_infinity = match self.f.eval(SpherePoint::INFINITY).ok().and_then(|p| p.to_complex()) {
            Some(w) => (w - target).norm(),
            None => return LadderClaim::obstructed(bound, "pole at infinity"),
        };
        match self.max_distance(&pts, target) {
            Some(m) => LadderClaim::upper(m.max(at_infinity), bound),
            None => LadderClaim::obstructed(bound, "degenerate evaluation on the boundary"),
        }
    }
}

/// Runs the five magnitude claims with constant `k`.
///
/// Parameters outside the small regime still produce a report; the claims
/// then simply fail.
pub fn magnitude_ladder_check(lam: Complex, k: f64) -> Result<LadderReport> {
    if lam == c(0.0, 0.0) {
        return Err(Error::argument("magnitude ladder needs λ ≠ 0"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::argument("ladder constant must be positive"));
    }
    let fl = build_f_lambda(lam)?;
    let f = &fl.map;
    let poles = polynomial_roots(f.denominator())?;
    let zeros = polynomial_roots(f.numerator())?;
    let critical = f.critical_points()?.into_iter().filter_map(|p| p.point.to_complex()).collect();
    let s = Sampler { f, poles, zeros, critical };
    let r = lam.norm();
    let one = c(1.0, 0.0);

    let first = match s.value(fl.free_critical) {
        Some(w) => LadderClaim::upper((w - one).norm(), k * r),
        None => LadderClaim::obstructed(k * r, "free critical value is not finite"),
    };
    let claims = [
        first,
        s.disk_min_modulus(one, r, 1.0 / (k * r * r)),
        s.exterior_image(1.0 / (r * r), c(0.0, 0.0), k * r.powi(4)),
        s.disk_image(c(0.0, 0.0), r.powi(4), lam, k * r * r),
        s.disk_image(lam, r * r, one, k * r.powi(3)),
    ];
    Ok(LadderReport { parameter: lam, constant: k, claims })
}
