use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::numerics::{c, simultaneous_roots};
use crate::{Complex, Error, Result};

pub const MAX_PCF_PERIOD: u32 = 8;
/// Roots of the orbit polynomials closer than this are the same parameter.
const SIEVE_TOL: f64 = 1e-8;
/// `|P_c^n(0)|` below this counts as a return to `0`.
const RETURN_TOL: f64 = 1e-10;

/// A parameter `c` for which `0` is periodic of exact period `n` under `z² + c`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct PcfParameter {
    pub period: u32,
    /// The root with the largest imaginary part.
    pub c: Complex,
    /// Every exact-period root, sorted by decreasing imaginary part.
    pub all_roots: Vec<Complex>,
}

/// `(G_n(c), G_n′(c))` with `G_1 = c` and `G_{k+1} = G_k² + c`.
fn critical_orbit(n: u32, c0: Complex) -> (Complex, Complex) {
    let (mut g, mut dg) = (c0, c(1.0, 0.0));
    for _ in 1..n {
        dg = 2.0 * g * dg + 1.0;
        g = g * g + c0;
    }
    (g, dg)
}

fn orbit_polynomial_roots(n: u32) -> Result<Vec<Complex>> {
    let degree = 1usize << (n - 1);
    // every root lies in the Mandelbrot set, inside |c| <= 2
    let (mut roots, converged) = simultaneous_roots(degree, 2.0, |z| critical_orbit(n, z));
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (g, dg) = critical_orbit(n, *r);
            if dg == c(0.0, 0.0) {
                break;
            }
            *r -= g / dg;
        }
    }
    if !converged || roots.iter().any(|r| critical_orbit(n, *r).0.norm() > RETURN_TOL) {
        return Err(Error::NumericalFailure { what: "critical orbit polynomial roots", best: roots });
    }
    Ok(roots)
}

/// Solves `G_n(c) = 0` and sieves out the roots of `G_m` for proper divisors
/// `m | n`, leaving the parameters where `0` has exact period `n`.
pub fn solve_pcf_parameter(period: u32) -> Result<PcfParameter> {
    if period == 0 || period > MAX_PCF_PERIOD {
        return Err(Error::argument(alloc::format!("period must lie in 1..={MAX_PCF_PERIOD}")));
    }
    let mut lower: Vec<Complex> = Vec::new();
    for m in (1..period).filter(|m| period % m == 0) {
        lower.extend(orbit_polynomial_roots(m)?);
    }
    let mut exact: Vec<Complex> = orbit_polynomial_roots(period)?
        .into_iter()
        .filter(|r| lower.iter().all(|s| (r - s).norm() >= SIEVE_TOL))
        .collect();
    exact.sort_by(|a, b| b.im.total_cmp(&a.im).then(a.re.total_cmp(&b.re)));
    let best = *exact.first().ok_or(Error::NumericalFailure { what: "no exact-period root", best: Vec::new() })?;
    Ok(PcfParameter { period, c: best, all_roots: exact })
}

/// Whether `0` returns to itself after `n` steps of `z² + c` and after no
/// proper divisor of `n`.
pub fn has_exact_period(c0: Complex, n: u32) -> bool {
    let mut z = c(0.0, 0.0);
    for k in 1..=n {
        z = z * z + c0;
        let back = z.norm() <= RETURN_TOL;
        if k < n && n % k == 0 && back {
            return false;
        }
        if k == n {
            return back;
        }
    }
    false
}
