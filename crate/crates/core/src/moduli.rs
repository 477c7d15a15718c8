//! Modulus bookkeeping for the surgery: positive solutions of the annulus
//! inequality system, equipotential levels, and the two appendix bounds.
//!
//! Moduli are dimensionless. The inverse Grötzsch constant `C` is an input.

use core::f64::consts::{PI, TAU};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::numerics::c;
use crate::trees::{builtin_tree, is_unobstructed, TreeKind};
use crate::{Complex, Error, Result};

pub const DEFAULT_GROTZSCH_CONSTANT: f64 = 1.0;
pub const DEFAULT_LEVEL_MARGIN: f64 = 1.1;
const CIRCLE_SAMPLES: usize = 720;

/// Moduli `x₀..x₃` with
/// `x₁/d₀ < x₀`, `x₂/d₁ < x₁`, `(x₀+x₃)/d₂ < x₂`, `(x₀+x₁+C)/d₃ < x₃`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ModuliSolution {
    pub weights: [u32; 4],
    pub x: [f64; 4],
    pub grotzsch_constant: f64,
    /// Scale applied to the Perron vector.
    pub mu: f64,
    /// Left side minus right side of each inequality; all positive.
    pub margins: [f64; 4],
}

/// Slack of each inequality for an arbitrary candidate `x`.
pub fn inequality_margins(weights: [u32; 4], x: [f64; 4], grotzsch_constant: f64) -> [f64; 4] {
    let [d0, d1, d2, d3] = weights.map(f64::from);
    [x[0] - x[1] / d0, x[1] - x[2] / d1, x[2] - (x[0] + x[3]) / d2, x[3] - (x[0] + x[1] + grotzsch_constant) / d3]
}

/// `X = μV` with `V` a Perron vector satisfying `MV < V` and
/// `μ = (C/d₃ + 1) / (v₃ − v₀/d₃ − v₁/d₃)`.
///
/// The homogeneous inequalities are `MV < V`; `μ` buys the affine one.
pub fn solve_moduli(weights: [u32; 4], grotzsch_constant: f64) -> Result<ModuliSolution> {
    if !(grotzsch_constant > 0.0 && grotzsch_constant.is_finite()) {
        return Err(Error::argument("Grötzsch constant must be positive"));
    }
    let tree = builtin_tree(TreeKind::HP, &weights)?;
    let report = is_unobstructed(&tree)?;
    if !report.unobstructed {
        return Err(Error::domain(alloc::format!(
            "weights {weights:?} are obstructed (leading eigenvalue {:.6} >= 1); no positive solution",
            report.leading_eigenvalue
        )));
    }
    let v = &report.perron_vector;
    let d3 = f64::from(weights[3]);
    let mu = (grotzsch_constant / d3 + 1.0) / (v[3] - v[0] / d3 - v[1] / d3);
    let x = [mu * v[0], mu * v[1], mu * v[2], mu * v[3]];
    let margins = inequality_margins(weights, x, grotzsch_constant);
    if margins.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::NumericalFailure { what: "moduli inequalities", best: alloc::vec::Vec::new() });
    }
    Ok(ModuliSolution { weights, x, grotzsch_constant, mu, margins })
}

/// Levels of the equipotentials bounding the annuli, in `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct EquipotentialLevels {
    pub beta0: f64,
    pub beta3_plus: f64,
    pub beta3_minus: f64,
}

/// `(1/2π) log(L/L′)`.
pub fn annulus_modulus(outer_level: f64, inner_level: f64) -> f64 {
    libm::log(outer_level / inner_level) / TAU
}

/// `L(β₀) = e^{−2πx₀}`, `L(β₃⁺) = L(β₀)e^{−2π·margin}`, `L(β₃⁻) = L(β₃⁺)e^{−2πx₃}`.
pub fn levels_from_moduli(sol: &ModuliSolution, margin: f64) -> Result<EquipotentialLevels> {
    if !(margin > 1.0 && margin.is_finite()) {
        return Err(Error::argument("level margin must exceed 1"));
    }
    let beta0 = libm::exp(-TAU * sol.x[0]);
    let beta3_plus = beta0 * libm::exp(-TAU * margin);
    let beta3_minus = beta3_plus * libm::exp(-TAU * sol.x[3]);
    Ok(EquipotentialLevels { beta0, beta3_plus, beta3_minus })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AnnulusBound {
    /// `|λ|` solving `2|λ|^{n/(n+n′)} = 4e^{−π}`.
    pub lambda_modulus: f64,
    /// `½(1/n + 1/n′)`.
    pub bound: f64,
}

pub fn annulus_disk_bound(n: u32, n_prime: u32) -> Result<AnnulusBound> {
    if n == 0 || n_prime == 0 {
        return Err(Error::argument("degrees must be >= 1"));
    }
    let (a, b) = (f64::from(n), f64::from(n_prime));
    let lambda_modulus = libm::pow(2.0 * libm::exp(-PI), (a + b) / a);
    Ok(AnnulusBound { lambda_modulus, bound: 0.5 * (1.0 / a + 1.0 / b) })
}

/// Sampled evidence for `g(z) = zⁿ + λ/z^{n′}` at the parameter of [`annulus_disk_bound`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AnnulusReport {
    pub n: u32,
    pub n_prime: u32,
    pub lambda_modulus: f64,
    /// Max of `|g|` on `|z| = |λ|^{1/(n+n′)}` against `2|λ|^{n/(n+n′)}`.
    pub middle_circle_max: f64,
    pub middle_circle_bound: f64,
    /// Max of `|g|` over the free critical points.
    pub critical_value_max: f64,
    /// `(n′/n)^{n/(n+n′)} + (n/n′)^{n′/(n+n′)}`, at most 2.
    pub critical_constant: f64,
    /// Min of `|g|` on the inner and outer bounding circles.
    pub inner_circle_min: f64,
    pub outer_circle_min: f64,
    pub middle_circle_ok: bool,
    pub critical_values_ok: bool,
    pub bounding_circles_ok: bool,
}

impl AnnulusReport {
    pub fn passes(&self) -> bool {
        self.middle_circle_ok && self.critical_values_ok && self.bounding_circles_ok
    }
}

pub fn mcmullen_annulus_check(n: u32, n_prime: u32) -> Result<AnnulusReport> {
    let AnnulusBound { lambda_modulus, .. } = annulus_disk_bound(n, n_prime)?;
    let (a, b) = (f64::from(n), f64::from(n_prime));
    let total = a + b;
    let lam = c(lambda_modulus, 0.0);
    let g = |z: Complex| z.powu(n) + lam / z.powu(n_prime);
    let radius = libm::pow(lambda_modulus, 1.0 / total);
    let circle =
        |r: f64| (0..CIRCLE_SAMPLES).map(move |k| Complex::from_polar(r, TAU * k as f64 / CIRCLE_SAMPLES as f64));
    let extent = |r: f64, pick: fn(f64, f64) -> f64, start: f64| circle(r).fold(start, |m, z| pick(m, g(z).norm()));

    let middle_circle_max = extent(radius, f64::max, 0.0);
    let middle_circle_bound = 2.0 * libm::pow(lambda_modulus, a / total);

    let crit_radius = libm::pow(b / a, 1.0 / total) * radius;
    let critical_value_max = (0..n + n_prime)
        .map(|k| g(Complex::from_polar(crit_radius, TAU * f64::from(k) / total)).norm())
        .fold(0.0, f64::max);
    let critical_constant = libm::pow(b / a, a / total) + libm::pow(a / b, b / total);

    let big_r = libm::exp(PI);
    let inner_circle_min = extent(libm::pow(big_r, -1.0 / b) * radius, f64::min, f64::INFINITY);
    let outer_circle_min = extent(libm::pow(big_r, 1.0 / a) * radius, f64::min, f64::INFINITY);

    Ok(AnnulusReport {
        n,
        n_prime,
        lambda_modulus,
        middle_circle_max,
        middle_circle_bound,
        critical_value_max,
        critical_constant,
        inner_circle_min,
        outer_circle_min,
        middle_circle_ok: middle_circle_max <= middle_circle_bound * (1.0 + 1e-12) && middle_circle_bound < 1.0,
        critical_values_ok: critical_value_max < 1.0 && critical_constant <= 2.0 + 1e-12,
        bounding_circles_ok: inner_circle_min > 1.0 && outer_circle_min > 1.0,
    })
}

/// `(1/(2√ε)) log(1/(1 − Cε))`, asymptotic to `(C/2)√ε`.
pub fn separating_circle_bound(eps: f64, grotzsch_constant: f64) -> Result<f64> {
    if !(eps > 0.0 && grotzsch_constant > 0.0) {
        return Err(Error::argument("ε and C must be positive"));
    }
    if eps * grotzsch_constant >= 1.0 {
        return Err(Error::domain("ε must stay below 1/C"));
    }
    Ok(-libm::log1p(-grotzsch_constant * eps) / (2.0 * libm::sqrt(eps)))
}
