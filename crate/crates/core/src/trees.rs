//! Weighted dynamical trees, their transition matrices and the leading
//! (Perron–Frobenius) eigenvalue that decides whether a tree is unobstructed.
//!
//! Trees are purely combinatorial: an edge is an index, its image is the set
//! of edges it covers, and its weight is the local degree attached to it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const POWER_MAX_ITER: usize = 100_000;
const POWER_TOL: f64 = 1e-12;
const POLISH_STEPS: usize = 4;
/// Size of the all-ones perturbation used to get a strictly positive Perron vector.
const PERRON_PERTURBATION: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WeightedDynamicalTree {
    images: Vec<Vec<usize>>,
    weights: Vec<u32>,
}

impl WeightedDynamicalTree {
    /// `images[i]` lists the edges covered by the image of edge `i`.
    pub fn new(images: Vec<Vec<usize>>, weights: Vec<u32>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::argument("a tree needs at least one edge"));
        }
        if weights.len() != n {
            return Err(Error::argument(format!("{} weights for {} edges", weights.len(), n)));
        }
        if weights.contains(&0) {
            return Err(Error::argument("weights must be >= 1"));
        }
        let mut images = images;
        for (i, img) in images.iter_mut().enumerate() {
            img.sort_unstable();
            img.dedup();
            if img.is_empty() {
                return Err(Error::argument(format!("edge {i} has no image")));
            }
            if let Some(&bad) = img.iter().find(|&&j| j >= n) {
                return Err(Error::argument(format!("edge {i} maps onto unknown edge {bad}")));
            }
        }
        Ok(WeightedDynamicalTree { images, weights })
    }

    pub fn edge_count(&self) -> usize {
        self.images.len()
    }

    /// A tree with `n` edges has `n + 1` vertices.
    pub fn vertex_count(&self) -> usize {
        self.images.len() + 1
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `m_{ij} = 1/w(e_i)` when `e_j` is covered by the image of `e_i`.
    pub fn transition_matrix(&self) -> TransitionMatrix {
        let n = self.edge_count();
        let mut entries = vec![0.0; n * n];
        for (i, img) in self.images.iter().enumerate() {
            let w = 1.0 / self.weights[i] as f64;
            for &j in img {
                entries[i * n + j] = w;
            }
        }
        TransitionMatrix { n, entries }
    }
}

/// The built-in trees: Hubbard trees of `z² + c` with `0` of period 4 (`HP`)
/// and period 3 (`HR`), and McMullen's two-edge tree (`HQ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum TreeKind {
    HP,
    HQ,
    HR,
}

impl TreeKind {
    pub fn edge_count(self) -> usize {
        match self {
            TreeKind::HP => 4,
            TreeKind::HQ => 2,
            TreeKind::HR => 3,
        }
    }
}

pub fn builtin_tree(kind: TreeKind, weights: &[u32]) -> Result<WeightedDynamicalTree> {
    if weights.len() != kind.edge_count() {
        return Err(Error::argument(format!("{kind:?} takes {} weights, got {}", kind.edge_count(), weights.len())));
    }
    let images = match kind {
        // e0 -> e1, e1 -> e2, e2 -> e0 ∪ e3, e3 -> e0 ∪ e1
        TreeKind::HP => vec![vec![1], vec![2], vec![0, 3], vec![0, 1]],
        TreeKind::HQ => vec![vec![0, 1], vec![0, 1]],
        TreeKind::HR => vec![vec![1], vec![2], vec![0]],
    };
    WeightedDynamicalTree::new(images, weights.to_vec())
}

/// Square nonnegative matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TransitionMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl TransitionMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::argument("transition matrix must be square and nonempty"));
        }
        if rows.iter().flatten().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::argument("transition matrix entries must be finite and >= 0"));
        }
        Ok(TransitionMatrix { n, entries: rows.concat() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.entries.chunks(self.n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Power iteration on `M + I + δJ` (`J` the all-ones matrix).
///
/// The unit shift makes cyclic matrices primitive without moving the Perron
/// vector; `δ > 0` forces strictly positive iterates for reducible `M`.
fn shifted_power_iteration(m: &TransitionMatrix, delta: f64) -> Result<(f64, Vec<f64>)> {
    let n = m.n;
    let mut v = vec![1.0 / n as f64; n];
    let mut estimate = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let total: f64 = v.iter().sum();
        let mut next = m.apply(&v);
        for (x, &vi) in next.iter_mut().zip(&v) {
            *x += vi + delta * total;
        }
        let rayleigh = next.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        let norm: f64 = next.iter().sum();
        for x in next.iter_mut() {
            *x /= norm;
        }
        v = next;
        let converged = (rayleigh - estimate).abs() < POWER_TOL;
        estimate = rayleigh;
        if converged {
            return Ok(polish(m, delta, estimate - 1.0, v));
        }
    }
    Err(Error::NumericalFailure { what: "power iteration", best: Vec::new() })
}

/// Inverse-iteration steps on `M + δJ` with shift `ρ`.
///
/// Power iteration stalls when the subdominant ratio is close to one, so its
/// step size says little about the error. A refined pair is only kept if it
/// stays positive and shrinks the residual.
fn polish(m: &TransitionMatrix, delta: f64, mut rho: f64, mut v: Vec<f64>) -> (f64, Vec<f64>) {
    let n = m.n;
    let apply = |x: &[f64]| {
        let total: f64 = x.iter().sum();
        m.apply(x).into_iter().map(|y| y + delta * total).collect::<Vec<_>>()
    };
    let residual = |rho: f64, x: &[f64]| {
        apply(x).iter().zip(x).map(|(a, b)| (a - rho * b).abs()).fold(0.0, f64::max) / x.iter().sum::<f64>()
    };
    let mut best = residual(rho, &v);
    for _ in 0..POLISH_STEPS {
        let mut a: Vec<f64> =
            (0..n * n).map(|k| m.entries[k] + delta - if k / n == k % n { rho } else { 0.0 }).collect();
        let Some(x) = solve_in_place(&mut a, v.clone(), n) else { break };
        let total: f64 = x.iter().sum();
        if !(total.is_finite() && total != 0.0) {
            break;
        }
        let x: Vec<f64> = x.iter().map(|y| y / total).collect();
        if x.iter().any(|&y| !(y > 0.0)) {
            break;
        }
        let next = apply(&x).iter().sum::<f64>() / x.iter().sum::<f64>();
        let r = residual(next, &x);
        if !(r < best) {
            break;
        }
        (rho, v, best) = (next, x, r);
    }
    (rho, v)
}

/// Gaussian elimination with partial pivoting; `None` on an exactly singular pivot.
fn solve_in_place(a: &mut [f64], mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[piv * n + col] == 0.0 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let s: f64 = (col + 1..n).map(|k| a[col * n + k] * b[k]).sum();
        b[col] = (b[col] - s) / a[col * n + col];
    }
    Some(b)
}

/// Spectral radius of a nonnegative matrix.
pub fn leading_eigenvalue(m: &TransitionMatrix) -> Result<f64> {
    shifted_power_iteration(m, 0.0).map(|(rho, _)| rho.max(0.0))
}

/// Largest real root of `X⁴ − (1/(d₀d₁d₂) + 1/(d₁d₂d₃))X − 1/(d₀d₁d₂d₃)`,
/// the characteristic polynomial of the `HP` transition matrix.
pub fn hp_characteristic_root(d: [u32; 4]) -> f64 {
    let [d0, d1, d2, d3] = d.map(f64::from);
    let a = 1.0 / (d0 * d1 * d2) + 1.0 / (d1 * d2 * d3);
    let b = 1.0 / (d0 * d1 * d2 * d3);
    let p = |x: f64| x * x * x * x - a * x - b;
    // p(0) < 0 and p(2) > 0; the positive root is unique by Descartes.
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct H1Check {
    pub satisfied: bool,
    /// `(d₀+d₁+d₂−1)/2` when it is an integer.
    pub dhat: Option<u32>,
}

/// Integrality condition on the three weights around the branching point.
pub fn check_h1(d0: u32, d1: u32, d2: u32) -> H1Check {
    let sum = d0 + d1 + d2;
    if sum == 0 || (sum - 1) % 2 != 0 {
        return H1Check { satisfied: false, dhat: None };
    }
    let dhat = (sum - 1) / 2;
    let satisfied = dhat >= 2 && d0.max(d1).max(d2) <= dhat;
    H1Check { satisfied, dhat: Some(dhat) }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SpectralReport {
    pub leading_eigenvalue: f64,
    pub perron_vector: Vec<f64>,
    pub unobstructed: bool,
}

/// Leading eigenvalue and a positive Perron vector.
///
/// When the tree is unobstructed the vector is checked against the
/// unperturbed matrix: `(M V)_i < V_i` for every `i`.
pub fn is_unobstructed(tree: &WeightedDynamicalTree) -> Result<SpectralReport> {
    let m = tree.transition_matrix();
    let rho = leading_eigenvalue(&m)?;
    let (_, v) = shifted_power_iteration(&m, PERRON_PERTURBATION)?;
    let unobstructed = rho < 1.0;
    if unobstructed {
        let mv = m.apply(&v);
        if mv.iter().zip(&v).any(|(a, b)| !(a < b)) {
            return Err(Error::NumericalFailure { what: "Perron vector check MV < V", best: Vec::new() });
        }
    }
    Ok(SpectralReport { leading_eigenvalue: rho, perron_vector: v, unobstructed })
}
