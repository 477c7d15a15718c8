use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{c, Complex, Polynomial};
use crate::{Error, Result};

const MAX_ITER: usize = 500;
const STEP_TOL: f64 = 1e-14;
const RESIDUAL_TOL: f64 = 1e-12;

/// Aberth–Ehrlich simultaneous iteration for all `degree` roots of a function
/// given through `eval(z) = (p(z), p'(z))`.
///
/// Starting points sit on the circle of the given radius. Returns the iterates
/// and whether the step criterion `max |Δz| < 1e-14·(1+|z|)` was met within
/// the iteration cap.
pub fn simultaneous_roots<F>(degree: usize, radius: f64, eval: F) -> (Vec<Complex>, bool)
where
    F: Fn(Complex) -> (Complex, Complex),
{
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex> =
        (0..degree).map(|k| Complex::from_polar(radius, TAU * k as f64 / degree as f64 + 0.4)).collect();
    for _ in 0..MAX_ITER {
        let mut worst = 0.0f64;
        for i in 0..degree {
            let (p, dp) = eval(z[i]);
            if p == c(0.0, 0.0) {
                continue;
            }
            let mut s = c(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i] - zj;
                    if diff != c(0.0, 0.0) {
                        s += diff.inv();
                    }
                }
            }
            let denom = dp - p * s;
            let step = if denom == c(0.0, 0.0) { c(1e-7 * (1.0 + z[i].norm()), 0.0) } else { p / denom };
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[i] -= step;
            worst = worst.max(step.norm() / (1.0 + z[i].norm()));
        }
        if worst < STEP_TOL {
            return (z, true);
        }
    }
    (z, false)
}

/// All roots of `p` with multiplicity.
///
/// Exact zero roots are split off first; the rest come from
/// [`simultaneous_roots`] followed by guarded Newton polishing. Every returned
/// root satisfies `|p(r)| <= 1e-12 · max|a_k| · (1+|r|)^deg`.
pub fn polynomial_roots(p: &Polynomial) -> Result<Vec<Complex>> {
    let deg = p.degree();
    if p.is_zero() || deg == 0 {
        return Err(Error::argument("root finding needs degree >= 1"));
    }
    let zeros = p.low_order_zeros();
    let q = p.shift_down(zeros);
    let mut roots: Vec<Complex> = core::iter::repeat(c(0.0, 0.0)).take(zeros).collect();
    let n = q.degree();
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-q.coeff(0) / q.coeff(1));
        return Ok(roots);
    }

    let lead = q.leading().norm();
    let radius = (0..n).map(|k| libm::pow(q.coeff(k).norm() / lead, 1.0 / (n - k) as f64)).fold(0.0, f64::max);
    let (mut found, _) = simultaneous_roots(n, radius, |z| q.eval_with_derivative(z));

    for r in found.iter_mut() {
        polish(&q, r);
    }
    let scale = p.max_coeff_norm();
    let ok = found.iter().all(|&r| {
        let bound = RESIDUAL_TOL * scale * libm::pow(1.0 + r.norm(), deg as f64);
        q.eval(r).norm() <= bound
    });
    if !ok {
        return Err(Error::NumericalFailure { what: "polynomial root finder", best: found });
    }
    roots.extend(found);
    Ok(roots)
}

fn polish(q: &Polynomial, r: &mut Complex) {
    let mut value = q.eval(*r).norm();
    for _ in 0..4 {
        let (p, dp) = q.eval_with_derivative(*r);
        if dp == c(0.0, 0.0) || value == 0.0 {
            return;
        }
        let next = *r - p / dp;
        let next_value = q.eval(next).norm();
        if next_value < value {
            *r = next;
            value = next_value;
        } else {
            return;
        }
    }
}

/// A group of numerically coincident roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex,
    pub multiplicity: usize,
}

/// Single-linkage clustering: roots closer than `tol` end up in one cluster.
/// Clusters are reported in order of their first member.
pub fn cluster_roots(roots: &[Complex], tol: f64) -> Vec<RootCluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Complex, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|(r, _, _)| *r == root) {
            Some((_, sum, count)) => {
                *sum += roots[i];
                *count += 1;
            }
            None => clusters.push((root, roots[i], 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, count)| RootCluster { center: sum / count as f64, multiplicity: count })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(roots: &[Complex], z: Complex, tol: f64) -> bool {
        roots.iter().any(|r| (r - z).norm() < tol)
    }

    #[test]
    fn quadratic_roots() {
        let roots = polynomial_roots(&Polynomial::from_real(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(contains(&roots, c(0.0, 1.0), 1e-13));
        assert!(contains(&roots, c(0.0, -1.0), 1e-13));
    }

    #[test]
    fn cube_roots_of_unity() {
        let roots = polynomial_roots(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(roots.len(), 3);
        for k in 0..3 {
            let w = Complex::from_polar(1.0, TAU * k as f64 / 3.0);
            assert!(contains(&roots, w, 1e-13));
        }
    }

    #[test]
    fn exact_zero_roots_split_off() {
        let roots = polynomial_roots(&Polynomial::from_real(&[0.0, 0.0, 3.0])).unwrap();
        assert_eq!(roots, [c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn double_root_clusters() {
        let p = Polynomial::from_roots(c(1.0, 0.0), &[c(0.5, 0.5), c(0.5, 0.5), c(-2.0, 0.0)]);
        let roots = polynomial_roots(&p).unwrap();
        let clusters = cluster_roots(&roots, 1e-7);
        assert_eq!(clusters.len(), 2);
        let double = clusters.iter().find(|k| k.multiplicity == 2).unwrap();
        assert!((double.center - c(0.5, 0.5)).norm() < 1e-7);
    }

    #[test]
    fn widely_separated_scales() {
        let lam = 1e-4;
        let p = Polynomial::from_roots(c(2.0, 0.0), &[c(1.0, 0.0), c(lam, 0.0), c(-lam, lam)]);
        let roots = polynomial_roots(&p).unwrap();
        assert!(contains(&roots, c(lam, 0.0), 1e-14));
        assert!(contains(&roots, c(-lam, lam), 1e-14));
    }

    #[test]
    fn constant_rejected() {
        assert!(matches!(polynomial_roots(&Polynomial::one()), Err(Error::Argument(_))));
    }
}
