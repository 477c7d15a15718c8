//! Branch data of sphere coverings and its realization by permutations.
//!
//! Products are read left to right: `σ₁σ₂` applies `σ₁` first, so
//! `(σ₁σ₂)(x) = σ₂(σ₁(x))`. The opposite convention changes which cycle
//! lengths appear in the construction below.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest degree accepted by [`brute_force_realizable`].
pub const BRUTE_FORCE_MAX_DEGREE: usize = 7;
/// Upper bound on the number of permutation tuples tried by the brute force.
const BRUTE_FORCE_MAX_TUPLES: usize = 50_000_000;

/// A bijection of `{1, …, d}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation { images: (0..d).collect() }
    }

    /// From 0-based images; rejects non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::argument("not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// The single cycle `(c₀ c₁ … c_k)` on `{1, …, d}`, 1-based labels.
    pub fn cycle(d: usize, labels: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        let mut seen = vec![false; d];
        for (k, &a) in labels.iter().enumerate() {
            if a == 0 || a > d || seen[a - 1] {
                return Err(Error::argument(format!("bad cycle label {a} for degree {d}")));
            }
            seen[a - 1] = true;
            images[a - 1] = labels[(k + 1) % labels.len()] - 1;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self · other`: `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycles as 0-based orbits, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// 1-based cycle notation without fixed points, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let mut s = String::new();
        for cyc in self.cycles().iter().filter(|c| c.len() > 1) {
            s.push('(');
            for (k, x) in cyc.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&format!("{}", x + 1));
            }
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

/// Local degrees `d_{i,j}` above each of `n` branch values.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BranchData {
    degree: usize,
    rows: Vec<Vec<usize>>,
}

impl BranchData {
    /// Every row must sum to `degree` and contain an entry `>= 2`.
    pub fn new(degree: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::argument("branch data needs degree >= 2"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.contains(&0) {
                return Err(Error::argument(format!("row {i} has a zero local degree")));
            }
            if row.iter().sum::<usize>() != degree {
                return Err(Error::argument(format!("row {i} does not sum to {degree}")));
            }
            if !row.iter().any(|&x| x >= 2) {
                return Err(Error::argument(format!("row {i} has no branching")));
            }
        }
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.sort_unstable_by(|a, b| b.cmp(a));
                r
            })
            .collect();
        Ok(BranchData { degree, rows })
    }

    /// Three branch values, each with a single critical preimage.
    pub fn simple(d: usize, d11: usize, d21: usize, d31: usize) -> Result<Self> {
        let row = |k: usize| {
            let mut r = vec![k];
            r.extend(core::iter::repeat(1).take(d.saturating_sub(k)));
            r
        };
        if [d11, d21, d31].iter().any(|&k| k > d) {
            return Err(Error::argument("local degree exceeds the degree"));
        }
        Self::new(d, vec![row(d11), row(d21), row(d31)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Rows sorted in decreasing order.
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// `Σ (d_{i,j} − 1) = 2d − 2`, the critical-point count of a covering of
    /// the sphere by the sphere.
    ///
    /// The permutation conditions alone only produce a covering by some closed
    /// surface; its genus is zero exactly when this count holds.
    pub fn is_spherical(&self) -> bool {
        let critical: usize = self.rows.iter().flatten().map(|&k| k - 1).sum();
        critical == 2 * self.degree - 2
    }
}

fn check_simple_args(d: usize, d11: usize, d21: usize, d31: usize) -> Result<()> {
    let ok = [d11, d21, d31].iter().all(|&k| 2 <= k && k <= d);
    if !ok {
        return Err(Error::argument(format!("local degrees ({d11},{d21},{d31}) must lie in [2, {d}]")));
    }
    Ok(())
}

/// `2d = d₁₁ + d₂₁ + d₃₁ − 1`.
pub fn check_h1prime(d: usize, d11: usize, d21: usize, d31: usize) -> Result<bool> {
    check_simple_args(d, d11, d21, d31)?;
    Ok(2 * d + 1 == d11 + d21 + d31)
}

/// `σ₁ = (1, …, d₁₁)`, `σ₂ = (d, d−1, …, d−d₂₁+1)` and `σ₃ = (σ₁σ₂)⁻¹`.
pub fn construct_permutations(
    d: usize,
    d11: usize,
    d21: usize,
    d31: usize,
) -> Result<(Permutation, Permutation, Permutation)> {
    if !check_h1prime(d, d11, d21, d31)? {
        return Err(Error::argument(format!("2d = d11 + d21 + d31 - 1 fails for d = {d}")));
    }
    let first: Vec<usize> = (1..=d11).collect();
    let second: Vec<usize> = (0..d21).map(|k| d - k).collect();
    let s1 = Permutation::cycle(d, &first)?;
    let s2 = Permutation::cycle(d, &second)?;
    let s3 = s1.then(&s2).inverse();
    Ok((s1, s2, s3))
}

/// Two branch values of full degree: `z ↦ z^d` with `σ₁ = (1, …, d)`, `σ₂ = σ₁⁻¹`.
pub fn construct_power_map(d: usize) -> Result<(Permutation, Permutation)> {
    if d < 2 {
        return Err(Error::argument("power map needs degree >= 2"));
    }
    let s1 = Permutation::cycle(d, &(1..=d).collect::<Vec<_>>())?;
    let s2 = s1.inverse();
    Ok((s1, s2))
}

fn is_transitive(perms: &[Permutation], d: usize) -> bool {
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}

/// Cycle types match the rows, the ordered product is the identity, the
/// generated group is transitive and the covering surface is a sphere.
pub fn verify_hurwitz_conditions(perms: &[Permutation], data: &BranchData) -> bool {
    let d = data.degree;
    if !data.is_spherical() || perms.len() != data.rows.len() || perms.iter().any(|p| p.degree() != d) {
        return false;
    }
    if perms.iter().zip(&data.rows).any(|(p, row)| &p.cycle_type() != row) {
        return false;
    }
    let product = perms.iter().fold(Permutation::identity(d), |acc, p| acc.then(p));
    product.is_identity() && is_transitive(perms, d)
}

fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn all_with_cycle_type(d: usize, cycle_type: &[usize]) -> Vec<Permutation> {
    let mut images: Vec<usize> = (0..d).collect();
    let mut out = Vec::new();
    loop {
        let p = Permutation { images: images.clone() };
        if p.cycle_type() == cycle_type {
            out.push(p);
        }
        if !next_permutation(&mut images) {
            return out;
        }
    }
}

/// Consecutive cycles `(1 … k₁)(k₁+1 …)…` realizing a cycle type.
fn canonical_with_cycle_type(d: usize, cycle_type: &[usize]) -> Permutation {
    let mut images: Vec<usize> = (0..d).collect();
    let mut start = 0;
    for &len in cycle_type {
        for k in 0..len {
            images[start + k] = start + (k + 1) % len;
        }
        start += len;
    }
    Permutation { images }
}

/// Exhaustive search for a realizing tuple; returns a witness when one exists.
///
/// `σ₁` is fixed to a canonical representative of its cycle type, which loses
/// nothing since realizability is invariant under simultaneous conjugation.
pub fn find_realization(data: &BranchData) -> Result<Option<Vec<Permutation>>> {
    let d = data.degree;
    if d > BRUTE_FORCE_MAX_DEGREE {
        return Err(Error::Budget { limit: BRUTE_FORCE_MAX_DEGREE, requested: d });
    }
    let n = data.rows.len();
    if n == 0 || !data.is_spherical() {
        return Ok(None);
    }
    let first = canonical_with_cycle_type(d, &data.rows[0]);
    if n == 1 {
        let perms = vec![first];
        return Ok(verify_hurwitz_conditions(&perms, data).then_some(perms));
    }
    let middle: Vec<Vec<Permutation>> = data.rows[1..n - 1].iter().map(|row| all_with_cycle_type(d, row)).collect();
    let tuples = middle.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len().max(1)));
    match tuples {
        Some(t) if t <= BRUTE_FORCE_MAX_TUPLES => {}
        _ => return Err(Error::Budget { limit: BRUTE_FORCE_MAX_TUPLES, requested: tuples.unwrap_or(usize::MAX) }),
    }
    let last_type = &data.rows[n - 1];
    let mut chosen: Vec<&Permutation> = Vec::with_capacity(n - 2);
    Ok(search(&middle, &first, &mut chosen, last_type, d))
}

fn search<'a>(
    middle: &'a [Vec<Permutation>],
    prefix: &Permutation,
    chosen: &mut Vec<&'a Permutation>,
    last_type: &[usize],
    d: usize,
) -> Option<Vec<Permutation>> {
    let depth = chosen.len();
    if depth == middle.len() {
        let last = prefix.inverse();
        if last.cycle_type() != last_type {
            return None;
        }
        let first = canonical_first(prefix, chosen);
        let mut perms = Vec::with_capacity(depth + 2);
        perms.push(first);
        perms.extend(chosen.iter().map(|p| (*p).clone()));
        perms.push(last);
        return is_transitive(&perms, d).then_some(perms);
    }
    for p in &middle[depth] {
        chosen.push(p);
        let next = prefix.then(p);
        if let Some(found) = search(middle, &next, chosen, last_type, d) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Recovers `σ₁` from the running product `σ₁σ₂…σ_k` and the chosen `σ₂…σ_k`.
fn canonical_first(prefix: &Permutation, chosen: &[&Permutation]) -> Permutation {
    chosen.iter().rev().fold(prefix.clone(), |acc, p| acc.then(&p.inverse()))
}

pub fn brute_force_realizable(data: &BranchData) -> Result<bool> {
    find_realization(data).map(|w| w.is_some())
}
