use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, RationalMap, Result, SpherePoint};

pub const DEFAULT_TRAP_RADIUS: f64 = 1e-3;
pub const DEFAULT_MAX_ITER: u32 = 500;

/// Outcome of following one orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Classification {
    /// Attracted to the cycle; `f^{pm}(z)` tends to the marked point with
    /// this index, `p` the cycle length.
    Basin(u8),
    /// No lock within the iteration budget.
    Undecided,
    /// The orbit hit an indeterminate `0/0` evaluation.
    Degenerate,
}

impl Classification {
    pub fn is_decided(self) -> bool {
        matches!(self, Classification::Basin(_))
    }

    pub fn basin(self) -> Option<u8> {
        match self {
            Classification::Basin(k) => Some(k),
            _ => None,
        }
    }
}

/// Chordal-ball traps around the points of an attracting cycle.
///
/// An orbit locks at the first time `t` at which `z_t` lies in trap `k` and
/// the next `p` iterates (`p` the cycle length) visit traps `k+1, …, k+p` in
/// order. Near a point of large derivative a plain first-entry rule would
/// misreport orbits that graze a trap without being captured; the lock rules
/// that out.
///
/// The reported index is `j = k − t mod p`, so that `f^{pm}(z) → cycle[j]`.
/// It is constant on every Fatou component, unlike the trap index at the lock
/// time, which jumps across level curves of `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Classifier {
    map: RationalMap,
    cycle: Vec<SpherePoint>,
    trap_radius: f64,
    trap_sqr: f64,
    max_iter: u32,
}

impl Classifier {
    /// `f` must map `cycle[k]` to `cycle[k+1]`; the traps must be at most half
    /// the smallest chordal distance between cycle points.
    pub fn new(map: RationalMap, cycle: Vec<SpherePoint>, max_iter: u32, trap_radius: f64) -> Result<Self> {
        let sep = min_separation(&cycle)?;
        if !(trap_radius > 0.0 && trap_radius < 0.5 * sep) {
            return Err(Error::argument(alloc::format!(
                "trap radius {trap_radius:e} must lie in (0, {:e}), half the cycle separation",
                0.5 * sep
            )));
        }
        Ok(Self::build(map, cycle, max_iter, trap_radius))
    }

    /// Like [`Classifier::new`] but shrinks the trap to a quarter of the cycle
    /// separation when the requested radius is too large.
    pub fn clamped(map: RationalMap, cycle: Vec<SpherePoint>, max_iter: u32, trap_radius: f64) -> Result<Self> {
        if !(trap_radius > 0.0) {
            return Err(Error::argument("trap radius must be positive"));
        }
        let sep = min_separation(&cycle)?;
        let effective = if trap_radius < 0.5 * sep { trap_radius } else { 0.25 * sep };
        Ok(Self::build(map, cycle, max_iter, effective))
    }

    fn build(map: RationalMap, cycle: Vec<SpherePoint>, max_iter: u32, trap_radius: f64) -> Self {
        Classifier { map, cycle, trap_radius, trap_sqr: trap_radius * trap_radius, max_iter }
    }

    pub fn trap_radius(&self) -> f64 {
        self.trap_radius
    }

    pub fn max_iter(&self) -> u32 {
        self.max_iter
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn cycle(&self) -> &[SpherePoint] {
        &self.cycle
    }

    /// Index of the trap containing `z`.
    #[inline]
    pub fn trap_of(&self, z: &SpherePoint) -> Option<u8> {
        self.cycle.iter().position(|p| p.chordal_distance_sqr(z) <= self.trap_sqr).map(|k| k as u8)
    }

    /// `(classification, t)` where `t <= max_iter` is the lock time; a locked
    /// orbit has `z_t` in trap `j + t mod p`.
    pub fn classify(&self, z0: SpherePoint) -> (Classification, u32) {
        let p = self.cycle.len() as u32;
        let mut z = z0;
        let mut prev: Option<u8> = None;
        let mut run = 0u32;
        let mut step = 0u32;
        loop {
            let here = self.trap_of(&z);
            run = match (prev, here) {
                (Some(a), Some(b)) if (u32::from(a) + 1) % p == u32::from(b) => run + 1,
                (_, Some(_)) => 1,
                _ => 0,
            };
            if run == p + 1 {
                // k + p ≡ k, so the current trap is also the entry trap
                let t = step - p;
                let k = u32::from(here.expect("nonzero run"));
                let phase = (k + p - t % p) % p;
                return (Classification::Basin(phase as u8), t);
            }
            let earliest_entry = step + 1 - run;
            if earliest_entry > self.max_iter {
                return (Classification::Undecided, self.max_iter);
            }
            prev = here;
            z = match self.map.eval(z) {
                Ok(w) => w,
                Err(_) => return (Classification::Degenerate, step),
            };
            step += 1;
        }
    }
}

fn min_separation(cycle: &[SpherePoint]) -> Result<f64> {
    if cycle.is_empty() || cycle.len() > u8::MAX as usize {
        return Err(Error::argument("cycle must have between 1 and 255 points"));
    }
    let mut sep = 2.0f64;
    for (i, a) in cycle.iter().enumerate() {
        for b in &cycle[i + 1..] {
            sep = sep.min(a.chordal_distance(b));
        }
    }
    if sep == 0.0 {
        return Err(Error::argument("cycle points must be distinct"));
    }
    Ok(sep)
}

/// One-shot form of [`Classifier::classify`].
pub fn classify_point(
    f: &RationalMap,
    z: SpherePoint,
    cycle: &[SpherePoint],
    max_iter: u32,
    trap_radius: f64,
) -> Result<(Classification, u32)> {
    let c = Classifier::new(f.clone(), cycle.to_vec(), max_iter, trap_radius)?;
    Ok(c.classify(z))
}
