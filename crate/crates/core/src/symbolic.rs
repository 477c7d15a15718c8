//! Symbolic dynamics of the Julia-component exchange: the subshift on four
//! symbols, its metric, the quotient collapsing the three rotations of
//! `(012)^∞`, and an expanding interval model of the tree map whose
//! itineraries realize the subshift.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_WORD_LENGTH: usize = 30;

/// Digits `0..4` with the transitions of the four-edge tree:
/// `0→1, 1→2, 2→0, 2→3, 3→0, 3→1`.
pub const TREE_TRANSITIONS: [(u8, u8); 6] = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0), (3, 1)];

/// A subshift of finite type given by its allowed transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subshift {
    alphabet: usize,
    allowed: Vec<bool>,
}

impl Subshift {
    pub fn new(alphabet: usize, pairs: &[(u8, u8)]) -> Result<Self> {
        let mut allowed = vec![false; alphabet * alphabet];
        for &(a, b) in pairs {
            if a as usize >= alphabet || b as usize >= alphabet {
                return Err(Error::argument(format!("transition ({a},{b}) outside the alphabet")));
            }
            allowed[a as usize * alphabet + b as usize] = true;
        }
        Ok(Subshift { alphabet, allowed })
    }

    pub fn tree() -> Self {
        Self::new(4, &TREE_TRANSITIONS).expect("static transition table")
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn allows(&self, a: u8, b: u8) -> bool {
        (a as usize) < self.alphabet
            && (b as usize) < self.alphabet
            && self.allowed[a as usize * self.alphabet + b as usize]
    }

    /// Allowed pairs in lexicographic order.
    pub fn transitions(&self) -> Vec<(u8, u8)> {
        let n = self.alphabet as u8;
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.allows(a, b)).collect()
    }

    fn is_admissible(&self, digits: &[u8]) -> bool {
        digits.iter().all(|&d| (d as usize) < self.alphabet) && digits.windows(2).all(|w| self.allows(w[0], w[1]))
    }

    /// All admissible words of length `n`, lexicographically ordered.
    pub fn admissible_words(&self, n: usize) -> Result<Vec<Vec<u8>>> {
        if n == 0 || n > MAX_WORD_LENGTH {
            return Err(Error::argument(format!("word length must lie in 1..={MAX_WORD_LENGTH}")));
        }
        let mut words: Vec<Vec<u8>> = (0..self.alphabet as u8).map(|d| vec![d]).collect();
        for _ in 1..n {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().expect("nonempty word");
                    (0..self.alphabet as u8).filter(move |&b| self.allows(last, b)).map(move |b| {
                        let mut next = w.clone();
                        next.push(b);
                        next
                    })
                })
                .collect();
        }
        Ok(words)
    }

    /// Number of admissible words of length `n`: the entry sum of `A^{n−1}`.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 0;
        }
        let k = self.alphabet;
        let mut ends = vec![1u128; k];
        for _ in 1..n {
            let mut next = vec![0u128; k];
            for a in 0..k {
                for b in 0..k {
                    if self.allowed[a * k + b] {
                        next[b] += ends[a];
                    }
                }
            }
            ends = next;
        }
        ends.iter().sum()
    }

    /// Checks admissibility of an eventually periodic word, including the
    /// junction into the period and its wrap-around.
    pub fn word(&self, preperiod: Vec<u8>, period: Vec<u8>) -> Result<Word> {
        let w = Word { preperiod, period };
        let mut joined = w.preperiod.clone();
        joined.extend_from_slice(&w.period);
        if let Some(&first) = w.period.first() {
            joined.push(first);
        }
        if !self.is_admissible(&joined) {
            return Err(Error::argument(format!("inadmissible word {w}")));
        }
        Ok(w)
    }

    pub fn finite_word(&self, digits: Vec<u8>) -> Result<Word> {
        self.word(digits, Vec::new())
    }
}

/// `preperiod · period^∞`; an empty period makes the word finite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Word {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl Word {
    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Number of digits, `None` for infinite words.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.preperiod.len())
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.preperiod.is_empty()
    }

    pub fn digit(&self, k: usize) -> Option<u8> {
        if k < self.preperiod.len() {
            Some(self.preperiod[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.preperiod.len()) % self.period.len()])
        }
    }

    /// The first `n` digits, if the word has that many.
    pub fn expand(&self, n: usize) -> Option<Vec<u8>> {
        (0..n).map(|k| self.digit(k)).collect()
    }

    /// The shifted word `σ(s)`.
    pub fn shift(&self) -> Word {
        if let Some((_, rest)) = self.preperiod.split_first() {
            Word { preperiod: rest.to_vec(), period: self.period.clone() }
        } else if self.period.is_empty() {
            self.clone()
        } else {
            let mut period = self.period.clone();
            period.rotate_left(1);
            Word { preperiod: Vec::new(), period }
        }
    }

    /// First index `n` with `σⁿ(s)` a rotation of `(012)^∞`.
    pub fn alpha_entry(&self) -> Option<usize> {
        let p = &self.period;
        let rotation = !p.is_empty()
            && p.len() % 3 == 0
            && p.iter().all(|&d| d < 3)
            && (0..p.len()).all(|k| p[(k + 1) % p.len()] == (p[k] + 1) % 3);
        if !rotation {
            return None;
        }
        // inside {0, 1, 2} the only transitions are successors mod 3
        let mut e = self.preperiod.len();
        while e > 0 && self.preperiod[e - 1] < 3 && (self.preperiod[e - 1] + 1) % 3 == self.digit(e)? {
            e -= 1;
        }
        Some(e)
    }

    /// Same infinite sequence, regardless of representation.
    pub fn same_sequence(&self, other: &Word) -> bool {
        if self.is_finite() || other.is_finite() {
            return self.is_finite() && other.is_finite() && self.preperiod == other.preperiod;
        }
        let n = self.preperiod.len().max(other.preperiod.len()) + lcm(self.period.len(), other.period.len());
        self.expand(n) == other.expand(n)
    }
}

impl core::fmt::Display for Word {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d}")?;
        }
        if !self.period.is_empty() {
            f.write_str("(")?;
            for d in &self.period {
                write!(f, "{d}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Bracket `[lo, hi]` around `Σ |s_k − s′_k| / 4^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DistanceBounds {
    pub lo: f64,
    pub hi: f64,
}

/// Truncates the metric series after `depth` terms; the tail is at most
/// `Σ_{k≥depth} 3/4^k = 4^{1−depth}`.
pub fn word_distance(s: &Word, t: &Word, depth: usize) -> Result<DistanceBounds> {
    let (a, b) = match (s.expand(depth), t.expand(depth)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::argument(format!("words do not have {depth} digits"))),
    };
    let mut lo = 0.0;
    let mut weight = 1.0;
    for (x, y) in a.iter().zip(&b) {
        lo += f64::from(x.abs_diff(*y)) * weight;
        weight /= 4.0;
    }
    let tail = if s.is_finite() && t.is_finite() && s.len() == Some(depth) && t.len() == Some(depth) {
        0.0
    } else {
        4.0 * weight
    };
    Ok(DistanceBounds { lo, hi: lo + tail })
}

/// Outcome of the identification test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Equivalence {
    pub related: bool,
    /// Smallest common-prefix length after which both tails lie in the
    /// `(012)` orbit; `None` when related only by being equal.
    pub witness: Option<usize>,
}

/// `s ∼ s′` when they agree on their first `n` digits and both `σⁿ(s)` and
/// `σⁿ(s′)` are rotations of `(012)^∞`, plus reflexivity.
pub fn equivalent(s: &Word, t: &Word) -> Result<Equivalence> {
    if s.is_finite() || t.is_finite() {
        return Err(Error::argument("the identification is defined on infinite words"));
    }
    if let (Some(e), Some(f)) = (s.alpha_entry(), t.alpha_entry()) {
        let n = e.max(f);
        if s.expand(n) == t.expand(n) {
            return Ok(Equivalence { related: true, witness: Some(n) });
        }
    }
    Ok(Equivalence { related: s.same_sequence(t), witness: None })
}

/// A class of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct QuotientClass {
    /// `prefix · (012)^∞`-style canonical form for collapsed classes.
    pub representative: Word,
    pub collapsed: bool,
}

pub fn quotient_class(s: &Word) -> QuotientClass {
    match s.alpha_entry() {
        Some(e) => QuotientClass {
            representative: Word { preperiod: s.preperiod[..e].to_vec(), period: vec![0, 1, 2] },
            collapsed: true,
        },
        None => QuotientClass { representative: s.clone(), collapsed: false },
    }
}

/// Collapsed classes whose prefix has at most `n` digits: the empty prefix
/// plus every admissible prefix ending in `3`.
pub fn collapsed_class_count(shift: &Subshift, n: usize) -> Result<u128> {
    let mut total = 1u128;
    for m in 1..=n {
        total += shift.admissible_words(m)?.iter().filter(|w| w.last() == Some(&3)).count() as u128;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }
}

/// Affine increasing branch `domain → base[to]` of the model map.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Branch {
    pub from: u8,
    pub to: u8,
    pub domain: Interval,
    pub slope: f64,
}

impl Branch {
    fn forward(&self, x: f64, target: &Interval) -> f64 {
        target.lo + self.slope * (x - self.domain.lo)
    }

    fn backward(&self, y: f64, target: &Interval) -> f64 {
        self.domain.lo + (y - target.lo) / self.slope
    }
}

/// `I_i = [4i, 4i+1]`; for each allowed `(i, j)` the branch domain is the
/// first third of `I_i`, or the last third for the second image of `i`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IntervalModel {
    pub base: Vec<Interval>,
    pub branches: Vec<Branch>,
}

pub fn build_interval_model(shift: &Subshift) -> Result<IntervalModel> {
    let k = shift.alphabet();
    let base: Vec<Interval> = (0..k).map(|i| Interval { lo: 4.0 * i as f64, hi: 4.0 * i as f64 + 1.0 }).collect();
    let mut branches = Vec::new();
    for i in 0..k as u8 {
        let targets: Vec<u8> = (0..k as u8).filter(|&j| shift.allows(i, j)).collect();
        if targets.len() > 2 {
            return Err(Error::argument("interval model supports at most two images per symbol"));
        }
        let lo = base[i as usize].lo;
        for (slot, &j) in targets.iter().enumerate() {
            let start = lo + if slot == 0 { 0.0 } else { 2.0 / 3.0 };
            let domain = Interval { lo: start, hi: start + 1.0 / 3.0 };
            branches.push(Branch { from: i, to: j, domain, slope: 3.0 });
        }
    }
    Ok(IntervalModel { base, branches })
}

impl IntervalModel {
    fn branch(&self, from: u8, to: u8) -> Option<&Branch> {
        self.branches.iter().find(|b| b.from == from && b.to == to)
    }

    /// The model map; `None` off the branch domains.
    pub fn apply(&self, x: f64) -> Option<f64> {
        self.branches.iter().find(|b| b.domain.contains(x)).map(|b| b.forward(x, &self.base[b.to as usize]))
    }

    /// Image of an interval inside one branch domain.
    pub fn apply_interval(&self, iv: &Interval) -> Option<Interval> {
        let b = self.branches.iter().find(|b| b.domain.contains_interval(iv))?;
        let target = &self.base[b.to as usize];
        Some(Interval { lo: b.forward(iv.lo, target), hi: b.forward(iv.hi, target) })
    }

    /// The first `n` base intervals visited by `x`, if it survives `n − 1` steps.
    pub fn itinerary(&self, x: f64, n: usize) -> Option<Vec<u8>> {
        let mut out = Vec::with_capacity(n);
        let mut y = x;
        for step in 0..n {
            let i = self.base.iter().position(|iv| iv.contains(y))?;
            out.push(i as u8);
            if step + 1 < n {
                y = self.apply(y)?;
            }
        }
        Some(out)
    }

    /// Points whose first `len(word)` symbols are `word`; length `3^{1−len}`.
    pub fn itinerary_cylinder(&self, word: &[u8]) -> Result<Interval> {
        let (&last, rest) = word.split_last().ok_or_else(|| Error::argument("empty word"))?;
        let mut iv = *self
            .base
            .get(last as usize)
            .ok_or_else(|| Error::argument(format!("digit {last} outside the alphabet")))?;
        let mut next = last;
        for &d in rest.iter().rev() {
            let b =
                self.branch(d, next).ok_or_else(|| Error::argument(format!("transition ({d},{next}) not allowed")))?;
            let target = &self.base[next as usize];
            iv = Interval { lo: b.backward(iv.lo, target), hi: b.backward(iv.hi, target) };
            next = d;
        }
        Ok(iv)
    }
}
