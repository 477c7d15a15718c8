use alloc::vec::Vec;

use crate::{RationalMap, SpherePoint};

/// A forward orbit `z₀, f(z₀), …`.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub points: Vec<SpherePoint>,
    /// Iteration stopped early at an indeterminate `0/0` evaluation.
    pub degenerate: bool,
}

/// Up to `n` iterates of `z0`, `n + 1` points in total unless a degenerate
/// evaluation cuts the orbit short.
pub fn orbit(f: &RationalMap, z0: SpherePoint, n: usize) -> Orbit {
    let mut points = Vec::with_capacity(n + 1);
    points.push(z0);
    let mut z = z0;
    for _ in 0..n {
        match f.eval(z) {
            Ok(next) => {
                z = next;
                points.push(z);
            }
            Err(_) => return Orbit { points, degenerate: true },
        }
    }
    Orbit { points, degenerate: false }
}
