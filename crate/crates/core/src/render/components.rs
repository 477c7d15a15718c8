use alloc::vec;
use alloc::vec::Vec;

use super::classify::Classification;
use super::grid::BasinGrid;

/// Labels `1..=count` in row-major order of first appearance; `0` marks
/// pixels outside the predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub count: usize,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// 4-connected labelling of the pixels whose classification satisfies `keep`.
pub fn connected_components<P>(grid: &BasinGrid, keep: P) -> Components
where
    P: Fn(Classification) -> bool,
{
    let (w, h) = (grid.width(), grid.height());
    let mask: Vec<bool> = grid.cells().iter().map(|c| keep(c.class)).collect();
    // provisional labels, 0 = background
    let mut provisional = vec![0u32; w * h];
    let mut parent: Vec<u32> = vec![0];
    for j in 0..h {
        for i in 0..w {
            let k = j * w + i;
            if !mask[k] {
                continue;
            }
            let left = if i > 0 { provisional[k - 1] } else { 0 };
            let up = if j > 0 { provisional[k - w] } else { 0 };
            provisional[k] = match (left, up) {
                (0, 0) => {
                    let id = parent.len() as u32;
                    parent.push(id);
                    id
                }
                (a, 0) | (0, a) => a,
                (a, b) => {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb) as usize] = ra.min(rb);
                    }
                    a.min(b)
                }
            };
        }
    }
    let mut relabel = vec![0u32; parent.len()];
    let mut count = 0u32;
    let mut labels = vec![0u32; w * h];
    for k in 0..w * h {
        if provisional[k] == 0 {
            continue;
        }
        let root = find(&mut parent, provisional[k]) as usize;
        if relabel[root] == 0 {
            count += 1;
            relabel[root] = count;
        }
        labels[k] = relabel[root];
    }
    Components { width: w, height: h, labels, count: count as usize }
}
