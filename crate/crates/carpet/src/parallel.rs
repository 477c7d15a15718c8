//! Tile-parallel rendering and sampled checks on rendered grids.

use carpet_core::render::{
    render_parameter_tile, render_tile, tiles, BasinGrid, Cell, Classifier, Tile, Viewport, TILE_SIZE,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

/// Environment variable holding the render worker count.
pub const WORKERS_ENV: &str = "CARPET_WORKERS";

/// Worker count from [`WORKERS_ENV`]; `None` when unset, which means one
/// worker per available core.
pub fn workers_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => anyhow::bail!("{WORKERS_ENV}: {e}"),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => anyhow::bail!("{WORKERS_ENV} must be a positive integer, got `{s}`"),
            Ok(n) => Ok(Some(n)),
        },
    }
}

/// Runs `work` on every tile in a pool of `workers` threads; each tile is
/// computed by one worker and the grid is assembled by the caller's thread.
fn render_tiles<F>(px_w: usize, px_h: usize, workers: Option<usize>, work: F) -> anyhow::Result<BasinGrid>
where
    F: Fn(Tile) -> Vec<Cell> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let parts: Vec<(Tile, Vec<Cell>)> =
        pool.install(|| tiles(px_w, px_h, TILE_SIZE).into_par_iter().map(|t| (t, work(t))).collect());
    Ok(BasinGrid::from_tiles(px_w, px_h, parts)?)
}

pub fn render_dynamical(classifier: &Classifier, view: &Viewport, workers: Option<usize>) -> anyhow::Result<BasinGrid> {
    render_tiles(view.px_w, view.px_h, workers, |t| render_tile(classifier, view, t))
}

pub fn render_parameter(
    view: &Viewport,
    max_iter: u32,
    trap_radius: f64,
    workers: Option<usize>,
) -> anyhow::Result<BasinGrid> {
    render_tiles(view.px_w, view.px_h, workers, |t| render_parameter_tile(view, max_iter, trap_radius, t))
}

/// Result of re-following sampled decided pixels past their lock time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LockOrderCheck {
    pub samples: usize,
    pub violations: usize,
}

/// Draws up to `samples` decided pixels with a seeded generator and checks
/// that from the lock time on the orbit visits the traps in cyclic order for
/// one full turn, starting at trap `basin + t mod p`.
pub fn lock_order_check(
    classifier: &Classifier,
    view: &Viewport,
    grid: &BasinGrid,
    samples: usize,
    seed: u64,
) -> LockOrderCheck {
    let decided: Vec<usize> = (0..grid.cells().len()).filter(|&k| grid.cells()[k].class.is_decided()).collect();
    let mut rng = StdRng::seed_from_u64(seed);
    let picked: Vec<usize> = decided.choose_multiple(&mut rng, samples).copied().collect();
    let p = classifier.cycle().len() as u32;
    let violations = picked
        .iter()
        .filter(|&&k| {
            let cell = grid.cells()[k];
            let basin = u32::from(cell.class.basin().expect("decided"));
            let mut z = view.pixel_center(k % grid.width(), k / grid.width());
            for _ in 0..cell.time {
                z = classifier.map().eval(z).expect("orbit was followed once already");
            }
            (0..=p).any(|step| {
                let want = ((basin + cell.time + step) % p) as u8;
                let ok = classifier.trap_of(&z) == Some(want);
                z = classifier.map().eval(z).unwrap_or(z);
                !ok
            })
        })
        .count();
    LockOrderCheck { samples: picked.len(), violations }
}
