use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::classify::{Classification, Classifier};
use crate::family::build_f_lambda;
use crate::numerics::c;
use crate::{Complex, Error, Result, SpherePoint};

pub const TILE_SIZE: usize = 64;

/// Which affine coordinate the viewport rectangle lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Chart {
    /// Pixels are values of `z`.
    #[default]
    Standard,
    /// Pixels are values of `w = 1/z`.
    Inverted,
}

/// A rectangle of the plane sampled at pixel centres; row 0 is the top edge.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Viewport {
    pub center: Complex,
    pub width: f64,
    pub height: f64,
    pub px_w: usize,
    pub px_h: usize,
    pub chart: Chart,
}

impl Viewport {
    pub fn new(center: Complex, width: f64, height: f64, px_w: usize, px_h: usize) -> Result<Self> {
        if px_w == 0 || px_h == 0 {
            return Err(Error::argument("viewport needs at least one pixel"));
        }
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(Error::argument("viewport extent must be positive"));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::argument("viewport centre must be finite"));
        }
        Ok(Viewport { center, width, height, px_w, px_h, chart: Chart::Standard })
    }

    /// `[re_min, re_max] × [im_min, im_max]`.
    pub fn from_bounds(re: (f64, f64), im: (f64, f64), px_w: usize, px_h: usize) -> Result<Self> {
        let center = c(0.5 * (re.0 + re.1), 0.5 * (im.0 + im.1));
        Self::new(center, re.1 - re.0, im.1 - im.0, px_w, px_h)
    }

    pub fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    /// Chart coordinate at fractional pixel position `(x, y)`; pixel `(i, j)`
    /// has its centre at `(i + ½, j + ½)`.
    pub fn coordinate_at(&self, x: f64, y: f64) -> Complex {
        let re = self.center.re + self.width * (x / self.px_w as f64 - 0.5);
        let im = self.center.im + self.height * (0.5 - y / self.px_h as f64);
        c(re, im)
    }

    pub fn point_at(&self, x: f64, y: f64) -> SpherePoint {
        let u = self.coordinate_at(x, y);
        match self.chart {
            Chart::Standard => SpherePoint::new(u),
            Chart::Inverted => SpherePoint::from_inverted(u),
        }
    }

    pub fn pixel_center(&self, i: usize, j: usize) -> SpherePoint {
        self.point_at(i as f64 + 0.5, j as f64 + 0.5)
    }

    /// Inverse of [`Viewport::coordinate_at`].
    pub fn pixel_of(&self, u: Complex) -> (f64, f64) {
        let x = ((u.re - self.center.re) / self.width + 0.5) * self.px_w as f64;
        let y = (0.5 - (u.im - self.center.im) / self.height) * self.px_h as f64;
        (x, y)
    }
}

/// A rectangular block of pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tile {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

/// Row-major tiling with edge tiles clipped to the viewport.
pub fn tiles(px_w: usize, px_h: usize, size: usize) -> Vec<Tile> {
    let size = size.max(1);
    let mut out = Vec::new();
    for y0 in (0..px_h).step_by(size) {
        for x0 in (0..px_w).step_by(size) {
            out.push(Tile { x0, y0, w: size.min(px_w - x0), h: size.min(px_h - y0) });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub class: Classification,
    /// Lock time of the orbit; `max_iter` when undecided.
    pub time: u32,
}

/// Per-pixel classification, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasinGrid {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
}

impl BasinGrid {
    pub fn new(width: usize, height: usize, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::argument("cell count does not match grid size"));
        }
        Ok(BasinGrid { width, height, cells })
    }

    /// Assembles tile results; each pixel is written exactly once.
    pub fn from_tiles(width: usize, height: usize, parts: Vec<(Tile, Vec<Cell>)>) -> Result<Self> {
        let blank = Cell { class: Classification::Undecided, time: 0 };
        let mut cells = alloc::vec![blank; width * height];
        let mut written = alloc::vec![false; width * height];
        for (t, block) in parts {
            if block.len() != t.w * t.h || t.x0 + t.w > width || t.y0 + t.h > height {
                return Err(Error::argument("tile does not fit the grid"));
            }
            for dy in 0..t.h {
                for dx in 0..t.w {
                    let k = (t.y0 + dy) * width + t.x0 + dx;
                    if written[k] {
                        return Err(Error::argument("tiles overlap"));
                    }
                    written[k] = true;
                    cells[k] = block[dy * t.w + dx];
                }
            }
        }
        if written.iter().any(|w| !w) {
            return Err(Error::argument("tiles do not cover the grid"));
        }
        Ok(BasinGrid { width, height, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[j * self.width + i]
    }

    /// Counts of basins `0..n` followed by undecided and degenerate pixels.
    pub fn histogram(&self, basins: usize) -> Vec<usize> {
        let mut h = alloc::vec![0; basins + 2];
        for cell in &self.cells {
            match cell.class {
                Classification::Basin(k) if (k as usize) < basins => h[k as usize] += 1,
                Classification::Basin(_) | Classification::Undecided => h[basins] += 1,
                Classification::Degenerate => h[basins + 1] += 1,
            }
        }
        h
    }
}

/// Classifies the pixel centres of one tile.
pub fn render_tile(classifier: &Classifier, view: &Viewport, tile: Tile) -> Vec<Cell> {
    let mut out = Vec::with_capacity(tile.w * tile.h);
    for j in tile.y0..tile.y0 + tile.h {
        for i in tile.x0..tile.x0 + tile.w {
            let (class, time) = classifier.classify(view.pixel_center(i, j));
            out.push(Cell { class, time });
        }
    }
    out
}

/// Sequential dynamical-plane render, tile by tile.
pub fn render_dynamical(classifier: &Classifier, view: &Viewport) -> BasinGrid {
    let parts =
        tiles(view.px_w, view.px_h, TILE_SIZE).into_iter().map(|t| (t, render_tile(classifier, view, t))).collect();
    BasinGrid::from_tiles(view.px_w, view.px_h, parts).expect("tiling covers the viewport")
}

/// For every pixel `λ`: build `f_λ` and classify its free critical point.
///
/// Degenerate parameters are marked [`Classification::Degenerate`]; the trap
/// is clamped per pixel to the cycle separation, which shrinks with `|λ|`.
pub fn render_parameter_tile(view: &Viewport, max_iter: u32, trap_radius: f64, tile: Tile) -> Vec<Cell> {
    let mut out = Vec::with_capacity(tile.w * tile.h);
    for j in tile.y0..tile.y0 + tile.h {
        for i in tile.x0..tile.x0 + tile.w {
            out.push(parameter_cell(view.pixel_center(i, j), max_iter, trap_radius));
        }
    }
    out
}

fn parameter_cell(p: SpherePoint, max_iter: u32, trap_radius: f64) -> Cell {
    let degenerate = Cell { class: Classification::Degenerate, time: 0 };
    let Some(lam) = p.to_complex() else { return degenerate };
    let Ok(f) = build_f_lambda(lam) else { return degenerate };
    let Ok(cl) = Classifier::clamped(f.map, f.cycle.to_vec(), max_iter, trap_radius) else {
        return degenerate;
    };
    let (class, time) = cl.classify(SpherePoint::new(f.free_critical));
    Cell { class, time }
}

pub fn render_parameter(view: &Viewport, max_iter: u32, trap_radius: f64) -> BasinGrid {
    let parts = tiles(view.px_w, view.px_h, TILE_SIZE)
        .into_iter()
        .map(|t| (t, render_parameter_tile(view, max_iter, trap_radius, t)))
        .collect();
    BasinGrid::from_tiles(view.px_w, view.px_h, parts).expect("tiling covers the viewport")
}
