use alloc::vec::Vec;

use super::classify::Classification;
use super::grid::BasinGrid;

/// Integer colour map.
///
/// Basin `k` uses `base[k % base.len()]`, darkened with the lock time `t`:
/// each channel becomes `channel * (256 − step·min(t, cap)) / 256`, rounded
/// down. Undecided and degenerate pixels use their own fixed colours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Palette {
    pub base: Vec<[u8; 3]>,
    pub step: u32,
    pub cap: u32,
    pub undecided: [u8; 3],
    pub degenerate: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            base: alloc::vec![[232, 96, 64], [72, 160, 232], [240, 200, 64], [112, 200, 112]],
            step: 3,
            cap: 64,
            undecided: [0, 0, 0],
            degenerate: [0, 0, 0],
        }
    }
}

impl Palette {
    pub fn color(&self, class: Classification, time: u32) -> [u8; 3] {
        match class {
            Classification::Basin(k) if !self.base.is_empty() => {
                let base = self.base[k as usize % self.base.len()];
                let shade = 256u32.saturating_sub(self.step * time.min(self.cap));
                base.map(|ch| (u32::from(ch) * shade / 256) as u8)
            }
            Classification::Basin(_) | Classification::Undecided => self.undecided,
            Classification::Degenerate => self.degenerate,
        }
    }
}

/// 8-bit RGB pixels, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBuffer {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl ImageBuffer {
    pub fn from_grid(grid: &BasinGrid, palette: &Palette) -> Self {
        let rgb = grid.cells().iter().flat_map(|c| palette.color(c.class, c.time)).collect();
        ImageBuffer { width: grid.width(), height: grid.height(), rgb }
    }

    pub fn pixel(&self, i: usize, j: usize) -> [u8; 3] {
        let k = 3 * (j * self.width + i);
        [self.rgb[k], self.rgb[k + 1], self.rgb[k + 2]]
    }
}
