//! Basin classification on the Riemann sphere and the grids, component
//! labelling and palette used to render dynamical and parameter planes.
//!
//! Everything here is single-threaded and tile-addressable; a parallel driver
//! only has to split a viewport into [`Tile`]s and call [`render_tile`].

mod classify;
mod components;
mod grid;
mod palette;

pub use classify::{classify_point, Classification, Classifier, DEFAULT_MAX_ITER, DEFAULT_TRAP_RADIUS};
pub use components::{connected_components, Components};
pub use grid::{
    render_dynamical, render_parameter, render_parameter_tile, render_tile, tiles, BasinGrid, Cell, Chart, Tile,
    Viewport, TILE_SIZE,
};
pub use palette::{ImageBuffer, Palette};
