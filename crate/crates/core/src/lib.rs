//! Rational maps with buried Julia components.
//!
//! This crate holds the allocation-only algorithmic core: complex numerics on
//! the Riemann sphere, weighted dynamical trees and their transition matrices,
//! Hurwitz branch data, the explicit cubic family `f_λ` ("Persian carpets"),
//! the symbolic model of its Julia-component dynamics, modulus bookkeeping,
//! and basin classification for rendering. Everything here is `no_std`; file
//! formats, the CLI and thread-parallel rendering live in the `carpet` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod family;
pub mod hurwitz;
pub mod moduli;
pub mod numerics;
pub mod render;
pub mod symbolic;
pub mod trees;

pub use error::{Error, Result};
pub use numerics::{Complex, MobiusMap, Polynomial, RationalMap, SpherePoint};
