//! Canned jobs for the reproduced figures.

use std::path::Path;

use carpet_core::Complex;

use crate::config::{Command, JobConfig};
use crate::parse::ComplexArg;

pub const FIGURES: [&str; 3] = ["fig2a", "fig2b", "fig8a"];
pub const FIGURE_PX: usize = 1024;

/// Render job for `name`, writing `<name>.ppm`, `<name>.png` and
/// `<name>.json` into `dir`.
pub fn figure_config(name: &str, dir: &Path) -> Result<JobConfig, String> {
    let dynamical = |lam: f64| JobConfig {
        command: Some(Command::RenderDynamical),
        lambda: Some(ComplexArg(Complex::new(lam, 0.0))),
        // [-2, 3] x [-2.5, 2.5]
        center: Some(ComplexArg(Complex::new(0.5, 0.0))),
        width: Some(5.0),
        ..JobConfig::default()
    };
    let base = match name {
        "fig2a" => dynamical(1e-3),
        "fig2b" => dynamical(0.0),
        // |λ| <= 1e-2
        "fig8a" => JobConfig {
            command: Some(Command::RenderParameter),
            center: Some(ComplexArg(Complex::new(0.0, 0.0))),
            width: Some(0.02),
            ..JobConfig::default()
        },
        _ => return Err(format!("unknown figure `{name}`; expected one of {}", FIGURES.join(", "))),
    };
    Ok(JobConfig {
        px: Some(FIGURE_PX),
        py: Some(FIGURE_PX),
        seed: Some(0),
        out: Some(dir.join(format!("{name}.ppm"))),
        png: Some(dir.join(format!("{name}.png"))),
        meta: Some(dir.join(format!("{name}.json"))),
        ..base
    })
}
