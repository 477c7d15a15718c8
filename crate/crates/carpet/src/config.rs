//! Flat key-value job description shared by config files and flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::parse::ComplexArg;

/// The subcommand a job runs, named as on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Command {
    #[serde(rename = "tree check")]
    TreeCheck,
    #[serde(rename = "hurwitz check")]
    HurwitzCheck,
    #[serde(rename = "family derive")]
    FamilyDerive,
    #[serde(rename = "family pcf")]
    FamilyPcf,
    #[serde(rename = "family ladder")]
    FamilyLadder,
    #[serde(rename = "family orbit")]
    FamilyOrbit,
    #[serde(rename = "symbolic words")]
    SymbolicWords,
    #[serde(rename = "symbolic quotient")]
    SymbolicQuotient,
    #[serde(rename = "moduli solve")]
    ModuliSolve,
    #[serde(rename = "render dynamical")]
    RenderDynamical,
    #[serde(rename = "render parameter")]
    RenderParameter,
    #[serde(rename = "reproduce")]
    Reproduce,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::TreeCheck => "tree check",
            Command::HurwitzCheck => "hurwitz check",
            Command::FamilyDerive => "family derive",
            Command::FamilyPcf => "family pcf",
            Command::FamilyLadder => "family ladder",
            Command::FamilyOrbit => "family orbit",
            Command::SymbolicWords => "symbolic words",
            Command::SymbolicQuotient => "symbolic quotient",
            Command::ModuliSolve => "moduli solve",
            Command::RenderDynamical => "render dynamical",
            Command::RenderParameter => "render parameter",
            Command::Reproduce => "reproduce",
        }
    }
}

/// One job: a subcommand plus every parameter it reads.
///
/// Keys mirror the long flags with `-` replaced by `_`. Unset keys take the
/// subcommand's defaults; keys a subcommand does not read are ignored by it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// At most `i64::MAX`, the largest TOML integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<PathBuf>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<ComplexArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sp: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_margin: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<ComplexArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub px: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub py: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trap_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub png: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),* $(,)?) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl JobConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Fails only for a seed beyond the TOML integer range.
    pub fn to_toml(&self) -> Result<String, toml::ser::Error> {
        toml::to_string(self)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        Self::from_toml(&text).map_err(|e| anyhow::anyhow!("config {}: {}", path.display(), e.message()))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(mut self, top: JobConfig) -> JobConfig {
        overlay!(
            self,
            top,
            command,
            seed,
            kind,
            weights,
            tree,
            degree,
            rows,
            lambda,
            period,
            ladder_constant,
            start,
            steps,
            depth,
            s,
            sp,
            c,
            level_margin,
            center,
            width,
            height,
            px,
            py,
            max_iter,
            trap_radius,
            chart,
            samples,
            figure,
            out,
            png,
            meta,
            out_dir,
        );
        self
    }
}
