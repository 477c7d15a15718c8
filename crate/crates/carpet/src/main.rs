use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use carpet::parse::ComplexArg;
use carpet::{run, Command, JobConfig, JobError, Output};
use clap::{Args, Parser, Subcommand};

/// Persian-carpet rational maps: trees, branch data, the cubic family,
/// symbolic dynamics, moduli and renders.
#[derive(Parser, Debug)]
#[command(name = "carpet", version)]
struct Cli {
    /// TOML job file; flags given on the command line override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective job as TOML instead of running it.
    #[arg(long, global = true)]
    print_config: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Option<Top>,
}

#[derive(Subcommand, Debug)]
enum Top {
    /// Weighted dynamical trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Branch data realizability.
    #[command(subcommand)]
    Hurwitz(HurwitzCmd),
    /// The cubic family and its critically finite companions.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Symbolic dynamics of the Julia components.
    #[command(subcommand)]
    Symbolic(SymbolicCmd),
    /// Annulus moduli.
    #[command(subcommand)]
    Moduli(ModuliCmd),
    /// Dynamical and parameter plane images.
    #[command(subcommand)]
    Render(RenderCmd),
    /// Render a canned figure at 1024x1024.
    Reproduce(ReproduceArgs),
}

#[derive(Subcommand, Debug)]
enum TreeCmd {
    /// Leading eigenvalue, obstruction and the integrality condition.
    Check(TreeArgs),
}

#[derive(Args, Debug)]
struct TreeArgs {
    /// Built-in tree: HP, HQ or HR.
    #[arg(long)]
    kind: Option<String>,
    /// Edge weights, e.g. 1,2,2,1.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
    /// Tree JSON file {"edges", "images", "weights"} instead of a built-in kind.
    #[arg(long)]
    tree: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum HurwitzCmd {
    /// Whether the branch data is realized by a covering of the sphere.
    Check(HurwitzArgs),
}

#[derive(Args, Debug)]
struct HurwitzArgs {
    #[arg(long)]
    degree: Option<usize>,
    /// Local degrees, rows separated by `;`, e.g. "3;2,1;2,1".
    #[arg(long, allow_hyphen_values = true)]
    rows: Option<String>,
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    /// Coefficients, free critical point, cycle residuals and the magnitude ladder.
    Derive(LambdaArgs),
    /// Parameter with 0 periodic of exact period n under z^2 + c.
    Pcf(PcfArgs),
    /// Order-of-magnitude image claims near the cycle.
    Ladder(LambdaArgs),
    /// Forward orbit as CSV (step,re,im,chart).
    Orbit(OrbitArgs),
}

#[derive(Args, Debug)]
struct LambdaArgs {
    /// Parameter, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<ComplexArg>,
    /// Constant in the magnitude ladder bounds.
    #[arg(long)]
    ladder_constant: Option<f64>,
}

#[derive(Args, Debug)]
struct PcfArgs {
    #[arg(long)]
    period: Option<u32>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<ComplexArg>,
    /// `critical` (the free critical point), `inf`, or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    start: Option<String>,
    #[arg(long)]
    steps: Option<usize>,
    /// CSV file; without it the CSV goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SymbolicCmd {
    /// Admissible words of a given length, one per line.
    Words(WordsArgs),
    /// Whether two eventually periodic words are identified.
    Quotient(QuotientArgs),
}

#[derive(Args, Debug)]
struct WordsArgs {
    #[arg(long)]
    depth: Option<usize>,
    /// Write the words here and print a summary instead.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuotientArgs {
    /// Word `pre(period)`, e.g. 3(012).
    #[arg(long)]
    s: Option<String>,
    /// Second word in the same notation.
    #[arg(long)]
    sp: Option<String>,
    /// Digits summed in the reported distance.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum ModuliCmd {
    /// Moduli satisfying the four annulus inequalities.
    Solve(ModuliArgs),
}

#[derive(Args, Debug)]
struct ModuliArgs {
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
    /// Grötzsch constant.
    #[arg(long)]
    c: Option<f64>,
    /// Extra modulus factor used when deriving equipotential levels.
    #[arg(long)]
    level_margin: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum RenderCmd {
    /// Basins of the marked cycle in the dynamical plane.
    Dynamical(DynamicalArgs),
    /// Fate of the free critical point over a region of parameters.
    Parameter(ViewArgs),
}

#[derive(Args, Debug)]
struct DynamicalArgs {
    /// 0 renders the quadratic limit map.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<ComplexArg>,
    /// Lock-order samples checked after the render.
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    view: ViewArgs,
}

#[derive(Args, Debug)]
struct ViewArgs {
    #[arg(long, allow_hyphen_values = true)]
    center: Option<ComplexArg>,
    #[arg(long)]
    width: Option<f64>,
    /// Defaults to keep square pixels.
    #[arg(long)]
    height: Option<f64>,
    /// Horizontal pixel count.
    #[arg(long)]
    px: Option<usize>,
    /// Vertical pixel count, default px.
    #[arg(long)]
    py: Option<usize>,
    #[arg(long)]
    max_iter: Option<u32>,
    /// Chordal trap radius; shrunk to a quarter of the cycle separation when too large.
    #[arg(long)]
    trap_radius: Option<f64>,
    /// `standard` (z) or `inverted` (1/z).
    #[arg(long)]
    chart: Option<String>,
    /// Image file, PPM unless it ends in .png.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additional PNG file.
    #[arg(long)]
    png: Option<PathBuf>,
    /// JSON sidecar, default `out` with a .json extension.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// fig2a, fig2b or fig8a.
    figure: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl ViewArgs {
    fn into_config(self, cfg: JobConfig) -> JobConfig {
        JobConfig {
            center: self.center,
            width: self.width,
            height: self.height,
            px: self.px,
            py: self.py,
            max_iter: self.max_iter,
            trap_radius: self.trap_radius,
            chart: self.chart,
            out: self.out,
            png: self.png,
            meta: self.meta,
            ..cfg
        }
    }
}

/// The flags given on the command line as a partial job.
fn flags_config(top: Top) -> JobConfig {
    let with = |command| JobConfig { command: Some(command), ..JobConfig::default() };
    match top {
        Top::Tree(TreeCmd::Check(a)) => {
            JobConfig { kind: a.kind, weights: a.weights, tree: a.tree, ..with(Command::TreeCheck) }
        }
        Top::Hurwitz(HurwitzCmd::Check(a)) => {
            JobConfig { degree: a.degree, rows: a.rows, ..with(Command::HurwitzCheck) }
        }
        Top::Family(FamilyCmd::Derive(a)) => {
            JobConfig { lambda: a.lambda, ladder_constant: a.ladder_constant, ..with(Command::FamilyDerive) }
        }
        Top::Family(FamilyCmd::Ladder(a)) => {
            JobConfig { lambda: a.lambda, ladder_constant: a.ladder_constant, ..with(Command::FamilyLadder) }
        }
        Top::Family(FamilyCmd::Pcf(a)) => JobConfig { period: a.period, ..with(Command::FamilyPcf) },
        Top::Family(FamilyCmd::Orbit(a)) => {
            JobConfig { lambda: a.lambda, start: a.start, steps: a.steps, out: a.out, ..with(Command::FamilyOrbit) }
        }
        Top::Symbolic(SymbolicCmd::Words(a)) => {
            JobConfig { depth: a.depth, out: a.out, ..with(Command::SymbolicWords) }
        }
        Top::Symbolic(SymbolicCmd::Quotient(a)) => {
            JobConfig { s: a.s, sp: a.sp, depth: a.depth, ..with(Command::SymbolicQuotient) }
        }
        Top::Moduli(ModuliCmd::Solve(a)) => {
            JobConfig { weights: a.weights, c: a.c, level_margin: a.level_margin, ..with(Command::ModuliSolve) }
        }
        Top::Render(RenderCmd::Dynamical(a)) => {
            a.view.into_config(JobConfig { lambda: a.lambda, samples: a.samples, ..with(Command::RenderDynamical) })
        }
        Top::Render(RenderCmd::Parameter(v)) => v.into_config(with(Command::RenderParameter)),
        Top::Reproduce(a) => JobConfig { figure: a.figure, out_dir: a.out_dir, ..with(Command::Reproduce) },
    }
}

fn effective_config(cli: Cli) -> Result<JobConfig, JobError> {
    let file = match &cli.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    let mut flags = cli.command.map(flags_config).unwrap_or_default();
    flags.seed = cli.seed;
    if let (Some(a), Some(b)) = (file.command, flags.command) {
        if a != b {
            return Err(JobError::new(
                "config",
                format!("config file runs `{}` but the command line asks for `{}`", a.name(), b.name()),
            ));
        }
    }
    Ok(file.overlay(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let print_config = cli.print_config;
    let result = effective_config(cli).and_then(|cfg| {
        if print_config {
            cfg.to_toml().map(Output::Text).map_err(|e| JobError::new("config", e.to_string()))
        } else {
            run(&cfg)
        }
    });
    let mut stdout = std::io::stdout().lock();
    let (text, code) = match result {
        Ok(Output::Json(v)) => (format!("{}\n", serde_json::to_string_pretty(&v).expect("json")), ExitCode::SUCCESS),
        Ok(Output::Text(t)) => (t, ExitCode::SUCCESS),
        Err(e) => (format!("{}\n", e.to_json()), ExitCode::FAILURE),
    };
    // a closed pipe is not an error worth reporting
    let _ = stdout.write_all(text.as_bytes());
    code
}
