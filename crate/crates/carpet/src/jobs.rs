//! Executes one [`JobConfig`] and produces its summary.

use std::fmt;
use std::path::{Path, PathBuf};

use carpet_core::family::{
    build_f_lambda, closed_form_coefficients, derive_coefficients, magnitude_ladder_check, orbit, solve_pcf_parameter,
    DEFAULT_LADDER_CONSTANT,
};
use carpet_core::hurwitz::{check_h1prime, construct_permutations, find_realization, BranchData, Permutation};
use carpet_core::moduli::{levels_from_moduli, solve_moduli, DEFAULT_GROTZSCH_CONSTANT, DEFAULT_LEVEL_MARGIN};
use carpet_core::render::{
    connected_components, BasinGrid, Chart, Classification, Classifier, ImageBuffer, Palette, Viewport,
    DEFAULT_MAX_ITER, DEFAULT_TRAP_RADIUS, TILE_SIZE,
};
use carpet_core::symbolic::{equivalent, quotient_class, word_distance, Subshift};
use carpet_core::trees::{builtin_tree, check_h1, is_unobstructed, TreeKind};
use carpet_core::{Complex, SpherePoint};
use serde_json::{json, Value};

use crate::config::{Command, JobConfig};
use crate::figures::figure_config;
use crate::formats::{save_orbit_csv, write_image, write_orbit_csv, TreeFile};
use crate::parallel::{self, lock_order_check, LockOrderCheck};
use crate::parse::{parse_rows, parse_word, ComplexArg};

pub const DEFAULT_PX: usize = 512;
pub const DEFAULT_ORBIT_STEPS: usize = 100;
pub const DEFAULT_LOCK_SAMPLES: usize = 1000;
pub const DEFAULT_DISTANCE_DEPTH: usize = 20;

/// What a job prints on standard output.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Json(Value),
    Text(String),
}

/// A failed job: `kind` names the error class for machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub kind: String,
    pub message: String,
}

impl JobError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        JobError { kind: kind.to_string(), message: message.into() }
    }

    fn config(message: impl Into<String>) -> Self {
        Self::new("config", message)
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message } })
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for JobError {}

impl From<carpet_core::Error> for JobError {
    fn from(e: carpet_core::Error) -> Self {
        JobError::new(e.kind(), e.to_string())
    }
}

impl From<std::io::Error> for JobError {
    fn from(e: std::io::Error) -> Self {
        JobError::new("io", e.to_string())
    }
}

impl From<anyhow::Error> for JobError {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<carpet_core::Error>() {
            Ok(core) => core.into(),
            Err(e) => JobError::config(format!("{e:#}")),
        }
    }
}

type JobResult<T> = Result<T, JobError>;

fn required<T: Clone>(v: &Option<T>, key: &str) -> JobResult<T> {
    v.clone().ok_or_else(|| JobError::config(format!("`{key}` is required")))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("summaries serialize")
}

fn complex(z: Complex) -> Value {
    json!([z.re, z.im])
}

/// `[re, im]` in the standard chart or `"infinity"`.
fn sphere(p: SpherePoint) -> Value {
    match p.to_complex() {
        Some(z) => complex(z),
        None => json!("infinity"),
    }
}

/// Runs exactly one subcommand and writes the outputs it declares.
pub fn run(cfg: &JobConfig) -> JobResult<Output> {
    let command = required(&cfg.command, "command")?;
    let json = match command {
        Command::TreeCheck => tree_check(cfg)?,
        Command::HurwitzCheck => hurwitz_check(cfg)?,
        Command::FamilyDerive => family_derive(cfg)?,
        Command::FamilyPcf => family_pcf(cfg)?,
        Command::FamilyLadder => family_ladder(cfg)?,
        Command::FamilyOrbit => return family_orbit(cfg),
        Command::SymbolicWords => return symbolic_words(cfg),
        Command::SymbolicQuotient => symbolic_quotient(cfg)?,
        Command::ModuliSolve => moduli_solve(cfg)?,
        Command::RenderDynamical => render_dynamical(cfg)?,
        Command::RenderParameter => render_parameter(cfg)?,
        Command::Reproduce => reproduce(cfg)?,
    };
    Ok(Output::Json(json))
}

fn tree_kind(s: &str) -> JobResult<TreeKind> {
    match s.to_ascii_uppercase().as_str() {
        "HP" => Ok(TreeKind::HP),
        "HQ" => Ok(TreeKind::HQ),
        "HR" => Ok(TreeKind::HR),
        _ => Err(JobError::config(format!("unknown tree kind `{s}`; expected HP, HQ or HR"))),
    }
}

fn tree_check(cfg: &JobConfig) -> JobResult<Value> {
    let (kind, tree) = match (&cfg.tree, &cfg.kind) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            (None, TreeFile::from_json(&text)?.into_tree()?)
        }
        (None, Some(k)) => {
            let kind = tree_kind(k)?;
            (Some(kind), builtin_tree(kind, &required(&cfg.weights, "weights")?)?)
        }
        _ => return Err(JobError::config("give exactly one of `kind` (with `weights`) or `tree`")),
    };
    let report = is_unobstructed(&tree)?;
    // the integrality condition concerns the three edges at the branching point
    let h1 = match kind {
        Some(TreeKind::HP | TreeKind::HR) => {
            let w = tree.weights();
            Some(check_h1(w[0], w[1], w[2]))
        }
        _ => None,
    };
    Ok(json!({
        "command": Command::TreeCheck.name(),
        "kind": kind.map(|k| format!("{k:?}")),
        "edges": tree.edge_count(),
        "weights": tree.weights(),
        "leading_eigenvalue": report.leading_eigenvalue,
        "perron_vector": report.perron_vector,
        "unobstructed": report.unobstructed,
        "h1": h1.map(|h| h.satisfied),
        "dhat": h1.and_then(|h| h.dhat),
    }))
}

/// `Some((d11, d21, d31))` when each of three rows has one entry above 1.
fn simple_profile(data: &BranchData) -> Option<(usize, usize, usize)> {
    let rows = data.rows();
    let lead = |r: &Vec<usize>| (r.iter().filter(|&&k| k > 1).count() == 1).then(|| r[0]);
    match rows {
        [a, b, c] => Some((lead(a)?, lead(b)?, lead(c)?)),
        _ => None,
    }
}

fn hurwitz_check(cfg: &JobConfig) -> JobResult<Value> {
    let d = required(&cfg.degree, "degree")?;
    let rows = parse_rows(&required(&cfg.rows, "rows")?).map_err(JobError::config)?;
    let data = BranchData::new(d, rows)?;
    let profile = simple_profile(&data);
    let h1prime = profile.map(|(a, b, c)| check_h1prime(d, a, b, c)).transpose()?;
    let (method, witness): (&str, Option<Vec<Permutation>>) = match (profile, h1prime) {
        (Some((a, b, c)), Some(true)) => {
            let (s1, s2, s3) = construct_permutations(d, a, b, c)?;
            ("construction", Some(vec![s1, s2, s3]))
        }
        (Some(_), Some(false)) => ("criterion", None),
        _ => ("search", find_realization(&data)?),
    };
    Ok(json!({
        "command": Command::HurwitzCheck.name(),
        "degree": d,
        "rows": data.rows(),
        "spherical": data.is_spherical(),
        "h1prime": h1prime,
        "realizable": witness.is_some(),
        "method": method,
        "witnesses": witness.map(|ps| ps.iter().map(Permutation::cycle_notation).collect::<Vec<_>>()),
    }))
}

fn lambda(cfg: &JobConfig) -> JobResult<Complex> {
    Ok(required(&cfg.lambda, "lambda")?.0)
}

fn family_derive(cfg: &JobConfig) -> JobResult<Value> {
    let lam = lambda(cfg)?;
    let f = build_f_lambda(lam)?;
    let (a1, b1p) = derive_coefficients(lam)?;
    let (a1_closed, b1p_closed) = closed_form_coefficients(lam);
    let k = cfg.ladder_constant.unwrap_or(DEFAULT_LADDER_CONSTANT);
    let ladder = magnitude_ladder_check(lam, k)?;
    Ok(json!({
        "command": Command::FamilyDerive.name(),
        "lambda": complex(lam),
        "a1": complex(a1),
        "b1p": complex(b1p),
        "a1_closed_form": complex(a1_closed),
        "b1p_closed_form": complex(b1p_closed),
        "lambda_prime": complex(f.free_critical),
        "degree": f.map.degree(),
        "verified": f.verified,
        "cycle_residuals": to_value(&f.residuals()?),
        "ladder_report": ladder_json(&ladder),
    }))
}

fn ladder_json(r: &carpet_core::family::LadderReport) -> Value {
    json!({
        "constant": r.constant,
        "all_hold": r.all_hold(),
        "claims": to_value(&r.claims),
    })
}

fn family_pcf(cfg: &JobConfig) -> JobResult<Value> {
    let p = solve_pcf_parameter(required(&cfg.period, "period")?)?;
    Ok(json!({
        "command": Command::FamilyPcf.name(),
        "period": p.period,
        "c": complex(p.c),
        "count": p.all_roots.len(),
        "all_roots": p.all_roots.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
    }))
}

fn family_ladder(cfg: &JobConfig) -> JobResult<Value> {
    let lam = lambda(cfg)?;
    let r = magnitude_ladder_check(lam, cfg.ladder_constant.unwrap_or(DEFAULT_LADDER_CONSTANT))?;
    let mut v = ladder_json(&r);
    v["command"] = json!(Command::FamilyLadder.name());
    v["lambda"] = complex(lam);
    Ok(v)
}

fn orbit_start(s: &str, free_critical: Complex) -> JobResult<SpherePoint> {
    match s.trim() {
        "critical" => Ok(SpherePoint::new(free_critical)),
        "inf" | "infinity" => Ok(SpherePoint::INFINITY),
        other => Ok(SpherePoint::new(other.parse::<ComplexArg>().map_err(JobError::config)?.0)),
    }
}

fn family_orbit(cfg: &JobConfig) -> JobResult<Output> {
    let f = build_f_lambda(lambda(cfg)?)?;
    let start = orbit_start(cfg.start.as_deref().unwrap_or("critical"), f.free_critical)?;
    let steps = cfg.steps.unwrap_or(DEFAULT_ORBIT_STEPS);
    let o = orbit(&f.map, start, steps);
    match &cfg.out {
        None => {
            let mut buf = Vec::new();
            write_orbit_csv(&o, &mut buf)?;
            Ok(Output::Text(String::from_utf8(buf).expect("csv is ascii")))
        }
        Some(path) => {
            save_orbit_csv(&o, path)?;
            Ok(Output::Json(json!({
                "command": Command::FamilyOrbit.name(),
                "lambda": complex(f.parameter),
                "start": sphere(start),
                "steps": o.points.len() - 1,
                "degenerate": o.degenerate,
                "last": sphere(*o.points.last().expect("orbit has its start")),
                "outputs": { "csv": path },
            })))
        }
    }
}

fn symbolic_words(cfg: &JobConfig) -> JobResult<Output> {
    let depth = required(&cfg.depth, "depth")?;
    let shift = Subshift::tree();
    let words = shift.admissible_words(depth)?;
    let mut text = String::with_capacity(words.len() * (depth + 1));
    for w in &words {
        text.extend(w.iter().map(|&d| char::from(b'0' + d)));
        text.push('\n');
    }
    match &cfg.out {
        None => Ok(Output::Text(text)),
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(Output::Json(json!({
                "command": Command::SymbolicWords.name(),
                "depth": depth,
                "count": words.len(),
                "outputs": { "words": path },
            })))
        }
    }
}

fn symbolic_quotient(cfg: &JobConfig) -> JobResult<Value> {
    let shift = Subshift::tree();
    let s = parse_word(&shift, &required(&cfg.s, "s")?).map_err(JobError::config)?;
    let t = parse_word(&shift, &required(&cfg.sp, "sp")?).map_err(JobError::config)?;
    let eq = equivalent(&s, &t)?;
    let depth = cfg.depth.unwrap_or(DEFAULT_DISTANCE_DEPTH);
    let dist = word_distance(&s, &t, depth)?;
    let class = |w| {
        let q = quotient_class(w);
        json!({ "representative": q.representative.to_string(), "collapsed": q.collapsed })
    };
    Ok(json!({
        "command": Command::SymbolicQuotient.name(),
        "s": s.to_string(),
        "sp": t.to_string(),
        "related": eq.related,
        "witness": eq.witness,
        "s_class": class(&s),
        "sp_class": class(&t),
        "distance": { "depth": depth, "lo": dist.lo, "hi": dist.hi },
    }))
}

fn moduli_solve(cfg: &JobConfig) -> JobResult<Value> {
    let w = required(&cfg.weights, "weights")?;
    let weights: [u32; 4] =
        w.as_slice().try_into().map_err(|_| JobError::config(format!("moduli take 4 weights, got {}", w.len())))?;
    let sol = solve_moduli(weights, cfg.c.unwrap_or(DEFAULT_GROTZSCH_CONSTANT))?;
    let levels = levels_from_moduli(&sol, cfg.level_margin.unwrap_or(DEFAULT_LEVEL_MARGIN))?;
    Ok(json!({
        "command": Command::ModuliSolve.name(),
        "weights": sol.weights,
        "c": sol.grotzsch_constant,
        "x": sol.x,
        "mu": sol.mu,
        "margins": sol.margins,
        "levels": to_value(&levels),
    }))
}

fn chart(cfg: &JobConfig) -> JobResult<Chart> {
    match cfg.chart.as_deref().unwrap_or("standard") {
        "standard" => Ok(Chart::Standard),
        "inverted" => Ok(Chart::Inverted),
        other => Err(JobError::config(format!("unknown chart `{other}`; expected standard or inverted"))),
    }
}

fn viewport(cfg: &JobConfig, default_center: Complex, default_width: f64) -> JobResult<Viewport> {
    let px = cfg.px.unwrap_or(DEFAULT_PX);
    let py = cfg.py.unwrap_or(px);
    let width = cfg.width.unwrap_or(default_width);
    let height = cfg.height.unwrap_or(width * py as f64 / px.max(1) as f64);
    let center = cfg.center.map_or(default_center, |c| c.0);
    Ok(Viewport::new(center, width, height, px, py)?.with_chart(chart(cfg)?))
}

/// The map to render and its marked cycle; `λ = 0` gives `f₀` with `[0, 1, ∞]`.
pub fn dynamical_classifier(lam: Complex, max_iter: u32, trap_radius: f64) -> JobResult<Classifier> {
    let f = build_f_lambda(lam)?;
    let cycle = if lam == Complex::new(0.0, 0.0) { f.cycle[..3].to_vec() } else { f.cycle.to_vec() };
    Ok(Classifier::clamped(f.map, cycle, max_iter, trap_radius)?)
}

fn histogram_json(grid: &BasinGrid, basins: usize) -> Value {
    let h = grid.histogram(basins);
    json!({ "basins": &h[..basins], "undecided": h[basins], "degenerate": h[basins + 1] })
}

fn undecided_components(grid: &BasinGrid) -> usize {
    connected_components(grid, |c| c == Classification::Undecided).count
}

/// Image outputs: `out` by extension, optional extra `png`, and the sidecar
/// `meta`, which defaults to `out` with a `.json` extension.
struct RenderOutputs {
    image: Option<PathBuf>,
    png: Option<PathBuf>,
    meta: Option<PathBuf>,
}

impl RenderOutputs {
    fn from_config(cfg: &JobConfig) -> Self {
        let meta = cfg.meta.clone().or_else(|| cfg.out.as_ref().map(|p| p.with_extension("json")));
        RenderOutputs { image: cfg.out.clone(), png: cfg.png.clone(), meta }
    }

    fn json(&self) -> Value {
        json!({ "image": self.image, "png": self.png, "meta": self.meta })
    }

    fn write(&self, grid: &BasinGrid, summary: &Value) -> JobResult<()> {
        if self.image.is_some() || self.png.is_some() {
            let img = ImageBuffer::from_grid(grid, &Palette::default());
            for path in self.image.iter().chain(self.png.iter()) {
                write_image(&img, path)?;
            }
        }
        if let Some(path) = &self.meta {
            write_json(path, summary)?;
        }
        Ok(())
    }
}

fn write_json(path: &Path, v: &Value) -> JobResult<()> {
    let mut text = serde_json::to_string_pretty(v).expect("summaries serialize");
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

fn view_json(view: &Viewport) -> Value {
    json!({
        "center": complex(view.center),
        "width": view.width,
        "height": view.height,
        "px": view.px_w,
        "py": view.px_h,
        "chart": to_value(&view.chart),
    })
}

fn render_dynamical(cfg: &JobConfig) -> JobResult<Value> {
    let lam = cfg.lambda.map_or(Complex::new(1e-3, 0.0), |l| l.0);
    let view = viewport(cfg, Complex::new(0.5, 0.0), 5.0)?;
    let max_iter = cfg.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    let trap = cfg.trap_radius.unwrap_or(DEFAULT_TRAP_RADIUS);
    let classifier = dynamical_classifier(lam, max_iter, trap)?;
    let grid = parallel::render_dynamical(&classifier, &view, parallel::workers_from_env()?)?;
    let seed = cfg.seed.unwrap_or(0);
    let samples = cfg.samples.unwrap_or(DEFAULT_LOCK_SAMPLES);
    let check: LockOrderCheck = lock_order_check(&classifier, &view, &grid, samples, seed);
    let p = classifier.cycle().len();
    let basin_components: Vec<usize> =
        (0..p as u8).map(|k| connected_components(&grid, |c| c == Classification::Basin(k)).count).collect();
    let outputs = RenderOutputs::from_config(cfg);
    let summary = json!({
        "command": Command::RenderDynamical.name(),
        "parameters": {
            "lambda": complex(lam),
            "cycle": classifier.cycle().iter().map(|&q| sphere(q)).collect::<Vec<_>>(),
            "viewport": view_json(&view),
            "max_iter": max_iter,
            "trap_radius": trap,
            "effective_trap_radius": classifier.trap_radius(),
            "tile_size": TILE_SIZE,
            "seed": seed,
        },
        "histogram": histogram_json(&grid, p),
        "components": { "undecided": undecided_components(&grid), "basins": basin_components },
        "lock_order": to_value(&check),
        "outputs": outputs.json(),
    });
    outputs.write(&grid, &summary)?;
    Ok(summary)
}

fn render_parameter(cfg: &JobConfig) -> JobResult<Value> {
    let view = viewport(cfg, Complex::new(0.0, 0.0), 0.02)?;
    let max_iter = cfg.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    let trap = cfg.trap_radius.unwrap_or(DEFAULT_TRAP_RADIUS);
    let grid = parallel::render_parameter(&view, max_iter, trap, parallel::workers_from_env()?)?;
    let outputs = RenderOutputs::from_config(cfg);
    let summary = json!({
        "command": Command::RenderParameter.name(),
        "parameters": {
            "viewport": view_json(&view),
            "max_iter": max_iter,
            "trap_radius": trap,
            "tile_size": TILE_SIZE,
        },
        "histogram": histogram_json(&grid, 4),
        "components": {
            "decided": connected_components(&grid, Classification::is_decided).count,
            "undecided": undecided_components(&grid),
        },
        "outputs": outputs.json(),
    });
    outputs.write(&grid, &summary)?;
    Ok(summary)
}

fn reproduce(cfg: &JobConfig) -> JobResult<Value> {
    let name = required(&cfg.figure, "figure")?;
    let dir = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let job = figure_config(&name, &dir).map_err(JobError::config)?;
    std::fs::create_dir_all(&dir)?;
    match run(&job)? {
        Output::Json(mut v) => {
            v["figure"] = json!(name);
            // the sidecar written by the render omits the figure name; rewrite it
            if let Some(meta) = &job.meta {
                write_json(meta, &v)?;
            }
            Ok(v)
        }
        Output::Text(_) => unreachable!("figure jobs are renders"),
    }
}
