//! One configured run over input files, writing JSON and SVG artifacts.

use super::format::load_polygon;
use super::svg::{render_svg, SvgLayers};
use super::round_json;
use crate::center::{run_pipeline_with, CenterOptions, CenterRun};
use crate::geom::{validate_general_position, Point2, PolygonBoundary};
use crate::shortest_paths::Domain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Emit {
    pub center: bool,
    pub voronoi: bool,
    pub cover: bool,
    pub svg: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Emit { center: true, voronoi: true, cover: false, svg: false }
    }
}

impl Emit {
    /// Parses a comma list such as `center,voronoi,svg`.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut e = Emit { center: false, voronoi: false, cover: false, svg: false };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "center" => e.center = true,
                "voronoi" => e.voronoi = true,
                "cover" => e.cover = true,
                "svg" => e.svg = true,
                "all" => e = Emit { center: true, voronoi: true, cover: true, svg: true },
                other => return Err(format!("unknown artifact `{other}`")),
            }
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub emit: Emit,
    /// `eps_center` as a fraction of the diameter.
    pub tolerance: f64,
    /// Vertex jitter as a fraction of the diameter.
    pub perturb: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(inputs: Vec<PathBuf>, out_dir: PathBuf) -> Self {
        RunConfig { inputs, out_dir, emit: Emit::default(), tolerance: CenterOptions::default().eps_center_rel, perturb: None, seed: 0 }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.inputs.is_empty() {
            return Err("no input files".into());
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if let Some(p) = self.perturb {
            if !(p.is_finite() && p > 0.0) {
                return Err(format!("perturbation must be positive, got {p}"));
            }
        }
        Ok(())
    }
}

/// Result for one input file.
#[derive(Clone, Debug, PartialEq)]
pub struct InputOutcome {
    pub input: PathBuf,
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
    pub warnings: Vec<String>,
    /// Machine-readable error, when `exit_code` is nonzero.
    pub error: Option<Value>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    /// Worst code over all inputs.
    pub exit_code: i32,
    pub outcomes: Vec<InputOutcome>,
}

/// Jitters every vertex by up to `mag * diam` per coordinate, retrying when
/// the result is not simple.
pub fn perturb_polygon(poly: &PolygonBoundary, mag: f64, seed: u64) -> Option<PolygonBoundary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = mag * poly.diameter();
    for _ in 0..16 {
        let pts: Vec<Point2> = poly.vertices().iter().map(|p| *p + Point2::new(rng.gen_range(-d..=d), rng.gen_range(-d..=d))).collect();
        if let Ok(p) = PolygonBoundary::new(pts) {
            return Some(p);
        }
    }
    None
}

fn error_json(input: &Path, code: i32, error: Value) -> Value {
    json!({ "input": input.display().to_string(), "exit_code": code, "error": error })
}

fn write_json(path: &Path, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    std::fs::write(path, text)
}

fn stem(input: &Path) -> String {
    input.file_stem().and_then(|s| s.to_str()).unwrap_or("polygon").to_string()
}

fn fail(cfg: &RunConfig, input: &Path, code: i32, error: Value, warnings: Vec<String>) -> InputOutcome {
    let err = error_json(input, code, error);
    let path = cfg.out_dir.join(format!("{}.error.json", stem(input)));
    let artifacts = if write_json(&path, &err).is_ok() { vec![path] } else { Vec::new() };
    InputOutcome { input: input.to_path_buf(), exit_code: code, artifacts, warnings, error: Some(err) }
}

/// Runs the whole pipeline on one file.
pub fn run_one(cfg: &RunConfig, input: &Path) -> InputOutcome {
    let poly = match load_polygon(input) {
        Ok(p) => p,
        Err(e) => return fail(cfg, input, EXIT_USAGE, e.to_json(), Vec::new()),
    };
    let mut warnings = Vec::new();
    if poly.was_reversed() {
        warnings.push("input was clockwise; vertices reversed".to_string());
    }
    let poly = match cfg.perturb {
        Some(mag) => match perturb_polygon(&poly, mag, cfg.seed) {
            Some(p) => {
                warnings.push(format!("vertices perturbed by up to {mag:e} x diameter (seed {})", cfg.seed));
                p
            }
            None => return fail(cfg, input, EXIT_COMPUTE, json!({ "kind": "perturbation", "message": "no simple polygon after perturbation" }), warnings),
        },
        None => poly,
    };
    for v in validate_general_position(&poly).violations {
        warnings.push(format!("general position: {v:?}"));
    }
    let opts = CenterOptions { eps_center_rel: cfg.tolerance };
    let computed = catch_unwind(AssertUnwindSafe(|| {
        let dom = Domain::new(poly.clone());
        let run = run_pipeline_with(&dom, &opts);
        (dom, run)
    }));
    let (dom, run) = match computed {
        Ok((dom, Ok(run))) => (dom, run),
        Ok((_, Err(e))) => return fail(cfg, input, EXIT_COMPUTE, json!({ "kind": "computation", "message": e.to_string() }), warnings),
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "internal error".into());
            return fail(cfg, input, EXIT_COMPUTE, json!({ "kind": "internal", "message": msg }), warnings);
        }
    };
    warnings.extend(run.warnings.iter().cloned());
    match write_artifacts(cfg, input, &dom, &run, &warnings) {
        Ok(artifacts) => InputOutcome { input: input.to_path_buf(), exit_code: EXIT_OK, artifacts, warnings, error: None },
        Err(e) => fail(cfg, input, EXIT_USAGE, json!({ "kind": "io", "message": e.to_string() }), warnings),
    }
}

fn write_artifacts(cfg: &RunConfig, input: &Path, dom: &Domain, run: &CenterRun, warnings: &[String]) -> std::io::Result<Vec<PathBuf>> {
    let base = stem(input);
    let mut out = Vec::new();
    let mut put = |suffix: &str, v: Value| -> std::io::Result<()> {
        let path = cfg.out_dir.join(format!("{base}.{suffix}.json"));
        write_json(&path, &round_json(v))?;
        out.push(path);
        Ok(())
    };
    if cfg.emit.center {
        let mut v = run.result.to_json();
        v["input"] = json!(input.display().to_string());
        v["n"] = json!(dom.n());
        v["diameter"] = json!(dom.diam);
        v["seed"] = json!(cfg.seed);
        v["warnings"] = json!(warnings);
        put("center", v)?;
    }
    if cfg.emit.voronoi {
        let mut v = run.voronoi.to_json();
        v["violations"] = serde_json::to_value(&run.voronoi.violations).expect("serializable");
        put("voronoi", v)?;
    }
    if cfg.emit.cover {
        put("cover", run.cover.to_json())?;
    }
    if cfg.emit.svg {
        let path = cfg.out_dir.join(format!("{base}.svg"));
        std::fs::write(&path, render_svg(dom, run, SvgLayers { funnels: true, cover: cfg.emit.cover }))?;
        out.push(path);
    }
    Ok(out)
}

/// Processes every input, in parallel, and reports the worst exit code.
pub fn run(cfg: &RunConfig) -> RunReport {
    if let Err(msg) = cfg.validate() {
        let err = json!({ "exit_code": EXIT_USAGE, "error": { "kind": "usage", "message": msg } });
        let _ = std::fs::create_dir_all(&cfg.out_dir).and_then(|_| write_json(&cfg.out_dir.join("error.json"), &err));
        return RunReport {
            exit_code: EXIT_USAGE,
            outcomes: vec![InputOutcome { input: PathBuf::new(), exit_code: EXIT_USAGE, artifacts: Vec::new(), warnings: Vec::new(), error: Some(err) }],
        };
    }
    if let Err(e) = std::fs::create_dir_all(&cfg.out_dir) {
        let err = json!({ "exit_code": EXIT_USAGE, "error": { "kind": "io", "message": e.to_string() } });
        return RunReport {
            exit_code: EXIT_USAGE,
            outcomes: vec![InputOutcome { input: PathBuf::new(), exit_code: EXIT_USAGE, artifacts: Vec::new(), warnings: Vec::new(), error: Some(err) }],
        };
    }
    let outcomes: Vec<InputOutcome> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg.inputs.iter().map(|p| s.spawn(move || run_one(cfg, p))).collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let exit_code = outcomes.iter().map(|o| o.exit_code).max().unwrap_or(EXIT_OK);
    RunReport { exit_code, outcomes }
}
