use clap::Parser;
use geodesic_center::io::pipeline::{run, Emit, RunConfig, EXIT_USAGE};
use geodesic_center::io::{gen_random_polygon, save_polygon};
use std::path::PathBuf;
use std::process::ExitCode;

/// Geodesic edge center and boundary farthest-edge Voronoi diagram of simple polygons.
#[derive(Parser, Debug)]
#[command(name = "gcenter", version)]
struct Cli {
    /// Polygon files (.json or .poly); repeatable.
    #[arg(long = "input", short = 'i')]
    inputs: Vec<PathBuf>,
    /// Directory for artifacts.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Artifacts to write: center, voronoi, cover, svg (or all).
    #[arg(long, default_value = "center,voronoi")]
    emit: String,
    /// Seed for perturbation and generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Jitter vertices by this fraction of the diameter before solving.
    #[arg(long)]
    perturb: Option<f64>,
    /// Final solve tolerance as a fraction of the diameter.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Generate a random polygon, `n=<count>`, save it to the output directory and solve it.
    #[arg(long)]
    gen: Option<String>,
}

fn usage_error(msg: &str) -> ExitCode {
    println!("{}", serde_json::json!({ "exit_code": EXIT_USAGE, "error": { "kind": "usage", "message": msg } }));
    ExitCode::from(EXIT_USAGE as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.kind() == clap::error::ErrorKind::DisplayHelp || e.kind() == clap::error::ErrorKind::DisplayVersion => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return usage_error(e.to_string().trim()),
    };
    let emit = match Emit::parse(&cli.emit) {
        Ok(e) => e,
        Err(msg) => return usage_error(&msg),
    };
    let mut inputs = cli.inputs;
    if let Some(arg) = &cli.gen {
        let n = match arg.strip_prefix("n=").and_then(|v| v.parse::<usize>().ok()) {
            Some(n) => n,
            None => return usage_error(&format!("--gen expects n=<count>, got `{arg}`")),
        };
        let poly = match gen_random_polygon(n, cli.seed) {
            Ok(p) => p,
            Err(e) => return usage_error(&e.to_string()),
        };
        let path = cli.out_dir.join(format!("random-n{n}-s{}.json", cli.seed));
        if let Err(e) = std::fs::create_dir_all(&cli.out_dir).and_then(|_| save_polygon(&poly, &path)) {
            return usage_error(&e.to_string());
        }
        inputs.push(path);
    }
    let cfg = RunConfig { inputs, out_dir: cli.out_dir, emit, tolerance: cli.tolerance, perturb: cli.perturb, seed: cli.seed };
    let report = run(&cfg);
    for o in &report.outcomes {
        match &o.error {
            Some(err) => println!("{err}"),
            None => {
                let files: Vec<String> = o.artifacts.iter().map(|p| p.display().to_string()).collect();
                println!("{}", serde_json::json!({ "input": o.input.display().to_string(), "exit_code": 0, "artifacts": files, "warnings": o.warnings.len() }));
            }
        }
    }
    ExitCode::from(report.exit_code as u8)
}
