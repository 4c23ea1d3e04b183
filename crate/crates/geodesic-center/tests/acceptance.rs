//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use common::*;
use geodesic_center::boundary_voronoi::boundary_voronoi_full;
use geodesic_center::center::{compute_edge_center, run_pipeline, CenterResult};
use geodesic_center::farthest::{farthest_edge_per_vertex, naive_row_maxima, smawk, ExplicitMatrix};
use geodesic_center::geom::validate_general_position;
use geodesic_center::io::gen_random_polygon;
use geodesic_center::io::pipeline::{perturb_polygon, run, Emit, RunConfig, EXIT_OK};
use geodesic_center::io::save_polygon;
use geodesic_center::oracle::{brute_boundary_voronoi, brute_center, brute_radius, vis_edge_dists, GridSpec};
use geodesic_center::{BoundaryCursor, Domain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Corpus size, `n` range and seeds shared by criteria 2 to 6.
const CORPUS: u64 = 200;
const CORPUS_SEED: u64 = 0;
const ANALYTIC_TOL: f64 = 1e-9;
const ANALYTIC_TIME: Duration = Duration::from_secs(1);
const BRUTE_TOL_REL: f64 = 1e-6;
const CONSISTENCY_REL: f64 = 1e-9;
const CORPUS_TIME: Duration = Duration::from_secs(300);
const BOUNDARY_SAMPLES: usize = 64;
const BREAKPOINT_CLEARANCE_REL: f64 = 1e-6;
const SMAWK_MATRICES: usize = 500;
const SMAWK_MAX: usize = 64;
const QUADRUPLES: usize = 10_000;
const GEODESICS: usize = 100;
const COVERAGE_SAMPLES: usize = 1_000;
const HOURGLASS_C: f64 = 8.0;
const FUNNEL_C: f64 = 4.0;
const SCALING_NS: [usize; 4] = [50, 200, 800, 3200];
const SCALING_REPS: u64 = 5;
const SCALING_SLOPE: f64 = 2.0;
const PERTURB: f64 = 1e-6;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn first_error<T>(results: Vec<Result<T, String>>) -> Result<Vec<T>, String> {
    results.into_iter().collect()
}

/// Compares a run against the brute center and the brute radius at its own center.
fn against_brute(dom: &Domain, res: &CenterResult) -> Result<(f64, f64), String> {
    let b = brute_center(dom, GridSpec::default()).map_err(|e| e.to_string())?;
    let gap = (res.radius - b.radius).abs() / dom.diam;
    let (rb, _) = brute_radius(dom, res.center).map_err(|e| e.to_string())?;
    let cons = (res.radius - rb).abs() / res.radius;
    if gap > BRUTE_TOL_REL {
        return Err(format!("radius {} vs brute {} ({gap:.2e} diam)", res.radius, b.radius));
    }
    if cons > CONSISTENCY_REL {
        return Err(format!("radius {} vs brute radius at center {rb}", res.radius));
    }
    Ok((gap, cons))
}

fn analytic() -> Outcome {
    let h = 3f64.sqrt() / 2.0;
    let tri = poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)]);
    let rect = poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)]);
    let timed = |d: &Domain| {
        let t = Instant::now();
        let r = compute_edge_center(d).map_err(|e| e.to_string());
        (r, t.elapsed())
    };
    let (tr, tt) = timed(&tri);
    let tr = tr?;
    let (rr, rt) = timed(&rect);
    let rr = rr?;
    let want = 3f64.sqrt() / 6.0;
    if (tr.radius - want).abs() > ANALYTIC_TOL {
        return Err(format!("triangle radius {} vs {want}", tr.radius));
    }
    if (rr.radius - 1.5).abs() > ANALYTIC_TOL || (rr.center.x - 1.5).abs() > ANALYTIC_TOL {
        return Err(format!("rectangle radius {} at x {}", rr.radius, rr.center.x));
    }
    if tt > ANALYTIC_TIME || rt > ANALYTIC_TIME {
        return Err(format!("too slow: {tt:?}, {rt:?}"));
    }
    Ok(format!("triangle {:.1e} in {tt:.2?}, rectangle {:.1e} x {:.1e} in {rt:.2?}", (tr.radius - want).abs(), (rr.radius - 1.5).abs(), (rr.center.x - 1.5).abs()))
}

fn center_corpus(corpus: &[Domain]) -> Outcome {
    let t = Instant::now();
    let rows = first_error(par_map(corpus, |d| against_brute(d, &compute_edge_center(d).map_err(|e| e.to_string())?)))?;
    let el = t.elapsed();
    if el > CORPUS_TIME {
        return Err(format!("took {el:?}"));
    }
    let gap = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let cons = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(format!("{} polygons, max gap {gap:.1e} diam, max consistency {cons:.1e}, {el:.1?}", corpus.len()))
}

/// Returns `(samples checked, breakpoints at a brute flip, breakpoints splitting a tie)`.
fn boundary_voronoi(dom: &Domain) -> Result<(usize, usize, usize), String> {
    let labels = farthest_edge_per_vertex(dom).0;
    let v = boundary_voronoi_full(dom, &labels);
    let n = dom.n() as f64;
    let samples = brute_boundary_voronoi(dom, BOUNDARY_SAMPLES);
    let clear = BREAKPOINT_CLEARANCE_REL * dom.diam;
    let mut checked = 0;
    for s in &samples {
        if v.breakpoints.iter().any(|b| dom.poly.point_at(BoundaryCursor::new(b.edge, b.t)).dist(s.point) < clear) {
            continue;
        }
        let label = v.label_at(s.edge, s.t);
        if !s.farthest.contains(&label) {
            return Err(format!("edge {} t {}: chain label {label}, brute {:?}", s.edge, s.t, s.farthest));
        }
        checked += 1;
    }
    let h = 1.0 / BOUNDARY_SAMPLES as f64;
    let rank = |k: usize| samples[k].edge as f64 + samples[k].t;
    let gap = |a: f64, b: f64| (a - b).rem_euclid(n).min((b - a).rem_euclid(n));
    let (mut flips, mut ties) = (0, 0);
    for b in &v.breakpoints {
        let r = b.edge as f64 + b.t;
        // Flips between cyclically consecutive samples within one spacing.
        let flip = (0..samples.len()).any(|k| {
            let k2 = (k + 1) % samples.len();
            samples[k].farthest != samples[k2].farthest && (gap(rank(k), r) <= h || gap(rank(k2), r) <= h || (rank(k) <= r && r <= rank(k) + h))
        });
        // Edges sharing a farthest vertex tie exactly; brute force reports
        // both and the tie rule decides where the label switches.
        let near: Vec<usize> = (0..samples.len()).filter(|&k| gap(rank(k), r) <= h).collect();
        let tie = !near.is_empty() && near.iter().all(|&k| b.edges.iter().all(|e| samples[k].farthest.contains(e)));
        if flip {
            flips += 1;
        } else if tie {
            ties += 1;
        } else {
            return Err(format!("breakpoint at rank {r} ({:?}) with no brute flip nearby", b.edges));
        }
    }
    Ok((checked, flips, ties))
}

fn voronoi_corpus(corpus: &[Domain]) -> Outcome {
    let rows = first_error(par_map(corpus, boundary_voronoi))?;
    let s: usize = rows.iter().map(|r| r.0).sum();
    let b: usize = rows.iter().map(|r| r.1).sum();
    let t: usize = rows.iter().map(|r| r.2).sum();
    Ok(format!("{s} samples agree; {b} breakpoints at brute flips, {t} splitting exact ties"))
}

fn vertex_labels(dom: &Domain) -> Result<usize, String> {
    let labels = farthest_edge_per_vertex(dom).0;
    let tol = 1e-9 * dom.diam;
    for v in 0..dom.n() {
        let d = vis_edge_dists(&dom.poly, dom.poly.vertex(v));
        let best = d.iter().copied().fold(0.0, f64::max);
        let e = labels.edge[v];
        if (labels.radius[v] - best).abs() > tol || d[e] < best - tol {
            return Err(format!("vertex {v}: label {e} at {} vs brute {best}", labels.radius[v]));
        }
        let top: Vec<usize> = (0..d.len()).filter(|&j| d[j] >= best - tol).collect();
        if top.len() == 1 && top[0] != e {
            return Err(format!("vertex {v}: label {e} vs {}", top[0]));
        }
    }
    Ok(dom.n())
}

fn sorted_monotone(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ExplicitMatrix {
    let mut x: Vec<i64> = (0..rows).map(|_| rng.gen_range(-40..40)).collect();
    let mut y: Vec<i64> = (0..cols).map(|_| rng.gen_range(-40..40)).collect();
    x.sort();
    y.sort();
    let a: Vec<i64> = (0..rows).map(|_| rng.gen_range(-20..20)).collect();
    let b: Vec<i64> = (0..cols).map(|_| rng.gen_range(-20..20)).collect();
    ExplicitMatrix(x.iter().zip(&a).map(|(&xi, &ai)| y.iter().zip(&b).map(|(&yj, &bj)| (ai + bj - (xi - yj) * (xi - yj)) as f64).collect()).collect())
}

fn labels_and_smawk(corpus: &[Domain]) -> Outcome {
    let vs: usize = first_error(par_map(corpus, vertex_labels))?.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..SMAWK_MATRICES {
        let (r, c) = (rng.gen_range(1..=SMAWK_MAX), rng.gen_range(1..=SMAWK_MAX));
        let mut m = sorted_monotone(&mut rng, r, c);
        let want = naive_row_maxima(&mut m);
        let got = smawk(&mut m);
        if got != want {
            return Err(format!("matrix {k} ({r}x{c}): {got:?} vs {want:?}"));
        }
    }
    Ok(format!("{vs} vertices, {SMAWK_MATRICES} matrices"))
}

fn properties(corpus: &[Domain]) -> Outcome {
    let per = QUADRUPLES.div_ceil(corpus.len());
    let idx: Vec<usize> = (0..corpus.len()).collect();
    first_error(par_map(&idx, |&i| {
        let d = &corpus[i];
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        triangle_inequality(d, per, &mut rng).map_err(|e| format!("triangle inequality, polygon {i}: {e}"))?;
        ordering_property(d).map_err(|e| format!("ordering, polygon {i}: {e}"))?;
        if i < GEODESICS {
            geodesic_convexity(d, 1, &mut rng).map_err(|e| format!("convexity, polygon {i}: {e}"))?;
        }
        coverage(d, &cover_of(d), COVERAGE_SAMPLES, &mut rng).map_err(|e| format!("coverage, polygon {i}: {e}"))
    }))?;
    // The pairwise check is quadratic in the sample count, so it runs on a quarter.
    let quarter: Vec<usize> = (0..corpus.len()).step_by(4).collect();
    first_error(par_map(&quarter, |&i| forbidden_order(&corpus[i], BOUNDARY_SAMPLES).map_err(|e| format!("forbidden order, polygon {i}: {e}"))))?;
    Ok(format!(
        "{} quadruples, ordering on {}, forbidden order on {}, {GEODESICS} geodesics, {} coverage samples",
        per * corpus.len(),
        corpus.len(),
        quarter.len(),
        COVERAGE_SAMPLES * corpus.len()
    ))
}

fn structure(corpus: &[Domain]) -> Outcome {
    let rows = first_error(par_map(corpus, |d| {
        cover_structure(d)?;
        Ok(size_ratios(d))
    }))?;
    let max = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let mean = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
    let (hg, fs, kt) = (max(|r| r.0), max(|r| r.1), max(|r| r.2));
    let msg = format!("c_hourglass {hg:.2} (mean {:.2}), c_funnel {fs:.2} (mean {:.2}), |K|/|T| {kt:.2}", mean(|r| r.0), mean(|r| r.1));
    if hg > HOURGLASS_C || fs > FUNNEL_C || kt > 2.0 {
        return Err(msg);
    }
    Ok(msg)
}

fn scaling() -> Outcome {
    let mut pts = Vec::new();
    for &n in &SCALING_NS {
        let mut times: Vec<f64> = Vec::new();
        for s in 0..SCALING_REPS {
            let dom = Domain::new(gen_random_polygon(n, 7000 + s).map_err(|e| e.to_string())?);
            let t = Instant::now();
            compute_edge_center(&dom).map_err(|e| format!("n {n}: {e}"))?;
            times.push(t.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        pts.push(((n as f64).ln(), times[times.len() / 2].ln(), times[times.len() / 2]));
    }
    let m = pts.len() as f64;
    let (sx, sy) = (pts.iter().map(|p| p.0).sum::<f64>() / m, pts.iter().map(|p| p.1).sum::<f64>() / m);
    let slope = pts.iter().map(|p| (p.0 - sx) * (p.1 - sy)).sum::<f64>() / pts.iter().map(|p| (p.0 - sx).powi(2)).sum::<f64>();
    let medians: Vec<String> = SCALING_NS.iter().zip(&pts).map(|(n, p)| format!("n={n}: {:.1}ms", p.2 * 1e3)).collect();
    let msg = format!("slope {slope:.2}; {}", medians.join(", "));
    if slope < SCALING_SLOPE {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn regular(k: usize) -> Vec<(f64, f64)> {
    (0..k).map(|i| {
        let a = std::f64::consts::TAU * i as f64 / k as f64;
        (a.cos(), a.sin())
    }).collect()
}

fn degenerate_corpus() -> Vec<(&'static str, Vec<(f64, f64)>)> {
    vec![
        ("square", vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
        ("square-midpoints", vec![(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (1.0, 0.5), (1.0, 1.0), (0.5, 1.0), (0.0, 1.0), (0.0, 0.5)]),
        ("rectangle-collinear", vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)]),
        ("triangle-collinear", vec![(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.5, 0.8)]),
        ("hexagon", regular(6)),
        ("octagon", regular(8)),
        ("l-shape", vec![(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]),
        ("cross", vec![(1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (3.0, 1.0), (3.0, 2.0), (2.0, 2.0), (2.0, 3.0), (1.0, 3.0), (1.0, 2.0), (0.0, 2.0), (0.0, 1.0), (1.0, 1.0)]),
    ]
}

fn robustness() -> Outcome {
    let dir = std::env::temp_dir().join(format!("geodesic-center-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let cases = degenerate_corpus();
    let mut inputs = Vec::new();
    for (name, pts) in &cases {
        let path = dir.join(format!("{name}.json"));
        save_polygon(&poly(pts).poly, &path).map_err(|e| e.to_string())?;
        inputs.push(path);
    }
    let mut cfg = RunConfig::new(inputs, dir.join("out"));
    cfg.emit = Emit::parse("all").unwrap();
    let report = run(&cfg);
    let _ = std::fs::remove_dir_all(&dir);
    for o in &report.outcomes {
        if o.exit_code != EXIT_OK {
            return Err(format!("{}: exit {} {:?}", o.input.display(), o.exit_code, o.error));
        }
        if o.warnings.is_empty() {
            return Err(format!("{}: no warnings", o.input.display()));
        }
    }
    let perturbed = first_error(par_map(&cases, |(name, pts)| {
        let p = perturb_polygon(&poly(pts).poly, PERTURB, 0).ok_or_else(|| format!("{name}: perturbation failed"))?;
        let dom = Domain::new(p);
        let res = compute_edge_center(&dom).map_err(|e| format!("{name}: {e}"))?;
        against_brute(&dom, &res).map_err(|e| format!("{name} perturbed: {e}"))?;
        Ok(validate_general_position(&dom.poly).is_clean())
    }))?;
    let clean = perturbed.iter().filter(|&&c| c).count();
    // Audit the unperturbed runs as well: no panics and a finite answer.
    for (name, pts) in &cases {
        let d = poly(pts);
        let r = catch_unwind(AssertUnwindSafe(|| run_pipeline(&d))).map_err(|_| format!("{name}: panic"))?;
        let r = r.map_err(|e| format!("{name}: {e}"))?;
        if !r.result.radius.is_finite() {
            return Err(format!("{name}: radius {}", r.result.radius));
        }
    }
    Ok(format!("{} degenerate inputs ran with warnings; perturbed copies ({clean} in general position) match brute force", cases.len()))
}

fn main() {
    let corpus = corpus(CORPUS, CORPUS_SEED);
    let criteria: Vec<Criterion> = vec![
        ("analytic centers", Box::new(analytic)),
        ("center vs brute force", Box::new(|| center_corpus(&corpus))),
        ("boundary Voronoi vs brute force", Box::new(|| voronoi_corpus(&corpus))),
        ("farthest labels and SMAWK", Box::new(|| labels_and_smawk(&corpus))),
        ("property suites", Box::new(|| properties(&corpus))),
        ("structural invariants", Box::new(|| structure(&corpus))),
        ("scaling", Box::new(scaling)),
        ("robustness", Box::new(robustness)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let el = t.elapsed();
        match out {
            Ok(msg) => println!("criterion {} {name}: PASS ({msg}) [{el:.1?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({msg}) [{el:.1?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
