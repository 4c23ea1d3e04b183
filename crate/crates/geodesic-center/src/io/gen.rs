//! Seeded random simple polygons.

use crate::geom::{segments_intersect, validate_general_position, Point2, PolygonBoundary, Violation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("polygon needs at least 3 vertices")]
    TooFew,
    #[error("no clean polygon after {0} attempts")]
    GenerationFailure(usize),
}

/// Uncrosses a closed tour by 2-opt moves until no two edges intersect.
fn untangle(pts: &mut [Point2]) -> bool {
    let n = pts.len();
    for _ in 0..50 * n * n {
        let mut changed = false;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (pts[i], pts[i + 1]);
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    pts[i + 1..=j].reverse();
                    changed = true;
                }
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

fn jitter_vertices(pts: &mut [Point2], idx: &[usize], mag: f64, rng: &mut ChaCha8Rng) {
    for &i in idx {
        pts[i] = pts[i] + Point2::new(rng.gen_range(-mag..mag), rng.gen_range(-mag..mag));
    }
}

/// A random simple polygon with `n` vertices in general position.
///
/// Small polygons come from a random tour; larger ones start from an angular
/// sort so the 2-opt pass stays short.
pub fn gen_random_polygon(n: usize, seed: u64) -> Result<PolygonBoundary, GenError> {
    if n < 3 {
        return Err(GenError::TooFew);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 20;
    for _ in 0..ATTEMPTS {
        let mut pts: Vec<Point2> = (0..n).map(|_| Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))).collect();
        if n <= 100 {
            pts.shuffle(&mut rng);
        } else {
            let c = pts.iter().fold(Point2::default(), |s, &p| s + p) * (1.0 / n as f64);
            pts.sort_by(|a, b| (a.y - c.y).atan2(a.x - c.x).total_cmp(&(b.y - c.y).atan2(b.x - c.x)));
        }
        if !untangle(&mut pts) {
            continue;
        }
        if let Some(p) = repair(pts, &mut rng) {
            return Ok(p);
        }
    }
    Err(GenError::GenerationFailure(ATTEMPTS))
}

/// Jitters vertices of collinear triples until the polygon is clean.
fn repair(mut pts: Vec<Point2>, rng: &mut ChaCha8Rng) -> Option<PolygonBoundary> {
    for _ in 0..10 {
        let poly = PolygonBoundary::new(pts.clone()).ok()?;
        let report = validate_general_position(&poly);
        if report.is_clean() {
            return Some(poly);
        }
        let mag = 1e-6 * poly.diameter();
        pts = poly.vertices().to_vec();
        for v in &report.violations {
            if let Violation::CollinearVertices { vertices } = v {
                jitter_vertices(&mut pts, vertices, mag, rng);
            }
        }
    }
    None
}
