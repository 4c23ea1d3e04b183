//! At most five separators that put every boundary point to the right of one.

use super::{farthest_from_point, farthest_from_vertex, FarthestError};
use crate::geom::{Point2, PolygonBoundary};
use crate::shortest_paths::{geodesic_path, Domain, SeparatorFrame, Target};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatorCase {
    /// Both paths from the ends of `F(u)` cross `pi(u, F(u))`.
    Crossing,
    /// The path from one end misses; separators come from a second chain.
    Chain,
    /// As `Chain`, worked out on the mirror image.
    ChainMirrored,
}

pub struct Separator {
    pub a: usize,
    pub b: usize,
    pub frame: SeparatorFrame,
}

pub struct SeparatorSet {
    pub case: SeparatorCase,
    pub start: usize,
    pub separators: Vec<Separator>,
}

impl SeparatorSet {
    /// Index of a separator whose right chain contains edge `e`.
    pub fn covering_edge(&self, e: usize) -> Option<usize> {
        self.separators.iter().position(|s| {
            let n = s.frame.right_len();
            s.frame.right_rank(e).is_some_and(|k| k < n)
        })
    }
}

fn rem(x: f64, n: f64) -> f64 {
    x.rem_euclid(n)
}

/// `x` lies in the open counterclockwise arc from `a` to `b`.
fn strictly_between(n: f64, a: f64, x: f64, b: f64) -> bool {
    let dx = rem(x - a, n);
    let db = rem(b - a, n);
    dx > 0.0 && dx < db
}

/// Paths `s1 -> t1` and `s2 -> t2` between boundary points cross, decided by
/// strict interleaving of their ends.
pub fn ends_interleave(n: usize, s1: f64, t1: f64, s2: f64, t2: f64) -> bool {
    let n = n as f64;
    let in_a = strictly_between(n, s1, s2, t1);
    let in_b = strictly_between(n, s1, t2, t1);
    let out_a = strictly_between(n, t1, s2, s1);
    let out_b = strictly_between(n, t1, t2, s1);
    (in_a && out_b) || (out_a && in_b)
}

type Pairs = (SeparatorCase, Vec<(usize, usize)>);

/// Separator endpoints for start vertex `u`, without mirroring.
fn pairs_for(dom: &Domain, u: usize, allow_mirror: bool) -> Option<Pairs> {
    let n = dom.n();
    let (fu, _) = farthest_from_vertex(dom, u);
    let i = fu.edge;
    // Clockwise order puts v_{i+1} before v_i.
    let (e_plus, e_minus) = (i, (i + 1) % n);
    let (f_minus_reach, _) = farthest_from_vertex(dom, e_minus);
    let (f_plus_reach, _) = farthest_from_vertex(dom, e_plus);
    let tu = fu.terminal.rank();
    let cross_minus = ends_interleave(n, u as f64, tu, e_minus as f64, f_minus_reach.terminal.rank());
    let cross_plus = ends_interleave(n, u as f64, tu, e_plus as f64, f_plus_reach.terminal.rank());
    if cross_minus && cross_plus {
        return Some((SeparatorCase::Crossing, vec![(u, e_plus), (e_minus, u), (e_plus, e_minus)]));
    }
    if cross_minus {
        return if allow_mirror { None } else { Some((SeparatorCase::Chain, Vec::new())) };
    }
    let j = f_minus_reach.edge;
    let (f_plus, f_minus) = (j, (j + 1) % n);
    let p = geodesic_path(dom, dom.poly.vertex(u), Target::Edge(j)).ok()?.end();
    let (g_reach, _) = farthest_from_point(dom, p)?;
    let k = g_reach.edge;
    // The far edge of the terminal must sit on the counterclockwise edges u..=i.
    if (k + n - u) % n > (i + n - u) % n {
        return None;
    }
    let g_plus = k;
    let pairs = vec![(u, e_plus), (f_minus, g_plus), (e_minus, f_plus), (e_plus, e_minus), (f_plus, f_minus)];
    Some((SeparatorCase::Chain, pairs))
}

fn mirror(poly: &PolygonBoundary) -> PolygonBoundary {
    let pts: Vec<Point2> = poly.vertices().iter().rev().map(|p| Point2::new(-p.x, p.y)).collect();
    PolygonBoundary::new(pts).expect("mirror of a simple polygon")
}

fn try_start(dom: &Domain, mirrored: Option<&Domain>, u: usize) -> Option<Pairs> {
    let n = dom.n();
    match pairs_for(dom, u, true) {
        Some(p) => Some(p),
        None => {
            let m = mirrored?;
            let (_, pairs) = pairs_for(m, n - 1 - u, false)?;
            if pairs.is_empty() {
                return None;
            }
            // Right of (a', b') in the mirror is right of (b, a) here.
            let back = |v: usize| n - 1 - v;
            Some((SeparatorCase::ChainMirrored, pairs.into_iter().map(|(a, b)| (back(b), back(a))).collect()))
        }
    }
}

/// Builds the separator set, trying a few start vertices before giving up.
pub fn build_separators(dom: &Domain) -> Result<SeparatorSet, FarthestError> {
    let n = dom.n();
    let mirrored = Domain::new(mirror(&dom.poly));
    let starts: Vec<usize> = [0, n / 3, (2 * n) / 3, n / 2, n - 1].into_iter().collect();
    let mut tried = Vec::new();
    for u in starts {
        if tried.contains(&u) {
            continue;
        }
        tried.push(u);
        let Some((case, mut pairs)) = try_start(dom, Some(&mirrored), u) else {
            continue;
        };
        pairs.retain(|(a, b)| a != b);
        pairs.dedup();
        let separators: Vec<Separator> =
            pairs.into_iter().map(|(a, b)| Separator { a, b, frame: SeparatorFrame::new(dom, a, b) }).collect();
        let set = SeparatorSet { case, start: u, separators };
        if (0..n).all(|e| set.covering_edge(e).is_some()) {
            return Ok(set);
        }
    }
    Err(FarthestError::CaseExhaustionFailure(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleave_basic() {
        assert!(ends_interleave(4, 0.0, 2.0, 1.0, 3.0));
        assert!(!ends_interleave(4, 0.0, 2.0, 2.5, 3.0));
        assert!(!ends_interleave(4, 0.0, 2.0, 2.0, 3.0));
    }
}
