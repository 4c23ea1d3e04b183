//! Brute-force references for testing.
//!
//! Nothing here depends on the farthest-edge, Voronoi, cover or center code.

use crate::geom::{dist_point_segment, on_segment, orientation, GeomError, Point2, PolygonBoundary};
use crate::shortest_paths::{spt_from_point, Domain, PathError, TreeNode};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// True iff the closed segment `p q` lies in the closed polygon.
pub fn segment_inside(poly: &PolygonBoundary, p: Point2, q: Point2) -> bool {
    let n = poly.n();
    let mut cuts = vec![0.0, 1.0];
    let d = q - p;
    let l2 = d.norm2();
    for i in 0..n {
        let (a, b) = poly.edge(i);
        let (o1, o2) = (orientation(p, q, a), orientation(p, q, b));
        let (o3, o4) = (orientation(a, b, p), orientation(a, b, q));
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return false;
        }
        if l2 > 0.0 {
            for w in [a, b] {
                if orientation(p, q, w) == 0 && on_segment(p, q, w) {
                    cuts.push((w - p).dot(d) / l2);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    // Pieces running along an edge have midpoints only approximately on it.
    let eps = 1e-12 * (1.0 + p.norm().max(q.norm()));
    let on_boundary = |m: Point2| (0..n).any(|i| {
        let (a, b) = poly.edge(i);
        dist_point_segment(m, a, b) <= eps
    });
    cuts.windows(2).all(|w| {
        let m = p.lerp(q, 0.5 * (w[0] + w[1]));
        w[1] - w[0] <= 0.0 || poly.contains(m) || on_boundary(m)
    })
}

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Dijkstra over the visibility graph of the vertices plus `extra` points.
/// Returns distances from `extra[0]` to every vertex and every extra point.
pub fn visibility_dijkstra(poly: &PolygonBoundary, extra: &[Point2]) -> Vec<f64> {
    let mut pts: Vec<Point2> = poly.vertices().to_vec();
    pts.extend_from_slice(extra);
    let m = pts.len();
    let src = poly.n();
    let mut dist = vec![f64::INFINITY; m];
    let mut done = vec![false; m];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, src)]);
    while let Some(Item(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for w in 0..m {
            if done[w] {
                continue;
            }
            let nd = d + pts[u].dist(pts[w]);
            if nd < dist[w] && segment_inside(poly, pts[u], pts[w]) {
                dist[w] = nd;
                heap.push(Item(nd, w));
            }
        }
    }
    dist
}

/// Geodesic distance between two points.
pub fn vis_point_dist(poly: &PolygonBoundary, p: Point2, q: Point2) -> f64 {
    visibility_dijkstra(poly, &[p, q])[poly.n() + 1]
}

/// Geodesic distance from `p` to every edge: minimum over visible last
/// bends of the straight distance to the edge. The foot is a rounded
/// construction, so visibility is tested to a point just short of it.
pub fn vis_edge_dists(poly: &PolygonBoundary, p: Point2) -> Vec<f64> {
    let n = poly.n();
    let dist = visibility_dijkstra(poly, &[p]);
    let nodes: Vec<(Point2, f64)> = poly.vertices().iter().copied().chain([p]).zip(dist).collect();
    (0..n)
        .map(|e| {
            let (a, b) = poly.edge(e);
            let d = b - a;
            nodes
                .iter()
                .filter(|(_, du)| du.is_finite())
                .filter_map(|&(u, du)| {
                    let t = ((u - a).dot(d) / d.norm2()).clamp(0.0, 1.0);
                    let c = a.lerp(b, t);
                    segment_inside(poly, u, c.lerp(u, 1e-9)).then(|| du + u.dist(c))
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// `r(x)` and the edges attaining it (within `1e-9` relative), from a fresh
/// shortest path tree.
pub fn brute_radius(dom: &Domain, x: Point2) -> Result<(f64, Vec<usize>), PathError> {
    let t = spt_from_point(dom, x)?;
    let r = t.leaves.iter().map(|l| l.dist).fold(0.0, f64::max);
    let tol = 1e-9 * r.max(dom.diam * 1e-3);
    let arg = t.leaves.iter().filter(|l| l.dist >= r - tol).map(|l| l.edge).collect();
    Ok((r, arg))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    /// Cells per polygon diameter in the first round.
    pub resolution: usize,
    /// Cell size shrink per round.
    pub factor: usize,
    pub rounds: usize,
    /// Stop once the cell diagonal is below this.
    pub tolerance: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { resolution: 32, factor: 4, rounds: 14, tolerance: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteCenter {
    pub point: Point2,
    pub radius: f64,
    /// Grid spacing of the last round, times sqrt 2.
    pub bound: f64,
}

/// Distance to every edge at `p` with its gradient, read off the first step
/// of each tree path.
pub fn edge_models(dom: &Domain, p: Point2) -> Result<Vec<(f64, Point2)>, PathError> {
    let t = spt_from_point(dom, p)?;
    Ok(t.leaves
        .iter()
        .map(|l| {
            let first = match l.via {
                TreeNode::Vertex(v) => dom.poly.vertex(t.path_to_vertex(v)[0]),
                _ => l.terminal,
            };
            let d = p - first;
            let g = if d.norm() > 0.0 { d * (1.0 / d.norm()) } else { Point2::new(0.0, 0.0) };
            (l.dist, g)
        })
        .collect())
}

/// Minimizes `max_i (v_i + g_i . x)` over the box `|x|_inf <= rho` by
/// checking every vertex of the arrangement.
fn box_minimax(models: &[(f64, Point2)], rho: f64) -> Point2 {
    let model = |x: Point2| models.iter().map(|(v, g)| v + g.dot(x)).fold(f64::NEG_INFINITY, f64::max);
    let mut cands = vec![Point2::new(-rho, -rho), Point2::new(rho, -rho), Point2::new(rho, rho), Point2::new(-rho, rho)];
    let lines: Vec<(Point2, f64)> = (0..models.len())
        .flat_map(|i| (i + 1..models.len()).map(move |j| (i, j)))
        .map(|(i, j)| (models[i].1 - models[j].1, models[j].0 - models[i].0))
        .filter(|(n, _)| n.norm() > 1e-12)
        .collect();
    for (a, &(n, c)) in lines.iter().enumerate() {
        // Box sides.
        if n.y.abs() > 1e-15 {
            for x in [-rho, rho] {
                cands.push(Point2::new(x, (c - n.x * x) / n.y));
            }
        }
        if n.x.abs() > 1e-15 {
            for y in [-rho, rho] {
                cands.push(Point2::new((c - n.y * y) / n.x, y));
            }
        }
        for &(m, d) in &lines[a + 1..] {
            let det = n.cross(m);
            if det.abs() > 1e-15 {
                cands.push(Point2::new((c * m.y - d * n.y) / det, (n.x * d - m.x * c) / det));
            }
        }
    }
    cands
        .into_iter()
        .filter(|x| x.x.abs() <= rho * (1.0 + 1e-12) && x.y.abs() <= rho * (1.0 + 1e-12))
        .map(|x| (model(x), x))
        .fold((f64::INFINITY, Point2::new(0.0, 0.0)), |a, b| if b.0 < a.0 { b } else { a })
        .1
}

/// Trust-region descent on the linearized edge distances; the grid alone
/// stalls on thin valleys where two edges tie.
fn polish(dom: &Domain, mut p: Point2, mut r: f64, mut rho: f64) -> (Point2, f64) {
    let floor = 1e-15 * dom.diam;
    for _ in 0..400 {
        if rho < floor {
            break;
        }
        let Ok(models) = edge_models(dom, p) else { break };
        let near: Vec<(f64, Point2)> = models.into_iter().filter(|m| m.0 >= r - 3.0 * rho).collect();
        let q = p + box_minimax(&near, rho);
        let rq = if dom.poly.contains(q) { brute_radius(dom, q).map(|x| x.0).unwrap_or(f64::INFINITY) } else { f64::INFINITY };
        if rq < r {
            p = q;
            r = rq;
            rho *= 2.0;
        } else {
            rho /= 4.0;
        }
    }
    (p, r)
}

/// Grid refinement minimizing `brute_radius`, then a local polish.
pub fn brute_center(dom: &Domain, grid: GridSpec) -> Result<BruteCenter, GeomError> {
    assert!(grid.resolution >= 8 && grid.rounds >= 3);
    let poly = &dom.poly;
    let (lo, hi) = poly.bbox();
    let mut h = dom.diam / grid.resolution as f64;
    let eval = |p: Point2| -> Option<f64> {
        if !poly.contains(p) {
            return None;
        }
        brute_radius(dom, p).ok().map(|r| r.0)
    };
    let mut cands: Vec<(f64, Point2)> = Vec::new();
    let nx = ((hi.x - lo.x) / h).ceil() as usize;
    let ny = ((hi.y - lo.y) / h).ceil() as usize;
    for i in 0..=nx {
        for j in 0..=ny {
            let p = Point2::new(lo.x + i as f64 * h, lo.y + j as f64 * h);
            if let Some(r) = eval(p) {
                cands.push((r, p));
            }
        }
    }
    // Vertices are always inside and keep tiny polygons from coming up empty.
    for &v in poly.vertices() {
        cands.push((eval(v).unwrap(), v));
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut seeds: Vec<Point2> = cands.iter().take(3).map(|c| c.1).collect();
    let mut best = cands[0];
    let mut w = 2.0 * h;
    for _ in 0..grid.rounds {
        h /= grid.factor as f64;
        let k = (2.0 * w / h).round() as i64;
        // Stay at this spacing while the window keeps finding lower points;
        // shrinking too early stalls on ridges where two edges tie.
        for _ in 0..64 {
            let mut round: Vec<(f64, Point2)> = Vec::new();
            for s in &seeds {
                for i in 0..=k {
                    for j in 0..=k {
                        let p = Point2::new(s.x - w + i as f64 * h, s.y - w + j as f64 * h);
                        if let Some(r) = eval(p) {
                            round.push((r, p));
                        }
                    }
                }
            }
            round.sort_by(|a, b| a.0.total_cmp(&b.0));
            let improved = round.first().is_some_and(|r| r.0 < best.0);
            if improved {
                best = round[0];
            }
            seeds = std::iter::once(best.1).chain(round.iter().skip(1).take(1).map(|c| c.1)).collect();
            if !improved {
                break;
            }
        }
        w = 2.0 * h;
        if h * std::f64::consts::SQRT_2 < grid.tolerance {
            break;
        }
    }
    let (point, radius) = polish(dom, best.1, best.0, dom.diam / grid.resolution as f64);
    Ok(BruteCenter { point, radius, bound: h * std::f64::consts::SQRT_2 })
}

/// One boundary sample with its farthest edges.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySample {
    pub edge: usize,
    pub t: f64,
    pub point: Point2,
    pub radius: f64,
    pub farthest: Vec<usize>,
}

/// Farthest edges at `samples` evenly spaced points per edge.
pub fn brute_boundary_voronoi(dom: &Domain, samples: usize) -> Vec<BoundarySample> {
    assert!(samples >= 64);
    let poly = &dom.poly;
    let mut out = Vec::with_capacity(poly.n() * samples);
    for e in 0..poly.n() {
        let (a, b) = poly.edge(e);
        for k in 0..samples {
            let t = k as f64 / samples as f64;
            let p = a.lerp(b, t);
            let (radius, farthest) = brute_radius(dom, p).expect("boundary point");
            out.push(BoundarySample { edge: e, t, point: p, radius, farthest });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(f64, f64)]) -> PolygonBoundary {
        PolygonBoundary::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn l_shape() -> PolygonBoundary {
        poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
    }

    #[test]
    fn segment_inside_l_shape() {
        let p = l_shape();
        assert!(segment_inside(&p, Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)));
        assert!(!segment_inside(&p, Point2::new(2.0, 1.0), Point2::new(1.0, 2.0)));
        assert!(segment_inside(&p, Point2::new(2.0, 1.0), Point2::new(1.0, 1.0)));
        assert!(segment_inside(&p, Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)));
    }

    #[test]
    fn dijkstra_bends_at_reflex_vertex() {
        let p = l_shape();
        let d = vis_point_dist(&p, Point2::new(2.0, 0.5), Point2::new(0.5, 2.0));
        assert!((d - 2.0 * 1.25f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rectangle_radius_and_center() {
        let dom = Domain::new(poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)]));
        let (r, arg) = brute_radius(&dom, Point2::new(0.0, 0.0)).unwrap();
        assert!((r - 3.0).abs() < 1e-12);
        assert_eq!(arg, vec![1]);
        let c = brute_center(&dom, GridSpec::default()).unwrap();
        assert!((c.radius - 1.5).abs() <= c.bound + 1e-12);
    }

    #[test]
    fn radius_is_one_lipschitz() {
        let dom = Domain::new(l_shape());
        let pts = [(0.2, 0.3), (1.7, 0.4), (0.4, 1.8), (0.9, 0.9), (1.0, 0.2)];
        for &(x1, y1) in &pts {
            for &(x2, y2) in &pts {
                let (p, q) = (Point2::new(x1, y1), Point2::new(x2, y2));
                let (rp, _) = brute_radius(&dom, p).unwrap();
                let (rq, _) = brute_radius(&dom, q).unwrap();
                assert!((rp - rq).abs() <= p.dist(q) + 1e-12);
            }
        }
    }

    #[test]
    fn boundary_flips_on_rectangle() {
        let dom = Domain::new(poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)]));
        let s = brute_boundary_voronoi(&dom, 64);
        let bottom: Vec<&BoundarySample> = s.iter().filter(|x| x.edge == 0).collect();
        let flip = bottom.windows(2).position(|w| w[0].farthest != w[1].farthest).unwrap();
        assert!(bottom[flip].point.x <= 1.5 && bottom[flip + 1].point.x >= 1.5);
    }
}
