//! Edge funnels and the triangle cover of the whole polygon.

use crate::boundary_voronoi::{BoundaryVoronoi, VoronoiChain};
use crate::forms::DistForm;
use crate::geom::{dist_point_segment, BoundaryCursor, Point2, PolygonBoundary};
use crate::shortest_paths::funnel::{Engine, Funnel, Mask, Source, Visitor};
use crate::shortest_paths::lca::Lca;
use crate::shortest_paths::{convex_contains, geodesic_path, Domain, GeodesicPath, Target};
use crate::triangulation::Side;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("point ({0}, {1}) lies outside the polygon")]
    PointOutsidePolygon(f64, f64),
    #[error("no cover triangle contains ({0}, {1})")]
    Uncovered(f64, f64),
}

/// `Y(e)`: the region between chain `C(e)`, the two walls and the base on `e`.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeFunnel {
    pub edge: usize,
    pub chain: VoronoiChain,
    /// `pi(p(e), e)`.
    pub wall_p: GeodesicPath,
    /// `pi(q(e), e)`.
    pub wall_q: GeodesicPath,
    pub base: [BoundaryCursor; 2],
    /// Boundary of the funnel as a closed vertex sequence, repeats allowed.
    pub ring: Vec<Point2>,
    pub size: usize,
}

impl EdgeFunnel {
    /// Closed containment with slack `tol`, by winding number.
    pub fn contains(&self, x: Point2, tol: f64) -> bool {
        let r = &self.ring;
        let k = r.len();
        let mut wind = 0i32;
        for i in 0..k {
            let (a, b) = (r[i], r[(i + 1) % k]);
            if dist_point_segment(x, a, b) <= tol {
                return true;
            }
            let c = (b - a).cross(x - a);
            if a.y <= x.y {
                if b.y > x.y && c > 0.0 {
                    wind += 1;
                }
            } else if b.y <= x.y && c < 0.0 {
                wind -= 1;
            }
        }
        wind != 0
    }
}

fn chain_points(poly: &PolygonBoundary, from: BoundaryCursor, to: BoundaryCursor) -> Vec<Point2> {
    let n = poly.n();
    let mut pts = vec![poly.point_at(from)];
    let mut e = from.edge;
    let steps = (to.edge + n - from.edge) % n;
    let wraps = steps == 0 && to.t < from.t;
    for _ in 0..(if wraps { n } else { steps }) {
        e = (e + 1) % n;
        pts.push(poly.vertex(e));
    }
    pts.push(poly.point_at(to));
    pts.dedup();
    pts
}

/// One funnel per chain of the boundary diagram.
pub fn build_edge_funnels(dom: &Domain, vor: &BoundaryVoronoi) -> Vec<EdgeFunnel> {
    let poly = &dom.poly;
    vor.chains
        .iter()
        .filter_map(|c| {
            let e = c.farthest_edge;
            let (p, q) = (poly.point_at(c.from), poly.point_at(c.to));
            let wall_p = geodesic_path(dom, p, Target::Edge(e)).ok()?;
            let wall_q = geodesic_path(dom, q, Target::Edge(e)).ok()?;
            let mut ring = chain_points(poly, c.from, c.to);
            ring.extend(wall_q.points.iter().skip(1));
            ring.extend(wall_p.points.iter().rev().skip(1));
            ring.dedup();
            if ring.len() > 1 && ring[0] == *ring.last().unwrap() {
                ring.pop();
            }
            let base = [wall_q.terminal?, wall_p.terminal?];
            let size = ring.len();
            Some(EdgeFunnel { edge: e, chain: *c, wall_p, wall_q, base, ring, size })
        })
        .collect()
}

/// `(T, f, e)`: inside triangle `corners`, `f = d(., e)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriangleCoverElement {
    pub corners: [Point2; 3],
    #[serde(flatten)]
    pub form: DistForm,
    pub edge: usize,
    /// Triangulation triangle holding `corners`.
    #[serde(skip)]
    pub tri: usize,
    #[serde(skip)]
    pub funnel: usize,
}

impl TriangleCoverElement {
    pub fn contains(&self, x: Point2, tol: f64) -> bool {
        convex_contains(&self.corners, x, tol)
    }
    pub fn centroid(&self) -> Point2 {
        let [a, b, c] = self.corners;
        Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }
}

/// A triangulation diagonal inside some funnel's searched region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChordRecord {
    pub u: usize,
    pub w: usize,
    /// The two triangles it bounds.
    pub tris: [usize; 2],
    pub funnel: usize,
}

/// Uniform grid over the elements' bounding boxes.
#[derive(Clone, Debug, Default)]
struct Locator {
    lo: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    fn new(elements: &[TriangleCoverElement], lo: Point2, hi: Point2) -> Self {
        let g = ((elements.len() as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let w = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let cell = w / g as f64 * (1.0 + 1e-9);
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).min(g + 1);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).min(g + 1);
        let mut me = Locator { lo, cell, nx, ny, buckets: vec![Vec::new(); nx * ny] };
        for (k, el) in elements.iter().enumerate() {
            let xs = el.corners.map(|p| p.x);
            let ys = el.corners.map(|p| p.y);
            let (i0, j0) = me.index(Point2::new(xs.iter().copied().fold(f64::INFINITY, f64::min), ys.iter().copied().fold(f64::INFINITY, f64::min)));
            let (i1, j1) = me.index(Point2::new(xs.iter().copied().fold(f64::NEG_INFINITY, f64::max), ys.iter().copied().fold(f64::NEG_INFINITY, f64::max)));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    me.buckets[j * nx + i].push(k as u32);
                }
            }
        }
        me
    }
    fn index(&self, p: Point2) -> (usize, usize) {
        let i = ((p.x - self.lo.x) / self.cell).floor().max(0.0) as usize;
        let j = ((p.y - self.lo.y) / self.cell).floor().max(0.0) as usize;
        (i.min(self.nx - 1), j.min(self.ny - 1))
    }
    /// Buckets touching the square of half-width `r` around `p`.
    fn near(&self, p: Point2, r: f64) -> impl Iterator<Item = usize> + '_ {
        let (i0, j0) = self.index(p - Point2::new(r, r));
        let (i1, j1) = self.index(p + Point2::new(r, r));
        (j0..=j1).flat_map(move |j| (i0..=i1).map(move |i| j * self.nx + i))
    }
}

/// The triangle cover `T` with its chord index `K`.
#[derive(Clone, Debug, Serialize)]
pub struct PolygonCoarseCover {
    pub elements: Vec<TriangleCoverElement>,
    pub chords: Vec<ChordRecord>,
    /// Elements inside each triangulation triangle.
    #[serde(skip)]
    pub by_tri: Vec<Vec<usize>>,
    #[serde(skip)]
    locator: Locator,
    #[serde(skip)]
    diam: f64,
}

struct CellCollector<'a> {
    out: &'a mut Vec<TriangleCoverElement>,
    edge: usize,
    funnel: usize,
}

impl Visitor for CellCollector<'_> {
    fn triangle(&mut self, e: &Engine, t: usize, entry: usize, f: &Funnel, j: usize) {
        for (ring, node) in e.cells(t, entry, f, j) {
            let form = e.form(node);
            for k in 1..ring.len() - 1 {
                self.out.push(TriangleCoverElement { corners: [ring[0], ring[k], ring[k + 1]], form, edge: self.edge, tri: t, funnel: self.funnel });
            }
        }
    }
}

/// Triangles spanning `seeds` in the dual tree: the union of dual paths
/// between them.
fn steiner_subtree(parent: &[usize], lca: &Lca, seeds: &[usize], mask: &mut Mask) -> Vec<usize> {
    mask.clear();
    let mut top = seeds[0];
    for &s in &seeds[1..] {
        top = lca.query(top, s).expect("one tree");
    }
    let mut out = vec![top];
    mask.insert(top);
    for &s in seeds {
        let mut t = s;
        while mask.insert(t) {
            out.push(t);
            t = parent[t];
        }
    }
    out
}

/// Shortest path map of each funnel's edge over the triangles its funnel
/// can reach, cut into triangles.
pub fn polygon_coarse_cover(dom: &Domain, funnels: &[EdgeFunnel]) -> PolygonCoarseCover {
    let poly = &dom.poly;
    let tri = &dom.tri;
    let m = tri.len();
    let parent_opt: Vec<Option<usize>> = tri.parent.iter().map(|&p| (p != usize::MAX).then_some(p)).collect();
    let lca = Lca::new(&parent_opt);
    let mut mask = Mask::new(m);
    let mut elements = Vec::new();
    let mut chords = Vec::new();
    for (fi, f) in funnels.iter().enumerate() {
        let e = f.edge;
        let mut seeds = vec![tri.edge_tri[e]];
        let c = f.chain;
        let steps = (c.to.edge + poly.n() - c.from.edge) % poly.n();
        for k in 0..=steps {
            seeds.push(tri.edge_tri[(c.from.edge + k) % poly.n()]);
        }
        let region = steiner_subtree(&tri.parent, &lca, &seeds, &mut mask);
        for &t in &region {
            for (k, s) in tri.sides[t].iter().enumerate() {
                if let Side::Diagonal(t2, _) = *s {
                    if t < t2 && mask.contains(t2) {
                        chords.push(ChordRecord { u: tri.tris[t][k], w: tri.tris[t][(k + 1) % 3], tris: [t, t2], funnel: fi });
                    }
                }
            }
        }
        let mut eng = Engine::new(poly, tri, Source::Edge(e)).expect("edge source");
        eng.run(Some(&mask), &mut CellCollector { out: &mut elements, edge: e, funnel: fi });
    }
    let mut by_tri = vec![Vec::new(); m];
    for (k, el) in elements.iter().enumerate() {
        by_tri[el.tri].push(k);
    }
    let (lo, hi) = poly.bbox();
    let locator = Locator::new(&elements, lo, hi);
    PolygonCoarseCover { elements, chords, by_tri, locator, diam: dom.diam }
}

impl PolygonCoarseCover {
    /// Elements containing `x` with slack `tol`.
    pub fn containing(&self, x: Point2, tol: f64) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .locator
            .near(x, tol)
            .flat_map(|b| self.locator.buckets[b].iter().map(|&k| k as usize))
            .filter(|&k| self.elements[k].contains(x, tol))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `r(x)` and the edges attaining it within `1e-9` relative.
    pub fn radius_at(&self, dom: &Domain, x: Point2) -> Result<(f64, Vec<usize>), CoverError> {
        let inside = dom.poly.contains(x) || dom.poly.nearest_cursor(x).1 <= dom.tau();
        if !inside {
            return Err(CoverError::PointOutsidePolygon(x.x, x.y));
        }
        let mut ks = self.containing(x, 1e-12 * self.diam);
        if ks.is_empty() {
            ks = self.containing(x, 1e-9 * self.diam);
        }
        if ks.is_empty() {
            return Err(CoverError::Uncovered(x.x, x.y));
        }
        let vals: Vec<(usize, f64)> = ks.iter().map(|&k| (self.elements[k].edge, self.elements[k].form.eval(x))).collect();
        let r = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-9 * r.abs().max(1e-3 * self.diam);
        let mut arg: Vec<usize> = vals.iter().filter(|v| v.1 >= r - tol).map(|v| v.0).collect();
        arg.sort_unstable();
        arg.dedup();
        Ok((r, arg))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_voronoi::boundary_voronoi_full;
    use crate::farthest::farthest_edge_per_vertex;
    use crate::io::gen_random_polygon;
    use crate::oracle::brute_radius;
    use crate::shortest_paths::geodesic_path;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(pts: &[(f64, f64)]) -> Domain {
        Domain::new(PolygonBoundary::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap())
    }

    fn rect() -> Domain {
        poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)])
    }

    fn triangle() -> Domain {
        poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)])
    }

    fn l_shape() -> Domain {
        poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
    }

    fn fixtures() -> Vec<Domain> {
        let mut v = vec![rect(), triangle(), l_shape()];
        v.extend((0..12u64).map(|s| Domain::new(gen_random_polygon(8 + (s as usize * 5) % 30, s).unwrap())));
        v
    }

    fn pipeline(dom: &Domain) -> (Vec<EdgeFunnel>, PolygonCoarseCover) {
        let labels = farthest_edge_per_vertex(dom).0;
        let vor = boundary_voronoi_full(dom, &labels);
        let funnels = build_edge_funnels(dom, &vor);
        let cover = polygon_coarse_cover(dom, &funnels);
        (funnels, cover)
    }

    fn samples(dom: &Domain, count: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = dom.poly.bbox();
        let mut out = Vec::new();
        while out.len() < count {
            let p = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
            if dom.poly.contains(p) {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn rectangle_left_funnel() {
        let dom = rect();
        let (funnels, cover) = pipeline(&dom);
        let f = funnels.iter().find(|f| f.edge == 3).unwrap();
        let from = dom.poly.point_at(f.chain.from);
        let to = dom.poly.point_at(f.chain.to);
        assert!(from.dist(Point2::new(1.5, 0.0)) < 1e-12 && to.dist(Point2::new(1.5, 1.0)) < 1e-12);
        let base: Vec<Point2> = f.base.iter().map(|&c| dom.poly.point_at(c)).collect();
        assert!(base[0].dist(Point2::new(0.0, 1.0)) < 1e-12 && base[1].dist(Point2::new(0.0, 0.0)) < 1e-12);
        let lines: Vec<_> = cover.elements.iter().filter(|el| el.edge == 3 && matches!(el.form, DistForm::Line { .. })).collect();
        assert!(lines.len() >= 2);
        for el in lines {
            let c = el.centroid();
            assert!((el.form.eval(c) - c.x).abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_radius_at_center() {
        let dom = rect();
        let (_, cover) = pipeline(&dom);
        let (r, arg) = cover.radius_at(&dom, Point2::new(1.5, 0.5)).unwrap();
        assert!((r - 1.5).abs() < 1e-12);
        assert_eq!(arg, vec![1, 3]);
        assert!(matches!(cover.radius_at(&dom, Point2::new(4.0, 0.5)), Err(CoverError::PointOutsidePolygon(..))));
    }

    #[test]
    fn triangle_radius_at_incenter() {
        let dom = triangle();
        let (funnels, cover) = pipeline(&dom);
        assert_eq!(funnels.len(), 3);
        let (r, arg) = cover.radius_at(&dom, Point2::new(0.5, 3f64.sqrt() / 6.0)).unwrap();
        assert!((r - 3f64.sqrt() / 6.0).abs() < 1e-12);
        assert_eq!(arg, vec![0, 1, 2]);
    }

    #[test]
    fn elements_match_geodesic_distance() {
        for dom in fixtures() {
            let (_, cover) = pipeline(&dom);
            for el in &cover.elements {
                let c = el.centroid();
                let want = geodesic_path(&dom, c, Target::Edge(el.edge)).unwrap().length;
                assert!((el.form.eval(c) - want).abs() <= 1e-9 * dom.diam, "{el:?}");
            }
        }
    }

    #[test]
    fn radius_matches_brute_force() {
        for (i, dom) in fixtures().into_iter().enumerate() {
            let (_, cover) = pipeline(&dom);
            for x in samples(&dom, 300, i as u64) {
                let (r, _) = cover.radius_at(&dom, x).unwrap();
                let (rb, _) = brute_radius(&dom, x).unwrap();
                assert!((r - rb).abs() <= 1e-9 * rb, "poly {i} at {x:?}: {r} vs {rb}");
            }
        }
    }

    #[test]
    fn farthest_points_lie_in_funnels() {
        for (i, dom) in fixtures().into_iter().enumerate() {
            let (funnels, _) = pipeline(&dom);
            for x in samples(&dom, 200, 100 + i as u64) {
                let (_, far) = brute_radius(&dom, x).unwrap();
                // With tied edges, the tie rule picks which funnel holds x.
                let inside = |e: usize| funnels.iter().any(|f| f.edge == e && f.contains(x, dom.tau()));
                assert!(far.iter().any(|&e| inside(e)), "poly {i} edges {far:?} at {x:?}");
                if far.len() == 1 {
                    assert!(inside(far[0]));
                }
            }
        }
    }

    #[test]
    fn sizes_are_linear() {
        for dom in fixtures() {
            let (funnels, cover) = pipeline(&dom);
            let n = dom.n();
            let fsum: usize = funnels.iter().map(|f| f.size).sum();
            assert!(fsum <= 4 * n, "{fsum} vs {n}");
            assert!(cover.elements.len() <= 40 * n, "{} vs {n}", cover.elements.len());
            assert!(cover.chords.len() <= 2 * cover.elements.len());
        }
    }

    #[test]
    fn json_lists_corners_form_and_edge() {
        let dom = triangle();
        let (_, cover) = pipeline(&dom);
        let js = cover.to_json();
        let el = &js["elements"][0];
        assert_eq!(el["corners"].as_array().unwrap().len(), 3);
        assert!(el["form"].is_string());
        assert!(el["edge"].is_u64());
    }
}
