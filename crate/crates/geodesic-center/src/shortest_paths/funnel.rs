//! Funnel-splitting depth-first search over the triangulation dual.
//!
//! A funnel lives on a diagonal `(u, w)` and lists the nodes `u = F[0], ..,
//! F[apex], .., F[m] = w`. Boundary ray `i` separates the wedges of `F[i]` and
//! `F[i+1]`; everything left of ray `i` belongs to wedges `0..=i`.

use crate::forms::DistForm;
use crate::geom::{on_segment, orientation, Point2, PolygonBoundary};
use crate::triangulation::{Side, Triangulation};

/// Node id of the source edge's perpendicular base.
pub const BASE: usize = usize::MAX;
/// Marker for a vertex not reached yet.
pub const UNSET: usize = usize::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Source {
    Point(Point2),
    Vertex(usize),
    Edge(usize),
}

#[derive(Clone, Debug)]
pub struct Funnel {
    pub nodes: Vec<usize>,
    pub apex: usize,
}

/// Triangle subset for pruned searches, reset in O(1) by bumping a stamp.
#[derive(Clone, Debug, Default)]
pub struct Mask {
    stamp: Vec<u32>,
    cur: u32,
}

impl Mask {
    pub fn new(m: usize) -> Self {
        Mask { stamp: vec![0; m], cur: 1 }
    }
    pub fn clear(&mut self) {
        self.cur += 1;
    }
    pub fn insert(&mut self, t: usize) -> bool {
        let fresh = self.stamp[t] != self.cur;
        self.stamp[t] = self.cur;
        fresh
    }
    pub fn contains(&self, t: usize) -> bool {
        self.stamp[t] == self.cur
    }
}

/// Hooks called during the search.
pub trait Visitor {
    /// Vertex `z` was reached inside triangle `t`, with funnel `f` entering `t`
    /// and `j` the index of its parent in `f`.
    fn triangle(&mut self, _e: &Engine, _t: usize, _entry: usize, _f: &Funnel, _j: usize) {}
    /// Polygon edge `g` is a side of a visited triangle; `f` spans it with
    /// `f[0] = v_{g+1}` and `f[m] = v_g`.
    fn boundary(&mut self, _e: &Engine, _g: usize, _f: &Funnel) {}
}

pub struct NoVisit;
impl Visitor for NoVisit {}

/// A finished search: tree over the vertices plus the source description.
pub struct Engine<'a> {
    pub poly: &'a PolygonBoundary,
    pub tri: &'a Triangulation,
    pub source: Source,
    /// Node id of a point source (`n`), a vertex source, or `BASE`.
    pub src_node: usize,
    pub src_pt: Point2,
    /// Source triangle.
    pub src_tri: usize,
    pub dist: Vec<f64>,
    pub parent: Vec<usize>,
    /// Inward normal of the source edge (zero for point sources).
    pub n_in: Point2,
}

impl<'a> Engine<'a> {
    pub fn new(poly: &'a PolygonBoundary, tri: &'a Triangulation, source: Source) -> Option<Self> {
        let n = poly.n();
        let (src_node, src_pt, src_tri, n_in) = match source {
            Source::Point(p) => {
                if let Some(v) = poly.vertices().iter().position(|&q| q == p) {
                    return Engine::new(poly, tri, Source::Vertex(v));
                }
                let t = tri.locate(poly, p)?;
                (n, p, t, Point2::default())
            }
            Source::Vertex(v) => (v, poly.vertex(v), tri.vertex_tri[v], Point2::default()),
            Source::Edge(g) => (BASE, poly.vertex(g), tri.edge_tri[g], poly.inward_normal(g)),
        };
        Some(Engine {
            poly,
            tri,
            source,
            src_node,
            src_pt,
            src_tri,
            dist: vec![f64::INFINITY; n + 1],
            parent: vec![UNSET; n + 1],
            n_in,
        })
    }

    pub fn pos(&self, node: usize) -> Point2 {
        if node == self.poly.n() {
            self.src_pt
        } else {
            self.poly.vertex(node)
        }
    }

    pub fn node_dist(&self, node: usize) -> f64 {
        if node == BASE {
            0.0
        } else {
            self.dist[node]
        }
    }

    /// Distance function of the wedge owned by `node`.
    pub fn form(&self, node: usize) -> DistForm {
        if node == BASE {
            DistForm::Line { origin: self.src_pt, normal: self.n_in }
        } else {
            DistForm::Apex { v: self.pos(node), kappa: self.dist[node] }
        }
    }

    /// Origin and direction of boundary ray `i` of `f`.
    pub fn ray(&self, f: &Funnel, i: usize) -> (Point2, Point2) {
        let (a, b) = (f.nodes[i], f.nodes[i + 1]);
        if b == BASE {
            (self.pos(a), self.n_in)
        } else if a == BASE {
            (self.pos(b), self.n_in)
        } else if i < f.apex {
            (self.pos(a), self.pos(a) - self.pos(b))
        } else {
            (self.pos(b), self.pos(b) - self.pos(a))
        }
    }

    /// True iff point `z` lies on the `u` side (left) of boundary ray `i`.
    fn left_of_ray(&self, f: &Funnel, i: usize, z: Point2) -> bool {
        let (a, b) = (f.nodes[i], f.nodes[i + 1]);
        if a == BASE || b == BASE {
            // Ties go to the perpendicular wedge.
            let (o, d) = self.ray(f, i);
            let s = orientation(o, o + d, z);
            return if b == BASE { s > 0 } else { s >= 0 };
        }
        let o = {
            -orientation(self.pos(a), self.pos(b), z) * if i < f.apex { 1 } else { -1 }
        };
        if i < f.apex {
            o >= 0
        } else {
            o > 0
        }
    }

    /// Index in `f` of the node whose wedge contains `z`.
    pub fn find_wedge(&self, f: &Funnel, z: Point2) -> usize {
        let m = f.nodes.len() - 1;
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.left_of_ray(f, mid, z) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// Index of the wedge containing the direction `d` (a point at infinity).
    pub fn find_wedge_dir(&self, f: &Funnel, d: Point2) -> usize {
        let m = f.nodes.len() - 1;
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let (_, r) = self.ray(f, mid);
            let c = r.cross(d);
            let left = if mid < f.apex { c >= 0.0 } else { c > 0.0 };
            if left {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// Splits `f` at `z` whose parent is `f[j]`: funnels on `(u, z)` and `(z, w)`.
    pub fn split(f: &Funnel, j: usize, z: usize) -> (Funnel, Funnel) {
        let mut left = Vec::with_capacity(j + 2);
        left.extend_from_slice(&f.nodes[..=j]);
        left.push(z);
        let mut right = Vec::with_capacity(f.nodes.len() - j + 1);
        right.push(z);
        right.extend_from_slice(&f.nodes[j..]);
        let la = j.min(f.apex);
        let ra = if f.apex >= j { f.apex - j + 1 } else { 1 };
        (Funnel { nodes: left, apex: la }, Funnel { nodes: right, apex: ra })
    }

    fn settle(&mut self, z: usize, par: usize) {
        let pz = self.poly.vertex(z);
        self.parent[z] = par;
        self.dist[z] = if par == BASE {
            (pz - self.src_pt).dot(self.n_in).max(0.0)
        } else {
            self.dist[par] + pz.dist(self.pos(par))
        };
    }

    /// Runs the search, optionally confined to `mask`.
    pub fn run(&mut self, mask: Option<&Mask>, vis: &mut impl Visitor) {
        let n = self.poly.n();
        let allowed = |t: usize| mask.is_none_or(|m| m.contains(t));
        let mut stack: Vec<(usize, usize, Funnel)> = Vec::new();
        let t0 = self.src_tri;
        let tri = self.tri;
        let tv = tri.tris[t0];
        match self.source {
            Source::Edge(g) => {
                let k = (0..3).find(|&k| tv[k] == g).unwrap();
                let g1 = (g + 1) % n;
                self.dist[g] = 0.0;
                self.dist[g1] = 0.0;
                self.parent[g] = BASE;
                self.parent[g1] = BASE;
                stack.push((t0, k, Funnel { nodes: vec![g, BASE, g1], apex: 1 }));
            }
            Source::Point(_) | Source::Vertex(_) => {
                let s = self.src_node;
                self.dist[s] = 0.0;
                self.parent[s] = s;
                for &v in &tv {
                    if v != s {
                        self.settle(v, s);
                    }
                }
                vis.triangle(self, t0, usize::MAX, &Funnel { nodes: vec![s], apex: 0 }, 0);
                for k in 0..3 {
                    let (x, y) = (tv[k], tv[(k + 1) % 3]);
                    let f = if x == s {
                        Funnel { nodes: vec![y, s], apex: 1 }
                    } else if y == s {
                        Funnel { nodes: vec![s, x], apex: 0 }
                    } else {
                        Funnel { nodes: vec![y, s, x], apex: 1 }
                    };
                    self.push_side(t0, k, f, &mut stack, vis, &allowed);
                }
            }
        }
        while let Some((t, k, f)) = stack.pop() {
            let tv = tri.tris[t];
            let z = tv[(k + 2) % 3];
            let j = self.find_wedge(&f, self.poly.vertex(z));
            if self.parent[z] == UNSET {
                self.settle(z, f.nodes[j]);
            }
            vis.triangle(self, t, k, &f, j);
            let (fl, fr) = Engine::split(&f, j, z);
            // Side (u, z) is side k+2 of t, side (z, w) is side k+1.
            self.push_side(t, (k + 2) % 3, fl, &mut stack, vis, &allowed);
            self.push_side(t, (k + 1) % 3, fr, &mut stack, vis, &allowed);
        }
    }

    fn push_side(
        &self,
        t: usize,
        side: usize,
        f: Funnel,
        stack: &mut Vec<(usize, usize, Funnel)>,
        vis: &mut impl Visitor,
        allowed: &impl Fn(usize) -> bool,
    ) {
        match self.tri.sides[t][side] {
            Side::Boundary(g) => vis.boundary(self, g, &f),
            Side::Diagonal(t2, k2) => {
                if allowed(t2) {
                    stack.push((t2, k2, f));
                }
            }
        }
    }

    /// Where the shortest path to polygon edge `g` ends, given the funnel
    /// spanning `g`: `(terminal, distance, last node before the terminal)`.
    pub fn terminal(&self, g: usize, f: &Funnel) -> (Point2, f64, usize) {
        let (a, b) = self.poly.edge(g);
        if self.src_node == self.poly.n() && orientation(a, b, self.src_pt) == 0 && on_segment(a, b, self.src_pt) {
            return (self.src_pt, 0.0, self.src_node);
        }
        if let Source::Edge(s) = self.source {
            if s == g {
                return (a, 0.0, BASE);
            }
        }
        let n_out = -self.poly.inward_normal(g);
        let m = f.nodes.len() - 1;
        let j = self.find_wedge_dir(f, n_out);
        let node = f.nodes[j];
        if j == 0 || j == m {
            let p = self.pos(node);
            return (p, self.node_dist(node), node);
        }
        if node == BASE {
            // Source and target edges are parallel and face each other.
            let lo = self.ray(f, j - 1).0;
            let hi = self.ray(f, j).0;
            let mid = lo.lerp(hi, 0.5);
            let d = b - a;
            let t = ((mid - a).dot(d) / d.norm2()).clamp(0.0, 1.0);
            let p = a.lerp(b, t);
            return (p, (p - self.src_pt).dot(self.n_in), BASE);
        }
        let c = self.pos(node);
        let d = b - a;
        let t = ((c - a).dot(d) / d.norm2()).clamp(0.0, 1.0);
        let p = a.lerp(b, t);
        (p, self.dist[node] + c.dist(p), node)
    }

    /// Splits the segment `f[0] -> f[m]` into the wedges of `f`:
    /// `(t0, t1, node)` with parameters in `[0, 1]` from `f[0]`.
    pub fn pieces(&self, f: &Funnel) -> Vec<(f64, f64, usize)> {
        let m = f.nodes.len() - 1;
        let a = self.end_pos(f, 0);
        let b = self.end_pos(f, m);
        let d = b - a;
        let mut out = Vec::with_capacity(m + 1);
        let mut prev = 0.0f64;
        for j in 0..=m {
            let next = if j == m {
                1.0
            } else {
                let (o, r) = self.ray(f, j);
                let den = r.cross(d);
                let s = if den.abs() < 1e-300 { prev } else { (a - o).cross(r) / den };
                s.clamp(prev, 1.0)
            };
            out.push((prev, next, f.nodes[j]));
            prev = next;
        }
        out
    }

    fn end_pos(&self, f: &Funnel, i: usize) -> Point2 {
        let node = f.nodes[i];
        if node == BASE {
            self.src_pt
        } else {
            self.pos(node)
        }
    }

    /// Convex cells of triangle `t` (entered through side `entry` with funnel
    /// `f`, third vertex in wedge `j`), each with the node owning it.
    pub fn cells(&self, t: usize, entry: usize, f: &Funnel, j: usize) -> Vec<(Vec<Point2>, usize)> {
        let corners = self.tri.corners(self.poly, t);
        if entry == usize::MAX {
            return vec![(corners.to_vec(), f.nodes[0])];
        }
        let tri_pts = vec![corners[entry], corners[(entry + 1) % 3], corners[(entry + 2) % 3]];
        let m = f.nodes.len() - 1;
        let min_area = 1e-14 * polygon_area(&tri_pts).abs();
        let snap = 1e-12 * (tri_pts[0].dist(tri_pts[1]) + tri_pts[1].dist(tri_pts[2]));
        let mut out = Vec::new();
        for (i, &(t0, t1, node)) in self.pieces(f).iter().enumerate() {
            if t1 <= t0 && i != j {
                continue;
            }
            let mut poly = tri_pts.clone();
            if i > 0 {
                let (o, r) = self.ray(f, i - 1);
                poly = clip_halfplane(&poly, o, r, false);
            }
            if i < m && !poly.is_empty() {
                let (o, r) = self.ray(f, i);
                poly = clip_halfplane(&poly, o, r, true);
            }
            dedup_ring(&mut poly, snap);
            if poly.len() >= 3 && polygon_area(&poly) > min_area {
                out.push((poly, node));
            }
        }
        out
    }
}

/// Keeps the part of `poly` left (`keep_left`) or right of the ray line.
pub fn clip_halfplane(poly: &[Point2], o: Point2, r: Point2, keep_left: bool) -> Vec<Point2> {
    let side = |p: Point2| {
        let c = r.cross(p - o);
        if keep_left {
            c
        } else {
            -c
        }
    };
    let mut out = Vec::with_capacity(poly.len() + 1);
    let k = poly.len();
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push(p.lerp(q, t));
        }
    }
    out
}

/// Drops ring points closer than `eps` to their predecessor.
pub fn dedup_ring(poly: &mut Vec<Point2>, eps: f64) {
    poly.dedup_by(|b, a| a.dist(*b) <= eps);
    while poly.len() > 1 && poly[0].dist(*poly.last().unwrap()) <= eps {
        poly.pop();
    }
}

pub fn polygon_area(p: &[Point2]) -> f64 {
    let k = p.len();
    let mut s = 0.0;
    for i in 0..k {
        s += p[i].cross(p[(i + 1) % k]);
    }
    0.5 * s
}
