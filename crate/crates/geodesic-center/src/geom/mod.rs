//! Planar primitives, the polygon model and boundary parameterization.

mod predicates;

pub use predicates::{on_segment, orientation, segments_intersect};

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }
    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }
    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            self
        }
    }
    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}
impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}
impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}
impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Euclidean distance from `x` to the closed segment `ab`.
pub fn dist_point_segment(x: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return x.dist(a);
    }
    let t = ((x - a).dot(d) / l2).clamp(0.0, 1.0);
    x.dist(a.lerp(b, t))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("edges {0} and {1} intersect improperly")]
    SimplicityViolation(usize, usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("point ({0}, {1}) lies outside the polygon")]
    PointOutsidePolygon(f64, f64),
}

/// A simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonBoundary {
    vertices: Vec<Point2>,
    #[serde(skip)]
    reversed: bool,
}

impl PolygonBoundary {
    /// Validates simplicity and normalizes to counterclockwise order.
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(i));
        }
        check_simple(&vertices)?;
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(GeomError::ZeroArea);
        }
        let mut vertices = vertices;
        let reversed = area < 0.0;
        if reversed {
            vertices.reverse();
        }
        Ok(PolygonBoundary { vertices, reversed })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }
    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }
    /// True when the input was clockwise and got reversed.
    pub fn was_reversed(&self) -> bool {
        self.reversed
    }
    /// Edge `i` runs from vertex `i` to vertex `i+1`.
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }
    pub fn edge_len(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        a.dist(b)
    }
    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }
    pub fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }
    /// Inward unit normal of edge `i`.
    pub fn inward_normal(&self, i: usize) -> Point2 {
        let (a, b) = self.edge(i);
        (b - a).perp().normalized()
    }
    pub fn is_reflex(&self, i: usize) -> bool {
        orientation(self.vertex(self.prev(i)), self.vertex(i), self.vertex(i + 1)) < 0
    }
    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
    /// Euclidean diameter (max vertex distance).
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max(a.dist(*b));
            }
        }
        best
    }
    pub fn perimeter(&self) -> f64 {
        (0..self.n()).map(|i| self.edge_len(i)).sum()
    }
    pub fn point_at(&self, c: BoundaryCursor) -> Point2 {
        let (a, b) = self.edge(c.edge);
        a.lerp(b, c.t)
    }
    /// Closed point-in-polygon test (boundary counts as inside).
    pub fn contains(&self, p: Point2) -> bool {
        let n = self.n();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if orientation(a, b, p) == 0 && on_segment(a, b, p) {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let o = orientation(a, b, p);
                // Upward edge with p on its left, or downward edge with p on its right.
                if (b.y > a.y && o > 0) || (b.y < a.y && o < 0) {
                    inside = !inside;
                }
            }
        }
        inside
    }
    /// Nearest boundary cursor to `p` (used to snap boundary points).
    pub fn nearest_cursor(&self, p: Point2) -> (BoundaryCursor, f64) {
        let mut best = (BoundaryCursor::new(0, 0.0), f64::INFINITY);
        for i in 0..self.n() {
            let (a, b) = self.edge(i);
            let d = b - a;
            let t = ((p - a).dot(d) / d.norm2()).clamp(0.0, 1.0);
            let dist = p.dist(a.lerp(b, t));
            if dist < best.1 {
                best = (BoundaryCursor::new(i, t), dist);
            }
        }
        (best.0.canonical(self.n()), best.1)
    }
}

fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

fn check_simple(v: &[Point2]) -> Result<(), GeomError> {
    let n = v.len();
    // Sort edges by min x and sweep to limit pair tests.
    let mut order: Vec<usize> = (0..n).collect();
    let minx = |i: usize| v[i].x.min(v[(i + 1) % n].x);
    let maxx = |i: usize| v[i].x.max(v[(i + 1) % n].x);
    order.sort_by(|&a, &b| minx(a).total_cmp(&minx(b)));
    for (k, &i) in order.iter().enumerate() {
        let hi = maxx(i);
        for &j in &order[k + 1..] {
            if minx(j) > hi {
                break;
            }
            let (a, b) = (i.min(j), i.max(j));
            let adjacent = b == a + 1 || (a == 0 && b == n - 1);
            let (p1, p2) = (v[a], v[(a + 1) % n]);
            let (q1, q2) = (v[b], v[(b + 1) % n]);
            if adjacent {
                // Consecutive edges may only share their common endpoint.
                let (shared, pa, pb) = if b == a + 1 { (p2, p1, q2) } else { (p1, p2, q1) };
                if orientation(pa, shared, pb) == 0 && (pa - shared).dot(pb - shared) > 0.0 {
                    return Err(GeomError::SimplicityViolation(a, b));
                }
            } else if segments_intersect(p1, p2, q1, q2) {
                return Err(GeomError::SimplicityViolation(a, b));
            }
        }
    }
    Ok(())
}

/// A point on the boundary: edge index plus parameter along that edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCursor {
    pub edge: usize,
    pub t: f64,
}

impl BoundaryCursor {
    pub fn new(edge: usize, t: f64) -> Self {
        BoundaryCursor { edge, t }
    }
    pub fn at_vertex(v: usize) -> Self {
        BoundaryCursor { edge: v, t: 0.0 }
    }
    /// Moves `t == 1` to the start of the next edge, except on the last edge.
    pub fn canonical(self, n: usize) -> Self {
        let t = self.t.clamp(0.0, 1.0);
        if t >= 1.0 && self.edge + 1 < n {
            BoundaryCursor::new(self.edge + 1, 0.0)
        } else {
            BoundaryCursor::new(self.edge % n, t)
        }
    }
    /// Position along the boundary measured in edges, in `[0, n]`.
    pub fn rank(self) -> f64 {
        self.edge as f64 + self.t
    }
}

/// True iff `p, q, r, s` appear in this cyclic order along the boundary in
/// increasing parameter direction; coincident neighbours are allowed.
pub fn cyclic_order(p: BoundaryCursor, q: BoundaryCursor, r: BoundaryCursor, s: BoundaryCursor) -> bool {
    cyclic_order_ranks(&[p.rank(), q.rank(), r.rank(), s.rank()])
}

/// Cyclic order test on raw boundary ranks.
pub fn cyclic_order_ranks(ranks: &[f64]) -> bool {
    let k = ranks.len();
    let descents = (0..k).filter(|&i| ranks[(i + 1) % k] < ranks[i]).count();
    descents <= 1
}

/// A straight segment inside the polygon with both ends on the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Chord {
    pub a: BoundaryCursor,
    pub b: BoundaryCursor,
    pub a_pt: Point2,
    pub b_pt: Point2,
}

impl Chord {
    pub fn new(poly: &PolygonBoundary, a: BoundaryCursor, b: BoundaryCursor) -> Self {
        Chord { a, b, a_pt: poly.point_at(a), b_pt: poly.point_at(b) }
    }
    pub fn between_vertices(poly: &PolygonBoundary, i: usize, j: usize) -> Self {
        Chord::new(poly, BoundaryCursor::at_vertex(i), BoundaryCursor::at_vertex(j))
    }
    pub fn len(&self) -> f64 {
        self.a_pt.dist(self.b_pt)
    }
}

/// One general-position problem found in the input or downstream.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    CollinearVertices { vertices: [usize; 3] },
    VertexEquidistant { vertex: usize, edges: Vec<usize> },
    TooManyFarthestEdges { edge: usize, t: f64, edges: Vec<usize> },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PositionReport {
    pub violations: Vec<Violation>,
}

impl PositionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

/// Reports every collinear vertex triple.
///
/// For each vertex the directions to later vertices are sorted by slope with
/// an exact comparator, so collinear partners end up adjacent.
pub fn validate_general_position(poly: &PolygonBoundary) -> PositionReport {
    let v = poly.vertices();
    let n = v.len();
    let mut report = PositionReport::default();
    let mut dirs: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        dirs.clear();
        dirs.extend(i + 1..n);
        let o = v[i];
        // Map each direction to the upper half-plane so opposite rays compare equal.
        let canon = |j: usize| {
            let d = v[j] - o;
            if d.y < 0.0 || (d.y == 0.0 && d.x < 0.0) {
                (o - d, true)
            } else {
                (v[j], false)
            }
        };
        let cmp = |a: &usize, b: &usize| {
            let (pa, _) = canon(*a);
            let (pb, _) = canon(*b);
            // In the upper half-plane, angle order equals clockwise-ness.
            match orientation(o, pa, pb) {
                1 => std::cmp::Ordering::Less,
                -1 => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            }
        };
        dirs.sort_by(cmp);
        let mut k = 0;
        while k < dirs.len() {
            let mut m = k + 1;
            while m < dirs.len() && cmp(&dirs[k], &dirs[m]) == std::cmp::Ordering::Equal {
                m += 1;
            }
            for a in k..m {
                for b in a + 1..m {
                    let mut t = [i, dirs[a], dirs[b]];
                    t.sort_unstable();
                    report.push(Violation::CollinearVertices { vertices: t });
                }
            }
            k = m;
        }
    }
    report
}
