//! The geodesic edge center: chord and geodesic oracles, narrowing over the
//! triangulation dual tree, and the final convex solve in one triangle.

use crate::boundary_voronoi::{boundary_voronoi_full, BoundaryVoronoi};
use crate::coarse_cover::{build_edge_funnels, polygon_coarse_cover, CoverError, EdgeFunnel, PolygonCoarseCover};
use crate::envelope::{minimize, upper_envelope, Piece};
use crate::farthest::{farthest_edge_per_vertex, FarthestError, FarthestLabels};
use crate::forms::DistForm;
use crate::geom::{dist_point_segment, orientation, Chord, Point2};
use crate::shortest_paths::{Domain, GeodesicPath};
use crate::triangulation::Side;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CenterError {
    #[error("no cover element meets the segment ({0:?}) -> ({1:?})")]
    EmptyCover(Point2, Point2),
    #[error("narrowing did not terminate after {0} oracle calls")]
    NonTermination(usize),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Relative tolerance for witnesses of a relative center.
const WITNESS_REL: f64 = 1e-9;
/// Slope below which a direction counts as descending.
const DESCENT_TOL: f64 = 1e-9;
/// Rotation used to step off a wedge side.
const ANGLE_NUDGE: f64 = 1e-6;
/// Relative tolerance for the farthest edges reported at the center.
const CENTER_WITNESS_REL: f64 = 1e-7;

/// Cover elements clipped to a segment `a + s * dir`, `s` in `[0, len]`.
#[derive(Clone, Debug, Serialize)]
pub struct ChordCover {
    pub a: Point2,
    pub b: Point2,
    pub dir: Point2,
    pub len: f64,
    /// `(lo, hi, element)`.
    pub pieces: Vec<(f64, f64, usize)>,
}

/// Parameter range of the segment inside a triangle, with slack `tol`.
fn clip_to_triangle(a: Point2, dir: Point2, len: f64, corners: &[Point2; 3], tol: f64) -> Option<(f64, f64)> {
    let area = (corners[1] - corners[0]).cross(corners[2] - corners[0]);
    let sigma = if area >= 0.0 { 1.0 } else { -1.0 };
    let (mut lo, mut hi) = (0.0f64, len);
    for k in 0..3 {
        let (p, q) = (corners[k], corners[(k + 1) % 3]);
        let side = q - p;
        let slack = -tol * side.norm();
        let c0 = sigma * side.cross(a - p);
        let c1 = sigma * side.cross(dir);
        if c1.abs() <= 1e-300 {
            if c0 < slack {
                return None;
            }
        } else if c1 > 0.0 {
            lo = lo.max((slack - c0) / c1);
        } else {
            hi = hi.min((slack - c0) / c1);
        }
    }
    (hi >= lo).then_some((lo, hi))
}

pub fn chord_cover(dom: &Domain, cover: &PolygonCoarseCover, a: Point2, b: Point2, tris: &[usize]) -> ChordCover {
    let len = a.dist(b);
    let dir = (b - a).normalized();
    let tol = 1e-12 * dom.diam;
    let mut pieces = Vec::new();
    for &t in tris {
        for &k in &cover.by_tri[t] {
            if let Some((lo, hi)) = clip_to_triangle(a, dir, len, &cover.elements[k].corners, tol) {
                pieces.push((lo, hi, k));
            }
        }
    }
    ChordCover { a, b, dir, len, pieces }
}

/// The triangles a segment inside the polygon passes through, plus their
/// neighbours so that points on shared sides see both.
pub fn segment_triangles(dom: &Domain, a: Point2, b: Point2) -> Vec<usize> {
    let tri = &dom.tri;
    let loc = |p: Point2| tri.locate(&dom.poly, p);
    let (ta, tb) = match (loc(a.lerp(b, 1e-9)), loc(b.lerp(a, 1e-9))) {
        (Some(x), Some(y)) => (x, y),
        _ => return (0..tri.len()).collect(),
    };
    let mut out = tri.dual_path(ta, tb);
    let core = out.clone();
    for t in core {
        for s in tri.sides[t] {
            if let Side::Diagonal(t2, _) = s {
                out.push(t2);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// A cover element attaining the relative center's value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub element: usize,
    pub edge: usize,
    /// Steepest ascent of `d(., edge)`; `None` on the apex itself, where
    /// every direction ascends at unit rate.
    pub gradient: Option<Point2>,
    /// Inward normals of the element sides through the point; directions
    /// into the element satisfy `d . n >= 0` for each.
    #[serde(skip)]
    pub wedge: Vec<Point2>,
}

impl Witness {
    fn admits(&self, d: Point2) -> bool {
        self.wedge.iter().all(|n| d.dot(*n) >= 0.0)
    }
    fn slope(&self, d: Point2) -> f64 {
        self.gradient.map_or(1.0, |g| g.dot(d))
    }
}

/// `c_K`: the minimizer of `r` on a segment.
#[derive(Clone, Debug, Serialize)]
pub struct RelativeCenter {
    pub point: Point2,
    pub s: f64,
    pub value: f64,
    pub witnesses: Vec<Witness>,
}

/// The elements of the cover attaining `value` at `x`, each with the wedge
/// of directions it covers there.
pub fn witnesses_at(dom: &Domain, cover: &PolygonCoarseCover, x: Point2, value: f64) -> Vec<Witness> {
    let els = &cover.elements;
    let near = 1e-12 * dom.diam;
    let tol = WITNESS_REL * value.abs().max(1e-3 * dom.diam);
    let mut ks = cover.containing(x, near);
    if ks.is_empty() {
        ks = cover.containing(x, 1e-9 * dom.diam);
    }
    ks.into_iter()
        .filter(|&k| els[k].form.eval(x) >= value - tol)
        .map(|k| {
            let c = els[k].corners;
            let sigma = if (c[1] - c[0]).cross(c[2] - c[0]) >= 0.0 { 1.0 } else { -1.0 };
            let wedge = (0..3)
                .filter(|&i| dist_point_segment(x, c[i], c[(i + 1) % 3]) <= near.max(1e-12 * x.norm()))
                .map(|i| (c[(i + 1) % 3] - c[i]).normalized().perp() * sigma)
                .collect();
            let gradient = match els[k].form {
                DistForm::Apex { v, .. } if v.dist(x) <= near => None,
                f => f.gradient(x),
            };
            Witness { element: k, edge: els[k].edge, gradient, wedge }
        })
        .collect()
}

/// Minimizes the envelope of a chord cover; the leftmost minimizer wins.
pub fn relative_center(dom: &Domain, cover: &PolygonCoarseCover, cc: &ChordCover) -> Result<RelativeCenter, CenterError> {
    let els = &cover.elements;
    let (point, s, value) = if cc.len <= 1e-15 * dom.diam {
        let v = cc.pieces.iter().map(|p| els[p.2].form.eval(cc.a)).fold(f64::NEG_INFINITY, f64::max);
        if !v.is_finite() {
            return Err(CenterError::EmptyCover(cc.a, cc.b));
        }
        (cc.a, 0.0, v)
    } else {
        let pieces: Vec<Piece> = cc.pieces.iter().map(|&(lo, hi, k)| Piece { lo, hi, f: els[k].form.along(cc.a, cc.dir), tag: k }).collect();
        let env = upper_envelope(&pieces, cc.len);
        let (s, v, _) = minimize(&env).ok_or(CenterError::EmptyCover(cc.a, cc.b))?;
        // A minimizer a hair from an end is taken at the end, so that the
        // side test sees the end's geometry rather than rounding noise.
        let snap = 1e-9 * dom.diam;
        let at_end = |t: f64| {
            let x = cc.a + cc.dir * t;
            let e = 1e-12 * cc.len;
            let w = cc.pieces.iter().filter(|p| p.0 - e <= t && t <= p.1 + e).map(|p| els[p.2].form.eval(x)).fold(f64::NEG_INFINITY, f64::max);
            (w <= v + 1e-11 * dom.diam).then_some((x, t, w.max(v)))
        };
        let end = if s <= snap {
            at_end(0.0).map(|(_, t, w)| (cc.a, t, w))
        } else if s >= cc.len - snap {
            at_end(cc.len).map(|(_, t, w)| (cc.b, t, w))
        } else {
            None
        };
        end.unwrap_or((cc.a + cc.dir * s, s, v))
    };
    let witnesses = witnesses_at(dom, cover, point, value);
    Ok(RelativeCenter { point, s, value, witnesses })
}

/// Relative center on any segment inside the polygon.
pub fn relative_center_on_segment(dom: &Domain, cover: &PolygonCoarseCover, a: Point2, b: Point2) -> Result<RelativeCenter, CenterError> {
    let tris = segment_triangles(dom, a, b);
    relative_center(dom, cover, &chord_cover(dom, cover, a, b, &tris))
}

pub fn relative_center_on_chord(dom: &Domain, cover: &PolygonCoarseCover, k: &Chord) -> Result<RelativeCenter, CenterError> {
    relative_center_on_segment(dom, cover, k.a_pt, k.b_pt)
}

/// Where the center lies relative to an oriented segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideDecision {
    Left,
    Right,
    On,
}

/// Slope of `r` in direction `d`: the steepest witness covering `d`.
fn slope(ws: &[Witness], d: Point2) -> f64 {
    ws.iter().filter(|w| w.admits(d)).map(|w| w.slope(d)).fold(f64::NEG_INFINITY, f64::max)
}

/// Counterclockwise angle from `u` to `d` in `[0, 2 pi)`.
fn ccw_angle(u: Point2, d: Point2) -> f64 {
    let a = u.cross(d).atan2(u.dot(d));
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Smallest slope of `r` over unit directions strictly counterclockwise
/// from `from` and before `to`.
///
/// The slope is piecewise linear in the angle, so its minimum sits at a
/// wedge side, a reversed gradient or a direction where two gradients
/// agree; sides are also tried just inside each neighbouring wedge.
fn best_descent(ws: &[Witness], from: Point2, to: Point2) -> f64 {
    let span = ccw_angle(from, to);
    let mut base: Vec<Point2> = vec![from.normalized(), to.normalized()];
    let grads: Vec<Point2> = ws.iter().filter_map(|w| w.gradient).collect();
    for (i, &g) in grads.iter().enumerate() {
        base.push(-g);
        for &h in &grads[i + 1..] {
            if (g - h).norm() > 1e-12 {
                let d = (g - h).perp().normalized();
                base.extend([d, -d]);
            }
        }
    }
    for w in ws {
        for n in &w.wedge {
            base.extend([n.perp(), -n.perp()]);
        }
    }
    let (c, s) = (ANGLE_NUDGE.cos(), ANGLE_NUDGE.sin());
    let rot = |d: Point2, s: f64| Point2::new(c * d.x - s * d.y, s * d.x + c * d.y);
    base.into_iter()
        .flat_map(|d| [d, rot(d, s), rot(d, -s)])
        .filter(|&d| {
            let a = ccw_angle(from, d);
            a > 0.5 * ANGLE_NUDGE && a < span - 0.5 * ANGLE_NUDGE
        })
        .map(|d| slope(ws, d))
        .filter(|v| v.is_finite())
        .fold(f64::INFINITY, f64::min)
}

/// Side of `a -> b` holding the center, from the witness wedges at `c`.
///
/// When `c` sits on an end of the segment, the sides there are cut by the
/// segment and by the curve continuing through that end: `before` precedes
/// `a`, `after` follows `b`. Without them the segment is extended straight.
pub fn decide_side(c: &RelativeCenter, a: Point2, b: Point2, before: Option<Point2>, after: Option<Point2>) -> SideDecision {
    if c.witnesses.is_empty() {
        return SideDecision::On;
    }
    let near = 1e-12 * a.dist(b).max(a.norm()).max(b.norm());
    let fwd = match after {
        Some(q) if c.point.dist(b) <= near => q - b,
        _ => b - a,
    };
    let back = match before {
        Some(q) if c.point.dist(a) <= near => q - a,
        _ => a - b,
    };
    let left = best_descent(&c.witnesses, fwd, back);
    let right = best_descent(&c.witnesses, back, fwd);
    match (left < -DESCENT_TOL, right < -DESCENT_TOL) {
        (true, false) => SideDecision::Left,
        (false, true) => SideDecision::Right,
        (false, false) => SideDecision::On,
        // Only from rounding; follow the steeper side.
        (true, true) => {
            if left <= right {
                SideDecision::Left
            } else {
                SideDecision::Right
            }
        }
    }
}

/// Boundary neighbours `(previous, next)` of a point on the boundary.
fn boundary_turn(dom: &Domain, p: Point2) -> Option<(Point2, Point2)> {
    let poly = &dom.poly;
    let (c, d) = poly.nearest_cursor(p);
    if d > dom.tau() {
        return None;
    }
    let (e, n) = (c.edge, poly.n());
    let v = |i: usize| poly.vertex(i % n);
    Some(if p.dist(v(e)) <= dom.tau() {
        (v(e + n - 1), v(e + 1))
    } else if p.dist(v(e + 1)) <= dom.tau() {
        (v(e), v(e + 2))
    } else {
        (v(e), v(e + 1))
    })
}

/// Decides whether the center lies left of, right of, or on the chord.
pub fn chord_oracle(dom: &Domain, cover: &PolygonCoarseCover, k: &Chord) -> Result<(SideDecision, RelativeCenter), CenterError> {
    let rc = relative_center_on_chord(dom, cover, k)?;
    let before = boundary_turn(dom, k.a_pt).map(|t| t.0);
    let after = boundary_turn(dom, k.b_pt).map(|t| t.1);
    Ok((decide_side(&rc, k.a_pt, k.b_pt, before, after), rc))
}

/// Where the center lies relative to an oriented geodesic.
#[derive(Clone, Debug, Serialize)]
pub struct GeodesicDecision {
    pub side: SideDecision,
    /// Segment whose relative center decided it.
    pub segment: usize,
    pub relative: RelativeCenter,
}

/// Runs the chord test on the segment of `path` with the smallest relative center.
pub fn geodesic_oracle(dom: &Domain, cover: &PolygonCoarseCover, path: &GeodesicPath) -> Result<GeodesicDecision, CenterError> {
    let mut best: Option<(usize, RelativeCenter)> = None;
    for (i, w) in path.points.windows(2).enumerate() {
        if w[0] == w[1] {
            continue;
        }
        let rc = relative_center_on_segment(dom, cover, w[0], w[1])?;
        if best.as_ref().is_none_or(|b| rc.value < b.1.value) {
            best = Some((i, rc));
        }
    }
    let (segment, relative) = best.ok_or(CenterError::EmptyCover(path.start(), path.end()))?;
    let pts = &path.points;
    let before = if segment > 0 { Some(pts[segment - 1]) } else { boundary_turn(dom, pts[0]).map(|t| t.0) };
    let after = pts.get(segment + 2).copied().or_else(|| boundary_turn(dom, pts[pts.len() - 1]).map(|t| t.1));
    let side = decide_side(&relative, pts[segment], pts[segment + 1], before, after);
    Ok(GeodesicDecision { side, segment, relative })
}

/// One chord test made while narrowing.
#[derive(Clone, Debug, Serialize)]
pub struct OracleCall {
    pub chord: [usize; 2],
    pub decision: SideDecision,
    pub point: Point2,
    pub value: f64,
    /// Diagonals left inside `Q` after the call.
    pub chords_left: usize,
    /// Point on the side the decision keeps, off the chord.
    #[serde(skip)]
    pub probe: Point2,
}

/// The part of the polygon still known to hold the center.
#[derive(Clone, Debug, Serialize)]
pub struct SearchRegion {
    /// Triangulation triangles making up `Q`.
    pub triangles: Vec<usize>,
    /// Cover elements inside `Q`.
    pub elements: Vec<usize>,
    /// Diagonals inside `Q`.
    pub chords: Vec<[usize; 2]>,
    pub history: Vec<OracleCall>,
    /// Set when an oracle call found the center on its chord.
    pub on_chord: Option<RelativeCenter>,
}

fn region_of(dom: &Domain, cover: &PolygonCoarseCover, alive: &[bool]) -> (Vec<usize>, Vec<usize>, Vec<[usize; 2]>) {
    let tri = &dom.tri;
    let triangles: Vec<usize> = (0..tri.len()).filter(|&t| alive[t]).collect();
    let elements = triangles.iter().flat_map(|&t| cover.by_tri[t].iter().copied()).collect();
    let mut chords = Vec::new();
    for &t in &triangles {
        for (k, s) in tri.sides[t].iter().enumerate() {
            if let Side::Diagonal(t2, _) = *s {
                if t < t2 && alive[t2] {
                    chords.push([tri.tris[t][k], tri.tris[t][(k + 1) % 3]]);
                }
            }
        }
    }
    (triangles, elements, chords)
}

/// Bisects the dual tree with chord tests until one triangle remains.
///
/// Each round cuts `Q` along the diagonal that splits its triangles most
/// evenly.
pub fn narrow_region(dom: &Domain, cover: &PolygonCoarseCover) -> Result<SearchRegion, CenterError> {
    let tri = &dom.tri;
    let m = tri.len();
    let mut alive = vec![true; m];
    let mut count = m;
    let mut root = 0usize;
    let mut history = Vec::new();
    let guard = 4 * m + 8;
    let mut size = vec![0usize; m];
    let mut par = vec![usize::MAX; m];
    while count > 1 {
        if history.len() > guard {
            return Err(CenterError::NonTermination(history.len()));
        }
        // Subtree sizes of Q rooted at `root`.
        let mut order = vec![root];
        par[root] = usize::MAX;
        let mut i = 0;
        while i < order.len() {
            let t = order[i];
            i += 1;
            for s in tri.sides[t] {
                if let Side::Diagonal(t2, _) = s {
                    if alive[t2] && t2 != par[t] {
                        par[t2] = t;
                        order.push(t2);
                    }
                }
            }
        }
        for &t in order.iter().rev() {
            size[t] = 1;
            for s in tri.sides[t] {
                if let Side::Diagonal(t2, _) = s {
                    if alive[t2] && par[t2] == t {
                        size[t] += size[t2];
                    }
                }
            }
        }
        let child = *order[1..].iter().min_by_key(|&&t| size[t].max(count - size[t])).expect("two triangles");
        let parent = par[child];
        let k = (0..3).find(|&k| matches!(tri.sides[child][k], Side::Diagonal(t2, _) if t2 == parent)).expect("shared diagonal");
        let (u, w) = (tri.tris[child][k], tri.tris[child][(k + 1) % 3]);
        let (a, b) = (dom.poly.vertex(u), dom.poly.vertex(w));
        let cc = chord_cover(dom, cover, a, b, &[child, parent]);
        let rc = relative_center(dom, cover, &cc)?;
        let n = dom.poly.n();
        let decision = decide_side(&rc, a, b, Some(dom.poly.vertex((u + n - 1) % n)), Some(dom.poly.vertex((w + 1) % n)));
        // `child` lies left of u -> w: its sides run counterclockwise.
        let far = dom.poly.vertex(tri.tris[child][(k + 2) % 3]);
        let child_left = orientation(a, b, far) > 0;
        let keep_child = match decision {
            SideDecision::On => {
                history.push(OracleCall { chord: [u, w], decision, point: rc.point, value: rc.value, chords_left: count - 1, probe: rc.point });
                let (triangles, elements, chords) = region_of(dom, cover, &alive);
                return Ok(SearchRegion { triangles, elements, chords, history, on_chord: Some(rc) });
            }
            SideDecision::Left => child_left,
            SideDecision::Right => !child_left,
        };
        let keep_tri = if keep_child { child } else { parent };
        let probe = {
            let [p, q, r] = tri.corners(&dom.poly, keep_tri);
            Point2::new((p.x + q.x + r.x) / 3.0, (p.y + q.y + r.y) / 3.0)
        };
        // Drop the other side.
        let mut in_child = vec![false; m];
        let mut stack = vec![child];
        while let Some(t) = stack.pop() {
            in_child[t] = true;
            for s in tri.sides[t] {
                if let Side::Diagonal(t2, _) = s {
                    if alive[t2] && par[t2] == t {
                        stack.push(t2);
                    }
                }
            }
        }
        for t in 0..m {
            if alive[t] && in_child[t] != keep_child {
                alive[t] = false;
                count -= 1;
            }
        }
        root = keep_tri;
        history.push(OracleCall { chord: [u, w], decision, point: rc.point, value: rc.value, chords_left: count - 1, probe });
    }
    let (triangles, elements, chords) = region_of(dom, cover, &alive);
    Ok(SearchRegion { triangles, elements, chords, history, on_chord: None })
}

/// Final answer of the pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterResult {
    pub center: Point2,
    pub radius: f64,
    pub farthest_edges: Vec<usize>,
    /// Bound on `|radius - optimum|`.
    pub certificate: f64,
    pub on_boundary: bool,
}

impl CenterResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "center": [self.center.x, self.center.y],
            "radius": self.radius,
            "farthest_edges": self.farthest_edges,
            "certificate": self.certificate,
            "on_boundary": self.on_boundary,
        })
    }
}

/// Golden-section search for the minimum of a convex function on `[0, 1]`.
fn golden_min(mut f: impl FnMut(f64) -> f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for x in [0.0, 1.0] {
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Minimizes `r` over one triangle: golden section over chords parallel to
/// one side, each solved exactly.
pub fn minimize_in_triangle(dom: &Domain, cover: &PolygonCoarseCover, t: usize, eps: f64) -> Result<RelativeCenter, CenterError> {
    let tri = &dom.tri;
    let mut tris = vec![t];
    for s in tri.sides[t] {
        if let Side::Diagonal(t2, _) = s {
            tris.push(t2);
        }
    }
    let [p, q, r] = tri.corners(&dom.poly, t);
    let seg = |u: f64| (p.lerp(q, u), p.lerp(r, u));
    let mut best: Option<RelativeCenter> = None;
    let mut err = None;
    let mut solve = |u: f64| -> f64 {
        let (a, b) = seg(u);
        match relative_center(dom, cover, &chord_cover(dom, cover, a, b, &tris)) {
            Ok(rc) => {
                let v = rc.value;
                if best.as_ref().is_none_or(|b| v < b.value) {
                    best = Some(rc);
                }
                v
            }
            Err(e) => {
                err = Some(e);
                f64::INFINITY
            }
        }
    };
    let height = p.dist(q).max(p.dist(r));
    golden_min(&mut solve, (eps / height).clamp(1e-15, 1e-3));
    best.ok_or_else(|| err.unwrap_or(CenterError::EmptyCover(p, r)))
}

/// Solves inside the narrowed region and checks the boundary.
pub fn final_minimax(dom: &Domain, cover: &PolygonCoarseCover, region: &SearchRegion, opts: &CenterOptions) -> Result<CenterResult, CenterError> {
    let eps = opts.eps_center_rel * dom.diam;
    let mut cands: Vec<RelativeCenter> = Vec::new();
    if let Some(rc) = &region.on_chord {
        cands.push(rc.clone());
    }
    if region.on_chord.is_none() {
        for &t in &region.triangles {
            cands.push(minimize_in_triangle(dom, cover, t, eps)?);
        }
    }
    for e in 0..dom.n() {
        let (a, b) = dom.poly.edge(e);
        if let Ok(rc) = relative_center(dom, cover, &chord_cover(dom, cover, a, b, &[dom.tri.edge_tri[e]])) {
            cands.push(rc);
        }
    }
    let best = cands.into_iter().min_by(|x, y| x.value.total_cmp(&y.value)).ok_or(CenterError::EmptyCover(Point2::default(), Point2::default()))?;
    let center = best.point;
    let (radius, _) = cover.radius_at(dom, center)?;
    let tol = 1e-12 * dom.diam;
    let mut farthest_edges: Vec<usize> = cover
        .containing(center, tol)
        .into_iter()
        .filter(|&k| cover.elements[k].form.eval(center) >= radius * (1.0 - CENTER_WITNESS_REL))
        .map(|k| cover.elements[k].edge)
        .collect();
    farthest_edges.sort_unstable();
    farthest_edges.dedup();
    let on_boundary = dom.poly.nearest_cursor(center).1 <= dom.tau();
    Ok(CenterResult { center, radius, farthest_edges, certificate: eps, on_boundary })
}

/// Every stage of one run.
#[derive(Clone, Debug)]
pub struct CenterRun {
    pub labels: FarthestLabels,
    /// Set when the separator stage gave up and labels came from direct trees.
    pub label_fallback: Option<FarthestError>,
    pub voronoi: BoundaryVoronoi,
    pub funnels: Vec<EdgeFunnel>,
    pub cover: PolygonCoarseCover,
    pub region: SearchRegion,
    pub result: CenterResult,
    pub warnings: Vec<String>,
}

/// Knobs of the final solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterOptions {
    /// `eps_center` as a fraction of the polygon diameter.
    pub eps_center_rel: f64,
}

impl Default for CenterOptions {
    fn default() -> Self {
        CenterOptions { eps_center_rel: 1e-9 }
    }
}

/// Labels, boundary diagram, funnels, cover, narrowing and final solve.
pub fn run_pipeline(dom: &Domain) -> Result<CenterRun, CenterError> {
    run_pipeline_with(dom, &CenterOptions::default())
}

pub fn run_pipeline_with(dom: &Domain, opts: &CenterOptions) -> Result<CenterRun, CenterError> {
    let (labels, label_fallback) = farthest_edge_per_vertex(dom);
    let mut warnings = Vec::new();
    if let Some(e) = &label_fallback {
        warnings.push(format!("farthest labels computed directly: {e}"));
    }
    for v in labels.violations() {
        warnings.push(format!("{v:?}"));
    }
    let voronoi = boundary_voronoi_full(dom, &labels);
    warnings.extend(voronoi.warnings.iter().cloned());
    for v in &voronoi.violations {
        warnings.push(format!("{v:?}"));
    }
    let funnels = build_edge_funnels(dom, &voronoi);
    let cover = polygon_coarse_cover(dom, &funnels);
    let region = narrow_region(dom, &cover)?;
    let result = final_minimax(dom, &cover, &region, opts)?;
    Ok(CenterRun { labels, label_fallback, voronoi, funnels, cover, region, result, warnings })
}

pub fn compute_edge_center(dom: &Domain) -> Result<CenterResult, CenterError> {
    run_pipeline(dom).map(|r| r.result)
}
