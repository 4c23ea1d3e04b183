//! Farthest-edge Voronoi diagram restricted to the polygon boundary.
//!
//! Edges whose endpoints share a farthest edge carry that label throughout.
//! Every other edge gets an interval cover from the shortest path trees of
//! its endpoints, and the upper envelope of the cover is found by one
//! depth-first pass over the cover tree.

pub mod cover;
pub mod insert;

pub use cover::{edge_coarse_cover, CoverKind, CoverTree, EdgeCover, EdgeFrame, IntervalCoverElement};
pub use insert::{dfs_insert_envelope, naive_envelope, EdgeEnvelope, EnvelopePiece, InsertTrace};

use crate::farthest::FarthestLabels;
use crate::geom::{BoundaryCursor, Point2, PolygonBoundary, Violation};
use crate::shortest_paths::{spt_from_vertex, Domain, ShortestPathTree, TreeNode};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VoronoiError {
    #[error("boundary point on edge {edge} at t = {t} has {count} farthest edges")]
    AssumptionViolation { edge: usize, t: f64, count: usize },
}

/// Edges whose two endpoints have different farthest edges.
pub fn find_transition_edges(labels: &FarthestLabels) -> Vec<usize> {
    let n = labels.edge.len();
    (0..n).filter(|&i| labels.edge[i] != labels.edge[(i + 1) % n]).collect()
}

/// Edges counterclockwise from `from` to `to`, both included.
pub fn ccw_edges(n: usize, from: usize, to: usize) -> Vec<usize> {
    let len = (to + n - from) % n + 1;
    (0..len).map(|k| (from + k) % n).collect()
}

/// The region that confines the diagram on one transition edge `ab`.
#[derive(Clone, Debug, Serialize)]
pub struct Hourglass {
    pub edge: usize,
    /// `pi(a, F(b))`.
    pub wall_a: Vec<Point2>,
    /// `pi(b, F(a))`.
    pub wall_b: Vec<Point2>,
    /// Boundary between the two wall terminals.
    pub chain_from: BoundaryCursor,
    pub chain_to: BoundaryCursor,
    /// Edges of that boundary portion, counterclockwise from `F(a)` to `F(b)`.
    pub chain: Vec<usize>,
    pub size: usize,
}

fn tree_path(poly: &PolygonBoundary, tree: &ShortestPathTree, e: usize) -> Vec<Point2> {
    let leaf = tree.leaves[e];
    let mut pts = vec![tree.root];
    if let TreeNode::Vertex(v) = leaf.via {
        pts.extend(tree.path_to_vertex(v).into_iter().map(|u| poly.vertex(u)));
    }
    pts.push(leaf.terminal);
    pts.dedup();
    pts
}

/// Hourglass of transition edge `i` from the trees of its endpoints.
pub fn hourglass_of(poly: &PolygonBoundary, labels: &FarthestLabels, i: usize, ta: &ShortestPathTree, tb: &ShortestPathTree) -> Hourglass {
    let n = poly.n();
    let (fa, fb) = (labels.edge[i], labels.edge[(i + 1) % n]);
    let wall_a = tree_path(poly, ta, fb);
    let wall_b = tree_path(poly, tb, fa);
    let chain = ccw_edges(n, fa, fb);
    let size = chain.len() + 1 + wall_a.len().saturating_sub(2) + wall_b.len().saturating_sub(2) + 2;
    Hourglass { edge: i, wall_a, wall_b, chain_from: tb.leaves[fa].cursor, chain_to: ta.leaves[fb].cursor, chain, size }
}

/// Hourglasses of all transition edges.
pub fn build_hourglasses(dom: &Domain, labels: &FarthestLabels) -> Vec<Hourglass> {
    let mut trees = VertexTrees::new(dom);
    find_transition_edges(labels)
        .into_iter()
        .map(|i| {
            let (ta, tb) = trees.pair(i);
            hourglass_of(&dom.poly, labels, i, &ta, &tb)
        })
        .collect()
}

/// Endpoint trees for edges visited in increasing order; each vertex tree is
/// built at most twice.
struct VertexTrees<'d> {
    dom: &'d Domain,
    last: Option<(usize, ShortestPathTree)>,
}

impl<'d> VertexTrees<'d> {
    fn new(dom: &'d Domain) -> Self {
        VertexTrees { dom, last: None }
    }
    fn get(&mut self, v: usize) -> ShortestPathTree {
        match self.last.take() {
            Some((u, t)) if u == v => t,
            _ => spt_from_vertex(self.dom, v),
        }
    }
    fn pair(&mut self, i: usize) -> (ShortestPathTree, ShortestPathTree) {
        let b = (i + 1) % self.dom.n();
        let ta = self.get(i);
        let tb = spt_from_vertex(self.dom, b);
        self.last = Some((b, tb.clone()));
        (ta, tb)
    }
}

/// A boundary point with two farthest edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Breakpoint {
    pub edge: usize,
    pub t: f64,
    pub edges: [usize; 2],
}

/// Maximal boundary portion with one farthest edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VoronoiChain {
    pub from: BoundaryCursor,
    pub to: BoundaryCursor,
    pub farthest_edge: usize,
}

/// A labeled stretch `[t0, t1]` of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Span {
    pub t0: f64,
    pub t1: f64,
    pub label: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryVoronoi {
    pub breakpoints: Vec<Breakpoint>,
    pub chains: Vec<VoronoiChain>,
    #[serde(skip)]
    pub spans: Vec<Vec<Span>>,
    #[serde(skip)]
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

impl BoundaryVoronoi {
    /// Label of the span containing `t` on edge `e` (the left one at a breakpoint).
    pub fn label_at(&self, e: usize, t: f64) -> usize {
        let spans = &self.spans[e];
        let k = spans.partition_point(|s| s.t1 < t).min(spans.len() - 1);
        spans[k].label
    }

    /// Fails on the first point with more than two farthest edges.
    pub fn strict(self) -> Result<Self, VoronoiError> {
        for v in &self.violations {
            if let Violation::TooManyFarthestEdges { edge, t, edges } = v {
                return Err(VoronoiError::AssumptionViolation { edge: *edge, t: *t, count: edges.len() });
            }
        }
        Ok(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Everything computed for one transition edge.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeDiagram {
    pub hourglass: Hourglass,
    pub cover: EdgeCover,
    pub envelope: EdgeEnvelope,
    /// Set when the tree pass left a gap and the plain merge was used instead.
    pub fell_back: bool,
}

/// Cover, envelope and hourglass of transition edge `i`.
pub fn edge_diagram(poly: &PolygonBoundary, labels: &FarthestLabels, i: usize, ta: &ShortestPathTree, tb: &ShortestPathTree) -> EdgeDiagram {
    let n = poly.n();
    let hourglass = hourglass_of(poly, labels, i, ta, tb);
    let mut sites = vec![false; n];
    for &e in &hourglass.chain {
        sites[e] = e != i;
    }
    let cover = edge_coarse_cover(poly, i, ta, tb, &sites);
    let mut envelope = dfs_insert_envelope(&cover);
    let mut fell_back = false;
    if !envelope.complete {
        let alt = naive_envelope(&cover);
        if alt.complete {
            envelope = EdgeEnvelope { trace: envelope.trace, ..alt };
            fell_back = true;
        }
    }
    EdgeDiagram { hourglass, cover, envelope, fell_back }
}

/// Per-edge diagrams of every transition edge, in edge order.
pub fn edge_diagrams(dom: &Domain, labels: &FarthestLabels) -> Vec<EdgeDiagram> {
    let mut trees = VertexTrees::new(dom);
    find_transition_edges(labels)
        .into_iter()
        .map(|i| {
            let (ta, tb) = trees.pair(i);
            edge_diagram(&dom.poly, labels, i, &ta, &tb)
        })
        .collect()
}

/// The full boundary diagram from the vertex labels.
pub fn boundary_voronoi_full(dom: &Domain, labels: &FarthestLabels) -> BoundaryVoronoi {
    let diagrams = edge_diagrams(dom, labels);
    stitch(dom.n(), labels, &diagrams)
}

/// Distinct edges whose cover functions reach the envelope at `s`.
fn edges_attaining(cover: &EdgeCover, s: f64, tol: f64) -> Vec<usize> {
    let eps = 1e-9 * cover.frame.len;
    let vals: Vec<(usize, f64)> = cover
        .elements
        .iter()
        .filter(|el| el.lo - eps <= s && s <= el.hi + eps)
        .map(|el| (el.edge, cover.frame.restrict(&el.form).eval(s)))
        .collect();
    let top = vals.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<usize> = vals.iter().filter(|x| x.1 >= top - tol).map(|x| x.0).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Joins per-edge spans into cyclic chains and breakpoints.
pub fn stitch(n: usize, labels: &FarthestLabels, diagrams: &[EdgeDiagram]) -> BoundaryVoronoi {
    let mut spans: Vec<Vec<Span>> = (0..n).map(|i| vec![Span { t0: 0.0, t1: 1.0, label: labels.edge[i] }]).collect();
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    for d in diagrams {
        let i = d.cover.frame.edge;
        let len = d.cover.frame.len;
        if d.fell_back {
            warnings.push(format!("edge {i}: envelope rebuilt by direct merge"));
        }
        if !d.envelope.complete {
            warnings.push(format!("edge {i}: envelope does not cover the edge"));
        }
        let mut list: Vec<Span> = Vec::new();
        for p in &d.envelope.pieces {
            let (t0, t1) = ((p.lo / len).clamp(0.0, 1.0), (p.hi / len).clamp(0.0, 1.0));
            match list.last_mut() {
                Some(last) if last.label == p.edge => last.t1 = t1,
                _ => list.push(Span { t0, t1, label: p.edge }),
            }
        }
        if list.is_empty() {
            continue;
        }
        list[0].t0 = 0.0;
        list.last_mut().unwrap().t1 = 1.0;
        let scale = d.envelope.pieces.iter().map(|p| d.cover.frame.restrict(&d.cover.elements[p.element].form).eval(p.lo).abs()).fold(len, f64::max);
        for w in list.windows(2) {
            let s = w[0].t1 * len;
            let at = edges_attaining(&d.cover, s, 1e-9 * scale);
            if at.len() > 2 {
                violations.push(Violation::TooManyFarthestEdges { edge: i, t: w[0].t1, edges: at });
            }
        }
        spans[i] = list;
    }

    let flat: Vec<(usize, Span)> = spans.iter().enumerate().flat_map(|(e, v)| v.iter().map(move |s| (e, *s))).collect();
    // Start at a label change so no chain wraps around the origin.
    let m = flat.len();
    let start = (0..m).find(|&k| flat[k].1.label != flat[(k + m - 1) % m].1.label);
    let mut breakpoints = Vec::new();
    let mut chains = Vec::new();
    match start {
        None => chains.push(VoronoiChain {
            from: BoundaryCursor::new(0, 0.0),
            to: BoundaryCursor::new(n - 1, 1.0),
            farthest_edge: flat[0].1.label,
        }),
        Some(s0) => {
            let mut k = s0;
            for _ in 0..m {
                let (e, sp) = flat[k];
                let prev = flat[(k + m - 1) % m];
                if prev.1.label != sp.label {
                    let (be, bt) = if sp.t0 > 0.0 { (e, sp.t0) } else { (e, 0.0) };
                    breakpoints.push(Breakpoint { edge: be, t: bt, edges: [prev.1.label, sp.label] });
                    if bt == 0.0 {
                        violations.push(Violation::VertexEquidistant { vertex: e, edges: vec![prev.1.label, sp.label] });
                    }
                    chains.push(VoronoiChain { from: BoundaryCursor::new(e, sp.t0), to: BoundaryCursor::new(e, sp.t1), farthest_edge: sp.label });
                } else {
                    chains.last_mut().unwrap().to = BoundaryCursor::new(e, sp.t1);
                }
                k = (k + 1) % m;
            }
        }
    }
    BoundaryVoronoi { breakpoints, chains, spans, violations, warnings }
}

/// Whether `labels`, read in order, visit edges in cyclically nondecreasing order.
pub fn labels_cyclically_monotone(labels: &[usize], n: usize) -> bool {
    let mut seq: Vec<usize> = labels.to_vec();
    seq.dedup();
    if seq.len() > 1 && seq.first() == seq.last() {
        seq.pop();
    }
    if seq.len() <= 2 {
        return true;
    }
    let total: usize = (0..seq.len()).map(|k| (seq[(k + 1) % seq.len()] + n - seq[k]) % n).sum();
    total == n
}
