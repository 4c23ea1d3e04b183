//! Farthest edges from every vertex.
//!
//! A handful of separator geodesics split the boundary so that every vertex
//! on one side has its farthest edge on the other. Each side pair gives a
//! totally monotone distance matrix whose row maxima come from SMAWK.

pub mod separators;
pub mod smawk;

pub use separators::{build_separators, Separator, SeparatorCase, SeparatorSet};
pub use smawk::{naive_row_maxima, smawk, ExplicitMatrix, RowMaxima};

use crate::geom::{orientation, BoundaryCursor, Point2, PolygonBoundary, Violation};
use crate::shortest_paths::{
    spt_from_point, spt_from_vertex, tangent_across_separator, Domain, GeodesicPath, SeparatorFrame, ShortestPathTree,
    SleeveQuery, TreeNode,
};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FarthestError {
    #[error("no separator case applies (start vertex {0})")]
    CaseExhaustionFailure(usize),
    #[error("vertex {0} has two farthest edges after tie-breaking")]
    AssumptionViolation(usize),
}

/// Relative tolerance under which two distances count as tied.
pub const TIE_REL: f64 = 1e-12;

/// A candidate farthest edge seen from some source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeReach {
    pub edge: usize,
    pub dist: f64,
    pub terminal: BoundaryCursor,
    /// Polygon vertex the path ends at, if it ends at an edge endpoint.
    pub end_vertex: Option<usize>,
    /// Point the last segment comes from.
    pub from: Point2,
}

impl EdgeReach {
    fn from_path(poly: &PolygonBoundary, edge: usize, path: &GeodesicPath, dist: f64) -> Self {
        let terminal = path.terminal.expect("edge path");
        let end = path.end();
        let n = poly.n();
        let end_vertex = [edge, (edge + 1) % n].into_iter().find(|&v| poly.vertex(v) == end);
        let from = if path.points.len() >= 2 { path.points[path.points.len() - 2] } else { end };
        EdgeReach { edge, dist, terminal, end_vertex, from }
    }

    /// Leaf `edge` of a full tree.
    pub fn from_tree(poly: &PolygonBoundary, tree: &ShortestPathTree, edge: usize) -> Self {
        let leaf = tree.leaves[edge];
        let n = poly.n();
        let end_vertex = [edge, (edge + 1) % n].into_iter().find(|&v| poly.vertex(v) == leaf.terminal);
        let node_pos = |node: TreeNode| match node {
            TreeNode::Vertex(v) => poly.vertex(v),
            _ => tree.root,
        };
        let mut from = node_pos(leaf.via);
        if from == leaf.terminal {
            if let TreeNode::Vertex(v) = leaf.via {
                from = tree.parent[v].map_or(tree.root, node_pos);
            }
        }
        EdgeReach { edge, dist: leaf.dist, terminal: leaf.cursor, end_vertex, from }
    }
}

/// Orders two candidates by distance, then by the reflex-vertex bisector
/// rule. `None` means an unresolved tie.
pub fn compare_reach(poly: &PolygonBoundary, a: &EdgeReach, b: &EdgeReach) -> Option<Ordering> {
    let scale = a.dist.abs().max(b.dist.abs());
    if (a.dist - b.dist).abs() > TIE_REL * scale {
        return a.dist.partial_cmp(&b.dist);
    }
    if a.edge == b.edge {
        return Some(Ordering::Equal);
    }
    let n = poly.n();
    let u = match (a.end_vertex, b.end_vertex) {
        (Some(u), Some(w)) if u == w => u,
        _ => return None,
    };
    let (e_in, e_out) = ((u + n - 1) % n, u);
    if !poly.is_reflex(u) || !((a.edge == e_in && b.edge == e_out) || (a.edge == e_out && b.edge == e_in)) {
        return None;
    }
    let pu = poly.vertex(u);
    let pa = poly.vertex(poly.prev(u));
    let pb = poly.vertex(poly.next(u));
    let mut dir = (pa - pu).normalized() + (pb - pu).normalized();
    if dir.norm() < 1e-9 {
        dir = (pb - pa).perp();
    }
    let side = |x: Point2| orientation(pu, pu + dir, x);
    let s = side(a.from);
    if s == 0 {
        return None;
    }
    // The edge on the far side of the bisector from the arrival point wins.
    let in_side = side(pa);
    let winner = if s == in_side { e_out } else { e_in };
    Some(if a.edge == winner { Ordering::Greater } else { Ordering::Less })
}

/// `b` strictly farther than `a`.
fn farther(poly: &PolygonBoundary, a: &EdgeReach, b: &EdgeReach) -> bool {
    compare_reach(poly, a, b) == Some(Ordering::Less)
}

/// Farthest edge among the leaves of a full tree; the flag reports an unresolved tie.
pub fn farthest_in_tree(poly: &PolygonBoundary, tree: &ShortestPathTree) -> (EdgeReach, bool) {
    let reaches: Vec<EdgeReach> = (0..poly.n()).map(|e| EdgeReach::from_tree(poly, tree, e)).collect();
    best_of(poly, &reaches)
}

fn best_of(poly: &PolygonBoundary, reaches: &[EdgeReach]) -> (EdgeReach, bool) {
    let mut best = reaches[0];
    for r in &reaches[1..] {
        if farther(poly, &best, r) {
            best = *r;
        }
    }
    let tie = reaches.iter().any(|r| r.edge != best.edge && compare_reach(poly, &best, r).is_none());
    (best, tie)
}

/// Farthest edge from a point.
pub fn farthest_from_point(dom: &Domain, p: Point2) -> Option<(EdgeReach, bool)> {
    let t = spt_from_point(dom, p).ok()?;
    Some(farthest_in_tree(&dom.poly, &t))
}

pub fn farthest_from_vertex(dom: &Domain, v: usize) -> (EdgeReach, bool) {
    farthest_in_tree(&dom.poly, &spt_from_vertex(dom, v))
}

#[derive(Clone, Debug, Serialize)]
pub struct FarthestLabels {
    /// `F(v)` per vertex.
    pub edge: Vec<usize>,
    /// `r(v) = d(v, F(v))`.
    pub radius: Vec<f64>,
    /// Terminal of `pi(v, F(v))`.
    pub terminal: Vec<BoundaryCursor>,
    pub tie: Vec<bool>,
}

impl FarthestLabels {
    /// Fails on the first vertex with an unresolved tie.
    pub fn strict(self) -> Result<Self, FarthestError> {
        match self.tie.iter().position(|&t| t) {
            Some(v) => Err(FarthestError::AssumptionViolation(v)),
            None => Ok(self),
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        (0..self.edge.len())
            .filter(|&v| self.tie[v])
            .map(|v| Violation::VertexEquidistant { vertex: v, edges: vec![self.edge[v]] })
            .collect()
    }
}

/// The distance matrix of one separator: rows are the vertices strictly right
/// of it, columns the edges left of it, both counterclockwise.
pub struct ImplicitDistanceMatrix<'a, 'd> {
    pub frame: &'a SeparatorFrame,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    sq: &'a mut SleeveQuery<'d>,
    memo: Vec<HashMap<usize, EdgeReach>>,
}

impl<'a, 'd> ImplicitDistanceMatrix<'a, 'd> {
    pub fn new(frame: &'a SeparatorFrame, sq: &'a mut SleeveQuery<'d>) -> Self {
        let rv = frame.right_vertices();
        let rows = rv[1..rv.len() - 1].to_vec();
        let memo = vec![HashMap::new(); rows.len()];
        ImplicitDistanceMatrix { frame, rows, cols: frame.left_edges(), sq, memo }
    }

    /// `d(v, e)` for row `r`, column `c`, memoized.
    pub fn entry(&mut self, r: usize, c: usize) -> EdgeReach {
        if let Some(x) = self.memo[r].get(&c) {
            return *x;
        }
        let (v, e) = (self.rows[r], self.cols[c]);
        let (path, d) = tangent_across_separator(self.sq, self.frame, v, e).expect("row and column straddle the separator");
        let x = EdgeReach::from_path(&self.sq.dom.poly, e, &path, d);
        self.memo[r].insert(c, x);
        x
    }

    /// Memoized entries of row `r`.
    pub fn evaluated(&self, r: usize) -> impl Iterator<Item = &EdgeReach> {
        self.memo[r].values()
    }
}

impl RowMaxima for ImplicitDistanceMatrix<'_, '_> {
    fn rows(&self) -> usize {
        self.rows.len()
    }
    fn cols(&self) -> usize {
        self.cols.len()
    }
    fn better(&mut self, r: usize, c_old: usize, c_new: usize) -> bool {
        let a = self.entry(r, c_old);
        let b = self.entry(r, c_new);
        farther(&self.sq.dom.poly, &a, &b)
    }
}

/// Farthest edge from every vertex via separators and SMAWK.
///
/// Vertices that are only separator endpoints get a direct tree. If no
/// separator set can be built, every vertex gets a direct tree and the
/// failure is returned alongside.
pub fn farthest_edge_per_vertex(dom: &Domain) -> (FarthestLabels, Option<FarthestError>) {
    match build_separators(dom) {
        Ok(set) => (labels_from_separators(dom, &set), None),
        Err(err) => (labels_direct(dom), Some(err)),
    }
}

pub fn labels_from_separators(dom: &Domain, set: &SeparatorSet) -> FarthestLabels {
    let n = dom.n();
    let poly = &dom.poly;
    let mut best: Vec<Option<(EdgeReach, bool)>> = vec![None; n];
    let mut sq = SleeveQuery::new(dom);
    let merge = |v: usize, cand: EdgeReach, tie: bool, best: &mut Vec<Option<(EdgeReach, bool)>>| {
        best[v] = Some(match best[v] {
            None => (cand, tie),
            Some((cur, cur_tie)) => match compare_reach(poly, &cur, &cand) {
                Some(Ordering::Less) => (cand, tie),
                Some(_) => (cur, cur_tie),
                None => (cur, cur.edge != cand.edge || cur_tie),
            },
        });
    };
    for sep in &set.separators {
        let mut m = ImplicitDistanceMatrix::new(&sep.frame, &mut sq);
        if m.rows.is_empty() || m.cols.is_empty() {
            continue;
        }
        let arg = smawk(&mut m);
        for (r, &c) in arg.iter().enumerate() {
            let x = m.entry(r, c);
            let tie = m.evaluated(r).any(|y| y.edge != x.edge && compare_reach(poly, &x, y).is_none());
            let v = m.rows[r];
            merge(v, x, tie, &mut best);
        }
    }
    for v in 0..n {
        if best[v].is_none() {
            let (x, tie) = farthest_from_vertex(dom, v);
            merge(v, x, tie, &mut best);
        }
    }
    collect(best.into_iter().map(Option::unwrap).collect())
}

/// One full tree per vertex.
pub fn labels_direct(dom: &Domain) -> FarthestLabels {
    collect((0..dom.n()).map(|v| farthest_from_vertex(dom, v)).collect())
}

fn collect(per: Vec<(EdgeReach, bool)>) -> FarthestLabels {
    FarthestLabels {
        edge: per.iter().map(|x| x.0.edge).collect(),
        radius: per.iter().map(|x| x.0.dist).collect(),
        terminal: per.iter().map(|x| x.0.terminal).collect(),
        tie: per.iter().map(|x| x.1).collect(),
    }
}

#[cfg(test)]
mod tests;
