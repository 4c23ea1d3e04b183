//! Paths that cross a separator geodesic between two vertices.

use super::funnel::Source;
use super::lca::Lca;
use super::{spt_from_vertex, Domain, GeodesicPath, PathError, ShortestPathTree, SleeveQuery, Target, TreeNode};
use serde::Serialize;

/// A separator `pi(a, b)` with the trees rooted at both ends.
///
/// The right side of the separator is the counterclockwise chain from `a` to
/// `b`; the left side is the rest of the boundary.
pub struct SeparatorFrame {
    pub a: usize,
    pub b: usize,
    pub gamma: GeodesicPath,
    pub tree_a: ShortestPathTree,
    pub tree_b: ShortestPathTree,
    lca_a: Lca,
    lca_b: Lca,
    n: usize,
}

/// Where the paths from `v` to the two ends of a separator part ways with it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorFunnel {
    pub vertex: usize,
    /// Last common vertex of `pi(v, b)` and `pi(a, b)`, seen from `a`.
    pub gamma_a: usize,
    pub gamma_b: usize,
    /// Wall from `gamma_a` to `v` and from `gamma_b` to `v`.
    pub wall_a: Vec<usize>,
    pub wall_b: Vec<usize>,
}

fn vertex_parents(t: &ShortestPathTree) -> Vec<Option<usize>> {
    t.parent
        .iter()
        .map(|p| match p {
            Some(TreeNode::Vertex(q)) => Some(*q),
            _ => None,
        })
        .collect()
}

impl SeparatorFrame {
    pub fn new(dom: &Domain, a: usize, b: usize) -> Self {
        let tree_a = spt_from_vertex(dom, a);
        let tree_b = spt_from_vertex(dom, b);
        let mut sq = SleeveQuery::new(dom);
        let gamma = sq.run(Source::Vertex(a), Target::Point(dom.poly.vertex(b))).expect("vertex to vertex path").0;
        let lca_a = Lca::new(&vertex_parents(&tree_a));
        let lca_b = Lca::new(&vertex_parents(&tree_b));
        SeparatorFrame { a, b, gamma, tree_a, tree_b, lca_a, lca_b, n: dom.n() }
    }

    /// Offset of `v` along the right chain, or `None` if `v` is not on it.
    pub fn right_rank(&self, v: usize) -> Option<usize> {
        let k = (v + self.n - self.a) % self.n;
        (k <= self.right_len()).then_some(k)
    }

    /// Number of edges on the right chain.
    pub fn right_len(&self) -> usize {
        let len = (self.b + self.n - self.a) % self.n;
        if len == 0 {
            self.n
        } else {
            len
        }
    }

    /// Vertices of the right chain in counterclockwise order, ends included.
    pub fn right_vertices(&self) -> Vec<usize> {
        (0..=self.right_len()).map(|k| (self.a + k) % self.n).collect()
    }

    /// Edges of the left chain in counterclockwise order.
    pub fn left_edges(&self) -> Vec<usize> {
        (0..self.n - self.right_len()).map(|k| (self.b + k) % self.n).collect()
    }

    pub fn is_left_edge(&self, e: usize) -> bool {
        (e + self.n - self.b) % self.n < self.n - self.right_len()
    }

    pub fn funnel(&self, v: usize) -> SeparatorFunnel {
        let gamma_a = self.lca_a.query(v, self.b).unwrap_or(self.a);
        let gamma_b = self.lca_b.query(v, self.a).unwrap_or(self.b);
        let wall = |t: &ShortestPathTree, from: usize| {
            let p = t.path_to_vertex(v);
            let i = p.iter().position(|&x| x == from).unwrap_or(0);
            p[i..].to_vec()
        };
        SeparatorFunnel { vertex: v, gamma_a, gamma_b, wall_a: wall(&self.tree_a, gamma_a), wall_b: wall(&self.tree_b, gamma_b) }
    }
}

/// `pi(v, e)` for `v` on the right chain of the separator and `e` on its left.
///
/// The path is traced by a funnel search restricted to the sleeve of triangles
/// between `v` and `e`.
pub fn tangent_across_separator(
    sq: &mut SleeveQuery,
    frame: &SeparatorFrame,
    v: usize,
    e: usize,
) -> Result<(GeodesicPath, f64), PathError> {
    if frame.right_rank(v).is_none() || !frame.is_left_edge(e) {
        return Err(PathError::SideViolation { vertex: v, edge: e });
    }
    Ok(super::vertex_edge_path(sq, v, e))
}
