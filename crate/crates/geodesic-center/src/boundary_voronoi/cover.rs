//! Interval cover of one transition edge, built from the shortest path trees
//! of its endpoints, and the tree `T` that orders it.

use crate::farthest::{compare_reach, EdgeReach};
use crate::forms::{DistForm, Fn1};
use crate::geom::{BoundaryCursor, Point2, PolygonBoundary};
use crate::shortest_paths::{ShortestPathTree, TreeNode};
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    ASide,
    BSide,
    CentralTriangle,
    CentralTrapezoid,
}

/// Transition edge `ab` parameterized by arc length from `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeFrame {
    pub edge: usize,
    pub a: Point2,
    pub b: Point2,
    pub dir: Point2,
    pub len: f64,
}

impl EdgeFrame {
    pub fn new(poly: &PolygonBoundary, edge: usize) -> Self {
        let (a, b) = poly.edge(edge);
        EdgeFrame { edge, a, b, dir: (b - a).normalized(), len: a.dist(b) }
    }
    pub fn point(&self, s: f64) -> Point2 {
        if s >= self.len {
            self.b
        } else {
            self.a + self.dir * s
        }
    }
    pub fn cursor(&self, s: f64) -> BoundaryCursor {
        BoundaryCursor::new(self.edge, (s / self.len).clamp(0.0, 1.0))
    }
    pub fn restrict(&self, form: &DistForm) -> Fn1 {
        form.along(self.a, self.dir)
    }
}

/// `(I, f, e)`: on `I = [lo, hi]` of the transition edge, `f = d(., e)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntervalCoverElement {
    pub lo: f64,
    pub hi: f64,
    pub kind: CoverKind,
    pub form: DistForm,
    pub edge: usize,
}

impl IntervalCoverElement {
    pub fn interval(&self, frame: &EdgeFrame) -> [BoundaryCursor; 2] {
        [frame.cursor(self.lo), frame.cursor(self.hi)]
    }
}

/// Rooted ordered tree with one edge per cover element; `children[u]` lists
/// `(child, element)` in the order the envelope pass visits them.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CoverTree {
    pub children: Vec<Vec<(usize, usize)>>,
}

impl CoverTree {
    pub const ROOT: usize = 0;

    fn add(&mut self, parent: usize, element: usize) -> usize {
        let id = self.children.len();
        self.children.push(Vec::new());
        self.children[parent].push((id, element));
        id
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// `(parent element, child element)` for every pair of consecutive tree edges.
    pub fn consecutive_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for list in &self.children {
            for &(v, k) in list {
                for &(_, k2) in &self.children[v] {
                    out.push((k, k2));
                }
            }
        }
        out
    }
}

/// Elements of one transition edge together with their tree.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeCover {
    pub frame: EdgeFrame,
    pub elements: Vec<IntervalCoverElement>,
    pub tree: CoverTree,
}

/// Read access to a shortest path tree with one extra node per edge:
/// vertices are `0..n`, the leaf of edge `e` is `n + e`.
struct View<'t> {
    poly: &'t PolygonBoundary,
    tree: &'t ShortestPathTree,
    n: usize,
}

impl View<'_> {
    fn parent(&self, id: usize) -> Option<usize> {
        let node = if id < self.n { self.tree.parent[id] } else { Some(self.tree.leaves[id - self.n].via) };
        match node {
            Some(TreeNode::Vertex(p)) => Some(p),
            _ => None,
        }
    }
    fn pos(&self, id: usize) -> Point2 {
        if id < self.n {
            self.poly.vertex(id)
        } else {
            self.tree.leaves[id - self.n].terminal
        }
    }
    fn dist(&self, id: usize) -> f64 {
        if id < self.n {
            self.tree.dist[id]
        } else {
            self.tree.leaves[id - self.n].dist
        }
    }
    /// Direction from `id` toward its parent; the zero-length leaf edge
    /// points along the inward normal of its edge.
    fn up_dir(&self, id: usize, p: usize) -> Point2 {
        let d = self.pos(p) - self.pos(id);
        if id >= self.n && d.norm() == 0.0 {
            self.poly.inward_normal(id - self.n)
        } else {
            d
        }
    }
    fn children(&self, sites: &[bool], root: usize) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); 2 * self.n];
        for v in 0..self.n {
            if v != root {
                if let Some(p) = self.parent(v) {
                    ch[p].push(v);
                }
            }
        }
        for e in (0..self.n).filter(|&e| sites[e]) {
            if let Some(p) = self.parent(self.n + e) {
                ch[p].push(self.n + e);
            }
        }
        ch
    }
}

fn postorder(children: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(children.len());
    let mut stack = vec![(root, false)];
    while let Some((u, done)) = stack.pop() {
        if done {
            order.push(u);
            continue;
        }
        stack.push((u, true));
        for &c in &children[u] {
            stack.push((c, false));
        }
    }
    order
}

/// Farthest site leaf below every node, by distance and then the tie rule.
fn farthest_below(view: &View, children: &[Vec<usize>], order: &[usize], reach: &[Option<EdgeReach>]) -> Vec<Option<usize>> {
    let n = view.n;
    let mut best: Vec<Option<usize>> = vec![None; 2 * n];
    for &u in order {
        if u >= n {
            best[u] = Some(u - n);
            continue;
        }
        for &c in &children[u] {
            if let Some(e) = best[c] {
                best[u] = Some(match best[u] {
                    None => e,
                    Some(cur) => {
                        let (x, y) = (reach[cur].unwrap(), reach[e].unwrap());
                        if compare_reach(view.poly, &x, &y) == Some(Ordering::Less) {
                            e
                        } else {
                            cur
                        }
                    }
                });
            }
        }
    }
    best
}

/// Where the ray from `origin` along `d` meets the line of `ab`, as an arc
/// length clamped to the edge; `fallback` if it never does.
fn ray_hit(frame: &EdgeFrame, origin: Point2, d: Point2, fallback: f64) -> f64 {
    let denom = d.cross(frame.dir);
    if denom.abs() <= 1e-300 {
        return fallback;
    }
    let lambda = -(origin - frame.a).cross(frame.dir) / denom;
    if lambda < -1e-9 {
        return fallback;
    }
    let q = origin + d * lambda;
    (q - frame.a).dot(frame.dir).clamp(0.0, frame.len)
}

/// Cover elements of transition edge `i` for the site edges flagged in `sites`,
/// from the trees of its endpoints, plus the tree `T` ordering them.
pub fn edge_coarse_cover(
    poly: &PolygonBoundary,
    i: usize,
    tree_a: &ShortestPathTree,
    tree_b: &ShortestPathTree,
    sites: &[bool],
) -> EdgeCover {
    let n = poly.n();
    let frame = EdgeFrame::new(poly, i);
    let (ia, ib) = (i, (i + 1) % n);
    let va = View { poly, tree: tree_a, n };
    let vb = View { poly, tree: tree_b, n };
    let reach = |t: &ShortestPathTree| -> Vec<Option<EdgeReach>> {
        (0..n).map(|e| sites[e].then(|| EdgeReach::from_tree(poly, t, e))).collect()
    };
    let (reach_a, reach_b) = (reach(tree_a), reach(tree_b));
    let ch_a = va.children(sites, ia);
    let ch_b = vb.children(sites, ib);
    let ord_a = postorder(&ch_a, ia);
    let ord_b = postorder(&ch_b, ib);
    let best_a = farthest_below(&va, &ch_a, &ord_a, &reach_a);
    let best_b = farthest_below(&vb, &ch_b, &ord_b, &reach_b);

    let leaf_shared = |e: usize| va.parent(n + e) == vb.parent(n + e) && va.pos(n + e) == vb.pos(n + e);
    let visible = |u: usize| u == ia || u == ib || va.parent(u) != vb.parent(u);
    let in_b = |u: usize, v: usize| vb.parent(v) == Some(u) && (v < n || leaf_shared(v - n));
    let in_a = |u: usize, v: usize| va.parent(v) == Some(u) && (v < n || leaf_shared(v - n));
    let x_a = |v: usize| match va.parent(v) {
        _ if v == ia || v == ib => 0.0,
        None => 0.0,
        Some(p) if p == ia => 0.0,
        Some(p) => ray_hit(&frame, va.pos(p), va.up_dir(v, p), 0.0),
    };
    let x_b = |v: usize| match vb.parent(v) {
        _ if v == ia || v == ib => frame.len,
        None => frame.len,
        Some(p) if p == ib => frame.len,
        Some(p) => ray_hit(&frame, vb.pos(p), vb.up_dir(v, p), frame.len),
    };
    let apex = |view: &View, u: usize, e: usize| DistForm::Apex { v: view.pos(u), kappa: view.dist(n + e) - view.dist(u) };

    let mut elements: Vec<IntervalCoverElement> = Vec::new();
    let mut push = |lo: f64, hi: f64, kind: CoverKind, form: DistForm, edge: usize| {
        elements.push(IntervalCoverElement { lo, hi: hi.max(lo), kind, form, edge });
        elements.len() - 1
    };

    let mut elem_a: Vec<Option<usize>> = vec![None; 2 * n];
    for &v in &ord_a {
        let Some(e) = best_a[v] else { continue };
        if v == ia {
            continue;
        }
        let Some(u) = va.parent(v) else { continue };
        if !visible(u) {
            continue;
        }
        if in_b(u, v) {
            let k = push(x_a(u), x_b(u), CoverKind::CentralTriangle, apex(&va, u, e), e);
            elem_a[v] = Some(k);
        } else if u != ia {
            elem_a[v] = Some(push(x_a(u), x_a(v), CoverKind::ASide, apex(&va, u, e), e));
        }
    }
    let mut trapezoid: Vec<Option<usize>> = vec![None; n];
    for e in (0..n).filter(|&e| sites[e] && !leaf_shared(e)) {
        let (p0, _) = poly.edge(e);
        let form = DistForm::Line { origin: p0, normal: poly.inward_normal(e) };
        trapezoid[e] = Some(push(x_a(n + e), x_b(n + e), CoverKind::CentralTrapezoid, form, e));
    }
    let mut b_side: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for &v in &ord_b {
        let Some(e) = best_b[v] else { continue };
        if v == ib {
            continue;
        }
        let Some(u) = vb.parent(v) else { continue };
        if !visible(u) || u == ib || in_a(u, v) {
            continue;
        }
        let k = push(x_b(v), x_b(u), CoverKind::BSide, apex(&vb, u, e), e);
        b_side[e].push((vb.dist(v), k));
    }

    // Children in clockwise order: by the first site leaf met walking
    // clockwise from `a`.
    let key = |e: usize| (i + 2 * n - 1 - e) % n;
    let mut min_key = vec![usize::MAX; 2 * n];
    for &u in &ord_a {
        min_key[u] = if u >= n { key(u - n) } else { ch_a[u].iter().map(|&c| min_key[c]).min().unwrap_or(usize::MAX) };
    }

    let mut tree = CoverTree { children: vec![Vec::new()] };
    let mut end_of: Vec<Option<usize>> = vec![None; n];
    let mut stack: Vec<(usize, usize)> = vec![(ia, CoverTree::ROOT)];
    while let Some((u, tn)) = stack.pop() {
        if u >= n {
            let e = u - n;
            if let Some(k) = trapezoid[e] {
                end_of[e] = Some(tree.add(tn, k));
            }
            continue;
        }
        let mut kids: Vec<usize> = ch_a[u].iter().copied().filter(|&c| best_a[c].is_some()).collect();
        kids.sort_by_key(|&c| min_key[c]);
        // Contracted subtrees hand their children to `tn` in place.
        let mut expanded: Vec<(usize, usize)> = Vec::new();
        let mut work: Vec<usize> = kids.into_iter().rev().collect();
        while let Some(c) = work.pop() {
            match elem_a[c] {
                Some(k) => {
                    let t2 = tree.add(tn, k);
                    if elements[k].kind == CoverKind::CentralTriangle {
                        end_of[elements[k].edge].get_or_insert(t2);
                    }
                    expanded.push((c, t2));
                }
                None if c >= n => {
                    if let Some(k) = trapezoid[c - n] {
                        end_of[c - n] = Some(tree.add(tn, k));
                    }
                }
                None => {
                    let mut g: Vec<usize> = ch_a[c].iter().copied().filter(|&x| best_a[x].is_some()).collect();
                    g.sort_by_key(|&x| min_key[x]);
                    work.extend(g.into_iter().rev());
                }
            }
        }
        for item in expanded.into_iter().rev() {
            stack.push(item);
        }
    }
    for e in 0..n {
        if b_side[e].is_empty() {
            continue;
        }
        let mut path = std::mem::take(&mut b_side[e]);
        path.sort_by(|x, y| y.0.total_cmp(&x.0));
        let mut at = end_of[e].unwrap_or(CoverTree::ROOT);
        for (_, k) in path {
            at = tree.add(at, k);
        }
    }
    EdgeCover { frame, elements, tree }
}
