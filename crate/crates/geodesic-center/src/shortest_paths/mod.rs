//! Geodesic shortest paths inside a simple polygon.
//!
//! Everything runs on one funnel-splitting search ([`funnel::Engine`]) over the
//! ear-clipping triangulation. Full trees visit every triangle; point-to-point
//! and point-to-edge queries visit only the sleeve of triangles between the
//! two ends.

pub mod funnel;
pub mod lca;
mod separator;

pub use separator::{tangent_across_separator, SeparatorFrame, SeparatorFunnel};

use crate::forms::DistForm;
use crate::geom::{BoundaryCursor, GeomError, Point2, PolygonBoundary};
use crate::triangulation::Triangulation;
use funnel::{Engine, Funnel, Mask, Source, Visitor, BASE};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("vertex {vertex} and edge {edge} are not separated by the separator")]
    SideViolation { vertex: usize, edge: usize },
}

/// The polygon with its triangulation; shared by every stage.
#[derive(Clone, Debug)]
pub struct Domain {
    pub poly: PolygonBoundary,
    pub tri: Triangulation,
    pub diam: f64,
}

impl Domain {
    pub fn new(poly: PolygonBoundary) -> Self {
        let tri = Triangulation::new(&poly);
        let diam = poly.diameter();
        Domain { poly, tri, diam }
    }
    pub fn n(&self) -> usize {
        self.poly.n()
    }
    /// Containment tolerance scaled to the polygon.
    pub fn tau(&self) -> f64 {
        1e-9 * self.diam
    }
    /// `p` itself if inside; a boundary point that rounding pushed just
    /// outside is nudged back in along the inward normal.
    pub fn snap_inside(&self, p: Point2) -> Result<Point2, GeomError> {
        if self.poly.contains(p) {
            return Ok(p);
        }
        let (c, d) = self.poly.nearest_cursor(p);
        if d <= self.tau() {
            let normal = self.poly.inward_normal(c.edge);
            let mut step = d.max(1e-16 * self.diam);
            while step <= 2.0 * self.tau() {
                let q = p + normal * step;
                if self.poly.contains(q) {
                    return Ok(q);
                }
                step *= 4.0;
            }
        }
        Err(GeomError::PointOutsidePolygon(p.x, p.y))
    }
}

/// A node of a shortest path tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum TreeNode {
    Source,
    Vertex(usize),
    /// Perpendicular foot on the source edge.
    Foot,
}

fn node_of(e: &Engine, id: usize) -> TreeNode {
    if id == BASE {
        TreeNode::Foot
    } else if id == e.poly.n() {
        TreeNode::Source
    } else {
        TreeNode::Vertex(id)
    }
}

/// The leaf for one polygon edge: where the tree reaches it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeLeaf {
    pub edge: usize,
    pub terminal: Point2,
    pub cursor: BoundaryCursor,
    pub dist: f64,
    /// Tree node the leaf hangs from; the leaf edge has length `|terminal - via|`.
    pub via: TreeNode,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortestPathTree {
    pub root: Point2,
    /// Parent of every vertex (`None` for a vertex source itself).
    pub parent: Vec<Option<TreeNode>>,
    pub dist: Vec<f64>,
    pub leaves: Vec<EdgeLeaf>,
}

impl ShortestPathTree {
    /// Distance to polygon edge `e`.
    pub fn edge_dist(&self, e: usize) -> f64 {
        self.leaves[e].dist
    }
    /// Vertex list of the tree path from the root to `v`.
    pub fn path_to_vertex(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(TreeNode::Vertex(p)) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }
}

/// One cell of a shortest path map, inside triangle `triangle`.
#[derive(Clone, Debug, Serialize)]
pub struct MapCell {
    pub polygon: Vec<Point2>,
    pub triangle: usize,
    pub node: TreeNode,
    pub form: DistForm,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ShortestPathMap {
    pub cells: Vec<MapCell>,
}

impl ShortestPathMap {
    /// Distance at `x` from the first cell containing it.
    pub fn eval(&self, x: Point2, tol: f64) -> Option<f64> {
        self.cells.iter().find(|c| convex_contains(&c.polygon, x, tol)).map(|c| c.form.eval(x))
    }
}

/// Closed containment in a counterclockwise convex polygon, with slack `tol`.
pub fn convex_contains(poly: &[Point2], x: Point2, tol: f64) -> bool {
    let k = poly.len();
    (0..k).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let d = b - a;
        let len = d.norm();
        len == 0.0 || d.cross(x - a) >= -tol * len
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortestPathForest {
    pub edge: usize,
    /// `Foot(p)` parents carry the perpendicular foot on the source edge.
    pub parent: Vec<ForestParent>,
    pub dist: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForestParent {
    Vertex { id: usize },
    Foot { at: Point2 },
}

impl ShortestPathForest {
    /// Vertex `v` is orthogonally visible from the source edge.
    pub fn sees_perpendicularly(&self, v: usize) -> bool {
        matches!(self.parent[v], ForestParent::Foot { .. })
    }
}

/// `pi(p, s)`: the vertex list, its length, and where it ends on the boundary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicPath {
    pub points: Vec<Point2>,
    /// Polygon vertex ids of interior bends, in path order.
    pub bends: Vec<usize>,
    pub length: f64,
    pub terminal: Option<BoundaryCursor>,
}

impl GeodesicPath {
    pub fn start(&self) -> Point2 {
        self.points[0]
    }
    pub fn end(&self) -> Point2 {
        *self.points.last().unwrap()
    }
    /// Unit direction of the first segment, if the path has positive length.
    pub fn first_direction(&self) -> Option<Point2> {
        self.points.windows(2).map(|w| w[1] - w[0]).find(|d| d.norm() > 0.0).map(|d| d.normalized())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Point(Point2),
    Edge(usize),
}

struct TreeCollector {
    leaves: Vec<Option<EdgeLeaf>>,
    cells: Option<Vec<MapCell>>,
}

impl Visitor for TreeCollector {
    fn triangle(&mut self, e: &Engine, t: usize, entry: usize, f: &Funnel, j: usize) {
        if let Some(cells) = self.cells.as_mut() {
            for (polygon, node) in e.cells(t, entry, f, j) {
                cells.push(MapCell { polygon, triangle: t, node: node_of(e, node), form: e.form(node) });
            }
        }
    }
    fn boundary(&mut self, e: &Engine, g: usize, f: &Funnel) {
        let (p, d, via) = e.terminal(g, f);
        let (a, b) = e.poly.edge(g);
        let l2 = (b - a).norm2();
        let t = ((p - a).dot(b - a) / l2).clamp(0.0, 1.0);
        self.leaves[g] = Some(EdgeLeaf {
            edge: g,
            terminal: p,
            cursor: BoundaryCursor::new(g, t).canonical(e.poly.n()),
            dist: d,
            via: node_of(e, via),
        });
    }
}

fn tree_parents(e: &Engine) -> Vec<Option<TreeNode>> {
    (0..e.poly.n())
        .map(|v| {
            let p = e.parent[v];
            if p == v {
                None
            } else {
                Some(node_of(e, p))
            }
        })
        .collect()
}

fn full_tree(dom: &Domain, src: Source, with_map: bool) -> Option<(ShortestPathTree, ShortestPathMap)> {
    let mut eng = Engine::new(&dom.poly, &dom.tri, src)?;
    let mut col = TreeCollector { leaves: vec![None; dom.n()], cells: with_map.then(Vec::new) };
    eng.run(None, &mut col);
    let tree = ShortestPathTree {
        root: eng.src_pt,
        parent: tree_parents(&eng),
        dist: eng.dist[..dom.n()].to_vec(),
        leaves: col.leaves.into_iter().map(|l| l.expect("every edge is reached")).collect(),
    };
    Some((tree, ShortestPathMap { cells: col.cells.unwrap_or_default() }))
}

/// Shortest path tree from `p`, augmented with one leaf per polygon edge, and
/// its shortest path map.
pub fn build_spt(dom: &Domain, p: Point2) -> Result<(ShortestPathTree, ShortestPathMap), PathError> {
    let p = dom.snap_inside(p)?;
    full_tree(dom, Source::Point(p), true).ok_or(PathError::Geom(GeomError::PointOutsidePolygon(p.x, p.y)))
}

/// Tree only, without the map; cheaper when only distances are needed.
pub fn spt_from_point(dom: &Domain, p: Point2) -> Result<ShortestPathTree, PathError> {
    let p = dom.snap_inside(p)?;
    full_tree(dom, Source::Point(p), false)
        .map(|t| t.0)
        .ok_or(PathError::Geom(GeomError::PointOutsidePolygon(p.x, p.y)))
}

pub fn spt_from_vertex(dom: &Domain, v: usize) -> ShortestPathTree {
    full_tree(dom, Source::Vertex(v), false).expect("vertex source").0
}

/// Shortest paths from every vertex to edge `e`, and the map of `d(., e)`.
pub fn build_sp_forest(dom: &Domain, e: usize) -> (ShortestPathForest, ShortestPathMap) {
    let mut eng = Engine::new(&dom.poly, &dom.tri, Source::Edge(e)).expect("edge source");
    let mut col = TreeCollector { leaves: vec![None; dom.n()], cells: Some(Vec::new()) };
    eng.run(None, &mut col);
    let (a, b) = dom.poly.edge(e);
    let parent = (0..dom.n())
        .map(|v| {
            let p = eng.parent[v];
            if p == BASE {
                let pv = dom.poly.vertex(v);
                let d = b - a;
                let t = ((pv - a).dot(d) / d.norm2()).clamp(0.0, 1.0);
                ForestParent::Foot { at: a.lerp(b, t) }
            } else {
                ForestParent::Vertex { id: p }
            }
        })
        .collect();
    let forest = ShortestPathForest { edge: e, parent, dist: eng.dist[..dom.n()].to_vec() };
    (forest, ShortestPathMap { cells: col.cells.unwrap_or_default() })
}

/// Reusable state for sleeve-restricted queries.
pub struct SleeveQuery<'d> {
    pub dom: &'d Domain,
    mask: Mask,
}

struct SleeveVisit {
    target: Target,
    target_tri: usize,
    hit: Option<(Point2, f64, usize, Option<BoundaryCursor>)>,
}

impl Visitor for SleeveVisit {
    fn triangle(&mut self, e: &Engine, t: usize, entry: usize, f: &Funnel, _j: usize) {
        if let Target::Point(q) = self.target {
            if t == self.target_tri && self.hit.is_none() {
                let node = if entry == usize::MAX { f.nodes[0] } else { f.nodes[e.find_wedge(f, q)] };
                let d = match node {
                    BASE => (q - e.src_pt).dot(e.n_in),
                    v => e.dist[v] + q.dist(e.pos(v)),
                };
                let best = (d, node);
                self.hit = Some((q, best.0, best.1, None));
            }
        }
    }
    fn boundary(&mut self, e: &Engine, g: usize, f: &Funnel) {
        if let Target::Edge(h) = self.target {
            if g == h {
                let (p, d, via) = e.terminal(g, f);
                let (a, b) = e.poly.edge(g);
                let t = ((p - a).dot(b - a) / (b - a).norm2()).clamp(0.0, 1.0);
                self.hit = Some((p, d, via, Some(BoundaryCursor::new(g, t).canonical(e.poly.n()))));
            }
        }
    }
}

impl<'d> SleeveQuery<'d> {
    pub fn new(dom: &'d Domain) -> Self {
        SleeveQuery { dom, mask: Mask::new(dom.tri.len()) }
    }

    fn source_tri(&self, src: Source) -> Option<usize> {
        match src {
            Source::Point(p) => self.dom.tri.locate(&self.dom.poly, p),
            Source::Vertex(v) => Some(self.dom.tri.vertex_tri[v]),
            Source::Edge(g) => Some(self.dom.tri.edge_tri[g]),
        }
    }

    /// Runs a search from `src` restricted to the sleeve toward `target`.
    pub fn run(&mut self, src: Source, target: Target) -> Option<(GeodesicPath, f64)> {
        let dom = self.dom;
        let ts = self.source_tri(src)?;
        let tt = match target {
            Target::Point(q) => {
                // Prefer a target triangle on the same sleeve end as the source.
                if dom.tri.tri_contains(&dom.poly, ts, q) {
                    ts
                } else {
                    dom.tri.locate(&dom.poly, q)?
                }
            }
            Target::Edge(g) => dom.tri.edge_tri[g],
        };
        self.mask.clear();
        for t in dom.tri.dual_path(ts, tt) {
            self.mask.insert(t);
        }
        let mut eng = Engine::new(&dom.poly, &dom.tri, src)?;
        eng.src_tri = ts;
        let mut vis = SleeveVisit { target, target_tri: tt, hit: None };
        eng.run(Some(&self.mask), &mut vis);
        let (end, d, via, cursor) = vis.hit?;
        let mut pts = vec![end];
        let mut bends = Vec::new();
        let mut cur = via;
        loop {
            if cur == BASE {
                let from = *pts.last().unwrap();
                let foot = from - eng.n_in * (from - eng.src_pt).dot(eng.n_in);
                pts.push(foot);
                break;
            }
            let p = eng.pos(cur);
            if *pts.last().unwrap() != p {
                pts.push(p);
            }
            if cur < dom.n() && eng.parent[cur] != cur {
                bends.push(cur);
            }
            let par = eng.parent[cur];
            if par == cur {
                break;
            }
            cur = par;
        }
        pts.reverse();
        bends.reverse();
        let length = pts.windows(2).map(|w| w[0].dist(w[1])).sum::<f64>();
        Some((GeodesicPath { points: pts, bends, length, terminal: cursor }, d))
    }
}

/// `pi(p, q)` for a point or an edge target.
pub fn geodesic_path(dom: &Domain, p: Point2, target: Target) -> Result<GeodesicPath, PathError> {
    let p = dom.snap_inside(p)?;
    let target = match target {
        Target::Point(q) => Target::Point(dom.snap_inside(q)?),
        t => t,
    };
    let mut sq = SleeveQuery::new(dom);
    sq.run(Source::Point(p), target)
        .map(|r| r.0)
        .ok_or(PathError::Geom(GeomError::PointOutsidePolygon(p.x, p.y)))
}

/// Geodesic distance from vertex `v` to edge `e` with its path.
pub fn vertex_edge_path(sq: &mut SleeveQuery, v: usize, e: usize) -> (GeodesicPath, f64) {
    sq.run(Source::Vertex(v), Target::Edge(e)).expect("vertex to edge path")
}
