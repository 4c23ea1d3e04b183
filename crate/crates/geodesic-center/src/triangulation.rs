//! Ear-clipping triangulation and its dual tree.

use crate::geom::{orientation, Point2, PolygonBoundary};
use std::collections::HashMap;

/// What lies across one side of a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// A polygon edge, by index.
    Boundary(usize),
    /// A diagonal shared with another triangle: `(triangle, side index there)`.
    Diagonal(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    /// Vertex triples in counterclockwise order.
    pub tris: Vec<[usize; 3]>,
    /// `sides[t][k]` describes side `tris[t][k] -> tris[t][(k+1)%3]`.
    pub sides: Vec<[Side; 3]>,
    /// Triangle containing each polygon edge.
    pub edge_tri: Vec<usize>,
    /// Some triangle incident to each vertex.
    pub vertex_tri: Vec<usize>,
    /// Dual tree rooted at triangle 0.
    pub parent: Vec<usize>,
    pub depth: Vec<usize>,
}

impl Triangulation {
    pub fn new(poly: &PolygonBoundary) -> Self {
        let tris = ear_clip(poly);
        let n = poly.n();
        let mut sides = vec![[Side::Boundary(usize::MAX); 3]; tris.len()];
        let mut diag: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut edge_tri = vec![usize::MAX; n];
        let mut vertex_tri = vec![usize::MAX; n];
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                let (u, w) = (tri[k], tri[(k + 1) % 3]);
                vertex_tri[u] = t;
                if w == (u + 1) % n {
                    sides[t][k] = Side::Boundary(u);
                    edge_tri[u] = t;
                } else {
                    let key = (u.min(w), u.max(w));
                    if let Some(&(t2, k2)) = diag.get(&key) {
                        sides[t][k] = Side::Diagonal(t2, k2);
                        sides[t2][k2] = Side::Diagonal(t, k);
                    } else {
                        diag.insert(key, (t, k));
                    }
                }
            }
        }
        let m = tris.len();
        let mut parent = vec![usize::MAX; m];
        let mut depth = vec![0usize; m];
        let mut stack = vec![0usize];
        let mut seen = vec![false; m];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for s in sides[t] {
                if let Side::Diagonal(t2, _) = s {
                    if !seen[t2] {
                        seen[t2] = true;
                        parent[t2] = t;
                        depth[t2] = depth[t] + 1;
                        stack.push(t2);
                    }
                }
            }
        }
        Triangulation { tris, sides, edge_tri, vertex_tri, parent, depth }
    }

    pub fn len(&self) -> usize {
        self.tris.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tris.is_empty()
    }

    pub fn corners(&self, poly: &PolygonBoundary, t: usize) -> [Point2; 3] {
        let [a, b, c] = self.tris[t];
        [poly.vertex(a), poly.vertex(b), poly.vertex(c)]
    }

    /// Closed containment of `p` in triangle `t`.
    pub fn tri_contains(&self, poly: &PolygonBoundary, t: usize, p: Point2) -> bool {
        let [a, b, c] = self.corners(poly, t);
        orientation(a, b, p) >= 0 && orientation(b, c, p) >= 0 && orientation(c, a, p) >= 0
    }

    /// First triangle containing `p`, if any.
    pub fn locate(&self, poly: &PolygonBoundary, p: Point2) -> Option<usize> {
        (0..self.len()).find(|&t| self.tri_contains(poly, t, p))
    }

    /// Triangles on the dual path from `s` to `t`, in order.
    pub fn dual_path(&self, s: usize, t: usize) -> Vec<usize> {
        let (mut a, mut b) = (s, t);
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[a] > self.depth[b] {
            left.push(a);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            right.push(b);
            b = self.parent[b];
        }
        while a != b {
            left.push(a);
            right.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        left.push(a);
        left.extend(right.into_iter().rev());
        left
    }
}

fn ear_clip(poly: &PolygonBoundary) -> Vec<[usize; 3]> {
    let n = poly.n();
    let v = poly.vertices();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut alive = vec![true; n];
    let turn = |prev: &[usize], next: &[usize], i: usize| orientation(v[prev[i]], v[i], v[next[i]]);
    let mut reflex: Vec<usize> = (0..n).filter(|&i| turn(&prev, &next, i) <= 0).collect();
    let mut out = Vec::with_capacity(n - 2);
    let mut remaining = n;
    let mut i = 0;
    let mut misses = 0;
    let mut strict = true;
    while remaining > 3 {
        let (a, c) = (prev[i], next[i]);
        let convex = turn(&prev, &next, i) > 0;
        let ear = convex
            && !reflex.iter().any(|&r| {
                if !alive[r] || r == a || r == i || r == c {
                    return false;
                }
                let p = v[r];
                let (o1, o2, o3) = (orientation(v[a], v[i], p), orientation(v[i], v[c], p), orientation(v[c], v[a], p));
                if strict {
                    o1 >= 0 && o2 >= 0 && o3 >= 0
                } else {
                    o1 > 0 && o2 > 0 && o3 > 0
                }
            });
        if ear {
            out.push([a, i, c]);
            alive[i] = false;
            next[a] = c;
            prev[c] = a;
            remaining -= 1;
            reflex.retain(|&r| alive[r] && turn(&prev, &next, r) <= 0);
            misses = 0;
            strict = true;
            i = a;
        } else {
            i = next[i];
            misses += 1;
            if misses > remaining {
                // Degenerate input: retry allowing vertices on the ear's boundary.
                if !strict {
                    let a = prev[i];
                    out.push([a, i, next[i]]);
                    alive[i] = false;
                    next[a] = next[i];
                    prev[next[i]] = a;
                    remaining -= 1;
                    strict = true;
                    i = a;
                } else {
                    strict = false;
                }
                misses = 0;
            }
        }
    }
    out.push([prev[i], i, next[i]]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(f64, f64)]) -> PolygonBoundary {
        PolygonBoundary::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn area(poly: &PolygonBoundary, tr: &Triangulation) -> f64 {
        (0..tr.len())
            .map(|t| {
                let [a, b, c] = tr.corners(poly, t);
                0.5 * (b - a).cross(c - a)
            })
            .sum()
    }

    #[test]
    fn l_shape() {
        let p = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let tr = Triangulation::new(&p);
        assert_eq!(tr.len(), 4);
        assert!((area(&p, &tr) - 3.0).abs() < 1e-12);
        for t in 0..tr.len() {
            let [a, b, c] = tr.corners(&p, t);
            assert_eq!(orientation(a, b, c), 1);
        }
        assert!(tr.edge_tri.iter().all(|&t| t != usize::MAX));
        assert!(tr.parent.iter().skip(1).all(|&t| t != usize::MAX));
    }

    #[test]
    fn comb_polygon() {
        let mut pts = vec![(0.0, 0.0), (10.0, 0.0)];
        for k in (0..5).rev() {
            let x = 2.0 * k as f64;
            pts.push((x + 1.5, 3.0));
            pts.push((x + 1.0, 1.0));
            pts.push((x + 0.5, 3.0));
        }
        pts.push((0.0, 3.0));
        let p = poly(&pts);
        let tr = Triangulation::new(&p);
        assert_eq!(tr.len(), p.n() - 2);
        assert!((area(&p, &tr) - p.signed_area()).abs() < 1e-9);
    }

    #[test]
    fn dual_path_endpoints() {
        let p = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let tr = Triangulation::new(&p);
        for s in 0..tr.len() {
            for t in 0..tr.len() {
                let path = tr.dual_path(s, t);
                assert_eq!(path[0], s);
                assert_eq!(*path.last().unwrap(), t);
            }
        }
    }
}
