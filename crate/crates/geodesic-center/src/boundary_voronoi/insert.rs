//! Upper envelope of an edge cover by depth-first insertion along its tree.

use super::cover::{CoverTree, EdgeCover};
use crate::forms::Fn1;
use serde::Serialize;

const NIL: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    lo: f64,
    hi: f64,
    /// Cover element, or `NIL` for a stretch with no function yet.
    elem: usize,
    prev: usize,
    next: usize,
    alive: bool,
}

/// The list `M`: interior disjoint intervals from `a` onward, each with the
/// element whose function it carries.
#[derive(Clone, Debug, Default)]
pub struct EnvelopeList {
    nodes: Vec<Node>,
    head: usize,
    tail: usize,
}

/// One interval of a finished envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopePiece {
    pub lo: f64,
    pub hi: f64,
    pub element: usize,
    pub edge: usize,
}

impl EnvelopeList {
    fn new() -> Self {
        EnvelopeList { nodes: Vec::new(), head: NIL, tail: NIL }
    }

    fn alloc(&mut self, lo: f64, hi: f64, elem: usize) -> usize {
        self.nodes.push(Node { lo, hi, elem, prev: NIL, next: NIL, alive: true });
        self.nodes.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        if a == NIL {
            self.head = b;
        } else {
            self.nodes[a].next = b;
        }
        if b == NIL {
            self.tail = a;
        } else {
            self.nodes[b].prev = a;
        }
    }

    /// The interval containing points just right of `l`, walking from `hint`;
    /// `NIL` if `M` ends at or before `l`.
    fn locate(&self, hint: usize, l: f64, eps: f64) -> usize {
        let mut p = if hint != NIL && self.nodes[hint].alive { hint } else { self.head };
        if p == NIL {
            return NIL;
        }
        while self.nodes[p].lo > l + eps && self.nodes[p].prev != NIL {
            p = self.nodes[p].prev;
        }
        while self.nodes[p].hi <= l + eps {
            p = self.nodes[p].next;
            if p == NIL {
                return NIL;
            }
        }
        p
    }

    /// Replaces whatever covers `[l, t]` by a new interval carrying `elem`.
    /// `p` is the interval containing `l+`, or `NIL` past the end.
    fn replace(&mut self, p: usize, l: f64, t: f64, elem: usize, eps: f64) -> usize {
        if p == NIL {
            let tail = self.tail;
            if tail != NIL && self.nodes[tail].hi < l - eps {
                let gap = self.alloc(self.nodes[tail].hi, l, NIL);
                self.link(tail, gap);
                self.link(gap, NIL);
            }
            let tail = self.tail;
            let x = self.alloc(l, t, elem);
            self.link(tail, x);
            self.link(x, NIL);
            return x;
        }
        let before = self.nodes[p].prev;
        let mut left = None;
        let mut right = None;
        let mut cur = p;
        let mut after = NIL;
        while cur != NIL && self.nodes[cur].lo < t - eps {
            let nd = self.nodes[cur];
            if nd.lo < l - eps {
                left = Some((nd.lo, l, nd.elem));
            }
            if nd.hi > t + eps {
                right = Some((t, nd.hi, nd.elem));
            }
            self.nodes[cur].alive = false;
            after = nd.next;
            cur = nd.next;
        }
        if cur != NIL && after == NIL {
            after = cur;
        }
        let mut last = before;
        if let Some((lo, hi, e)) = left {
            let x = self.alloc(lo, hi, e);
            self.link(last, x);
            last = x;
        }
        let new = self.alloc(l, t, elem);
        self.link(last, new);
        last = new;
        if let Some((lo, hi, e)) = right {
            let x = self.alloc(lo, hi, e);
            self.link(last, x);
            last = x;
        } else if after != NIL {
            self.nodes[after].lo = t;
        }
        self.link(last, after);
        new
    }

    /// Intervals in order.
    pub fn pieces(&self) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::new();
        let mut p = self.head;
        while p != NIL {
            let nd = self.nodes[p];
            out.push((nd.lo, nd.hi, nd.elem));
            p = nd.next;
        }
        out
    }
}

/// What the insertion pass did with each element.
#[derive(Clone, Debug, Default, Serialize)]
pub struct InsertTrace {
    /// The stretch inserted into `M` when the element was handled.
    pub inserted: Vec<Option<(f64, f64)>>,
    /// Whether the element was reached at all.
    pub visited: Vec<bool>,
}

/// Finished envelope of one edge, with the stretch `[0, len]` covered when
/// `complete` holds.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeEnvelope {
    pub pieces: Vec<EnvelopePiece>,
    pub complete: bool,
    pub trace: InsertTrace,
}

/// Runs `Insert` over the cover tree from the root.
pub fn dfs_insert_envelope(cover: &EdgeCover) -> EdgeEnvelope {
    let els = &cover.elements;
    let len = cover.frame.len;
    let scale = len.max(els.iter().map(|e| e.form.eval(cover.frame.a).abs()).fold(0.0, f64::max));
    let eps = 1e-12 * len;
    let tol = 1e-12 * scale.max(1e-300);
    let fns: Vec<Fn1> = els.iter().map(|e| cover.frame.restrict(&e.form)).collect();
    let mut m = EnvelopeList::new();
    let mut trace = InsertTrace { inserted: vec![None; els.len()], visited: vec![false; els.len()] };
    let tree: &CoverTree = &cover.tree;

    // f beats the interval `q` just right of `s`.
    let wins = |m: &EnvelopeList, q: usize, f: &Fn1, s: f64| -> bool {
        if q == NIL || m.nodes[q].elem == NIL {
            return true;
        }
        let g = &fns[m.nodes[q].elem];
        let h = f.eval(s) - g.eval(s);
        if h > tol {
            return true;
        }
        if h < -tol {
            return false;
        }
        f.deriv(s) - g.deriv(s) > 1e-12
    };

    // (tree node, pointer p_u, next child index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(CoverTree::ROOT, NIL, 0)];
    while let Some(&(u, pu, ci)) = stack.last() {
        let top = stack.len() - 1;
        if ci >= tree.children[u].len() {
            stack.pop();
            continue;
        }
        stack[top].2 += 1;
        let (v, k) = tree.children[u][ci];
        trace.visited[k] = true;
        let (l, r) = (els[k].lo, els[k].hi.max(els[k].lo));
        let f = fns[k];
        if r - l <= eps {
            stack.push((v, pu, 0));
            continue;
        }
        let p = m.locate(pu, l, eps);
        if !wins(&m, p, &f, l) {
            continue;
        }
        // Cross-over: first point where the current envelope takes over.
        let mut t = r;
        let mut q = p;
        while q != NIL {
            let nd = m.nodes[q];
            let s0 = nd.lo.max(l);
            if s0 >= r - eps {
                break;
            }
            if q != p && !wins(&m, q, &f, s0) {
                t = s0;
                break;
            }
            let s1 = nd.hi.min(r);
            if nd.elem != NIL {
                let g = fns[nd.elem];
                let roots: Vec<f64> = f.crossings(&g, s0, s1).into_iter().filter(|&x| x > s0 + eps && x < s1 - eps).collect();
                let mut found = None;
                for (j, &x) in roots.iter().enumerate() {
                    let next = roots.get(j + 1).copied().unwrap_or(s1);
                    let mid = 0.5 * (x + next);
                    if f.eval(mid) < g.eval(mid) - tol {
                        found = Some(x);
                        break;
                    }
                }
                if let Some(x) = found {
                    t = x;
                    break;
                }
            }
            if nd.hi >= r - eps {
                break;
            }
            q = nd.next;
        }
        let new = m.replace(p, l, t, k, eps);
        trace.inserted[k] = Some((l, t));
        stack[top].1 = new;
        if t >= r - eps && !tree.children[v].is_empty() {
            stack.push((v, new, 0));
        }
    }

    let raw = m.pieces();
    let complete = !raw.is_empty()
        && raw[0].0 <= eps
        && raw.last().unwrap().1 >= len - eps
        && raw.iter().all(|x| x.2 != NIL)
        && raw.windows(2).all(|w| (w[1].0 - w[0].1).abs() <= eps);
    let pieces = raw
        .into_iter()
        .filter(|x| x.2 != NIL && x.1 > x.0)
        .map(|(lo, hi, k)| EnvelopePiece { lo, hi, element: k, edge: els[k].edge })
        .collect();
    EdgeEnvelope { pieces, complete, trace }
}

/// Envelope of all elements by plain pairwise merging, without the tree.
pub fn naive_envelope(cover: &EdgeCover) -> EdgeEnvelope {
    use crate::envelope::{upper_envelope, Piece};
    let pieces: Vec<Piece> = cover
        .elements
        .iter()
        .enumerate()
        .map(|(k, e)| Piece { lo: e.lo, hi: e.hi.max(e.lo), f: cover.frame.restrict(&e.form), tag: k })
        .collect();
    let env = upper_envelope(&pieces, cover.frame.len);
    let eps = 1e-12 * cover.frame.len;
    let complete = !env.is_empty()
        && env[0].lo <= eps
        && env.last().unwrap().hi >= cover.frame.len - eps
        && env.windows(2).all(|w| (w[1].lo - w[0].hi).abs() <= eps);
    EdgeEnvelope {
        pieces: env
            .into_iter()
            .map(|p| EnvelopePiece { lo: p.lo, hi: p.hi, element: p.tag, edge: cover.elements[p.tag].edge })
            .collect(),
        complete,
        trace: InsertTrace::default(),
    }
}
