//! Upper envelopes of one-variable distance functions over an interval.

use crate::forms::Fn1;

/// `f` restricted to `[lo, hi]`, tagged with the caller's id.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub f: Fn1,
    pub tag: usize,
}

impl Piece {
    fn with(self, lo: f64, hi: f64) -> Piece {
        Piece { lo, hi, ..self }
    }
}

/// Upper envelope of `pieces` by repeated pairwise merging.
///
/// The result is sorted and interior disjoint; stretches covered by no piece
/// are simply absent. `scale` sets the length below which slivers are dropped.
pub fn upper_envelope(pieces: &[Piece], scale: f64) -> Vec<Piece> {
    let eps = 1e-13 * scale.max(f64::MIN_POSITIVE);
    let mut env: Vec<Piece> = Vec::new();
    for p in pieces {
        if p.hi - p.lo > eps {
            env = merge_one(&env, p, eps, scale);
        }
    }
    env
}

fn merge_one(cur: &[Piece], p: &Piece, eps: f64, scale: f64) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(cur.len() + 4);
    let mut x = p.lo;
    let tol = 1e-13 * scale.max(1.0);
    for q in cur {
        if q.hi <= p.lo + eps || q.lo >= p.hi - eps {
            if q.lo >= p.hi - eps && x < p.hi - eps {
                out.push(p.with(x, p.hi));
                x = p.hi;
            }
            out.push(*q);
            continue;
        }
        if q.lo > x + eps {
            out.push(p.with(x, q.lo));
        }
        if q.lo < p.lo - eps {
            out.push(q.with(q.lo, p.lo));
        }
        let s0 = q.lo.max(p.lo);
        let s1 = q.hi.min(p.hi);
        let mut cuts = vec![s0];
        cuts.extend(p.f.crossings(&q.f, s0, s1).into_iter().filter(|&s| s > s0 + eps && s < s1 - eps));
        cuts.push(s1);
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let winner = if p.f.eval(mid) > q.f.eval(mid) + tol { p } else { q };
            out.push(winner.with(w[0], w[1]));
        }
        if q.hi > p.hi + eps {
            out.push(q.with(p.hi, q.hi));
        }
        x = x.max(s1);
    }
    if x < p.hi - eps {
        out.push(p.with(x, p.hi));
    }
    coalesce(out, eps)
}

/// Joins neighbours carrying the same function and drops slivers.
fn coalesce(v: Vec<Piece>, eps: f64) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::with_capacity(v.len());
    for p in v {
        if p.hi - p.lo <= eps {
            if let Some(last) = out.last_mut() {
                if (p.lo - last.hi).abs() <= eps {
                    last.hi = p.hi.max(last.hi);
                }
            }
            continue;
        }
        if let Some(last) = out.last_mut() {
            if last.tag == p.tag && last.f == p.f && (p.lo - last.hi).abs() <= eps {
                last.hi = p.hi;
                continue;
            }
            if (p.lo - last.hi).abs() <= eps {
                let mut p = p;
                p.lo = last.hi;
                out.push(p);
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Value of an envelope at `s`, or `None` off its support.
pub fn eval(env: &[Piece], s: f64) -> Option<f64> {
    let k = env.partition_point(|p| p.hi < s);
    env.get(k).filter(|p| p.lo <= s).map(|p| p.f.eval(s))
}

/// Minimum of a convex envelope: `(s, value, piece index)`.
///
/// Among minimizers within `1e-13` relative, the one on the leftmost piece is
/// returned, at that piece's own minimizer.
pub fn minimize(env: &[Piece]) -> Option<(f64, f64, usize)> {
    let local: Vec<(f64, f64)> = env
        .iter()
        .map(|p| {
            let mut best = (p.lo, p.f.eval(p.lo));
            let mut try_at = |s: f64| {
                let v = p.f.eval(s);
                if v < best.1 {
                    best = (s, v);
                }
            };
            try_at(p.hi);
            if let Some(c) = p.f.argmin() {
                try_at(c.clamp(p.lo, p.hi));
            }
            best
        })
        .collect();
    let m = local.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    if !m.is_finite() {
        return None;
    }
    let tol = 1e-13 * m.abs().max(1e-300);
    local.iter().position(|x| x.1 <= m + tol).map(|k| (local[k].0, local[k].1, k))
}
