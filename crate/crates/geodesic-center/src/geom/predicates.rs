//! Exact sign predicates on `f64` coordinates.
//!
//! The orientation test first tries a floating-point filter and falls back to
//! exact expansion arithmetic when the filter cannot certify the sign.

use super::Point2;

const EPS: f64 = f64::EPSILON * 0.5;
const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
const CCW_ERRBOUND_A: f64 = (3.0 + 16.0 * EPS) * EPS;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let x = a + b;
    let bv = x - a;
    let av = x - bv;
    (x, (a - av) + (b - bv))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_product(a: f64, b: f64) -> (f64, f64) {
    let x = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let err = x - ahi * bhi - alo * bhi - ahi * blo;
    (x, alo * blo - err)
}

/// Adds `b` into the nonoverlapping expansion `e` (increasing magnitude).
fn grow_expansion(e: &mut Vec<f64>, b: f64) {
    let mut q = b;
    for v in e.iter_mut() {
        let (sum, err) = two_sum(q, *v);
        *v = err;
        q = sum;
    }
    e.push(q);
}

/// Sign of an expansion: the sign of its most significant nonzero component.
fn expansion_sign(e: &[f64]) -> i32 {
    for &c in e.iter().rev() {
        if c > 0.0 {
            return 1;
        }
        if c < 0.0 {
            return -1;
        }
    }
    0
}

fn orient_exact(a: Point2, b: Point2, c: Point2) -> i32 {
    // ax*by - ax*cy - ay*bx + ay*cx + bx*cy - by*cx
    let terms = [
        (a.x, b.y, 1.0),
        (a.x, c.y, -1.0),
        (a.y, b.x, -1.0),
        (a.y, c.x, 1.0),
        (b.x, c.y, 1.0),
        (b.y, c.x, -1.0),
    ];
    let mut e: Vec<f64> = Vec::with_capacity(16);
    for (p, q, s) in terms {
        let (hi, lo) = two_product(p * s, q);
        grow_expansion(&mut e, lo);
        grow_expansion(&mut e, hi);
    }
    expansion_sign(&e)
}

/// Sign of the doubled signed area of triangle `abc`: +1 for a
/// counterclockwise turn, -1 for clockwise, 0 for collinear.
pub fn orientation(a: Point2, b: Point2, c: Point2) -> i32 {
    let detleft = (a.x - c.x) * (b.y - c.y);
    let detright = (a.y - c.y) * (b.x - c.x);
    let det = detleft - detright;
    let detsum = if detleft > 0.0 {
        if detright <= 0.0 {
            return sign(det);
        }
        detleft + detright
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return sign(det);
        }
        -detleft - detright
    } else {
        return sign(det);
    };
    let bound = CCW_ERRBOUND_A * detsum;
    if det >= bound || -det >= bound {
        return sign(det);
    }
    orient_exact(a, b, c)
}

#[inline]
fn sign(v: f64) -> i32 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Closed segment intersection test built on exact orientation.
pub fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(q1, q2, p1))
        || (d2 == 0 && on_segment(q1, q2, p2))
        || (d3 == 0 && on_segment(p1, p2, q1))
        || (d4 == 0 && on_segment(p1, p2, q2))
}

/// Assumes `p` is collinear with `a`,`b`; checks the bounding box.
pub fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}
