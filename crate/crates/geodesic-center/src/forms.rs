//! Closed-form distance functions and their restrictions to segments.

use crate::geom::Point2;
use serde::Serialize;

/// Geodesic distance to a fixed edge inside one cell of a shortest path map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum DistForm {
    /// `|x - v| + kappa`: the path leaves `x` straight toward `v`.
    Apex { v: Point2, kappa: f64 },
    /// `(x - origin) . normal`: the path arrives perpendicularly.
    Line { origin: Point2, normal: Point2 },
}

impl DistForm {
    pub fn eval(&self, x: Point2) -> f64 {
        match *self {
            DistForm::Apex { v, kappa } => x.dist(v) + kappa,
            DistForm::Line { origin, normal } => (x - origin).dot(normal),
        }
    }

    /// Direction of steepest ascent at `x`, i.e. the reverse of the first path segment.
    /// `None` when `x` sits on the apex.
    pub fn gradient(&self, x: Point2) -> Option<Point2> {
        match *self {
            DistForm::Apex { v, .. } => {
                let d = x - v;
                let n = d.norm();
                if n <= 1e-300 {
                    None
                } else {
                    Some(d * (1.0 / n))
                }
            }
            DistForm::Line { normal, .. } => Some(normal),
        }
    }

    /// Restriction to the line `a + s * dir` with `dir` a unit vector.
    pub fn along(&self, a: Point2, dir: Point2) -> Fn1 {
        match *self {
            DistForm::Apex { v, kappa } => {
                let w = v - a;
                let c = w.dot(dir);
                let h = dir.cross(w);
                let h2 = h * h;
                Fn1::Hyper { c, h2, k: kappa }
            }
            DistForm::Line { origin, normal } => Fn1::Affine { a0: (a - origin).dot(normal), slope: dir.dot(normal) },
        }
    }
}

/// A distance function restricted to a line, parameterized by arc length `s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Fn1 {
    /// `sqrt((s - c)^2 + h2) + k`
    Hyper { c: f64, h2: f64, k: f64 },
    /// `a0 + slope * s`
    Affine { a0: f64, slope: f64 },
}

impl Fn1 {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Fn1::Hyper { c, h2, k } => ((s - c) * (s - c) + h2).sqrt() + k,
            Fn1::Affine { a0, slope } => a0 + slope * s,
        }
    }

    pub fn deriv(&self, s: f64) -> f64 {
        match *self {
            Fn1::Hyper { c, h2, .. } => {
                let r = ((s - c) * (s - c) + h2).sqrt();
                if r == 0.0 {
                    0.0
                } else {
                    (s - c) / r
                }
            }
            Fn1::Affine { slope, .. } => slope,
        }
    }

    /// Unconstrained minimizer, if the function has one.
    pub fn argmin(&self) -> Option<f64> {
        match *self {
            Fn1::Hyper { c, .. } => Some(c),
            Fn1::Affine { .. } => None,
        }
    }

    /// Roots of `self - other` inside `[lo, hi]`, sorted.
    ///
    /// Both functions reduce to a quadratic in `s` after squaring; roots are
    /// verified against the unsquared equation. Ill-conditioned cases fall back
    /// to bisection on sign changes over a fixed sampling.
    pub fn crossings(&self, other: &Fn1, lo: f64, hi: f64) -> Vec<f64> {
        let scale = 1.0 + lo.abs().max(hi.abs()) + self.eval(lo).abs() + other.eval(lo).abs();
        let h = |s: f64| self.eval(s) - other.eval(s);
        let mut cand: Vec<f64> = Vec::new();
        let mut ill = false;
        match (*self, *other) {
            (Fn1::Affine { a0: a1, slope: b1 }, Fn1::Affine { a0: a2, slope: b2 }) => {
                if (b1 - b2).abs() > 1e-15 {
                    cand.push((a2 - a1) / (b1 - b2));
                }
            }
            (Fn1::Hyper { c, h2, k }, Fn1::Affine { a0, slope }) | (Fn1::Affine { a0, slope }, Fn1::Hyper { c, h2, k }) => {
                // (s-c)^2 + h2 = (a0 - k + slope s)^2
                let m = a0 - k;
                let qa = 1.0 - slope * slope;
                let qb = -2.0 * c - 2.0 * m * slope;
                let qc = c * c + h2 - m * m;
                ill |= solve_quadratic(qa, qb, qc, &mut cand);
            }
            (Fn1::Hyper { c: c1, h2: h1, k: k1 }, Fn1::Hyper { c: c2, h2: h2b, k: k2 }) => {
                // sqrt(A) = sqrt(B) + D with A - B linear in s.
                let d = k2 - k1;
                let la = -2.0 * c1 + 2.0 * c2; // coefficient of s in A - B
                let lb = c1 * c1 + h1 - c2 * c2 - h2b - d * d;
                if d.abs() < 1e-300 {
                    if la.abs() > 1e-300 {
                        cand.push(-lb / la);
                    }
                } else {
                    // (la s + lb)^2 = 4 d^2 ((s - c2)^2 + h2b)
                    let d2 = 4.0 * d * d;
                    let qa = la * la - d2;
                    let qb = 2.0 * la * lb + 2.0 * d2 * c2;
                    let qc = lb * lb - d2 * (c2 * c2 + h2b);
                    ill |= solve_quadratic(qa, qb, qc, &mut cand);
                }
            }
        }
        let tol = 1e-9 * scale;
        let mut roots: Vec<f64> = cand
            .into_iter()
            .filter(|&s| s >= lo - 1e-12 * scale && s <= hi + 1e-12 * scale)
            .map(|s| s.clamp(lo, hi))
            .filter(|&s| h(s).abs() <= tol)
            .collect();
        if ill || roots.is_empty() {
            // Sign-change scan catches roots the algebra missed.
            const N: usize = 32;
            let mut prev_s = lo;
            let mut prev_h = h(lo);
            for i in 1..=N {
                let s = lo + (hi - lo) * (i as f64) / (N as f64);
                let hs = h(s);
                if (prev_h < 0.0) != (hs < 0.0) {
                    roots.push(bisect(&h, prev_s, s));
                }
                prev_s = s;
                prev_h = hs;
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * scale);
        roots
    }
}

/// Appends real roots; returns true when the discriminant is too small to trust.
fn solve_quadratic(a: f64, b: f64, c: f64, out: &mut Vec<f64>) -> bool {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return true;
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() < 1e-14 {
        if b.abs() > 1e-300 {
            out.push(-c / b);
        }
        return a != 0.0;
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() < 1e-24 {
        out.push(-b / (2.0 * a));
        return true;
    }
    if disc < 0.0 {
        return false;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    out.push(q / a);
    if q != 0.0 {
        out.push(c / q);
    }
    false
}

fn bisect(h: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let neg_lo = h(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (h(mid) < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
