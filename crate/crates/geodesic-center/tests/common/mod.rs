#![allow(dead_code)]

use geodesic_center::boundary_voronoi::{boundary_voronoi_full, build_hourglasses, edge_diagrams, labels_cyclically_monotone, CoverKind, EdgeDiagram};
use geodesic_center::center::{CenterRun, SideDecision};
use geodesic_center::coarse_cover::{build_edge_funnels, polygon_coarse_cover, PolygonCoarseCover};
use geodesic_center::farthest::farthest_edge_per_vertex;
use geodesic_center::geom::{cyclic_order_ranks, dist_point_segment};
use geodesic_center::io::gen_random_polygon;
use geodesic_center::oracle::{brute_boundary_voronoi, brute_radius, segment_inside, vis_edge_dists};
use geodesic_center::shortest_paths::{geodesic_path, spt_from_point, Target};
use geodesic_center::{BoundaryCursor, Domain, Point2, PolygonBoundary};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn poly(pts: &[(f64, f64)]) -> Domain {
    Domain::new(PolygonBoundary::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap())
}

/// Seeded corpus with `n` cycling through `[8, 40]`.
pub fn corpus(count: u64, base: u64) -> Vec<Domain> {
    (0..count).map(|s| Domain::new(gen_random_polygon(8 + (s as usize * 7) % 33, base + s).unwrap())).collect()
}

/// Runs `f` over `items` on all cores, keeping order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

pub fn interior_samples(dom: &Domain, count: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let (lo, hi) = dom.poly.bbox();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if dom.poly.contains(p) {
            out.push(p);
        }
    }
    out
}

pub fn cover_of(dom: &Domain) -> PolygonCoarseCover {
    let labels = farthest_edge_per_vertex(dom).0;
    let vor = boundary_voronoi_full(dom, &labels);
    polygon_coarse_cover(dom, &build_edge_funnels(dom, &vor))
}

fn on_edge(n: usize, rank: f64, e: usize) -> bool {
    let lo = e as f64;
    rank >= lo - 1e-12 && rank <= lo + 1.0 + 1e-12 || (e == n - 1 && rank <= 1e-12)
}

/// `d(p,e) + d(q,f) >= d(p,f) + d(q,e)` for boundary order `p, q, e, f`.
pub fn triangle_inequality(dom: &Domain, quads: usize, rng: &mut ChaCha8Rng) -> Check {
    let n = dom.n();
    let pts: Vec<(f64, Vec<f64>)> = (0..24)
        .map(|_| {
            let c = BoundaryCursor::new(rng.gen_range(0..n), rng.gen_range(0.02..0.98));
            let t = spt_from_point(dom, dom.poly.point_at(c)).map_err(|e| format!("{e}"))?;
            Ok((c.rank(), t.leaves.iter().map(|l| l.dist).collect()))
        })
        .collect::<Result<_, String>>()?;
    let mut done = 0;
    while done < quads {
        let (i, j) = (rng.gen_range(0..pts.len()), rng.gen_range(0..pts.len()));
        let (e, f) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j || e == f {
            continue;
        }
        let (rp, rq) = (pts[i].0, pts[j].0);
        if [rp, rq].iter().any(|&r| on_edge(n, r, e) || on_edge(n, r, f)) {
            continue;
        }
        let (me, mf) = (e as f64 + 0.5, f as f64 + 0.5);
        if !cyclic_order_ranks(&[rp, rq, me, mf]) {
            continue;
        }
        let (dp, dq) = (&pts[i].1, &pts[j].1);
        let lhs = dp[e] + dq[f];
        let rhs = dp[f] + dq[e];
        if lhs < rhs - 1e-9 {
            return Err(format!("p {rp} q {rq} e {e} f {f}: {lhs} < {rhs}"));
        }
        done += 1;
    }
    Ok(())
}

/// The tree distance to an edge equals the point distance to its terminal.
pub fn terminal_distance(dom: &Domain, rng: &mut ChaCha8Rng) -> Check {
    for p in interior_samples(dom, 5, rng) {
        let t = spt_from_point(dom, p).map_err(|e| format!("{e}"))?;
        for l in &t.leaves {
            // Point location wants the target strictly inside.
            let q = l.terminal + dom.poly.inward_normal(l.edge) * (1e-11 * dom.diam);
            let g = geodesic_path(dom, p, Target::Point(q)).map_err(|e| format!("{e}"))?;
            if (g.length - l.dist).abs() > 1e-9 * dom.diam {
                return Err(format!("edge {}: {} vs {}", l.edge, l.dist, g.length));
            }
        }
    }
    Ok(())
}

/// Paths from two boundary points to one edge never interleave their ends.
pub fn paths_do_not_cross(dom: &Domain, pairs: usize, rng: &mut ChaCha8Rng) -> Check {
    let n = dom.n();
    for _ in 0..pairs {
        let c1 = BoundaryCursor::new(rng.gen_range(0..n), rng.gen_range(0.02..0.98));
        let c2 = BoundaryCursor::new(rng.gen_range(0..n), rng.gen_range(0.02..0.98));
        let e = rng.gen_range(0..n);
        if c1.edge == e || c2.edge == e {
            continue;
        }
        let t1 = spt_from_point(dom, dom.poly.point_at(c1)).map_err(|e| format!("{e}"))?;
        let t2 = spt_from_point(dom, dom.poly.point_at(c2)).map_err(|e| format!("{e}"))?;
        let r = [c1.rank(), c2.rank(), t1.leaves[e].cursor.canonical(n).rank(), t2.leaves[e].cursor.canonical(n).rank()];
        let sep = 1e-9 * n as f64;
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| (r[i] - r[j]).abs() > sep));
        // p, q, t_p, t_q in cyclic order means the two paths cross.
        if distinct && cyclic_order_ranks(&[r[0], r[1], r[2], r[3]]) {
            return Err(format!("edge {e}: ends {r:?} interleave"));
        }
    }
    Ok(())
}

pub fn ordering_property(dom: &Domain) -> Check {
    let labels = farthest_edge_per_vertex(dom).0;
    let seq: Vec<usize> = (0..dom.n()).filter(|&v| !labels.tie[v]).map(|v| labels.edge[v]).collect();
    if labels_cyclically_monotone(&seq, dom.n()) {
        Ok(())
    } else {
        Err(format!("F = {:?}", labels.edge))
    }
}

/// No pair of boundary samples shows `p, q, F(q), F(p)`.
pub fn forbidden_order(dom: &Domain, per_edge: usize) -> Check {
    let n = dom.n();
    let s: Vec<_> = brute_boundary_voronoi(dom, per_edge).into_iter().filter(|x| x.farthest.len() == 1 && x.t > 0.0).collect();
    for p in &s {
        for q in &s {
            let (fp, fq) = (p.farthest[0], q.farthest[0]);
            let (rp, rq) = (p.edge as f64 + p.t, q.edge as f64 + q.t);
            if fp == fq || rp == rq || on_edge(n, rp, fq) || on_edge(n, rq, fp) {
                continue;
            }
            if cyclic_order_ranks(&[rp, rq, fq as f64 + 0.5, fp as f64 + 0.5]) {
                return Err(format!("p {rp} F {fp}, q {rq} F {fq}"));
            }
        }
    }
    Ok(())
}

/// Smallest second difference of `r` at equal arc-length steps along `pts`.
fn min_second_difference(dom: &Domain, pts: &[Point2], steps: usize) -> Result<f64, String> {
    let total: f64 = pts.windows(2).map(|w| w[0].dist(w[1])).sum();
    let at = |s: f64| {
        let mut left = s;
        let last = pts.len() - 2;
        for (i, w) in pts.windows(2).enumerate() {
            let l = w[0].dist(w[1]);
            if left <= l || i == last {
                return w[0].lerp(w[1], if l > 0.0 { (left / l).min(1.0) } else { 0.0 });
            }
            left -= l;
        }
        pts[0]
    };
    let r: Vec<f64> = (0..=steps)
        .map(|k| brute_radius(dom, at(total * k as f64 / steps as f64)).map(|x| x.0).map_err(|e| format!("{e}")))
        .collect::<Result<_, _>>()?;
    Ok(r.windows(3).map(|w| w[0] + w[2] - 2.0 * w[1]).fold(f64::INFINITY, f64::min))
}

/// `r` is convex along geodesics between random interior points.
pub fn geodesic_convexity(dom: &Domain, geodesics: usize, rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..geodesics {
        let pq = interior_samples(dom, 2, rng);
        let g = geodesic_path(dom, pq[0], Target::Point(pq[1])).map_err(|e| format!("{e}"))?;
        let m = min_second_difference(dom, &g.points, 24)?;
        if m < -1e-7 {
            return Err(format!("second difference {m} along {:?}", g.points));
        }
    }
    Ok(())
}

/// `radius_at` agrees with the brute radius at random interior points.
pub fn coverage(dom: &Domain, cover: &PolygonCoarseCover, samples: usize, rng: &mut ChaCha8Rng) -> Check {
    for x in interior_samples(dom, samples, rng) {
        let (r, _) = cover.radius_at(dom, x).map_err(|e| format!("{e}"))?;
        let (rb, _) = brute_radius(dom, x).map_err(|e| format!("{e}"))?;
        if (r - rb).abs() > 1e-9 * rb {
            return Err(format!("at {x:?}: {r} vs {rb}"));
        }
    }
    Ok(())
}

/// A point whose only farthest edge is `e` lies in the funnel of `e`.
pub fn funnel_containment(dom: &Domain, samples: usize, rng: &mut ChaCha8Rng) -> Check {
    let labels = farthest_edge_per_vertex(dom).0;
    let funnels = build_edge_funnels(dom, &boundary_voronoi_full(dom, &labels));
    for x in interior_samples(dom, samples, rng) {
        let (_, far) = brute_radius(dom, x).map_err(|e| format!("{e}"))?;
        let inside = |e: usize| funnels.iter().any(|f| f.edge == e && f.contains(x, dom.tau()));
        if !far.iter().any(|&e| inside(e)) || (far.len() == 1 && !inside(far[0])) {
            return Err(format!("{x:?} with farthest {far:?}"));
        }
    }
    Ok(())
}

/// `|r(x) - r(y)| <= d(x, y)`, which is the straight distance when `x` sees `y`.
pub fn lipschitz(dom: &Domain, pairs: usize, rng: &mut ChaCha8Rng) -> Check {
    let pts = interior_samples(dom, 2 * pairs, rng);
    for w in pts.chunks(2) {
        let (a, _) = brute_radius(dom, w[0]).map_err(|e| format!("{e}"))?;
        let (b, _) = brute_radius(dom, w[1]).map_err(|e| format!("{e}"))?;
        let d = geodesic_path(dom, w[0], Target::Point(w[1])).map_err(|e| format!("{e}"))?.length;
        let visible = segment_inside(&dom.poly, w[0], w[1]);
        if (a - b).abs() > d + 1e-12 || (visible && (a - b).abs() > w[0].dist(w[1]) + 1e-12) {
            return Err(format!("{w:?}: {a} vs {b}"));
        }
    }
    Ok(())
}

fn envelope_at(d: &EdgeDiagram, s: f64) -> f64 {
    let pieces = &d.envelope.pieces;
    let j = pieces.partition_point(|p| p.hi < s).min(pieces.len() - 1);
    d.cover.frame.restrict(&d.cover.elements[pieces[j].element].form).eval(s)
}

/// Tree insertion matches the pointwise maximum, and nothing it discards
/// rises above the final envelope.
pub fn envelope_and_discards(dom: &Domain) -> Check {
    let labels = farthest_edge_per_vertex(dom).0;
    for d in edge_diagrams(dom, &labels) {
        let frame = d.cover.frame;
        let fns: Vec<_> = d.cover.elements.iter().map(|e| frame.restrict(&e.form)).collect();
        for k in 0..=200 {
            let s = (frame.len * k as f64 / 200.0).min(frame.len);
            let naive = d.cover.elements.iter().zip(&fns).filter(|(e, _)| e.lo <= s && s <= e.hi).map(|(_, f)| f.eval(s)).fold(f64::NEG_INFINITY, f64::max);
            let got = envelope_at(&d, s);
            if (got - naive).abs() > 1e-9 * dom.diam {
                return Err(format!("edge {} s {s}: {got} vs {naive}", frame.edge));
            }
        }
        for (k, el) in d.cover.elements.iter().enumerate() {
            let kept = d.envelope.trace.inserted[k].unwrap_or((el.lo, el.lo));
            for (lo, hi) in [(el.lo, kept.0), (kept.1, el.hi)] {
                if hi - lo > 1e-9 * frame.len {
                    let mid = 0.5 * (lo + hi);
                    if fns[k].eval(mid) > envelope_at(&d, mid) + 1e-9 * dom.diam {
                        return Err(format!("edge {} element {k} survives at {mid}", frame.edge));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The brute farthest edge of sampled points on each transition edge lies on
/// the hourglass chain.
pub fn hourglass_sufficiency(dom: &Domain) -> Check {
    let labels = farthest_edge_per_vertex(dom).0;
    for h in build_hourglasses(dom, &labels) {
        let (a, b) = dom.poly.edge(h.edge);
        for k in 0..=16 {
            let (_, far) = brute_radius(dom, a.lerp(b, k as f64 / 16.0)).map_err(|e| format!("{e}"))?;
            if !far.iter().any(|e| h.chain.contains(e)) {
                return Err(format!("edge {} step {k}: {far:?} not in {:?}", h.edge, h.chain));
            }
        }
    }
    Ok(())
}

/// Per-site element order on each transition edge and touching intervals on
/// consecutive cover tree edges.
pub fn cover_structure(dom: &Domain) -> Check {
    let labels = farthest_edge_per_vertex(dom).0;
    for d in edge_diagrams(dom, &labels) {
        let tol = 1e-9 * d.cover.frame.len;
        for e in 0..dom.n() {
            let mut els: Vec<_> = d.cover.elements.iter().filter(|x| x.edge == e).collect();
            if els.is_empty() {
                continue;
            }
            els.sort_by(|x, y| x.lo.total_cmp(&y.lo).then(x.hi.total_cmp(&y.hi)));
            let rank = |k: CoverKind| match k {
                CoverKind::ASide => 0,
                CoverKind::CentralTriangle | CoverKind::CentralTrapezoid => 1,
                CoverKind::BSide => 2,
            };
            let ranks: Vec<u8> = els.iter().map(|x| rank(x.kind)).collect();
            if !ranks.windows(2).all(|w| w[0] <= w[1]) || ranks.iter().filter(|&&r| r == 1).count() != 1 {
                return Err(format!("edge {} site {e}: kinds {ranks:?}", d.cover.frame.edge));
            }
            if els.windows(2).any(|w| (w[0].hi - w[1].lo).abs() > tol) {
                return Err(format!("edge {} site {e}: intervals do not chain", d.cover.frame.edge));
            }
        }
        let els = &d.cover.elements;
        for (p, c) in d.cover.tree.consecutive_pairs() {
            if (els[p].hi - els[c].lo).abs() > tol {
                return Err(format!("edge {}: tree pair {p} -> {c} does not touch", d.cover.frame.edge));
            }
        }
    }
    Ok(())
}

/// `(sum |hourglass| / n, sum |Y(e)| / n, |K| / |T|)`.
pub fn size_ratios(dom: &Domain) -> (f64, f64, f64) {
    let labels = farthest_edge_per_vertex(dom).0;
    let n = dom.n() as f64;
    let hg: usize = build_hourglasses(dom, &labels).iter().map(|h| h.size).sum();
    let funnels = build_edge_funnels(dom, &boundary_voronoi_full(dom, &labels));
    let fs: usize = funnels.iter().map(|f| f.size).sum();
    let cover = polygon_coarse_cover(dom, &funnels);
    (hg as f64 / n, fs as f64 / n, cover.chords.len() as f64 / cover.elements.len().max(1) as f64)
}

fn side_polygon(dom: &Domain, u: usize, w: usize, probe: Point2) -> Option<PolygonBoundary> {
    let n = dom.n();
    let walk = |from: usize, to: usize| {
        let mut v = vec![dom.poly.vertex(from)];
        let mut i = from;
        while i != to {
            i = (i + 1) % n;
            v.push(dom.poly.vertex(i));
        }
        v
    };
    [walk(u, w), walk(w, u)].into_iter().filter_map(|v| PolygonBoundary::new(v).ok()).find(|p| p.contains(probe))
}

fn near_boundary(p: &PolygonBoundary, x: Point2, tol: f64) -> bool {
    (0..p.n()).any(|i| {
        let (a, b) = p.edge(i);
        dist_point_segment(x, a, b) <= tol
    })
}

/// Post-hoc audit of one run: every kept side holds the center, the diagonal
/// count drops with each cut, `r` is convex along each tested chord, the radius
/// is consistent, and an interior center has at least two farthest edges.
pub fn center_audit(dom: &Domain, run: &CenterRun) -> Check {
    let c = run.result.center;
    let tol = 1e-7 * dom.diam;
    let mut last = dom.tri.len().saturating_sub(1) + 1;
    for call in &run.region.history {
        let [u, w] = call.chord;
        let (a, b) = (dom.poly.vertex(u), dom.poly.vertex(w));
        if call.decision != SideDecision::On {
            let side = side_polygon(dom, u, w, call.probe).ok_or_else(|| format!("chord {u}-{w}: probe on no side"))?;
            if !side.contains(c) && !near_boundary(&side, c, tol) {
                return Err(format!("chord {u}-{w} kept {:?} but the center {c:?} is elsewhere", call.decision));
            }
            if call.chords_left >= last {
                return Err(format!("chord {u}-{w}: {} diagonals left after {last}", call.chords_left));
            }
            last = call.chords_left;
        }
        let m = min_second_difference(dom, &[a, b], 32)?;
        if m < -1e-7 {
            return Err(format!("chord {u}-{w}: second difference {m}"));
        }
    }
    let r = run.result.radius;
    let (ra, _) = run.cover.radius_at(dom, c).map_err(|e| format!("{e}"))?;
    let (rb, _) = brute_radius(dom, c).map_err(|e| format!("{e}"))?;
    if (r - ra).abs() > 1e-9 * r || (r - rb).abs() > 1e-9 * r {
        return Err(format!("radius {r}, cover {ra}, brute {rb}"));
    }
    if !run.result.on_boundary {
        let d = vis_edge_dists(&dom.poly, c);
        let count = d.iter().filter(|&&x| x >= r - 1e-7).count();
        if count < 2 {
            return Err(format!("interior center with {count} farthest edge(s)"));
        }
    }
    Ok(())
}
