use super::*;
use crate::geom::PolygonBoundary;
use crate::io::gen_random_polygon;

fn poly(pts: &[(f64, f64)]) -> Domain {
    Domain::new(PolygonBoundary::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap())
}

fn rect() -> Domain {
    poly(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (0.0, 1.0)])
}

fn triangle() -> Domain {
    poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)])
}

fn l_shape() -> Domain {
    poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
}

#[test]
fn rectangle_labels() {
    let (l, err) = farthest_edge_per_vertex(&rect());
    assert!(err.is_none());
    assert_eq!(l.edge[0], 1);
    assert!((l.radius[0] - 3.0).abs() < 1e-12);
    assert_eq!(l.edge[2], 3);
    assert!((l.radius[2] - 3.0).abs() < 1e-12);
}

#[test]
fn triangle_labels() {
    let (l, _) = farthest_edge_per_vertex(&triangle());
    assert_eq!(l.edge, vec![1, 2, 0]);
    for r in l.radius {
        assert!((r - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }
}

#[test]
fn rectangle_separators() {
    // The paths from the far corners run along the top edge and touch rather
    // than cross, so the chain case applies and yields the four edges.
    let set = build_separators(&rect()).unwrap();
    assert_eq!(set.case, SeparatorCase::Chain);
    assert!(set.separators.len() <= 5);
    assert!((0..4).all(|e| set.covering_edge(e).is_some()));
}

#[test]
fn triangle_separators_cover_all_edges() {
    let set = build_separators(&triangle()).unwrap();
    assert!((0..3).all(|e| set.covering_edge(e).is_some()));
}

#[test]
fn degenerate_separator_covers_its_edge() {
    let dom = rect();
    let f = SeparatorFrame::new(&dom, 1, 2);
    assert_eq!(f.right_vertices(), vec![1, 2]);
    assert!(f.gamma.points.contains(&dom.poly.vertex(1)) && f.gamma.points.contains(&dom.poly.vertex(2)));
}

fn check_against_direct(dom: &Domain) {
    let (fast, err) = farthest_edge_per_vertex(dom);
    assert!(err.is_none(), "{err:?}");
    let slow = labels_direct(dom);
    for v in 0..dom.n() {
        if !(fast.tie[v] || slow.tie[v]) {
            assert_eq!(fast.edge[v], slow.edge[v], "vertex {v}");
        }
        assert!((fast.radius[v] - slow.radius[v]).abs() <= 1e-9 * dom.diam);
    }
}

#[test]
fn labels_match_direct_trees() {
    check_against_direct(&l_shape());
    check_against_direct(&triangle());
    for seed in 0..40 {
        let dom = Domain::new(gen_random_polygon(8 + seed as usize % 30, seed).unwrap());
        check_against_direct(&dom);
    }
}

#[test]
fn separators_cover_boundary_samples() {
    for seed in 0..20 {
        let dom = Domain::new(gen_random_polygon(10 + seed as usize, 100 + seed).unwrap());
        let set = build_separators(&dom).unwrap();
        assert!(set.separators.len() <= 5);
        for e in 0..dom.n() {
            assert!(set.covering_edge(e).is_some());
            let (a, b) = dom.poly.edge(e);
            for k in 1..4 {
                let p = a.lerp(b, k as f64 / 4.0);
                let (far, _) = farthest_from_point(&dom, p).unwrap();
                let seen = set.separators.iter().any(|s| {
                    s.frame.right_rank(e).is_some_and(|r| r < s.frame.right_len()) && s.frame.is_left_edge(far.edge)
                });
                assert!(seen, "seed {seed} edge {e}");
            }
        }
    }
}

#[test]
fn matrices_are_totally_monotone() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for seed in 0..10 {
        let dom = Domain::new(gen_random_polygon(20, seed).unwrap());
        let set = build_separators(&dom).unwrap();
        let mut sq = SleeveQuery::new(&dom);
        for s in &set.separators {
            let mut m = ImplicitDistanceMatrix::new(&s.frame, &mut sq);
            if m.rows.len() < 2 || m.cols.len() < 2 {
                continue;
            }
            for _ in 0..100 {
                let (mut r1, mut r2) = (rng.gen_range(0..m.rows.len()), rng.gen_range(0..m.rows.len()));
                let (mut c1, mut c2) = (rng.gen_range(0..m.cols.len()), rng.gen_range(0..m.cols.len()));
                if r1 == r2 || c1 == c2 {
                    continue;
                }
                if r1 > r2 {
                    std::mem::swap(&mut r1, &mut r2);
                }
                if c1 > c2 {
                    std::mem::swap(&mut c1, &mut c2);
                }
                let (a, b) = (m.entry(r1, c1).dist, m.entry(r1, c2).dist);
                let (c, d) = (m.entry(r2, c1).dist, m.entry(r2, c2).dist);
                // Crossing paths are at least as long as the uncrossed pair.
                assert!(a + d >= b + c - 1e-9 * dom.diam);
            }
        }
    }
}

