//! SVG picture of a finished run.

use super::fmt9;
use crate::center::CenterRun;
use crate::geom::Point2;
use crate::shortest_paths::{geodesic_path, Domain, Target};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SvgLayers {
    pub funnels: bool,
    pub cover: bool,
}

/// Distinct color for edge `e` of `n`, as `#rrggbb`.
pub fn edge_color(e: usize, n: usize) -> String {
    let h = 6.0 * (e as f64) / (n.max(1) as f64);
    let (s, v) = (0.75, 0.85);
    let f = h - h.floor();
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * f), v * (1.0 - s * (1.0 - f)));
    let (r, g, b) = match h.floor() as usize % 6 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let c = |x: f64| (x * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(r), c(g), c(b))
}

struct Frame {
    y_flip: f64,
}

impl Frame {
    fn pt(&self, p: Point2) -> String {
        format!("{},{}", fmt9(p.x), fmt9(self.y_flip - p.y))
    }
    fn path(&self, pts: &[Point2]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            d.push_str(if i == 0 { "M" } else { " L" });
            d.push_str(&self.pt(*p));
        }
        d.push_str(" Z");
        d
    }
    fn polyline(&self, pts: &[Point2]) -> String {
        pts.iter().map(|p| self.pt(*p)).collect::<Vec<_>>().join(" ")
    }
}

/// Outline, boundary chains colored by farthest edge, breakpoints, optional
/// funnels and cover triangles, and the center with paths to its farthest
/// edges. The view box is the bounding box grown by 5% on every side.
pub fn render_svg(dom: &Domain, run: &CenterRun, layers: SvgLayers) -> String {
    let poly = &dom.poly;
    let n = poly.n();
    let (lo, hi) = poly.bbox();
    let m = 0.05 * (hi.x - lo.x).max(hi.y - lo.y);
    let (x0, y0, w, h) = (lo.x - m, lo.y - m, hi.x - lo.x + 2.0 * m, hi.y - lo.y + 2.0 * m);
    // Flip y so the picture reads with y up; the view box then starts at y0.
    let fr = Frame { y_flip: 2.0 * y0 + h };
    let stroke = fmt9(0.004 * w.max(h));
    let dot = fmt9(0.012 * w.max(h));
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        fmt9(x0),
        fmt9(y0),
        fmt9(w),
        fmt9(h)
    );

    if layers.cover {
        let _ = writeln!(s, r##"<g id="cover" stroke="#999999" stroke-width="{}" fill-opacity="0.15">"##, fmt9(0.25 * 0.004 * w.max(h)));
        for el in &run.cover.elements {
            let _ = writeln!(s, r#"<path d="{}" fill="{}"/>"#, fr.path(&el.corners), edge_color(el.edge, n));
        }
        let _ = writeln!(s, "</g>");
    }
    if layers.funnels {
        let _ = writeln!(s, r#"<g id="funnels" stroke="none" fill-opacity="0.12">"#);
        for f in &run.funnels {
            let _ = writeln!(s, r#"<path d="{}" fill="{}"/>"#, fr.path(&f.ring), edge_color(f.edge, n));
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r##"<g id="outline" fill="none" stroke="#000000" stroke-width="{stroke}">"##);
    let _ = writeln!(s, r#"<path d="{}"/>"#, fr.path(poly.vertices()));
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="chains" fill="none" stroke-width="{}">"#, fmt9(2.5 * 0.004 * w.max(h)));
    for (e, spans) in run.voronoi.spans.iter().enumerate() {
        let (a, b) = poly.edge(e);
        for sp in spans {
            let pts = [a.lerp(b, sp.t0), a.lerp(b, sp.t1)];
            let _ = writeln!(s, r#"<polyline class="chain" data-edge="{}" points="{}" stroke="{}"/>"#, sp.label, fr.polyline(&pts), edge_color(sp.label, n));
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g id="breakpoints" fill="#ffffff" stroke="#000000" stroke-width="{stroke}">"##);
    for bp in &run.voronoi.breakpoints {
        let (a, b) = poly.edge(bp.edge);
        let p = a.lerp(b, bp.t);
        let _ = writeln!(s, r#"<circle class="breakpoint" cx="{}" cy="{}" r="{dot}"/>"#, fmt9(p.x), fmt9(fr.y_flip - p.y));
    }
    let _ = writeln!(s, "</g>");

    let c = run.result.center;
    let _ = writeln!(s, r##"<g id="center" fill="none" stroke="#d62728" stroke-width="{stroke}" stroke-dasharray="{} {}">"##, fmt9(0.01 * w.max(h)), fmt9(0.006 * w.max(h)));
    for &e in &run.result.farthest_edges {
        if let Ok(path) = geodesic_path(dom, c, Target::Edge(e)) {
            let _ = writeln!(s, r#"<polyline class="witness" data-edge="{e}" points="{}"/>"#, fr.polyline(&path.points));
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<circle id="center-point" cx="{}" cy="{}" r="{dot}" fill="#d62728"/>"##, fmt9(c.x), fmt9(fr.y_flip - c.y));
    let _ = writeln!(s, "</svg>");
    s
}
