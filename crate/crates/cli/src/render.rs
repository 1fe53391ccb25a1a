//! Deterministic SVG: the triangulation on the left, the curve with its
//! skeleton, theta chips and bitangent lines on the right.

use std::fmt::Write;

use quartic_core::tropcurve::{Dir, PlanePoint};

use crate::analysis::Analysis;

const PANEL: f64 = 420.0;
const MARGIN: f64 = 30.0;
const PALETTE: [&str; 7] = ["#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];
const LINE_RAYS: [Dir; 3] = [(-1, 0), (0, -1), (1, 1)];

fn f(p: &quartic_core::Q) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

/// Plane-to-panel map with y pointing up.
struct View {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    scale: f64,
    left: f64,
}

impl View {
    fn new(lo: (f64, f64), hi: (f64, f64), left: f64) -> Self {
        let scale = (PANEL - 2.0 * MARGIN) / (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        View {
            x0: lo.0,
            y0: lo.1,
            x1: hi.0,
            y1: hi.1,
            scale,
            left,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.left + MARGIN + (x - self.x0) * self.scale,
            PANEL - MARGIN - (y - self.y0) * self.scale,
        )
    }

    fn pt(&self, p: PlanePoint) -> (f64, f64) {
        self.map(f(&p.x), f(&p.y))
    }

    /// Parameter where the ray from `p` along `d` leaves the view box.
    fn exit(&self, p: (f64, f64), d: Dir) -> f64 {
        let mut t = f64::INFINITY;
        let (dx, dy) = (d.0 as f64, d.1 as f64);
        if dx > 0.0 {
            t = t.min((self.x1 - p.0) / dx);
        } else if dx < 0.0 {
            t = t.min((self.x0 - p.0) / dx);
        }
        if dy > 0.0 {
            t = t.min((self.y1 - p.1) / dy);
        } else if dy < 0.0 {
            t = t.min((self.y0 - p.1) / dy);
        }
        t.max(0.0)
    }
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), style: &str) {
    writeln!(
        out,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
        a.0, a.1, b.0, b.1
    )
    .unwrap();
}

fn ray_end(v: &View, p: PlanePoint, d: Dir) -> (f64, f64) {
    let s = (f(&p.x), f(&p.y));
    let t = v.exit(s, d);
    v.map(s.0 + t * d.0 as f64, s.1 + t * d.1 as f64)
}

pub fn render(a: &Analysis) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = 2.0 * PANEL,
        h = PANEL
    )
    .unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // triangulation
    let d = a.triangulation.degree as f64;
    let tv = View::new((0.0, 0.0), (d, d), 0.0);
    out.push_str("<g id=\"triangulation\">\n");
    for tri in &a.triangulation.triangles {
        let pts: Vec<String> = tri
            .vertices
            .iter()
            .map(|p| {
                let (x, y) = tv.map(p.x as f64, p.y as f64);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(
            out,
            r##"<polygon points="{}" fill="#f4f4f4" stroke="#555" stroke-width="1"/>"##,
            pts.join(" ")
        )
        .unwrap();
    }
    out.push_str("</g>\n");

    // curve view box: vertices plus a margin for rays
    let xs: Vec<f64> = a.curve.vertices.iter().map(|v| f(&v.pos.x)).collect();
    let ys: Vec<f64> = a.curve.vertices.iter().map(|v| f(&v.pos.y)).collect();
    let lo = (xs.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::INFINITY, f64::min));
    let hi = (xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let pad = 0.15 * (hi.0 - lo.0).max(hi.1 - lo.1) + 1.0;
    let cv = View::new((lo.0 - pad, lo.1 - pad), (hi.0 + pad, hi.1 + pad), PANEL);

    // bitangent families as shaded bands, drawn first
    out.push_str("<g id=\"families\">\n");
    for (i, b) in a.report.bitangents.iter().enumerate() {
        let Some(fam) = &b.family else { continue };
        let start = fam.start;
        let end = match fam.end() {
            Some(e) => cv.pt(e),
            None => ray_end(&cv, start, fam.direction),
        };
        let s = cv.pt(start);
        for r in LINE_RAYS {
            let s2 = ray_end(&cv, start, r);
            let e2 = (end.0 + (s2.0 - s.0), end.1 + (s2.1 - s.1));
            writeln!(
                out,
                r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="{}" fill-opacity="0.15" stroke="none"/>"#,
                s.0, s.1, end.0, end.1, e2.0, e2.1, s2.0, s2.1,
                PALETTE[i % PALETTE.len()]
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"curve\">\n");
    for e in &a.curve.edges {
        let p = cv.pt(a.curve.vertices[e.ends.0].pos);
        let q = cv.pt(a.curve.vertices[e.ends.1].pos);
        line(&mut out, p, q, r#"stroke="black" stroke-width="1.5""#);
    }
    for r in &a.curve.rays {
        let p = a.curve.vertices[r.vertex].pos;
        line(&mut out, cv.pt(p), ray_end(&cv, p, r.direction), r#"stroke="black" stroke-width="1.5""#);
    }
    out.push_str("</g>\n<g id=\"skeleton\">\n");
    for (p, q) in &a.skeleton_segments {
        line(&mut out, cv.pt(*p), cv.pt(*q), r#"stroke="red" stroke-width="3""#);
    }
    out.push_str("</g>\n<g id=\"bitangents\">\n");
    for (i, b) in a.report.bitangents.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let style = format!(r#"stroke="{color}" stroke-width="1" stroke-dasharray="4 3""#);
        for r in LINE_RAYS {
            line(&mut out, cv.pt(b.vertex), ray_end(&cv, b.vertex, r), &style);
        }
    }
    out.push_str("</g>\n<g id=\"thetas\">\n");
    for (i, pts) in a.theta_points.iter().enumerate() {
        for p in pts {
            let (x, y) = cv.pt(*p);
            writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{}"><title>theta {i} at {p}</title></circle>"#,
                PALETTE[i % PALETTE.len()]
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}
