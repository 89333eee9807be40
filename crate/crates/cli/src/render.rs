//! SVG of curves drawn on the fundamental polygon. Crossings are filled
//! dots, touchings hollow squares, overlaps thick strokes.

use std::fmt::Write;

use finecurve::kernel::{intersect_curves, Classification, ComponentGeometry};
use finecurve::{Point, PolyCurve, Result, Surface};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Frame {
    min: (f64, f64),
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(polygon: &[Point]) -> Self {
        let xs: Vec<(f64, f64)> = polygon.iter().map(|p| p.to_f64()).collect();
        let min = (
            xs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
            xs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        );
        let max = (
            xs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
            xs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
        );
        let scale = SIZE / (max.0 - min.0).max(max.1 - min.1);
        Frame {
            min,
            scale,
            height: (max.1 - min.1) * scale,
        }
    }

    /// SVG coordinates with y pointing up.
    fn map(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.to_f64();
        (
            MARGIN + (x - self.min.0) * self.scale,
            MARGIN + self.height - (y - self.min.1) * self.scale,
        )
    }

    fn points(&self, pts: &[Point]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Waypoint runs of a curve within single charts, split at jumps.
fn runs(s: &Surface, c: &PolyCurve) -> Vec<Vec<Point>> {
    let mut pts = c.waypoints.clone();
    if c.is_closed() {
        pts.push(c.waypoints[0].clone());
    }
    let mut out: Vec<Vec<Point>> = vec![vec![pts[0].clone()]];
    for w in pts.windows(2) {
        if s.same_point(&w[0], &w[1]) && w[0] != w[1] {
            out.push(vec![w[1].clone()]);
        } else {
            out.last_mut().unwrap().push(w[1].clone());
        }
    }
    out.retain(|r| r.len() > 1);
    out
}

pub fn svg(s: &Surface, curves: &[PolyCurve]) -> Result<String> {
    let f = Frame::new(s.polygon());
    let width = SIZE + 2.0 * MARGIN;
    let height = f.height + 2.0 * MARGIN;
    let mut o = String::new();
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(o, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        o,
        r##"<polygon points="{}" fill="#f7f7f2" stroke="#333333" stroke-width="1.5"/>"##,
        f.points(s.polygon())
    );
    // edge labels: paired edges share a label
    for i in 0..s.edge_count() {
        let (a, b) = s.edge(i);
        let (ax, ay) = f.map(a);
        let (bx, by) = f.map(b);
        let label = match s.partner(i) {
            Some(j) => format!("e{}", i.min(j)),
            None => "∂".to_string(),
        };
        let _ = writeln!(
            o,
            r##"<text x="{:.1}" y="{:.1}" font-size="11" fill="#666666" text-anchor="middle">{label}</text>"##,
            (ax + bx) / 2.0,
            (ay + by) / 2.0 - 4.0
        );
    }
    for h in s.holes() {
        let _ = writeln!(
            o,
            r##"<polygon points="{}" fill="#d9d9d9" stroke="#333333" stroke-width="1"/>"##,
            f.points(h)
        );
    }
    for (k, c) in curves.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for run in runs(s, c) {
            let _ = writeln!(
                o,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
                f.points(&run)
            );
        }
    }
    for i in 0..curves.len() {
        for j in (i + 1)..curves.len() {
            let r = intersect_curves(s, &curves[i], &curves[j])?;
            if r.identical {
                continue;
            }
            for comp in &r.components {
                let crossing = comp.class == Classification::Crossing;
                match &comp.geometry {
                    ComponentGeometry::Point(p) => {
                        let (x, y) = f.map(&p.coords);
                        if crossing {
                            let _ = writeln!(o, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#000000"/>"##);
                        } else {
                            let _ = writeln!(
                                o,
                                r##"<rect x="{:.3}" y="{:.3}" width="8" height="8" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
                                x - 4.0,
                                y - 4.0
                            );
                        }
                    }
                    ComponentGeometry::Interval { from, to } => {
                        let (x0, y0) = f.map(&from.coords);
                        let (x1, y1) = f.map(&to.coords);
                        let dash = if crossing { "" } else { r#" stroke-dasharray="4 3""# };
                        let _ = writeln!(
                            o,
                            r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="#000000" stroke-width="5" stroke-opacity="0.5"{dash}/>"##
                        );
                    }
                }
            }
        }
    }
    let _ = writeln!(o, "</svg>");
    Ok(o)
}
