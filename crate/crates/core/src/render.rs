//! SVG figures of curves, scattering diagrams with broken lines, and
//! decompositions. Coordinates are printed with six decimals.

use std::fmt::Write as _;

use crate::broken::Potential;
use crate::correspondence::PolyDecomp;
use crate::lattice::{IntVec2, RatVec2};
use crate::scattering::ScatteringDiagram;
use crate::tropcurve::TropCurve;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Debug)]
enum Item {
    Segment { a: (f64, f64), b: (f64, f64), width: f64, color: String, dashed: bool },
    Ray { a: (f64, f64), dir: (f64, f64), width: f64, color: String, dashed: bool },
    Dot { p: (f64, f64), color: String, label: Option<String> },
}

/// Collects primitives, then fits a view box around the finite points.
#[derive(Clone, Debug, Default)]
pub struct Figure {
    items: Vec<Item>,
}

fn unit(d: IntVec2) -> (f64, f64) {
    let (x, y) = (d.x as f64, d.y as f64);
    let n = (x * x + y * y).sqrt();
    (x / n, y / n)
}

impl Figure {
    pub fn new() -> Figure {
        Figure::default()
    }

    pub fn segment(&mut self, a: &RatVec2, b: &RatVec2, weight: u32, color: &str, dashed: bool) {
        self.items.push(Item::Segment {
            a: a.approx(),
            b: b.approx(),
            width: weight as f64,
            color: color.into(),
            dashed,
        });
    }

    pub fn ray(&mut self, a: &RatVec2, dir: IntVec2, weight: u32, color: &str, dashed: bool) {
        self.items.push(Item::Ray { a: a.approx(), dir: unit(dir), width: weight as f64, color: color.into(), dashed });
    }

    pub fn dot(&mut self, p: &RatVec2, color: &str, label: Option<String>) {
        self.items.push(Item::Dot { p: p.approx(), color: color.into(), label });
    }

    pub fn curve(&mut self, c: &TropCurve, color: &str) {
        for e in &c.edges {
            let a = &c.vertices[e.tail];
            match e.head {
                Some(h) => self.segment(a, &c.vertices[h], e.weight, color, false),
                None => self.ray(a, e.dir, e.weight, color, false),
            }
        }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let pts = self.items.iter().flat_map(|i| match i {
            Item::Segment { a, b, .. } => vec![*a, *b],
            Item::Ray { a, .. } => vec![*a],
            Item::Dot { p, .. } => vec![*p],
        });
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for (x, y) in pts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            return (-1.0, -1.0, 1.0, 1.0);
        }
        let pad = ((x1 - x0).max(y1 - y0) * 0.25).max(1.0);
        (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
    }

    /// The SVG document; `y` is flipped so that the picture has the usual
    /// orientation.
    pub fn to_svg(&self) -> String {
        let (x0, y0, x1, y1) = self.bounds();
        let (w, h) = (x1 - x0, y1 - y0);
        let reach = 2.0 * (w + h);
        let stroke = (w.max(h)) / 400.0;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
            x0, -y1, w, h
        );
        let line = |s: &mut String, a: (f64, f64), b: (f64, f64), width: f64, color: &str, dashed: bool| {
            let dash = if dashed { format!(" stroke-dasharray=\"{:.6}\"", 4.0 * stroke) } else { String::new() };
            let _ = writeln!(
                s,
                "  <line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" stroke=\"{}\" stroke-width=\"{:.6}\"{} />",
                a.0,
                -a.1,
                b.0,
                -b.1,
                color,
                stroke * width,
                dash
            );
        };
        for i in &self.items {
            match i {
                Item::Segment { a, b, width, color, dashed } => line(&mut s, *a, *b, *width, color, *dashed),
                Item::Ray { a, dir, width, color, dashed } => {
                    let b = (a.0 + reach * dir.0, a.1 + reach * dir.1);
                    line(&mut s, *a, b, *width, color, *dashed)
                }
                Item::Dot { .. } => {}
            }
        }
        for i in &self.items {
            if let Item::Dot { p, color, label } = i {
                let _ = writeln!(
                    s,
                    "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"{}\" />",
                    p.0,
                    -p.1,
                    3.0 * stroke,
                    color
                );
                if let Some(l) = label {
                    let _ = writeln!(
                        s,
                        "  <text x=\"{:.6}\" y=\"{:.6}\" font-size=\"{:.6}\">{}</text>",
                        p.0 + 4.0 * stroke,
                        -p.1 - 4.0 * stroke,
                        12.0 * stroke,
                        escape(l)
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn mark_points(fig: &mut Figure, points: &[RatVec2]) {
    for (i, p) in points.iter().enumerate() {
        fig.dot(p, "black", Some(format!("P{}", i + 1)));
    }
}

pub fn render_curves(curves: &[TropCurve], points: &[RatVec2]) -> String {
    let mut fig = Figure::new();
    for (i, c) in curves.iter().enumerate() {
        fig.curve(c, PALETTE[i % PALETTE.len()]);
    }
    mark_points(&mut fig, points);
    fig.to_svg()
}

/// Walls in grey (scattered walls darker), broken lines dashed.
pub fn render_diagram(d: &ScatteringDiagram, w: Option<&Potential>) -> String {
    let mut fig = Figure::new();
    for wall in &d.walls {
        let color = if wall.labels().len() > 1 { "#444444" } else { "#999999" };
        fig.ray(&wall.base, wall.dir, 1, color, false);
    }
    mark_points(&mut fig, &d.marked_points);
    if let Some(w) = w {
        draw_broken_lines(&mut fig, &d.fan, w);
    }
    fig.to_svg()
}

fn draw_broken_lines(fig: &mut Figure, fan: &crate::fan::Fan, w: &Potential) {
    for (i, l) in w.provenance.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for s in &l.segments {
            match &s.start {
                Some(a) => fig.segment(a, &s.end, 1, color, true),
                None => fig.ray(&s.end, fan.image(&s.exp), 1, color, true),
            }
        }
    }
    fig.dot(&w.q, "red", Some("Q".into()));
}

pub fn render_potential(fan: &crate::fan::Fan, w: &Potential) -> String {
    let mut fig = Figure::new();
    draw_broken_lines(&mut fig, fan, w);
    fig.to_svg()
}

pub fn render_decomposition(d: &PolyDecomp) -> String {
    let mut fig = Figure::new();
    for e in &d.edges {
        match e.to {
            Some(t) => fig.segment(&d.vertices[e.from], &d.vertices[t], 1, "#333333", false),
            None => fig.ray(&d.vertices[e.from], e.dir, 1, "#333333", false),
        }
    }
    let pts: Vec<RatVec2> = d.points.iter().map(|&i| d.vertices[i].clone()).collect();
    mark_points(&mut fig, &pts);
    fig.to_svg()
}
