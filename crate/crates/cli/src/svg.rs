//! Minimal SVG output: curves, point markers and heat-map cells.

use std::fmt::Write;

use num_complex::Complex64;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Categorical colours for components.
pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

enum Item {
    Curve { points: Vec<Complex64>, closed: bool, color: String },
    Dots { points: Vec<Complex64>, radius: f64, color: String },
    Cell { center: Complex64, half: f64, color: String },
}

#[derive(Default)]
pub struct Plot {
    title: String,
    items: Vec<Item>,
}

impl Plot {
    pub fn new(title: impl Into<String>) -> Self {
        Plot {
            title: title.into(),
            items: Vec::new(),
        }
    }

    pub fn curve(&mut self, points: Vec<Complex64>, closed: bool, color: &str) {
        self.items.push(Item::Curve {
            points,
            closed,
            color: color.to_string(),
        });
    }

    pub fn dots(&mut self, points: Vec<Complex64>, radius: f64, color: &str) {
        self.items.push(Item::Dots {
            points,
            radius,
            color: color.to_string(),
        });
    }

    /// Square cell of half-width `half` (plane units).
    pub fn cell(&mut self, center: Complex64, half: f64, color: String) {
        self.items.push(Item::Cell { center, half, color });
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        let mut grow = |z: Complex64, pad: f64| {
            b.0 = b.0.min(z.re - pad);
            b.1 = b.1.max(z.re + pad);
            b.2 = b.2.min(z.im - pad);
            b.3 = b.3.max(z.im + pad);
        };
        for item in &self.items {
            match item {
                Item::Curve { points, .. } | Item::Dots { points, .. } => {
                    points.iter().for_each(|&z| grow(z, 0.0))
                }
                Item::Cell { center, half, .. } => grow(*center, *half),
            }
        }
        if !b.0.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        b
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let map = |z: Complex64| (MARGIN + (z.re - x0) * scale, SIZE - MARGIN - (z.im - y0) * scale);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for item in &self.items {
            match item {
                Item::Cell { center, half, color } => {
                    let (x, y) = map(*center - Complex64::new(*half, -*half));
                    let w = 2.0 * half * scale;
                    let _ = writeln!(
                        out,
                        r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{w:.3}" fill="{color}"/>"#
                    );
                }
                Item::Curve { points, closed, color } => {
                    let coords: Vec<String> = points
                        .iter()
                        .map(|&z| {
                            let (x, y) = map(z);
                            format!("{x:.3},{y:.3}")
                        })
                        .collect();
                    let tag = if *closed { "polygon" } else { "polyline" };
                    let _ = writeln!(
                        out,
                        r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                        coords.join(" ")
                    );
                }
                Item::Dots { points, radius, color } => {
                    for &z in points {
                        let (x, y) = map(z);
                        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius}" fill="{color}"/>"#);
                    }
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Blue-white-red ramp for `t` in `[0, 1]`.
pub fn heat_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let (r, g, b) = if t < 0.5 {
        let s = t / 0.5;
        (s, s, 1.0)
    } else {
        let s = (1.0 - t) / 0.5;
        (1.0, s, s)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        (r * 255.0).round() as u8,
        (g * 255.0).round() as u8,
        (b * 255.0).round() as u8
    )
}
