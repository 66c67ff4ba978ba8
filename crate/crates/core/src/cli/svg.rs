//! Minimal deterministic SVG writer with a fixed 800x600 viewport.

use std::fmt::Write;

use super::format::{fmt_num, fmt_px};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;

/// A linear data-to-pixel mapping plus accumulated drawing elements.
pub struct Plot {
    u: (f64, f64),
    v: (f64, f64),
    body: String,
}

impl Plot {
    /// Data window `[u0, u1] x [v0, v1]`; degenerate spans are widened by one unit.
    pub fn new(title: &str, u: (f64, f64), v: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        let mut plot = Self {
            u: widen(u),
            v: widen(v),
            body: String::new(),
        };
        plot.frame(title);
        plot
    }

    fn px_u(&self, u: f64) -> f64 {
        let t = (u - self.u.0) / (self.u.1 - self.u.0);
        (MARGIN + t * (WIDTH - 2.0 * MARGIN)).clamp(0.0, WIDTH)
    }

    fn px_v(&self, v: f64) -> f64 {
        let t = (v - self.v.0) / (self.v.1 - self.v.0);
        let p = HEIGHT - MARGIN - t * (HEIGHT - 2.0 * MARGIN);
        if p.is_nan() {
            HEIGHT
        } else {
            p.clamp(0.0, HEIGHT)
        }
    }

    fn frame(&mut self, title: &str) {
        let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            self.body,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000" stroke-width="1"/>"##,
            fmt_px(l),
            fmt_px(t),
            fmt_px(r - l),
            fmt_px(b - t)
        );
        let _ = writeln!(
            self.body,
            r##"<text x="{}" y="30" font-size="14" text-anchor="middle">{}</text>"##,
            fmt_px(WIDTH / 2.0),
            escape(title)
        );
        let labels = [
            (l, HEIGHT - 30.0, "start", fmt_num(self.u.0, 6)),
            (r, HEIGHT - 30.0, "end", fmt_num(self.u.1, 6)),
            (l - 5.0, b, "end", fmt_num(self.v.0, 6)),
            (l - 5.0, t + 10.0, "end", fmt_num(self.v.1, 6)),
        ];
        for (x, y, anchor, text) in labels {
            let _ = writeln!(
                self.body,
                r##"<text x="{}" y="{}" font-size="11" text-anchor="{anchor}">{text}</text>"##,
                fmt_px(x),
                fmt_px(y)
            );
        }
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        let mut coords = String::new();
        for (i, &(u, v)) in points.iter().enumerate() {
            if i > 0 {
                coords.push(' ');
            }
            let _ = write!(coords, "{},{}", fmt_px(self.px_u(u)), fmt_px(self.px_v(v)));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
            fmt_px(width)
        );
    }

    pub fn dot(&mut self, u: f64, v: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            fmt_px(self.px_u(u)),
            fmt_px(self.px_v(v)),
            fmt_px(r)
        );
    }

    /// Filled data-space rectangle `[u0, u1] x [v0, v1]`.
    pub fn cell(&mut self, u: (f64, f64), v: (f64, f64), fill: &str) {
        let (x0, x1) = (self.px_u(u.0), self.px_u(u.1));
        let (y0, y1) = (self.px_v(v.1), self.px_v(v.0));
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            fmt_px(x0),
            fmt_px(y0),
            fmt_px(x1 - x0),
            fmt_px(y1 - y0)
        );
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
        );
        let _ = writeln!(
            out,
            "<!-- axes: u in [{}, {}] -> x px [{}, {}]; v in [{}, {}] -> y px [{}, {}] (linear) -->",
            fmt_num(self.u.0, 17),
            fmt_num(self.u.1, 17),
            fmt_px(MARGIN),
            fmt_px(WIDTH - MARGIN),
            fmt_num(self.v.0, 17),
            fmt_num(self.v.1, 17),
            fmt_px(HEIGHT - MARGIN),
            fmt_px(MARGIN)
        );
        let _ = writeln!(out, r##"<rect width="800" height="600" fill="#fff"/>"##);
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping_corners() {
        let p = Plot::new("t", (0.0, 1.0), (0.0, 2.0));
        assert_eq!(p.px_u(0.0), 50.0);
        assert_eq!(p.px_u(1.0), 750.0);
        assert_eq!(p.px_v(0.0), 550.0);
        assert_eq!(p.px_v(2.0), 50.0);
        assert_eq!(p.px_v(f64::INFINITY), 0.0);
    }

    #[test]
    fn document_shape() {
        let mut p = Plot::new("a < b", (0.0, 1.0), (0.0, 1.0));
        p.polyline(&[(0.0, 0.0), (1.0, 1.0)], "#000", 1.0);
        let s = p.finish();
        assert!(s.starts_with("<svg"));
        assert!(s.ends_with("</svg>\n"));
        assert!(s.contains("<!-- axes:"));
        assert!(s.contains("a &lt; b"));
        assert!(s.contains(r#"points="50.00,550.00 750.00,50.00""#));
    }
}
