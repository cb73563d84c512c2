//! SVG rendering of drawings: one path per arc, one circle per vertex, optional lens
//! shading and crossing markers.

use std::fmt::Write as _;

use crate::crossing::require_valid;
use crate::drawing::Drawing;
use crate::error::Result;
use crate::geometry::Point;
use crate::lens::analyze_unchecked;

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub shade_lenses: bool,
    pub mark_crossings: bool,
    pub labels: bool,
    /// Width of the longer side in SVG units.
    pub size: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            shade_lenses: false,
            mark_crossings: true,
            labels: true,
            size: 800.0,
        }
    }
}

/// `v` with 9 significant digits, without trailing zeros.
pub fn sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (8 - exp).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    margin: f64,
}

impl Frame {
    fn new(d: &Drawing, size: f64) -> (Self, f64, f64) {
        let pts = d
            .vertices()
            .iter()
            .chain(d.edges().iter().flat_map(|e| e.arc.points().iter()))
            .map(Point::to_f64);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(1e-12);
        let margin = size * 0.05;
        let scale = (size - 2.0 * margin) / span;
        let w = (x1 - x0) * scale + 2.0 * margin;
        let h = (y1 - y0) * scale + 2.0 * margin;
        (
            Frame {
                min_x: x0,
                max_y: y1,
                scale,
                margin,
            },
            w,
            h,
        )
    }

    fn map(&self, p: &Point) -> (String, String) {
        let (x, y) = p.to_f64();
        (
            sig9((x - self.min_x) * self.scale + self.margin),
            sig9((self.max_y - y) * self.scale + self.margin),
        )
    }
}

pub fn render_svg(d: &Drawing, opts: &RenderOptions) -> Result<String> {
    require_valid(d)?;
    let a = analyze_unchecked(d);
    let (frame, w, h) = Frame::new(d, opts.size);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        sig9(w),
        sig9(h),
        sig9(w),
        sig9(h)
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if opts.shade_lenses {
        let _ = writeln!(out, r##"<g id="lenses" fill="#4a90d9" fill-opacity="0.15" stroke="none">"##);
        for l in &a.lenses {
            let pts: Vec<String> = l
                .region
                .iter()
                .map(|p| {
                    let (x, y) = frame.map(p);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polygon data-edges="{} {}" points="{}"/>"#,
                l.bounding_edges.0,
                l.bounding_edges.1,
                pts.join(" ")
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g id="edges" fill="none" stroke="black" stroke-width="1.2">"#);
    for (id, e) in d.edges().iter().enumerate() {
        let mut path = String::new();
        for (i, p) in e.arc.points().iter().enumerate() {
            let (x, y) = frame.map(p);
            let _ = write!(path, "{}{x} {y}", if i == 0 { "M" } else { " L" });
        }
        let _ = writeln!(out, r#"<path data-edge="{id}" d="{path}"/>"#);
    }
    let _ = writeln!(out, "</g>");

    if opts.mark_crossings {
        let _ = writeln!(out, r##"<g id="crossings" fill="#d0021b">"##);
        for c in &a.crossings.crossing_points {
            let (x, y) = c.point.to_f64();
            let cx = (x - frame.min_x) * frame.scale + frame.margin;
            let cy = (frame.max_y - y) * frame.scale + frame.margin;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="4" height="4"/>"#,
                sig9(cx - 2.0),
                sig9(cy - 2.0)
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g id="vertices" fill="black">"#);
    for (id, p) in d.vertices().iter().enumerate() {
        let (x, y) = frame.map(p);
        let _ = writeln!(out, r#"<circle data-vertex="{id}" cx="{x}" cy="{y}" r="3"/>"#);
        if opts.labels {
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" dx="4" dy="-4" font-size="10" font-family="sans-serif">{id}</text>"#
            );
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_nested_lenses;

    #[test]
    fn significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(123.456789012), "123.456789");
        assert_eq!(sig9(0.000123456789123), "0.000123456789");
        assert_eq!(sig9(-2.5), "-2.5");
    }

    #[test]
    fn counts_elements() {
        let d = gen_nested_lenses(3);
        let opts = RenderOptions {
            shade_lenses: true,
            ..RenderOptions::default()
        };
        let svg = render_svg(&d, &opts).unwrap();
        assert_eq!(svg.matches("<path").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<polygon").count(), 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
