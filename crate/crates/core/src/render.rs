//! Deterministic SVG drawings of curves with their crossings and indices.

use std::fmt::Write;

use crate::config::ToleranceConfig;
use crate::curve::{find_crossings, PlanarCurve};
use crate::geom::Point;
use crate::invariant::compute;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 60.0;
const LEGEND: f64 = 60.0;

struct View {
    min: Point,
    scale: f64,
    offset: Point,
}

impl View {
    fn fit(curve: &PlanarCurve) -> Self {
        let pts = curve.points();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in pts {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let offset = Point::new(
            (SIZE - (hi.x - lo.x) * scale) / 2.0,
            (SIZE - (hi.y - lo.y) * scale) / 2.0,
        );
        View {
            min: lo,
            scale,
            offset,
        }
    }

    /// Screen coordinates, with y pointing down.
    fn map(&self, p: Point) -> (f64, f64) {
        let x = (p.x - self.min.x) * self.scale + self.offset.x;
        let y = SIZE - ((p.y - self.min.y) * self.scale + self.offset.y);
        (x, y)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Renders the curve, an arrow showing its orientation, a marker per
/// crossing labelled `(a1,a2|b1,b2)` and a legend with the Whitney number.
///
/// Curves that fail evaluation are still drawn; their markers are labelled
/// `?` and the legend names the error.
pub fn render_svg(curve: &PlanarCurve, cfg: &ToleranceConfig) -> String {
    let view = View::fit(curve);
    let mut svg = String::new();
    let h = SIZE + LEGEND;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{h}" viewBox="0 0 {SIZE} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{h}" fill="white"/>"#);

    let mut d = String::new();
    for (i, &p) in curve.points().iter().enumerate() {
        let (x, y) = view.map(p);
        let _ = write!(
            d,
            "{}{} {} ",
            if i == 0 { "M" } else { "L" },
            num(x),
            num(y)
        );
    }
    d.push('Z');
    let _ = writeln!(
        svg,
        r#"<path class="curve" d="{d}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );

    // Arrowhead at the midpoint of the first segment.
    let (a, b) = curve.segment(0);
    let (ax, ay) = view.map(a.lerp(b, 0.5));
    let (bx, by) = view.map(b);
    let len = ((bx - ax).powi(2) + (by - ay).powi(2))
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let (ux, uy) = ((bx - ax) / len, (by - ay) / len);
    let tip = (ax + 8.0 * ux, ay + 8.0 * uy);
    let left = (ax - 6.0 * ux - 6.0 * uy, ay - 6.0 * uy + 6.0 * ux);
    let right = (ax - 6.0 * ux + 6.0 * uy, ay - 6.0 * uy - 6.0 * ux);
    let _ = writeln!(
        svg,
        r#"<path class="arrow" d="M{} {} L{} {} L{} {} Z" fill="black"/>"#,
        num(tip.0),
        num(tip.1),
        num(left.0),
        num(left.1),
        num(right.0),
        num(right.1)
    );

    let (markers, legend) = match compute(curve, cfg) {
        Ok(r) => {
            let m: Vec<(Point, String)> = r
                .per_crossing
                .iter()
                .map(|c| {
                    let label = format!(
                        "({},{}|{},{})",
                        c.first.i1, c.first.i2, c.second.i1, c.second.i2
                    );
                    (c.crossing.location, label)
                })
                .collect();
            (
                m,
                format!("ω = {}, {} crossing(s)", r.whitney, r.per_crossing.len()),
            )
        }
        Err(e) => {
            let m = find_crossings(curve)
                .unwrap_or_default()
                .iter()
                .map(|c| (c.location, "?".to_string()))
                .collect();
            (m, format!("not evaluated: {e}"))
        }
    };
    for (p, label) in &markers {
        let (x, y) = view.map(*p);
        let _ = writeln!(
            svg,
            r#"<circle class="crossing" cx="{}" cy="{}" r="4" fill="red"/>"#,
            num(x),
            num(y)
        );
        let _ = writeln!(
            svg,
            r#"<text class="label" x="{}" y="{}" font-family="monospace" font-size="12">{}</text>"#,
            num(x + 6.0),
            num(y - 6.0),
            escape(label)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text class="legend" x="{MARGIN}" y="{}" font-family="monospace" font-size="14">{}</text>"#,
        SIZE + LEGEND / 2.0,
        escape(&legend)
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
