//! Minimal standalone SVG line plot.

use std::fmt::Write;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 56.0;

fn fmt(x: f64) -> String {
    format!("{x:.3}")
}

/// Points joined by a polyline with markers, axis ticks at each x value and
/// at the ends of the y range.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    let (x0, x1) = bounds(points.iter().map(|p| p.0));
    let (y0, y1) = bounds(points.iter().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    for &(x, _) in points {
        let px = fmt(sx(x));
        let _ = writeln!(
            s,
            r#"<line x1="{px}" y1="{bottom}" x2="{px}" y2="{}" stroke="black"/>"#,
            bottom + 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px}" y="{}" text-anchor="middle">{x}</text>"#,
            bottom + 18.0
        );
    }
    for y in [y0, y1] {
        let py = fmt(sy(y));
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{py}" x2="{left}" y2="{py}" stroke="black"/>"#,
            left - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{py}" text-anchor="end" dominant-baseline="middle">{y:.6}</text>"#,
            left - 6.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y))))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        path.join(" ")
    );
    for &(x, y) in points {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3.5" fill="steelblue"/>"#,
            fmt(sx(x)),
            fmt(sy(y))
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Data range padded so that constant data still gets a visible band.
fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.1).max(hi.abs().max(1e-12) * 0.01);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_well_formed_and_deterministic() {
        let pts = [(2.0, 0.0265), (3.0, 0.0266), (4.0, 0.0265)];
        let a = line_plot("ratio", "n", "Tr/h", &pts);
        assert_eq!(a, line_plot("ratio", "n", "Tr/h", &pts));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<circle").count(), 3);
    }

    #[test]
    fn constant_data_has_a_range() {
        let (lo, hi) = bounds([1.0, 1.0].into_iter());
        assert!(lo < 1.0 && hi > 1.0);
    }
}
