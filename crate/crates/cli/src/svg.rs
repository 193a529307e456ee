use std::fmt::Write;

use egb_core::field::{format_rational, Extended};
use egb_core::persistence::Barcode;
use num_traits::ToPrimitive;

const WIDTH: f64 = 640.0;
const ROW: f64 = 14.0;
const MARGIN: f64 = 40.0;

/// Bars as horizontal segments, one row per bar copy, ordered by birth.
/// Infinite bars run to the right edge and end in an arrow head.
pub fn render(b: &Barcode, title: &str) -> String {
    let mut bars = b.expanded();
    bars.sort_by(|x, y| x.0.cmp(&y.0));
    let ends: Vec<f64> = b.endpoints().iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    let lo = ends.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ends.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo, lo + 1.0)
    };
    let span = (hi - lo) * 1.1;
    let x = |t: f64| MARGIN + (t - lo) / span * (WIDTH - 2.0 * MARGIN);
    let height = MARGIN * 2.0 + ROW * bars.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="20" font-family="monospace" font-size="12">{}</text>"#, escape(title));
    for (i, (bar, _)) in bars.iter().enumerate() {
        let y = MARGIN + ROW * (i as f64 + 0.5);
        let x0 = x(bar.left.to_f64().unwrap_or(0.0));
        let (x1, label) = match &bar.right {
            Extended::Finite(d) => (x(d.to_f64().unwrap_or(0.0)), format_rational(d)),
            Extended::Infinity => (WIDTH - MARGIN / 2.0, "inf".to_string()),
        };
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="black" stroke-width="3"><title>({}, {label}]</title></line>"#,
            format_rational(&bar.left)
        );
        if bar.right == Extended::Infinity {
            let _ = writeln!(
                s,
                r#"<polygon points="{x1:.2},{y:.2} {:.2},{:.2} {:.2},{:.2}" fill="black"/>"#,
                x1 - 6.0,
                y - 4.0,
                x1 - 6.0,
                y + 4.0
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use egb_core::field::rational;
    use egb_core::persistence::Interval;

    #[test]
    fn one_line_per_bar() {
        let b = Barcode::from_bars([
            (Interval::finite(rational(0, 1), rational(3, 1)).unwrap(), 2),
            (Interval { left: rational(1, 1), right: Extended::Infinity }, 1),
        ]);
        let svg = render(&b, "a<b");
        assert_eq!(svg.matches("<line").count(), 3);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains("a&lt;b"));
        assert!(render(&Barcode::new(), "empty").ends_with("</svg>\n"));
    }
}
