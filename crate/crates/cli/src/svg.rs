//! Minimal log-log line plot written directly as SVG.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw points as markers instead of a line.
    pub markers: bool,
    pub color: &'static str,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn decades(values: impl Iterator<Item = f64>) -> Option<(i32, i32)> {
    let (lo, hi) = values
        .filter(|v| *v > 0.0 && v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return None;
    }
    let (a, b) = (lo.log10().floor() as i32, hi.log10().ceil() as i32);
    Some((a, if b > a { b } else { a + 1 }))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the series on log-log axes. `stamp`, if given, is embedded as a
/// comment.
pub fn render(series: &[Series], x_label: &str, y_label: &str, title: &str, stamp: Option<&str>) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = decades(all().map(|p| p.0)).unwrap_or((-1, 2));
    let (y0, y1) = decades(all().map(|p| p.1)).unwrap_or((-3, 1));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x.log10() - x0 as f64) / (x1 - x0) as f64 * pw;
    let sy = |y: f64| TOP + ph - (y.log10() - y0 as f64) / (y1 - y0) as f64 * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    if let Some(t) = stamp {
        let _ = writeln!(s, "<!-- generated {} -->", escape(t));
    }
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));

    for k in x0..=x1 {
        let x = sx(10f64.powi(k));
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">10<tspan dy="-6" font-size="10">{k}</tspan></text>"#,
            TOP + ph + 20.0
        );
    }
    for k in y0..=y1 {
        let y = sy(10f64.powi(k));
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">10<tspan dy="-6" font-size="10">{k}</tspan></text>"#,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );

    for ser in series {
        let pts: Vec<(f64, f64)> =
            ser.points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|&(x, y)| (sx(x), sy(y))).collect();
        if ser.markers {
            for (x, y) in &pts {
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="{}"/>"#, ser.color);
            }
        } else if !pts.is_empty() {
            let d: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.8"/>"#,
                d.join(" "),
                ser.color
            );
        }
    }

    let (lx, ly) = (LEFT + 14.0, TOP + 14.0);
    let _ = writeln!(
        s,
        r##"<rect x="{:.2}" y="{:.2}" width="150" height="{:.2}" fill="white" stroke="#888"/>"##,
        lx - 6.0,
        ly - 10.0,
        20.0 * series.len() as f64 + 4.0
    );
    for (k, ser) in series.iter().enumerate() {
        let y = ly + 20.0 * k as f64 + 4.0;
        if ser.markers {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="{}"/>"#, lx + 12.0, ser.color);
        } else {
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="1.8"/>"#,
                lx + 24.0,
                ser.color
            );
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 32.0, y + 4.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Vec<Series> {
        vec![
            Series { label: "a<b".into(), points: vec![(0.5, 1e-2), (100.0, 10.0)], markers: false, color: "red" },
            Series { label: "dots".into(), points: vec![(1.0, 0.1)], markers: true, color: "blue" },
        ]
    }

    #[test]
    fn legend_and_escaping() {
        let s = render(&one(), "chi", "ell", "t", None);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a&lt;b") && s.contains(">dots</text>"));
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(!s.contains("generated"));
    }

    #[test]
    fn stamp_is_the_only_difference() {
        let a = render(&one(), "x", "y", "t", Some("1"));
        let b = render(&one(), "x", "y", "t", Some("2"));
        let strip = |s: &str| s.lines().filter(|l| !l.starts_with("<!--")).collect::<Vec<_>>().join("\n");
        assert_ne!(a, b);
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn empty_plot_still_renders() {
        assert!(render(&[], "x", "y", "t", None).contains("</svg>"));
    }
}
