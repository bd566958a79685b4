//! Inverse-CDF line charts as standalone SVG.
//!
//! Output depends only on the inputs: every number is printed with three
//! decimals and elements are emitted in a fixed order.

use std::fmt::Write as _;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 48.0;
const TICKS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub color: String,
    /// `(quantile, value)` pairs.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub width: u32,
    pub height: u32,
    pub title: Option<String>,
    pub x_label: String,
    pub y_label: String,
    pub y_range: Option<(f64, f64)>,
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn data_range(series: &[Series]) -> (f64, f64) {
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

pub fn render(chart: &Chart, series: &[Series]) -> String {
    let (w, h) = (f64::from(chart.width), f64::from(chart.height));
    let (x0, x1) = (MARGIN_LEFT, w - MARGIN_RIGHT);
    let (y_top, y_bot) = (MARGIN_TOP, h - MARGIN_BOTTOM);
    let (lo, hi) = chart.y_range.unwrap_or_else(|| data_range(series));
    let sx = |q: f64| x0 + q * (x1 - x0);
    let sy = |v: f64| y_bot - (v - lo) / (hi - lo) * (y_bot - y_top);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0.000" y="0.000" width="{}" height="{}" fill="white"/>"#,
        num(w),
        num(h)
    )
    .unwrap();
    if let Some(t) = &chart.title {
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            num(w / 2.0),
            num(MARGIN_TOP / 2.0 + 5.0),
            escape(t)
        )
        .unwrap();
    }
    writeln!(
        out,
        r##"<rect class="plot-area" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#cccccc"/>"##,
        num(x0),
        num(y_top),
        num(x1 - x0),
        num(y_bot - y_top)
    )
    .unwrap();

    // axes
    for (ax1, ay1, ax2, ay2) in [(x0, y_bot, x1, y_bot), (x0, y_top, x0, y_bot)] {
        writeln!(
            out,
            r#"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            num(ax1),
            num(ay1),
            num(ax2),
            num(ay2)
        )
        .unwrap();
    }
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (tx, ty) = (sx(f), y_bot - f * (y_bot - y_top));
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            num(tx),
            num(y_bot),
            num(tx),
            num(y_bot + 4.0)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(tx),
            num(y_bot + 17.0),
            num(f)
        )
        .unwrap();
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            num(x0 - 4.0),
            num(ty),
            num(x0),
            num(ty)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            num(x0 - 6.0),
            num(ty + 4.0),
            num(lo + f * (hi - lo))
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        num((x0 + x1) / 2.0),
        num(h - 10.0),
        escape(&chart.x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
        num(16.0),
        num((y_top + y_bot) / 2.0),
        num(16.0),
        num((y_top + y_bot) / 2.0),
        escape(&chart.y_label)
    )
    .unwrap();

    for s in series {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(q, v)| format!("{},{}", num(sx(q)), num(sy(v))))
            .collect();
        writeln!(
            out,
            r#"<polyline class="series" data-label="{}" fill="none" stroke="{}" stroke-width="1.500" points="{}"/>"#,
            escape(&s.label),
            escape(&s.color),
            pts.join(" ")
        )
        .unwrap();
    }

    // legend, top left inside the plot area
    for (i, s) in series.iter().enumerate() {
        let ly = y_top + 14.0 + 16.0 * i as f64;
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2.000"/>"#,
            num(x0 + 10.0),
            num(ly - 4.0),
            num(x0 + 30.0),
            num(ly - 4.0),
            escape(&s.color)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            num(x0 + 36.0),
            num(ly),
            escape(&s.label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart {
            width: 400,
            height: 300,
            title: Some("a <b>".into()),
            x_label: "quantile".into(),
            y_label: "metric".into(),
            y_range: Some((-1.0, 1.0)),
        }
    }

    #[test]
    fn maps_the_range_onto_the_plot_area() {
        let s = Series {
            label: "s".into(),
            color: "#000000".into(),
            points: vec![(0.0, -1.0), (1.0, 1.0)],
        };
        let svg = render(&chart(), &[s]);
        assert!(svg.contains(r#"points="64.000,252.000 384.000,28.000""#), "{svg}");
        assert!(svg.contains("a &lt;b&gt;"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn constant_series_is_horizontal() {
        let s = Series {
            label: "c".into(),
            color: "red".into(),
            points: vec![(0.0, 0.3), (0.5, 0.3), (1.0, 0.3)],
        };
        let svg = render(
            &Chart {
                y_range: None,
                ..chart()
            },
            &[s],
        );
        let line = svg.lines().find(|l| l.contains("<polyline")).unwrap();
        let ys: Vec<&str> = line
            .split("points=\"")
            .nth(1)
            .unwrap()
            .trim_end_matches("\"/>")
            .split(' ')
            .map(|p| p.split(',').nth(1).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn negative_zero_prints_plain() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(1.23456), "1.235");
    }
}
