//! Minimal SVG histogram with the standard normal density overlaid.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const X_RANGE: (f64, f64) = (-4.0, 4.0);
const BINS: usize = 40;

fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Density histogram of `xs` on [-4, 4]; values outside are not drawn but
/// still count toward the normalization.
pub fn histogram(xs: &[f64], title: &str) -> String {
    let (lo, hi) = X_RANGE;
    let bin_width = (hi - lo) / BINS as f64;
    let mut counts = [0usize; BINS];
    for &x in xs {
        if x >= lo && x < hi {
            counts[((x - lo) / bin_width) as usize] += 1;
        }
    }
    let total = xs.len().max(1) as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (total * bin_width)).collect();
    let y_max = heights
        .iter()
        .copied()
        .fold(normal_density(0.0), f64::max)
        * 1.1;

    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - lo) / (hi - lo) * plot_w;
    let py = |y: f64| HEIGHT - MARGIN - y / y_max * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for (i, &h) in heights.iter().enumerate() {
        let x0 = px(lo + i as f64 * bin_width);
        let x1 = px(lo + (i + 1) as f64 * bin_width);
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            py(h),
            x1 - x0,
            py(0.0) - py(h)
        );
    }
    let points: Vec<String> = (0..=200)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / 200.0;
            format!("{:.2},{:.2}", px(x), py(normal_density(x)))
        })
        .collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
        points.join(" ")
    );
    // Axes and ticks.
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black"/>"#,
        py(0.0),
        WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{:.2}" stroke="black"/>"#,
        py(0.0)
    );
    for t in -4..=4 {
        let x = px(t as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{0:.2}" x2="{x:.2}" y2="{1:.2}" stroke="black"/><text x="{x:.2}" y="{2:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{t}</text>"#,
            py(0.0),
            py(0.0) + 5.0,
            py(0.0) + 18.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
