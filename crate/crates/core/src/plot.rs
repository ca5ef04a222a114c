//! Self-contained SVG plot of eigenvalue averages against the bounds.

use std::fmt::Write;

use crate::bounds::BoundReport;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Staircase of `avg_k` over `k` with the upper and lower average bounds on
/// their eligible ranges (shaded), and `λ_k` as dots.
pub fn bounds_svg(report: &BoundReport) -> String {
    let n = report.omega_size.max(1) as f64;
    let mut y_max = 0.0f64;
    for r in &report.rows {
        y_max = y_max.max(r.lambda_k).max(r.avg_k);
        if let Some(u) = r.upper_avg {
            y_max = y_max.max(u);
        }
    }
    let y_max = if y_max > 0.0 { 1.05 * y_max } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |k: f64| LEFT + plot_w * (k - 0.5) / n;
    let sy = |v: f64| TOP + plot_h * (1.0 - v.max(0.0) / y_max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">d = {}, alpha = {}, |Omega| = {}</text>"#,
        WIDTH / 2.0,
        report.dim,
        report.alpha,
        report.omega_size
    );

    // Eligibility shading.
    for (k_max, colour) in [(report.eligibility.upper_avg, "#fde8e8"), (report.eligibility.lower, "#e3f0fb")] {
        if k_max > 0 {
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{TOP:.2}" width="{:.2}" height="{plot_h:.2}" fill="{colour}" fill-opacity="0.6"/>"#,
                sx(0.5),
                sx(k_max as f64 + 0.5) - sx(0.5)
            );
        }
    }

    // Axes and ticks.
    let _ = writeln!(
        svg,
        r#"<path d="M{LEFT:.2},{TOP:.2} V{:.2} H{:.2}" fill="none" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    for i in 0..=4 {
        let v = y_max * i as f64 / 4.0;
        let y = sy(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            LEFT - 4.0,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let step = ((n / 8.0).ceil() as usize).max(1);
    for k in (1..=report.omega_size).step_by(step) {
        let x = sx(k as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{k}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 4.0,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">k</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );

    // Staircase of averages.
    let mut stairs = String::new();
    for (i, r) in report.rows.iter().enumerate() {
        let k = r.k as f64;
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(stairs, "{cmd}{:.2},{:.2} L{:.2},{:.2} ", sx(k - 0.5), sy(r.avg_k), sx(k + 0.5), sy(r.avg_k));
    }
    let _ = writeln!(svg, r#"<path d="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, stairs.trim_end());

    for r in &report.rows {
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="#555"/>"##,
            sx(r.k as f64),
            sy(r.lambda_k)
        );
    }

    let curve = |values: Vec<(usize, f64)>| -> String {
        values
            .iter()
            .enumerate()
            .map(|(i, (k, v))| format!("{}{:.2},{:.2}", if i == 0 { 'M' } else { 'L' }, sx(*k as f64), sy(*v)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let upper: Vec<(usize, f64)> = report.rows.iter().filter_map(|r| r.upper_avg.map(|v| (r.k, v))).collect();
    let lower: Vec<(usize, f64)> = report.rows.iter().filter_map(|r| r.lower_avg.map(|v| (r.k, v))).collect();
    if !upper.is_empty() {
        let _ = writeln!(svg, r##"<path d="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##, curve(upper));
    }
    if !lower.is_empty() {
        let _ = writeln!(svg, r##"<path d="{}" fill="none" stroke="#2471a3" stroke-width="1.5"/>"##, curve(lower));
    }

    // Legend.
    let legend = [
        ("#c0392b", "upper bound on avg_k"),
        ("#2471a3", "lower bound on avg_k"),
        ("black", "avg_k"),
        ("#555", "lambda_k"),
    ];
    for (i, (colour, label)) in legend.iter().enumerate() {
        let y = TOP + 12.0 + 16.0 * i as f64;
        let x = LEFT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            x + 20.0,
            x + 26.0,
            y + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
