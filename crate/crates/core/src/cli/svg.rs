//! Static SVG plot of a region boundary, sensing on the horizontal axis and
//! throughput on the vertical one.

use std::fmt::Write;

use crate::region::RegionBoundary;

use super::table::fmt_num;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Names of breakpoint `i`: `X`, `Y1..`, `Z`, joined when they coincide.
fn labels(boundary: &RegionBoundary) -> Vec<String> {
    let x = boundary.x_point();
    let z = boundary.z_point();
    let interior = boundary.interior_points();
    boundary
        .breakpoints
        .iter()
        .map(|p| {
            let mut names = Vec::new();
            if Some(*p) == x {
                names.push("X".to_string());
            }
            if let Some(pos) = interior.iter().position(|q| q == p) {
                names.push(format!("Y{}", pos + 1));
            }
            if Some(*p) == z {
                names.push("Z".to_string());
            }
            names.join("=")
        })
        .collect()
}

pub fn render_svg(boundary: &RegionBoundary, title: &str) -> String {
    let s_max = boundary.max_sensing().max(f64::MIN_POSITIVE);
    let f_max = boundary.max_throughput().max(f64::MIN_POSITIVE);
    let (s_max, f_max) = (
        if boundary.max_sensing() > 0.0 {
            s_max
        } else {
            1.0
        },
        if boundary.max_throughput() > 0.0 {
            f_max
        } else {
            1.0
        },
    );
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |s: f64| MARGIN + s / s_max * plot_w;
    let py = |f: f64| HEIGHT - MARGIN - f / f_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"  <text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Axes with five ticks each.
    let (x0, y0) = (px(0.0), py(0.0));
    let _ = writeln!(
        svg,
        r#"  <line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        px(s_max)
    );
    let _ = writeln!(
        svg,
        r#"  <line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#,
        py(f_max)
    );
    for i in 0..=5 {
        let s = s_max * i as f64 / 5.0;
        let f = f_max * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            px(s),
            y0 + 16.0,
            fmt_num(s)
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            x0 - 6.0,
            py(f) + 4.0,
            fmt_num(f)
        );
    }
    let _ = writeln!(
        svg,
        r#"  <text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">sensing fidelity s</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"  <text x="18" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 18 {})">throughput f</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let points: Vec<String> = boundary
        .breakpoints
        .iter()
        .map(|p| format!("{:.2},{:.2}", px(p.sensing), py(p.throughput)))
        .collect();
    let _ = writeln!(
        svg,
        r#"  <polyline class="boundary" points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        points.join(" ")
    );
    for (p, label) in boundary.breakpoints.iter().zip(labels(boundary)) {
        let (cx, cy) = (px(p.sensing), py(p.throughput));
        let _ = writeln!(
            svg,
            r#"  <circle class="breakpoint" cx="{cx:.2}" cy="{cy:.2}" r="4" fill="firebrick"><title>({}, {})</title></circle>"#,
            fmt_num(p.sensing),
            fmt_num(p.throughput)
        );
        if !label.is_empty() {
            let _ = writeln!(
                svg,
                r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{label}</text>"#,
                cx + 7.0,
                cy - 7.0
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}
