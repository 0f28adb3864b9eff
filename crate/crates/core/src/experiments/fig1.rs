use std::fmt::Write;

use crate::error::Result;
use crate::mechanisms::subsidy_shape;
use crate::model::{CostFunction, MinerProfile, PlatformParams};

pub const FIG1_POINTS: usize = 301;
pub const FIG1_RANGE: (f64, f64) = (20.0, 50.0);

/// Subsidy shape `K` against capacity `A` for `k = 2`, `λ = 0.8` and a
/// fixed difficulty `D = 10`.
pub fn fig1_series() -> Result<Vec<(f64, f64)>> {
    let params = PlatformParams { productivity: 2.0, lambda: 0.8, ..Default::default() };
    let (lo, hi) = FIG1_RANGE;
    (0..FIG1_POINTS)
        .map(|i| {
            let a = lo + (hi - lo) * i as f64 / (FIG1_POINTS - 1) as f64;
            let miner = MinerProfile { id: 0, capacity: a, cost: CostFunction::Linear { rate: 1.0 } };
            Ok((a, subsidy_shape(10.0, &miner, &params)?))
        })
        .collect()
}

/// Self-contained 800×500 SVG line plot.
pub fn line_plot_svg(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 500.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 20.0;
    const BOTTOM: f64 = 50.0;
    let (x0, x1) = bounds(points.iter().map(|p| p.0));
    let (y0, y1) = bounds(points.iter().map(|p| p.1));
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="500" viewBox="0 0 800 500">"#
    );
    let _ = writeln!(svg, r#"<rect width="800" height="500" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{l},{t} V{b} H{r}" fill="none" stroke="black"/>"#,
        l = LEFT,
        t = TOP,
        b = H - BOTTOM,
        r = W - RIGHT
    );
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{x:.4}</text>"#,
            sx(x),
            H - BOTTOM + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{y:.4}</text>"#,
            LEFT - 6.0,
            sy(y) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{x_label}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.1})">{y_label}</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0
    );
    let coords: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        coords.join(" ")
    );
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}
