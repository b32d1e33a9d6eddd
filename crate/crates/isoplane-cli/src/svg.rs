//! Standalone SVG rendering: unit-ball outlines with optional witness
//! vectors, and polyline charts for sweep data. Pure text emission, no
//! external resources.

use std::fmt::Write;

use isoplane::{NormSpec, Vec2};

const BALL_SIZE: f64 = 600.0;
const CHART_W: f64 = 640.0;
const CHART_H: f64 = 420.0;

fn num(x: f64) -> String {
    format!("{x:.6}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The unit ball of `spec` sampled at 720 gauge points, with axes and an
/// optional witness pair drawn as labeled vectors from the origin.
pub fn unit_ball_svg(spec: &NormSpec, label: &str, witness: Option<(Vec2, Vec2)>) -> String {
    let points: Vec<Vec2> = spec.sphere_grid(720).iter().map(|p| p.coords).collect();
    let mut extent = points.iter().map(|p| p.max_abs()).fold(0.0f64, f64::max);
    if let Some((x, y)) = witness {
        extent = extent.max(x.max_abs()).max(y.max_abs());
    }
    let scale = (BALL_SIZE / 2.0 - 40.0) / extent;
    let mid = BALL_SIZE / 2.0;
    let map = |p: Vec2| (mid + p.x1 * scale, mid - p.x2 * scale);

    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        num(BALL_SIZE)
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>",
        num(BALL_SIZE)
    );
    // Axes through the origin.
    let _ = writeln!(
        svg,
        "  <line x1=\"0\" y1=\"{mid}\" x2=\"{size}\" y2=\"{mid}\" stroke=\"#cccccc\"/>",
        mid = num(mid),
        size = num(BALL_SIZE)
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{mid}\" y1=\"0\" x2=\"{mid}\" y2=\"{size}\" stroke=\"#cccccc\"/>",
        mid = num(mid),
        size = num(BALL_SIZE)
    );
    let mut path = String::new();
    for (i, p) in points.iter().enumerate() {
        let (px, py) = map(*p);
        let _ = write!(path, "{}{},{}", if i == 0 { "M" } else { " L" }, num(px), num(py));
    }
    path.push_str(" Z");
    let _ = writeln!(
        svg,
        "  <path d=\"{path}\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"2\"/>"
    );
    if let Some((x, y)) = witness {
        for (v, name, color) in [(x, "x", "#c03020"), (y, "y", "#207030")] {
            let (vx, vy) = map(v);
            let _ = writeln!(
                svg,
                "  <line x1=\"{mid}\" y1=\"{mid}\" x2=\"{vx}\" y2=\"{vy}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                mid = num(mid),
                vx = num(vx),
                vy = num(vy)
            );
            let _ = writeln!(
                svg,
                "  <circle cx=\"{vx}\" cy=\"{vy}\" r=\"4\" fill=\"{color}\"/>",
                vx = num(vx),
                vy = num(vy)
            );
            let _ = writeln!(
                svg,
                "  <text x=\"{tx}\" y=\"{ty}\" font-family=\"monospace\" font-size=\"16\" fill=\"{color}\">{name} = ({c1}, {c2})</text>",
                tx = num(vx + 8.0),
                ty = num(vy - 8.0),
                c1 = num(v.x1),
                c2 = num(v.x2)
            );
        }
    }
    let _ = writeln!(
        svg,
        "  <text x=\"12\" y=\"24\" font-family=\"monospace\" font-size=\"18\">{}</text>",
        esc(label)
    );
    svg.push_str("</svg>\n");
    svg
}

/// A polyline chart of `(parameter, value)` rows with tick labels.
pub fn sweep_chart_svg(rows: &[(f64, f64)], title: &str, x_label: &str, y_label: &str) -> String {
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let (x_min, x_max) = bounds(rows.iter().map(|r| r.0));
    let (y_min, y_max) = bounds(rows.iter().map(|r| r.1));
    let x_span = (x_max - x_min).max(1e-12);
    let y_span = (y_max - y_min).max(1e-12);
    let px = |x: f64| ml + (x - x_min) / x_span * (CHART_W - ml - mr);
    let py = |y: f64| CHART_H - mb - (y - y_min) / y_span * (CHART_H - mt - mb);

    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = num(CHART_W),
        h = num(CHART_H)
    );
    let _ = writeln!(svg, "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>", w = num(CHART_W), h = num(CHART_H));
    // Frame.
    let _ = writeln!(
        svg,
        "  <rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#444444\"/>",
        x = num(ml),
        y = num(mt),
        w = num(CHART_W - ml - mr),
        h = num(CHART_H - mt - mb)
    );
    // Ticks.
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = x_min + t * x_span;
        let yv = y_min + t * y_span;
        let _ = writeln!(
            svg,
            "  <line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"#444444\"/>",
            x = num(px(xv)),
            y0 = num(CHART_H - mb),
            y1 = num(CHART_H - mb + 6.0)
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{v}</text>",
            x = num(px(xv)),
            y = num(CHART_H - mb + 20.0),
            v = num(xv)
        );
        let _ = writeln!(
            svg,
            "  <line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"#444444\"/>",
            x0 = num(ml - 6.0),
            x1 = num(ml),
            y = num(py(yv))
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{v}</text>",
            x = num(ml - 10.0),
            y = num(py(yv) + 4.0),
            v = num(yv)
        );
    }
    let mut polyline = String::new();
    for (x, y) in rows {
        let _ = write!(polyline, "{},{} ", num(px(*x)), num(py(*y)));
    }
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"2\"/>",
        polyline.trim_end()
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{x}\" y=\"24\" font-family=\"monospace\" font-size=\"16\">{t}</text>",
        x = num(ml),
        t = esc(title)
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">{l}</text>",
        x = num((ml + CHART_W - mr) / 2.0),
        y = num(CHART_H - 10.0),
        l = esc(x_label)
    );
    let _ = writeln!(
        svg,
        "  <text x=\"16\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\" transform=\"rotate(-90 16 {y})\" text-anchor=\"middle\">{l}</text>",
        y = num(CHART_H / 2.0),
        l = esc(y_label)
    );
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}
