//! Minimal SVG line chart of phase shift against `kh`.

use std::fmt::Write as _;

use semilag::spectral::PhaseRow;
use semilag::SchemeKind;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;

fn color(kind: SchemeKind) -> &'static str {
    match kind {
        SchemeKind::Cip => "#d62728",
        SchemeKind::Spline => "#1f77b4",
        SchemeKind::Lagrange => "#2ca02c",
        SchemeKind::Upwind => "#ff7f0e",
    }
}

fn label(kind: SchemeKind) -> &'static str {
    match kind {
        SchemeKind::Cip => "CIP",
        SchemeKind::Spline => "SL spline",
        SchemeKind::Lagrange => "SL Lagrange",
        SchemeKind::Upwind => "upwind",
    }
}

/// "Nice" tick step covering `span` with about `target` intervals.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag)
}

/// Chart of `theta_unwrapped` against `kh`, one polyline per scheme plus the
/// exact line `2πμ kh`.
pub fn phase_chart(rows: &[PhaseRow], mu: f64, m: usize) -> String {
    let mut schemes: Vec<SchemeKind> = vec![];
    for r in rows {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
    }
    let x_max = 0.5;
    let exact_max = 2.0 * std::f64::consts::PI * mu * x_max;
    let (mut y_min, mut y_max) = (0.0f64.min(exact_max), 0.0f64.max(exact_max));
    for r in rows {
        y_min = y_min.min(r.theta_unwrapped);
        y_max = y_max.max(r.theta_unwrapped);
    }
    if y_max - y_min < 1e-12 {
        y_max = y_min + 1.0;
    }
    let step = tick_step(y_max - y_min, 6.0);
    y_min = (y_min / step).floor() * step;
    y_max = (y_max / step).ceil() * step;

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / x_max * pw;
    let sy = |y: f64| TOP + (y_max - y) / (y_max - y_min) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="14">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle">Phase shift after one step, mu = {mu}, M = {m}</text>"#,
        WIDTH / 2.0
    );

    // grid lines and tick labels
    for i in 0..=5 {
        let x = x_max * i as f64 / 5.0;
        let px = sx(x);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.1}" y1="{TOP:.1}" x2="{px:.1}" y2="{:.1}" stroke="#ddd"/>"##,
            TOP + ph
        );
        let _ = writeln!(s, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{x:.1}</text>"#, TOP + ph + 20.0);
    }
    let n_y = ((y_max - y_min) / step).round() as usize;
    for i in 0..=n_y {
        let y = y_min + step * i as f64;
        let py = sy(y);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT:.1}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#ddd"/>"##,
            LEFT + pw
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.2}</text>"#, LEFT - 8.0, py + 5.0);
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT:.1}" y="{TOP:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">kh</text>"#, LEFT + pw / 2.0, HEIGHT - 20.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">theta</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="black" stroke-dasharray="6 4" stroke-width="1.5" points="{:.2},{:.2} {:.2},{:.2}"/>"#,
        sx(0.0),
        sy(0.0),
        sx(x_max),
        sy(exact_max)
    );
    for &kind in &schemes {
        let mut pts = format!("{:.2},{:.2}", sx(0.0), sy(0.0));
        for r in rows.iter().filter(|r| r.scheme == kind) {
            let _ = write!(pts, " {:.2},{:.2}", sx(r.kh), sy(r.theta_unwrapped));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{pts}"/>"#,
            color(kind)
        );
    }

    // legend, top left inside the plot
    let entries: Vec<(&str, &str, bool)> = std::iter::once(("exact", "black", true))
        .chain(schemes.iter().map(|&k| (label(k), color(k), false)))
        .collect();
    let (lx, ly) = (LEFT + 15.0, TOP + 15.0);
    let _ = writeln!(
        s,
        r##"<rect x="{lx:.1}" y="{ly:.1}" width="150" height="{:.1}" fill="white" stroke="#999"/>"##,
        10.0 + 22.0 * entries.len() as f64
    );
    for (i, (name, col, dashed)) in entries.iter().enumerate() {
        let y = ly + 18.0 + 22.0 * i as f64;
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{col}" stroke-width="2"{dash}/>"#,
            lx + 10.0,
            lx + 40.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{name}</text>"#, lx + 48.0, y + 5.0);
    }
    s.push_str("</svg>\n");
    s
}
