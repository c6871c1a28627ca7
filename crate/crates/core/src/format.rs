//! Deterministic text output: shortest round-trip floats, CSV rows and a
//! small static SVG plot of the transition curve.

use std::fmt::Write as _;

use crate::transition::TransitionCurve;

/// Shortest decimal string that parses back to exactly `x`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        ryu::Buffer::new().format_finite(x).to_owned()
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

pub fn csv_row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| float(*v)).collect();
    cells.join(",")
}

pub const TRANSITION_CSV_HEADER: &str = "n_nucleons,mass_kg,ln_magnitude,log10_magnitude";

pub fn transition_csv(curve: &TransitionCurve) -> String {
    let mut out = String::new();
    out.push_str(TRANSITION_CSV_HEADER);
    out.push('\n');
    for s in &curve.samples {
        out.push_str(&csv_row(&[
            s.n_nucleons,
            s.mass_kg,
            s.ln_magnitude,
            s.log10_magnitude,
        ]));
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, lo + 1.0)
        };
        Self {
            lo,
            hi,
            px_lo,
            px_hi,
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }

    fn ticks(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=TICKS).map(move |i| self.lo + (self.hi - self.lo) * i as f64 / TICKS as f64)
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 || (1e-2..1e5).contains(&v.abs()) {
        format!("{v:.2}")
    } else {
        format!("{v:.2e}")
    }
}

/// log10|ψ| against log10(n), with a dashed line at `cutoff_log10`.
pub fn transition_svg(curve: &TransitionCurve, cutoff_log10: f64) -> String {
    let xs: Vec<f64> = curve.samples.iter().map(|s| s.n_nucleons.log10()).collect();
    let ys: Vec<f64> = curve.samples.iter().map(|s| s.log10_magnitude).collect();
    let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().copied().fold(init, f);
    let x_axis = Axis::new(
        fold(&xs, f64::INFINITY, f64::min),
        fold(&xs, f64::NEG_INFINITY, f64::max),
        LEFT,
        WIDTH - RIGHT,
    );
    let y_axis = Axis::new(
        fold(&ys, cutoff_log10, f64::min),
        fold(&ys, cutoff_log10, f64::max),
        HEIGHT - BOTTOM,
        TOP,
    );

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="20" text-anchor="middle">Many-body state magnitude bound (alpha = {}, |a|/a = {})</text>"#,
        WIDTH / 2.0,
        float(curve.alpha),
        float(curve.accel_ratio)
    );
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#
    );
    for t in x_axis.ticks() {
        let px = x_axis.map(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 20.0,
            tick_label(t)
        );
    }
    for t in y_axis.ticks() {
        let py = y_axis.map(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">log10(nucleon count)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">log10 |psi|</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    let cy = y_axis.map(cutoff_log10);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{cy:.2}" x2="{x1:.2}" y2="{cy:.2}" stroke="red" stroke-dasharray="6 4"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="red">cutoff log10 = {}</text>"#,
        x1,
        cy - 6.0,
        float(cutoff_log10)
    );

    let pts: Vec<String> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| format!("{:.2},{:.2}", x_axis.map(*x), y_axis.map(*y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        pts.join(" ")
    );
    svg.push_str("</svg>\n");
    svg
}
