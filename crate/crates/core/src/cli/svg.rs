//! Minimal SVG rendering: symmetric-log heatmaps and line plots.

use std::fmt::Write;

const LEFT: f64 = 80.0;
const TOP: f64 = 30.0;
const PLOT_W: f64 = 600.0;
const PLOT_H: f64 = 400.0;
const BAR_W: f64 = 18.0;
const MAX_COLUMNS: usize = 400;

/// sign(x)·log₁₀(1 + |x|/linthresh).
pub fn symlog(x: f64, linthresh: f64) -> f64 {
    x.signum() * (1.0 + x.abs() / linthresh).log10()
}

/// Diverging blue-white-red colour for v in [−1, 1].
fn colour(v: f64) -> String {
    let v = v.clamp(-1.0, 1.0);
    let (r, g, b) = if v >= 0.0 {
        (1.0, 1.0 - v, 1.0 - v)
    } else {
        (1.0 + v, 1.0 + v, 1.0)
    };
    format!(
        "#{:02x}{:02x}{:02x}",
        (r * 255.0).round() as u8,
        (g * 255.0).round() as u8,
        (b * 255.0).round() as u8
    )
}

fn header(out: &mut String, width: f64, height: f64, hash: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(out, "<!-- config_hash={hash} -->");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Rows are scan points (bottom to top), columns frequencies.
pub fn heatmap(
    rows: &[f64],
    omegas: &[f64],
    values: &[Vec<f64>],
    linthresh_rel: f64,
    x_label: &str,
    y_label: &str,
    hash: &str,
) -> String {
    let max = values
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let lt = if max > 0.0 { linthresh_rel * max } else { 1.0 };
    let smax = symlog(max, lt).max(f64::MIN_POSITIVE);

    let ncol = omegas.len().clamp(1, MAX_COLUMNS);
    let bin = |c: usize| {
        let lo = c * omegas.len() / ncol;
        let hi = ((c + 1) * omegas.len() / ncol).max(lo + 1);
        (lo, hi)
    };
    let cw = PLOT_W / ncol as f64;
    let rh = PLOT_H / rows.len().max(1) as f64;

    let width = LEFT + PLOT_W + 110.0;
    let height = TOP + PLOT_H + 60.0;
    let mut out = String::new();
    header(&mut out, width, height, hash);
    for (i, row) in values.iter().enumerate() {
        let y = TOP + PLOT_H - (i + 1) as f64 * rh;
        for c in 0..ncol {
            let (lo, hi) = bin(c);
            let mean = row[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                LEFT + c as f64 * cw,
                y,
                cw + 0.05,
                rh + 0.05,
                colour(symlog(mean, lt) / smax)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black"/>"#
    );

    // Axis ticks.
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let idx = ((omegas.len() - 1) as f64 * f).round() as usize;
        let x = LEFT + f * PLOT_W;
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + PLOT_H + 16.0,
            fmt_tick(omegas[idx])
        );
        if !rows.is_empty() {
            let ridx = ((rows.len() - 1) as f64 * f).round() as usize;
            let y = TOP + PLOT_H - (ridx as f64 + 0.5) * rh;
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                fmt_tick(rows[ridx])
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_label}</text>"#,
        LEFT + PLOT_W / 2.0,
        TOP + PLOT_H + 40.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{y_label}</text>"#,
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0
    );

    // Colour bar.
    let bx = LEFT + PLOT_W + 20.0;
    let steps = 100;
    for k in 0..steps {
        let v = 1.0 - 2.0 * (k as f64 + 0.5) / steps as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{bx:.1}" y="{:.2}" width="{BAR_W}" height="{:.2}" fill="{}"/>"#,
            TOP + k as f64 * PLOT_H / steps as f64,
            PLOT_H / steps as f64 + 0.05,
            colour(v)
        );
    }
    for (v, label) in [(1.0, max), (0.0, 0.0), (-1.0, -max)] {
        let y = TOP + (1.0 - v) / 2.0 * PLOT_H + 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}">{}</text>"#,
            bx + BAR_W + 4.0,
            fmt_tick(label)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{bx:.1}" y="{:.1}">symlog, linthresh {}</text>"#,
        TOP + PLOT_H + 40.0,
        fmt_tick(lt)
    );
    out.push_str("</svg>\n");
    out
}

/// Single polyline of y against x.
pub fn line_plot(xs: &[f64], ys: &[f64], x_label: &str, y_label: &str, hash: &str) -> String {
    let width = LEFT + PLOT_W + 30.0;
    let height = TOP + PLOT_H + 60.0;
    let mut out = String::new();
    header(&mut out, width, height, hash);
    let (xmin, xmax) = (xs[0], xs[xs.len() - 1]);
    let ymax = ys.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let px = |x: f64| LEFT + (x - xmin) / (xmax - xmin) * PLOT_W;
    let py = |y: f64| TOP + PLOT_H / 2.0 - y / ymax * PLOT_H / 2.0;
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r##"<line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#999"/>"##,
        py(0.0),
        LEFT + PLOT_W,
        py(0.0)
    );
    let mut pts = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let _ = write!(pts, "{:.2},{:.2} ", px(*x), py(*y));
    }
    let _ = writeln!(out, r#"<polyline fill="none" stroke="black" points="{}"/>"#, pts.trim_end());
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + f * PLOT_W,
            TOP + PLOT_H + 16.0,
            fmt_tick(xmin + f * (xmax - xmin))
        );
    }
    for (v, y) in [(ymax, TOP), (-ymax, TOP + PLOT_H)] {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, LEFT - 6.0, y + 4.0, fmt_tick(v));
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_label}</text>"#,
        LEFT + PLOT_W / 2.0,
        TOP + PLOT_H + 40.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{y_label}</text>"#,
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symlog_shape() {
        assert_eq!(symlog(0.0, 1.0), 0.0);
        assert!((symlog(9.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((symlog(-9.0, 1.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn colours_at_extremes() {
        assert_eq!(colour(1.0), "#ff0000");
        assert_eq!(colour(-1.0), "#0000ff");
        assert_eq!(colour(0.0), "#ffffff");
    }

    #[test]
    fn heatmap_is_well_formed() {
        let omegas: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        let rows = vec![1.0, 2.0, 3.0];
        let values: Vec<Vec<f64>> = rows.iter().map(|r| omegas.iter().map(|w| (w * r).sin()).collect()).collect();
        let svg = heatmap(&rows, &omegas, &values, 1e-3, "w", "y", "abc");
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("config_hash=abc"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<rect").count(), 1 + 3 * MAX_COLUMNS + 1 + 100);
    }
}
