//! Text renderings of a threshold sweep.

use std::fmt::Write;

use storyline_core::localization::SweepReport;

pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("threshold,avg_segments\n");
    for r in &report.rows {
        let _ = writeln!(out, "{},{}", r.threshold, r.avg_segments);
    }
    out
}

const BAR_WIDTH: usize = 40;

/// Horizontal bars, one row per threshold.
pub fn sweep_ascii(report: &SweepReport) -> String {
    let max = report.rows.iter().map(|r| r.avg_segments).fold(0.0, f64::max);
    let mut out = String::from("threshold  avg segments/video\n");
    for r in &report.rows {
        let len = if max > 0.0 {
            (r.avg_segments / max * BAR_WIDTH as f64).round() as usize
        } else {
            0
        };
        let _ = writeln!(
            out,
            "{:>9.2}  {:<width$} {:.3}",
            r.threshold,
            "#".repeat(len),
            r.avg_segments,
            width = BAR_WIDTH
        );
    }
    out
}

const W: f64 = 480.0;
const H: f64 = 320.0;
const PAD: f64 = 48.0;

/// Line chart of average segments against threshold.
pub fn sweep_svg(report: &SweepReport) -> String {
    let xs: Vec<f64> = report.rows.iter().map(|r| r.threshold).collect();
    let (x_lo, x_hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let y_hi = report.rows.iter().map(|r| r.avg_segments).fold(0.0, f64::max).max(1.0);
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
    let px = |x: f64| PAD + (x - x_lo) / x_span * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - y / y_hi * (H - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let points: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", px(r.threshold), py(r.avg_segments)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        points.join(" ")
    );
    for r in &report.rows {
        let (x, y) = (px(r.threshold), py(r.avg_segments));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="steelblue"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{:.1}</text>"#,
            H - PAD + 14.0,
            r.threshold
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">score threshold</text>"#,
        W / 2.0,
        H - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">avg segments per video (max {y_hi:.2})</text>"#,
        H / 2.0,
        H / 2.0
    );
    s.push_str("</svg>\n");
    s
}
