use std::fmt::Write as _;
use std::io::Write;

use nalgebra::DMatrix;

use crate::features::{Feature, FeatureRow};
use crate::stats::BoxSummary;

use super::Result;

/// Panels of the feature time-series figure.
pub const TIME_SERIES_PANELS: [Feature; 8] = [
    Feature::ComponentsCnt,
    Feature::Modularity,
    Feature::DcStd,
    Feature::GiantComRatio,
    Feature::CoreCnt,
    Feature::AvgCoreNeighbor,
    Feature::ClusterMean,
    Feature::Transitivity,
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn open(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    )
}

fn text(out: &mut String, x: f64, y: f64, anchor: &str, s: &str) {
    let _ = writeln!(out, "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"{anchor}\">{}</text>", escape(s));
}

fn short(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// A grid of line charts, two per row, one per feature. Gaps in the series
/// break the line.
pub fn time_series_svg(rows: &[FeatureRow], panels: &[Feature]) -> String {
    const PW: f64 = 420.0;
    const PH: f64 = 180.0;
    const M: f64 = 50.0;
    let cols = 2;
    let nrows = panels.len().div_ceil(cols);
    let mut out = open(cols as f64 * PW, nrows as f64 * PH);
    let n = rows.len().max(2) as f64;
    for (k, f) in panels.iter().enumerate() {
        let (ox, oy) = ((k % cols) as f64 * PW, (k / cols) as f64 * PH);
        let (x0, x1, y0, y1) = (ox + M, ox + PW - 15.0, oy + 25.0, oy + PH - 30.0);
        let vals: Vec<Option<f64>> = rows.iter().map(|r| r.get(*f)).collect();
        let (lo, hi) = vals.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let _ = writeln!(out, "<g class=\"panel\" data-feature=\"{}\">", f.name());
        text(&mut out, ox + PW / 2.0, oy + 16.0, "middle", f.name());
        let _ = writeln!(
            out,
            "<rect x=\"{x0:.1}\" y=\"{y0:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#888\"/>",
            x1 - x0,
            y1 - y0
        );
        if lo.is_finite() {
            let span = if hi > lo { hi - lo } else { 1.0 };
            let px = |i: usize| x0 + (x1 - x0) * i as f64 / (n - 1.0);
            let py = |v: f64| y1 - (y1 - y0) * (v - lo) / span;
            let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
            for (i, v) in vals.iter().enumerate() {
                match v {
                    Some(v) => segments.last_mut().unwrap().push((px(i), py(*v))),
                    None if !segments.last().unwrap().is_empty() => segments.push(Vec::new()),
                    None => {}
                }
            }
            for seg in segments.iter().filter(|s| !s.is_empty()) {
                let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(out, "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"{}\"/>", pts.join(" "));
            }
            text(&mut out, x0 - 4.0, y0 + 8.0, "end", &short(hi));
            text(&mut out, x0 - 4.0, y1, "end", &short(lo));
        }
        if let (Some(a), Some(b)) = (rows.first(), rows.last()) {
            text(&mut out, x0, y1 + 14.0, "start", &a.date.to_string());
            text(&mut out, x1, y1 + 14.0, "end", &b.date.to_string());
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn diverging(v: f64) -> String {
    let t = v.clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        (255.0 * (1.0 + t), 255.0 * (1.0 + t), 255.0)
    };
    format!("#{:02x}{:02x}{:02x}", r.round() as u8, g.round() as u8, b.round() as u8)
}

/// Correlation heatmap; each cell carries its exact value in `data-value`.
pub fn heatmap_svg(names: &[&str], m: &DMatrix<f64>) -> String {
    const CELL: f64 = 34.0;
    const LEFT: f64 = 170.0;
    const TOP: f64 = 170.0;
    let p = names.len() as f64;
    let mut out = open(LEFT + CELL * p + 20.0, TOP + CELL * p + 20.0);
    for (i, name) in names.iter().enumerate() {
        let y = TOP + CELL * (i as f64 + 0.6);
        text(&mut out, LEFT - 6.0, y, "end", name);
        let x = LEFT + CELL * (i as f64 + 0.6);
        let _ = writeln!(
            out,
            "<text x=\"{x:.1}\" y=\"{:.1}\" transform=\"rotate(-60 {x:.1} {:.1})\">{}</text>",
            TOP - 6.0,
            TOP - 6.0,
            escape(name)
        );
    }
    for i in 0..names.len() {
        for j in 0..names.len() {
            let v = m[(i, j)];
            let (x, y) = (LEFT + CELL * j as f64, TOP + CELL * i as f64);
            let _ = writeln!(
                out,
                "<rect class=\"cell\" data-row=\"{i}\" data-col=\"{j}\" data-value=\"{v}\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\"/>",
                diverging(v)
            );
            text(&mut out, x + CELL / 2.0, y + CELL / 2.0 + 4.0, "middle", &format!("{v:.2}"));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// One box of a box plot.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGroup {
    pub label: String,
    pub values: Vec<f64>,
}

struct BoxStats {
    summary: BoxSummary,
    lower_whisker: f64,
    upper_whisker: f64,
    outliers: Vec<f64>,
}

fn box_stats(values: &[f64]) -> Option<BoxStats> {
    let summary = BoxSummary::from_values(values)?;
    let lo_fence = summary.q1 - 1.5 * summary.iqr();
    let hi_fence = summary.upper_fence();
    let inside = values.iter().copied().filter(|v| (lo_fence..=hi_fence).contains(v));
    let (lower_whisker, upper_whisker) =
        inside.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let mut outliers: Vec<f64> = values.iter().copied().filter(|v| !(lo_fence..=hi_fence).contains(v)).collect();
    outliers.sort_by(f64::total_cmp);
    Some(BoxStats { summary, lower_whisker, upper_whisker, outliers })
}

/// Quartiles, Tukey whiskers and outlier counts per group.
pub fn box_groups_csv(groups: &[BoxGroup], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["group", "n", "min", "q1", "median", "q3", "max", "lower_whisker", "upper_whisker", "n_outliers"])?;
    for g in groups {
        let Some(s) = box_stats(&g.values) else { continue };
        let b = s.summary;
        let mut rec = vec![g.label.clone(), g.values.len().to_string()];
        rec.extend([b.min, b.q1, b.median, b.q3, b.max, s.lower_whisker, s.upper_whisker].map(|v| v.to_string()));
        rec.push(s.outliers.len().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Vertical box plot, one box per group, sharing a y axis.
pub fn boxplot_svg(title: &str, y_label: &str, groups: &[BoxGroup]) -> String {
    const BW: f64 = 130.0;
    const H: f64 = 320.0;
    const LEFT: f64 = 60.0;
    let stats: Vec<Option<BoxStats>> = groups.iter().map(|g| box_stats(&g.values)).collect();
    let (lo, hi) = stats
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s.summary.min), b.max(s.summary.max)));
    let (lo, hi) = if lo.is_finite() { (lo, if hi > lo { hi } else { lo + 1.0 }) } else { (0.0, 1.0) };
    let (y0, y1) = (35.0, H - 35.0);
    let py = |v: f64| y1 - (y1 - y0) * (v - lo) / (hi - lo);
    let width = LEFT + BW * groups.len().max(1) as f64 + 20.0;
    let mut out = open(width, H);
    text(&mut out, width / 2.0, 18.0, "middle", title);
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{:.1}\" transform=\"rotate(-90 14 {:.1})\" text-anchor=\"middle\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    text(&mut out, LEFT - 6.0, y0 + 4.0, "end", &short(hi));
    text(&mut out, LEFT - 6.0, y1 + 4.0, "end", &short(lo));
    let _ = writeln!(out, "<line x1=\"{LEFT}\" y1=\"{y0}\" x2=\"{LEFT}\" y2=\"{y1}\" stroke=\"#444\"/>");
    for (k, (g, s)) in groups.iter().zip(&stats).enumerate() {
        let cx = LEFT + BW * (k as f64 + 0.5);
        text(&mut out, cx, y1 + 20.0, "middle", &format!("{} (n={})", g.label, g.values.len()));
        let Some(s) = s else { continue };
        let b = s.summary;
        let _ = writeln!(
            out,
            "<g class=\"box\" data-group=\"{}\" data-q1=\"{}\" data-median=\"{}\" data-q3=\"{}\">",
            escape(&g.label),
            b.q1,
            b.median,
            b.q3
        );
        let half = BW * 0.25;
        let _ = writeln!(
            out,
            "<line x1=\"{cx:.1}\" y1=\"{:.2}\" x2=\"{cx:.1}\" y2=\"{:.2}\" stroke=\"#222\"/>",
            py(s.lower_whisker),
            py(s.upper_whisker)
        );
        let _ = writeln!(
            out,
            "<rect x=\"{:.1}\" y=\"{:.2}\" width=\"{:.1}\" height=\"{:.2}\" fill=\"#a9c4eb\" stroke=\"#222\"/>",
            cx - half,
            py(b.q3),
            2.0 * half,
            (py(b.q1) - py(b.q3)).max(0.5)
        );
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{:.2}\" x2=\"{:.1}\" y2=\"{:.2}\" stroke=\"#c0392b\" stroke-width=\"2\"/>",
            cx - half,
            py(b.median),
            cx + half,
            py(b.median)
        );
        for v in &s.outliers {
            let _ = writeln!(out, "<circle cx=\"{cx:.1}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" stroke=\"#222\"/>", py(*v));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
