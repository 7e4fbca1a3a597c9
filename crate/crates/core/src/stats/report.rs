//! CSV, JSON and SVG renderings of a [`StatsResult`].
//!
//! Heatmaps put `r` on rows and `s` on columns, both ascending. In the
//! p-value heatmap a cell carries `class="cell significant"` iff
//! `p ≤ SIGNIFICANCE`.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

use super::summary::{CellStats, StatsResult};

pub const SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    SvgHeatmap,
    SvgIqr,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "svg-heatmap" => Ok(ReportFormat::SvgHeatmap),
            "svg-iqr" => Ok(ReportFormat::SvgIqr),
            other => Err(Error::param(format!(
                "unknown report format `{other}` (expected csv, json, svg-heatmap or svg-iqr)"
            ))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::SvgHeatmap => "svg-heatmap",
            ReportFormat::SvgIqr => "svg-iqr",
        })
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

pub fn render_csv(stats: &StatsResult) -> String {
    let mut out = String::from(
        "r,s,n,mean,sd,ci_half_width,percent_increase,p_value,q1,median,q3,whisker_lo,whisker_hi,mean_seconds,mean_epochs\n",
    );
    for c in &stats.cells {
        let q = &c.quartiles;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.r,
            c.s,
            c.n,
            c.mean,
            opt(c.sd),
            opt(c.ci_half_width),
            opt(c.percent_increase),
            opt(c.p_value),
            q.q1,
            q.median,
            q.q3,
            q.whisker_lo,
            q.whisker_hi,
            c.mean_seconds,
            c.mean_epochs
        );
    }
    out
}

pub fn render_json(stats: &StatsResult) -> String {
    serde_json::to_string_pretty(stats).expect("stats serialize") + "\n"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapValue {
    MeanIou,
    PercentIncrease,
    PValue,
}

impl HeatmapValue {
    pub const ALL: [HeatmapValue; 3] = [HeatmapValue::MeanIou, HeatmapValue::PercentIncrease, HeatmapValue::PValue];

    pub fn file_name(self) -> &'static str {
        match self {
            HeatmapValue::MeanIou => "heatmap_mean_iou.svg",
            HeatmapValue::PercentIncrease => "heatmap_percent_increase.svg",
            HeatmapValue::PValue => "heatmap_p_value.svg",
        }
    }

    fn title(self) -> &'static str {
        match self {
            HeatmapValue::MeanIou => "Mean IoU",
            HeatmapValue::PercentIncrease => "Percent increase over s = 0",
            HeatmapValue::PValue => "One-sided Welch p-value vs s = 0",
        }
    }

    fn get(self, c: &CellStats) -> Option<f64> {
        match self {
            HeatmapValue::MeanIou => Some(c.mean),
            HeatmapValue::PercentIncrease => c.percent_increase,
            HeatmapValue::PValue => c.p_value,
        }
    }

    fn label(self, v: f64) -> String {
        match self {
            HeatmapValue::MeanIou => format!("{v:.3}"),
            HeatmapValue::PercentIncrease => format!("{v:+.1}%"),
            HeatmapValue::PValue => format!("{v:.3}"),
        }
    }

    /// Fill intensity in `[0, 1]`.
    fn shade(self, v: f64, lo: f64, hi: f64) -> f64 {
        match self {
            HeatmapValue::PValue => 1.0 - v.clamp(0.0, 1.0),
            _ if hi > lo => (v - lo) / (hi - lo),
            _ => 0.5,
        }
    }
}

const CELL_W: usize = 72;
const CELL_H: usize = 32;
const MARGIN_L: usize = 64;
const MARGIN_T: usize = 56;

fn fill(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (247.0 - 200.0 * t).round() as u8;
    let g = (251.0 - 130.0 * t).round() as u8;
    let b = (255.0 - 75.0 * t).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

pub fn render_heatmap(stats: &StatsResult, value: HeatmapValue) -> String {
    let rows = stats.real_sizes();
    let cols = stats.synthetic_sizes();
    let present: Vec<f64> = stats.cells.iter().filter_map(|c| value.get(c)).collect();
    let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w = MARGIN_L + CELL_W * cols.len() + 8;
    let h = MARGIN_T + CELL_H * rows.len() + 8;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    out.push_str("<style>.cell rect{stroke:#888;stroke-width:1}.significant rect{stroke:#c00;stroke-width:3}.significant text{font-weight:bold}</style>\n");
    let _ = writeln!(out, r#"<text x="{MARGIN_L}" y="16" font-size="13">{}</text>"#, value.title());
    let _ = writeln!(out, r#"<text x="{}" y="34">s (synthetic)</text>"#, MARGIN_L);
    for (j, s) in cols.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{s}</text>"#,
            MARGIN_L + j * CELL_W + CELL_W / 2,
            MARGIN_T - 6
        );
    }
    for (i, r) in rows.iter().enumerate() {
        let y = MARGIN_T + i * CELL_H;
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">r={r}</text>"#, MARGIN_L - 6, y + CELL_H / 2 + 4);
        for (j, s) in cols.iter().enumerate() {
            let x = MARGIN_L + j * CELL_W;
            let v = stats.cell(*r, *s).and_then(|c| value.get(c));
            let (class, color, label) = match v {
                Some(v) => {
                    let sig = value == HeatmapValue::PValue && v <= SIGNIFICANCE;
                    (
                        if sig { "cell significant" } else { "cell" },
                        fill(value.shade(v, lo, hi)),
                        value.label(v),
                    )
                }
                None => ("cell empty", "#ffffff".to_owned(), String::new()),
            };
            let _ = writeln!(
                out,
                r#"<g class="{class}" data-r="{r}" data-s="{s}"><rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="{color}"/><text x="{}" y="{}" text-anchor="middle">{label}</text></g>"#,
                x + CELL_W / 2,
                y + CELL_H / 2 + 4
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// One box per cell: box from q1 to q3, a median line and whiskers.
pub fn render_iqr(stats: &StatsResult) -> String {
    const BOX_W: usize = 28;
    const STEP: usize = 40;
    const PLOT_H: f64 = 240.0;
    const TOP: f64 = 24.0;
    let w = 48 + STEP * stats.cells.len() + 8;
    let h = (TOP + PLOT_H + 48.0) as usize;
    let y = |v: f64| TOP + PLOT_H * (1.0 - v.clamp(0.0, 1.0));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(out, r#"<text x="48" y="14" font-size="12">IoU interquartile ranges</text>"#);
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(out, r#"<text x="40" y="{:.1}" text-anchor="end">{tick}</text>"#, y(tick) + 3.0);
    }
    for (k, c) in stats.cells.iter().enumerate() {
        let q = &c.quartiles;
        let cx = 48 + k * STEP + STEP / 2;
        let x0 = cx - BOX_W / 2;
        let _ = writeln!(
            out,
            concat!(
                r##"<g class="box" data-r="{}" data-s="{}" data-median="{}" data-q1="{}" data-q3="{}" data-whisker-lo="{}" data-whisker-hi="{}">"##,
                r##"<line class="whisker" x1="{cx}" y1="{wl:.2}" x2="{cx}" y2="{wh:.2}" stroke="#444"/>"##,
                r##"<rect x="{x0}" y="{b3:.2}" width="{bw}" height="{bh:.2}" fill="#cfe0f3" stroke="#444"/>"##,
                r##"<line class="median" x1="{x0}" y1="{ym:.2}" x2="{x1}" y2="{ym:.2}" stroke="#c00" stroke-width="2"/>"##,
                r##"<text x="{cx}" y="{lab}" text-anchor="middle">{}:{}</text></g>"##
            ),
            c.r,
            c.s,
            q.median,
            q.q1,
            q.q3,
            q.whisker_lo,
            q.whisker_hi,
            c.r,
            c.s,
            cx = cx,
            wl = y(q.whisker_lo),
            wh = y(q.whisker_hi),
            x0 = x0,
            x1 = x0 + BOX_W,
            b3 = y(q.q3),
            bw = BOX_W,
            bh = y(q.q1) - y(q.q3),
            ym = y(q.median),
            lab = (TOP + PLOT_H + 16.0) as usize,
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Writes the report files for `format` into `out_dir` and returns their
/// paths.
pub fn emit_reports(stats: &StatsResult, format: ReportFormat, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if stats.cells.is_empty() {
        return Err(Error::input("stats contain no cells"));
    }
    let files: Vec<(&str, String)> = match format {
        ReportFormat::Csv => vec![("stats.csv", render_csv(stats))],
        ReportFormat::Json => vec![("stats.json", render_json(stats))],
        ReportFormat::SvgHeatmap => HeatmapValue::ALL
            .iter()
            .map(|&v| (v.file_name(), render_heatmap(stats, v)))
            .collect(),
        ReportFormat::SvgIqr => vec![("iqr.svg", render_iqr(stats))],
    };
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    files
        .into_iter()
        .map(|(name, body)| {
            let path = out_dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::summary::{compute_stats, DEFAULT_ALPHA};
    use crate::stats::records::{aggregate_matrix, ExperimentRecord};

    fn stats_2x2() -> StatsResult {
        let mut recs = Vec::new();
        for (r, s, base) in [(16, 0, 0.5), (16, 32, 0.6), (32, 0, 0.55), (32, 32, 0.56)] {
            for i in 0..3u64 {
                recs.push(ExperimentRecord {
                    r,
                    s,
                    i,
                    iou: base + 0.01 * i as f64,
                    seconds: 1.0,
                    epochs: 5,
                });
            }
        }
        compute_stats(&aggregate_matrix(&recs).unwrap(), DEFAULT_ALPHA).unwrap()
    }

    #[test]
    fn csv_has_one_row_per_cell() {
        assert_eq!(render_csv(&stats_2x2()).lines().count(), 5);
    }

    #[test]
    fn highlight_threshold() {
        let mut s = stats_2x2();
        s.cells[1].p_value = Some(0.04);
        s.cells[3].p_value = Some(0.06);
        let svg = render_heatmap(&s, HeatmapValue::PValue);
        assert_eq!(svg.matches(r#"class="cell significant""#).count(), 1);
        assert!(svg.contains(r#"<g class="cell significant" data-r="16" data-s="32">"#));
        s.cells[1].p_value = Some(0.05);
        assert_eq!(render_heatmap(&s, HeatmapValue::PValue).matches("cell significant").count(), 1);
        assert_eq!(render_heatmap(&s, HeatmapValue::MeanIou).matches("cell significant").count(), 0);
    }

    #[test]
    fn unknown_format_is_parameter_error() {
        assert!(matches!("png".parse::<ReportFormat>(), Err(Error::Parameter(_))));
        assert_eq!("svg-iqr".parse::<ReportFormat>().unwrap(), ReportFormat::SvgIqr);
    }

    #[test]
    fn iqr_encodes_every_cell() {
        let svg = render_iqr(&stats_2x2());
        assert_eq!(svg.matches(r#"<g class="box""#).count(), 4);
        assert!(svg.contains(r#"data-median="0.51""#));
    }
}
