use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::inference::{mean_var, quartiles, t_critical, welch_ttest_one_sided, Quartiles};
use super::records::{mean, Cell, RunMatrix};

/// `100·(mean(r,s) − mean(r,0)) / mean(r,0)` for every cell with `r > 0`.
///
/// The `r = 0` row has no baseline (a model trained on nothing) and is
/// omitted.
pub fn percent_increase(matrix: &RunMatrix) -> Result<BTreeMap<Cell, f64>> {
    let means = matrix.means();
    let mut out = BTreeMap::new();
    for (&(r, s), &m) in &means {
        if r == 0 {
            continue;
        }
        let base = *means
            .get(&(r, 0))
            .ok_or_else(|| Error::input(format!("no baseline cell (r = {r}, s = 0)")))?;
        if base == 0.0 {
            return Err(Error::UndefinedBaseline(r));
        }
        out.insert((r, s), 100.0 * (m - base) / base);
    }
    Ok(out)
}

/// One-sided Welch p-value of each `(r, s > 0)` cell against `(r, 0)`.
/// Cells where either side has fewer than two instances are omitted.
pub fn p_values(matrix: &RunMatrix) -> Result<BTreeMap<Cell, f64>> {
    let mut out = BTreeMap::new();
    for ((r, s), recs) in matrix.cells() {
        if r == 0 || s == 0 || recs.len() < 2 {
            continue;
        }
        let Some(base) = matrix.ious((r, 0)) else {
            return Err(Error::input(format!("no baseline cell (r = {r}, s = 0)")));
        };
        if base.len() < 2 {
            continue;
        }
        let a: Vec<f64> = recs.iter().map(|x| x.iou).collect();
        out.insert((r, s), welch_ttest_one_sided(&a, &base)?.p);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub r: u64,
    pub s: u64,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; absent for a single instance.
    pub sd: Option<f64>,
    /// Half-width of the two-sided Student-t interval at `StatsResult::alpha`.
    pub ci_half_width: Option<f64>,
    pub percent_increase: Option<f64>,
    pub p_value: Option<f64>,
    #[serde(flatten)]
    pub quartiles: Quartiles,
    pub mean_seconds: f64,
    pub mean_epochs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsResult {
    pub alpha: f64,
    /// Sorted by `(r, s)`.
    pub cells: Vec<CellStats>,
}

impl StatsResult {
    pub fn cell(&self, r: u64, s: u64) -> Option<&CellStats> {
        self.cells.iter().find(|c| (c.r, c.s) == (r, s))
    }

    pub fn real_sizes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.cells.iter().map(|c| c.r).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn synthetic_sizes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.cells.iter().map(|c| c.s).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn from_json_str(text: &str) -> Result<StatsResult> {
        let s: StatsResult = serde_json::from_str(text)?;
        for c in &s.cells {
            if c.n == 0 {
                return Err(Error::input(format!("cell ({}, {}) has count 0", c.r, c.s)));
            }
            if let Some(p) = c.p_value {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::input(format!("cell ({}, {}) has p-value {p}", c.r, c.s)));
                }
            }
        }
        Ok(s)
    }
}

pub const DEFAULT_ALPHA: f64 = 0.95;

pub fn compute_stats(matrix: &RunMatrix, alpha: f64) -> Result<StatsResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha must lie in (0, 1)"));
    }
    let pct = percent_increase(matrix)?;
    let pv = p_values(matrix)?;
    let mut cells = Vec::with_capacity(matrix.len());
    for ((r, s), recs) in matrix.cells() {
        let ious: Vec<f64> = recs.iter().map(|x| x.iou).collect();
        let n = ious.len();
        let (m, sd, half) = if n >= 2 {
            let (m, var) = mean_var(&ious);
            let sd = var.sqrt();
            (m, Some(sd), Some(t_critical(alpha, (n - 1) as f64) * sd / (n as f64).sqrt()))
        } else {
            (ious[0], None, None)
        };
        cells.push(CellStats {
            r,
            s,
            n,
            mean: m,
            sd,
            ci_half_width: half,
            percent_increase: pct.get(&(r, s)).copied(),
            p_value: pv.get(&(r, s)).copied(),
            quartiles: quartiles(&ious)?,
            mean_seconds: mean(recs.iter().map(|x| x.seconds)),
            mean_epochs: mean(recs.iter().map(|x| x.epochs as f64)),
        });
    }
    Ok(StatsResult { alpha, cells })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub s: u64,
    /// `s / r`.
    pub ratio: f64,
    pub mean: f64,
}

/// Mean IoU of one real-size row against the synthetic-to-real ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSeries {
    pub r: u64,
    pub points: Vec<RatioPoint>,
    /// Index of the first point after which accuracy declines.
    pub inflection: Option<usize>,
}

/// First local maximum that is followed by a decline, if any.
pub fn inflection_index(values: &[f64]) -> Option<usize> {
    values.windows(2).position(|w| w[1] < w[0])
}

pub fn ratio_view(matrix: &RunMatrix) -> Vec<RatioSeries> {
    let means = matrix.means();
    matrix
        .real_sizes()
        .into_iter()
        .filter(|&r| r > 0)
        .map(|r| {
            let points: Vec<RatioPoint> = means
                .range((r, 0)..=(r, u64::MAX))
                .map(|(&(_, s), &mean)| RatioPoint {
                    s,
                    ratio: s as f64 / r as f64,
                    mean,
                })
                .collect();
            let inflection = inflection_index(&points.iter().map(|p| p.mean).collect::<Vec<_>>());
            RatioSeries { r, points, inflection }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::records::{aggregate_matrix, ExperimentRecord};

    fn rec(r: u64, s: u64, iou: f64) -> ExperimentRecord {
        ExperimentRecord {
            r,
            s,
            i: 0,
            iou,
            seconds: 2.0,
            epochs: 10,
        }
    }

    #[test]
    fn percent_examples() {
        let m = aggregate_matrix(&[rec(16, 0, 0.6), rec(16, 2048, 0.75), rec(32, 0, 0.601), rec(32, 16, 0.598)]).unwrap();
        let p = percent_increase(&m).unwrap();
        assert!((p[&(16, 2048)] - 25.0).abs() < 1e-12);
        assert_eq!(p[&(16, 0)], 0.0);
        assert!((p[&(32, 16)] - (-0.4991680532445923)).abs() < 1e-12);
    }

    #[test]
    fn percent_errors() {
        let m = aggregate_matrix(&[rec(16, 32, 0.6)]).unwrap();
        assert!(matches!(percent_increase(&m), Err(Error::Input(_))));
        let m = aggregate_matrix(&[rec(16, 0, 0.0), rec(16, 32, 0.6)]).unwrap();
        assert!(matches!(percent_increase(&m), Err(Error::UndefinedBaseline(16))));
        let m = aggregate_matrix(&[rec(0, 32, 0.6)]).unwrap();
        assert!(percent_increase(&m).unwrap().is_empty());
    }

    #[test]
    fn ratio_view_excludes_zero_row() {
        let m = aggregate_matrix(&[rec(0, 16, 0.1), rec(16, 0, 0.5), rec(16, 256, 0.7), rec(16, 2048, 0.6)]).unwrap();
        let v = ratio_view(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].points[2].ratio, 128.0);
        assert_eq!(v[0].inflection, Some(1));
    }

    #[test]
    fn inflection_fixture() {
        assert_eq!(inflection_index(&[0.5, 0.6, 0.7, 0.72, 0.69, 0.6]), Some(3));
        assert_eq!(inflection_index(&[0.5, 0.6, 0.7]), None);
        assert_eq!(inflection_index(&[0.7, 0.6]), Some(0));
    }

    #[test]
    fn single_instance_cell() {
        let m = aggregate_matrix(&[rec(16, 0, 0.5)]).unwrap();
        let s = compute_stats(&m, DEFAULT_ALPHA).unwrap();
        assert_eq!(s.cells[0].sd, None);
        assert_eq!(s.cells[0].p_value, None);
        assert_eq!(s.cells[0].mean_epochs, 10.0);
    }
}
