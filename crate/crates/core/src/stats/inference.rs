//! Welch's one-sided t-test, the confidence-interval replication rule and
//! quartile summaries.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Sample mean and unbiased variance.
pub fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

fn students_t(df: f64) -> StudentsT {
    StudentsT::new(0.0, 1.0, df).expect("degrees of freedom are positive")
}

/// Two-sided Student-t critical value `t_{(1+level)/2, df}`.
pub fn t_critical(level: f64, df: f64) -> f64 {
    students_t(df).inverse_cdf(0.5 + level / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
    /// `P(T ≥ t)` under the null of equal means.
    pub p: f64,
}

/// Tests `H_a: mean(a) > mean(b)` without assuming equal variances.
///
/// When both samples have zero variance, equal means give `t = 0, p = 0.5`
/// and unequal means give `t = ±∞` with `p` of 0 or 1; `df` is then
/// `n_a + n_b − 2`.
pub fn welch_ttest_one_sided(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::input(format!(
            "welch test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::input("welch test samples must be finite"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (qa, qb) = (va / na, vb / nb);
    let se2 = qa + qb;
    if se2 == 0.0 {
        let df = na + nb - 2.0;
        return Ok(if ma == mb {
            WelchResult { t: 0.0, df, p: 0.5 }
        } else if ma > mb {
            WelchResult {
                t: f64::INFINITY,
                df,
                p: 0.0,
            }
        } else {
            WelchResult {
                t: f64::NEG_INFINITY,
                df,
                p: 1.0,
            }
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    let p = students_t(df).sf(t).clamp(0.0, 1.0);
    Ok(WelchResult { t, df, p })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiRule {
    /// Two-sided confidence level.
    pub alpha: f64,
    /// Stop once the full interval width is below this fraction of the mean.
    pub max_rel_width: f64,
    pub min_n: usize,
    pub max_n: usize,
}

impl Default for CiRule {
    fn default() -> Self {
        CiRule {
            alpha: 0.95,
            max_rel_width: 0.05,
            min_n: 7,
            max_n: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Replication {
    Continue,
    /// The interval is narrow enough.
    Converged,
    /// `max_n` instances reached.
    Capped,
}

impl Replication {
    pub fn is_stop(self) -> bool {
        self != Replication::Continue
    }
}

impl CiRule {
    pub fn validate(&self) -> Result<()> {
        if self.min_n < 2 {
            return Err(Error::param("min_n must be at least 2"));
        }
        if self.max_n < self.min_n {
            return Err(Error::param("max_n must be at least min_n"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::param("alpha must lie in (0, 1)"));
        }
        if !(self.max_rel_width > 0.0 && self.max_rel_width.is_finite()) {
            return Err(Error::param("max_rel_width must be positive"));
        }
        Ok(())
    }

    /// Whether to train another instance given the IoUs observed so far.
    pub fn decide(&self, observed: &[f64]) -> Result<Replication> {
        self.validate()?;
        let n = observed.len();
        if n >= self.max_n {
            return Ok(Replication::Capped);
        }
        if n < self.min_n {
            return Ok(Replication::Continue);
        }
        let (mean, var) = mean_var(observed);
        let width = 2.0 * t_critical(self.alpha, (n - 1) as f64) * (var / n as f64).sqrt();
        if width == 0.0 {
            return Ok(Replication::Converged);
        }
        if mean <= 0.0 {
            return Err(Error::UndefinedRelativeWidth(mean));
        }
        Ok(if width < self.max_rel_width * mean {
            Replication::Converged
        } else {
            Replication::Continue
        })
    }

    /// Instances consumed when `values` arrive one at a time, or `None`
    /// if the sequence runs out first.
    pub fn stopping_point(&self, values: &[f64]) -> Result<Option<usize>> {
        for n in 1..=values.len() {
            if self.decide(&values[..n])?.is_stop() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

pub fn ci_replication_rule(observed: &[f64], alpha: f64, max_rel_width: f64, min_n: usize, max_n: usize) -> Result<Replication> {
    CiRule {
        alpha,
        max_rel_width,
        min_n,
        max_n,
    }
    .decide(observed)
}

/// Quantile with linear interpolation between order statistics
/// (position `q·(n−1)` in the sorted sample).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// Box-plot summary: quartiles by linear interpolation, whiskers at the
/// most extreme data within 1.5 IQR of the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
}

pub fn quartiles(values: &[f64]) -> Result<Quartiles> {
    if values.is_empty() {
        return Err(Error::input("quartiles of an empty sample"));
    }
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&s, 0.25);
    let q3 = quantile_sorted(&s, 0.75);
    let fence = 1.5 * (q3 - q1);
    let whisker_lo = s.iter().copied().find(|&v| v >= q1 - fence).unwrap_or(s[0]);
    let whisker_hi = s.iter().rev().copied().find(|&v| v <= q3 + fence).unwrap_or(s[s.len() - 1]);
    Ok(Quartiles {
        q1,
        median: quantile_sorted(&s, 0.5),
        q3,
        whisker_lo,
        whisker_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welch_reference_example() {
        let r = welch_ttest_one_sided(&[0.8, 0.85, 0.9], &[0.7, 0.75, 0.8]).unwrap();
        assert!((r.t - 2.449).abs() < 1e-3);
        assert!((r.df - 4.0).abs() < 1e-3);
        assert!((r.p - 0.035).abs() < 1e-3);
    }

    #[test]
    fn welch_symmetry_and_direction() {
        let a = [0.3, 0.5, 0.4];
        let r = welch_ttest_one_sided(&a, &a).unwrap();
        assert_eq!((r.t, r.p), (0.0, 0.5));
        let r = welch_ttest_one_sided(&[0.1, 0.2, 0.15], &a).unwrap();
        assert!(r.p > 0.5);
        assert!(matches!(welch_ttest_one_sided(&[0.1], &a), Err(Error::Input(_))));
        let r = welch_ttest_one_sided(&[0.5, 0.5], &[0.4, 0.4]).unwrap();
        assert_eq!(r.p, 0.0);
    }

    #[test]
    fn ci_rule_edges() {
        let rule = CiRule::default();
        assert_eq!(rule.decide(&[0.7; 7]).unwrap(), Replication::Converged);
        assert_eq!(rule.decide(&[0.7; 6]).unwrap(), Replication::Continue);
        let wide: Vec<f64> = (0..30).map(|i| if i % 2 == 0 { 0.1 } else { 0.9 }).collect();
        assert_eq!(rule.decide(&wide[..29]).unwrap(), Replication::Continue);
        assert_eq!(rule.decide(&wide).unwrap(), Replication::Capped);
        let neg = [-0.1, 0.1, -0.2, 0.05, 0.0, -0.3, 0.2];
        assert!(matches!(rule.decide(&neg), Err(Error::UndefinedRelativeWidth(_))));
        assert!(matches!(ci_replication_rule(&[0.5; 3], 0.95, 0.05, 1, 30), Err(Error::Parameter(_))));
    }

    #[test]
    fn quartiles_of_one_to_five() {
        let q = quartiles(&[5.0, 1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!((q.q1, q.median, q.q3), (2.0, 3.0, 4.0));
        assert_eq!((q.whisker_lo, q.whisker_hi), (1.0, 5.0));
        let q = quartiles(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(q.whisker_hi, 4.0);
    }
}
