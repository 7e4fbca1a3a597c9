//! Per-image mean intersection-over-union with uniform class weighting.

use crate::error::{Error, Result};

/// Paired predictions and ground truth for one image, one plane per class.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    width: u32,
    height: u32,
    /// Per class, row-major probabilities in `[0, 1]`.
    predictions: Vec<Vec<f64>>,
    truths: Vec<Vec<bool>>,
}

impl SegmentationResult {
    pub fn new(width: u32, height: u32, predictions: Vec<Vec<f64>>, truths: Vec<Vec<bool>>) -> Result<Self> {
        if predictions.len() != truths.len() {
            return Err(Error::input(format!(
                "{} prediction planes but {} truth planes",
                predictions.len(),
                truths.len()
            )));
        }
        let n = width as usize * height as usize;
        for (c, (p, t)) in predictions.iter().zip(&truths).enumerate() {
            if p.len() != n || t.len() != n {
                return Err(Error::input(format!(
                    "class {c}: expected {n} pixels, got prediction {} and truth {}",
                    p.len(),
                    t.len()
                )));
            }
            if let Some(v) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::input(format!("class {c}: probability {v} outside [0, 1]")));
            }
        }
        Ok(SegmentationResult {
            width,
            height,
            predictions,
            truths,
        })
    }

    /// Binary prediction planes.
    pub fn from_binary(width: u32, height: u32, predictions: Vec<Vec<bool>>, truths: Vec<Vec<bool>>) -> Result<Self> {
        let p = predictions
            .into_iter()
            .map(|plane| plane.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect())
            .collect();
        SegmentationResult::new(width, height, p, truths)
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn class_count(&self) -> usize {
        self.truths.len()
    }

    /// Per class: `|P∩T| / |P∪T|` with `P = {p ≥ threshold}`, or `None`
    /// when the union is empty.
    pub fn class_ious(&self, threshold: f64) -> Result<Vec<Option<f64>>> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::param(format!("threshold must lie within [0, 1], got {threshold}")));
        }
        Ok(self
            .predictions
            .iter()
            .zip(&self.truths)
            .map(|(p, t)| {
                let (mut inter, mut union) = (0u64, 0u64);
                for (&pv, &tv) in p.iter().zip(t) {
                    let pb = pv >= threshold;
                    inter += u64::from(pb && tv);
                    union += u64::from(pb || tv);
                }
                (union > 0).then(|| inter as f64 / union as f64)
            })
            .collect())
    }
}

/// Unweighted mean over classes whose prediction/truth union is nonempty.
pub fn mean_iou(result: &SegmentationResult, threshold: f64) -> Result<f64> {
    let ious: Vec<f64> = result.class_ious(threshold)?.into_iter().flatten().collect();
    if ious.is_empty() {
        return Err(Error::UndefinedMetric("every class is empty in both prediction and truth".into()));
    }
    Ok(ious.iter().sum::<f64>() / ious.len() as f64)
}
