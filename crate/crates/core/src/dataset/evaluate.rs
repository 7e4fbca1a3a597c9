//! Scores a directory of predicted probability maps against a manifest.
//!
//! A prediction for a truth mask `<name>.png` is the 8-bit grayscale PNG of
//! the same name in the prediction directory; gray level `g` is read as
//! probability `g / 255`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::image::decode_gray8;
use crate::scene::FeatureClass;
use crate::stats::SegmentationResult;

use super::manifest::{load_mask, DatasetManifest};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameIou {
    pub frame: u64,
    /// `None` when every class is empty in both prediction and truth.
    pub iou: Option<f64>,
    pub per_class: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IouReport {
    pub threshold: f64,
    /// Mean over frames with a defined score.
    pub mean_iou: Option<f64>,
    pub scored: usize,
    pub undefined: usize,
    pub frames: Vec<FrameIou>,
}

pub fn evaluate_predictions(manifest: &DatasetManifest, manifest_dir: &Path, predictions: &Path, threshold: f64) -> Result<IouReport> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::param(format!("threshold must lie within [0, 1], got {threshold}")));
    }
    let root = manifest.data_root(manifest_dir);
    let mut frames = Vec::with_capacity(manifest.len());
    for rec in &manifest.records {
        let mut preds = Vec::new();
        let mut truths = Vec::new();
        let mut dims = None;
        for class in FeatureClass::all() {
            let truth = load_mask(&root, rec, class)?;
            let name = Path::new(rec.mask_path(class).expect("checked by load_mask"))
                .file_name()
                .expect("mask path names a file");
            let path = predictions.join(name);
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            let gray = decode_gray8(&bytes).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            if (gray.width, gray.height) != (truth.width(), truth.height()) {
                return Err(Error::input(format!(
                    "{}: prediction is {}x{}, truth is {}x{}",
                    path.display(),
                    gray.width,
                    gray.height,
                    truth.width(),
                    truth.height()
                )));
            }
            dims = Some((truth.width(), truth.height()));
            preds.push(gray.data.iter().map(|&g| f64::from(g) / 255.0).collect());
            truths.push(truth.bits().iter().map(|&b| b != 0).collect());
        }
        let (w, h) = dims.expect("eight classes");
        let result = SegmentationResult::new(w, h, preds, truths)?;
        let per_class = result.class_ious(threshold)?;
        let defined: Vec<f64> = per_class.iter().flatten().copied().collect();
        let iou = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
        frames.push(FrameIou {
            frame: rec.frame,
            iou,
            per_class,
        });
    }
    let scored: Vec<f64> = frames.iter().filter_map(|f| f.iou).collect();
    Ok(IouReport {
        threshold,
        mean_iou: (!scored.is_empty()).then(|| scored.iter().sum::<f64>() / scored.len() as f64),
        scored: scored.len(),
        undefined: frames.len() - scored.len(),
        frames,
    })
}
