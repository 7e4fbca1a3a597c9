//! Deterministic ray-traced beauty pass and one-hot mask passes.
//!
//! Pixels are pure functions of `(scene, subject, settings, x, y)`; tiles are
//! rendered in parallel on the ambient rayon pool and stitched in a fixed
//! order, so output never depends on the worker count.

pub mod beauty;
pub mod frame;
pub mod image;
pub mod masks;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use beauty::{render_beauty, render_environment};
pub use frame::{render_labeled_frame, LabeledFrame, Provenance};
pub use image::{BeautyImage, ClassMask};
pub use masks::{render_class_masks, render_silhouette};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskMode {
    /// Unlit black copy of the subject, one white recolour and capture per class.
    PerClassPass,
    /// One primary ray per pixel writing the nearest part's class.
    IdBuffer,
}

impl FromStr for MaskMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<MaskMode> {
        match s {
            "per-class-pass" => Ok(MaskMode::PerClassPass),
            "id-buffer" => Ok(MaskMode::IdBuffer),
            other => Err(Error::param(format!("unknown mask mode `{other}`"))),
        }
    }
}

impl fmt::Display for MaskMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaskMode::PerClassPass => "per-class-pass",
            MaskMode::IdBuffer => "id-buffer",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderSettings {
    pub samples_per_pixel: u32,
    pub max_reflection_depth: u32,
    pub exposure: f64,
    pub gamma: f64,
    pub tile_size: u32,
    pub mask_mode: MaskMode,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            samples_per_pixel: 4,
            max_reflection_depth: 2,
            exposure: 0.8,
            gamma: 2.2,
            tile_size: 32,
            mask_mode: MaskMode::PerClassPass,
        }
    }
}

impl RenderSettings {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_pixel < 1 {
            return Err(Error::param("samples_per_pixel must be at least 1"));
        }
        if self.max_reflection_depth < 1 {
            return Err(Error::param("max_reflection_depth must be at least 1"));
        }
        if self.tile_size < 8 {
            return Err(Error::param("tile_size must be at least 8"));
        }
        if !(self.exposure > 0.0 && self.exposure.is_finite()) {
            return Err(Error::param("exposure must be positive"));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::param("gamma must be positive"));
        }
        Ok(())
    }
}

/// Evaluates `shade` for every pixel, tile by tile, and returns the
/// row-major result.
pub(crate) fn render_tiles<T, F>(width: u32, height: u32, tile: u32, shade: F) -> Vec<T>
where
    T: Copy + Default + Send,
    F: Fn(u32, u32) -> T + Sync,
{
    let tiles: Vec<(u32, u32, u32, u32)> = (0..height)
        .step_by(tile as usize)
        .flat_map(|y0| {
            (0..width)
                .step_by(tile as usize)
                .map(move |x0| (x0, y0, (x0 + tile).min(width), (y0 + tile).min(height)))
        })
        .collect();
    let rendered: Vec<Vec<T>> = tiles
        .par_iter()
        .map(|&(x0, y0, x1, y1)| {
            let mut px = Vec::with_capacity(((x1 - x0) * (y1 - y0)) as usize);
            for y in y0..y1 {
                for x in x0..x1 {
                    px.push(shade(x, y));
                }
            }
            px
        })
        .collect();
    let mut out = vec![T::default(); width as usize * height as usize];
    for (&(x0, y0, x1, y1), px) in tiles.iter().zip(rendered) {
        let w = (x1 - x0) as usize;
        for (row, chunk) in (y0..y1).zip(px.chunks_exact(w)) {
            let start = row as usize * width as usize + x0 as usize;
            out[start..start + w].copy_from_slice(chunk);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiles_cover_every_pixel_once() {
        let out = render_tiles(37, 21, 8, |x, y| (x, y));
        for y in 0..21 {
            for x in 0..37 {
                assert_eq!(out[(y * 37 + x) as usize], (x, y));
            }
        }
    }

    #[test]
    fn settings_validation() {
        assert!(RenderSettings::default().validate().is_ok());
        let bad = RenderSettings {
            tile_size: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = RenderSettings {
            samples_per_pixel: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mask_mode_parse() {
        assert_eq!("id-buffer".parse::<MaskMode>().unwrap(), MaskMode::IdBuffer);
        assert!(matches!("zbuffer".parse::<MaskMode>(), Err(Error::Parameter(_))));
    }
}
