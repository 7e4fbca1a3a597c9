//! Synthetic segmentation-dataset generation and experiment statistics.
//!
//! * [`scene`]: geometry, materials, camera, lighting, BVH.
//! * [`randomize`]: deterministic scene sampling.
//! * [`render`]: beauty pass and one-hot class masks.
//! * [`dataset`]: generation, manifests, holdout/subset sampling, frequencies.
//! * [`stats`]: mean IoU, run matrices, Welch tests, replication rule, reports.

pub mod dataset;
pub mod digest;
pub mod error;
pub mod math;
pub mod randomize;
pub mod render;
pub mod rng;
pub mod scene;
pub mod stats;

pub use error::{Error, Result};
