//! Batch generation, manifests, holdout/subset selection and class
//! frequency accounting.

pub mod config;
pub mod evaluate;
pub mod freq;
pub mod generate;
pub mod manifest;
pub mod split;

pub use config::{GeneratorConfig, SubjectSource};
pub use evaluate::{evaluate_predictions, FrameIou, IouReport};
pub use freq::{compute_frequency_table, FrequencyRow, FrequencyTable};
pub use generate::{generate_dataset, MANIFEST_FILE};
pub use manifest::{
    image_file_name, load_mask, mask_file_name, DatasetManifest, DatasetRole, FrameRecord, ManifestHeader, ValidationReport,
};
pub use split::{holdout_size, nested_subsets, sample_subset, split_holdout, SizeGrid, GRID_BASE};
