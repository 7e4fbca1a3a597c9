//! Segmentation metric and experiment statistics.

pub mod inference;
pub mod iou;
pub mod records;
pub mod report;
pub mod summary;

pub use inference::{
    ci_replication_rule, quantile_sorted, quartiles, t_critical, welch_ttest_one_sided, CiRule, Quartiles, Replication, WelchResult,
};
pub use iou::{mean_iou, SegmentationResult};
pub use records::{aggregate_matrix, parse_run_records, read_run_records, write_run_records, Cell, ExperimentRecord, RunMatrix};
pub use report::{emit_reports, render_csv, render_heatmap, render_iqr, render_json, HeatmapValue, ReportFormat, SIGNIFICANCE};
pub use summary::{
    compute_stats, inflection_index, p_values, percent_increase, ratio_view, CellStats, RatioPoint, RatioSeries, StatsResult,
    DEFAULT_ALPHA,
};
