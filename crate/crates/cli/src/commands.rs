use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use synthseg_core::dataset::{
    compute_frequency_table, evaluate_predictions, generate_dataset, nested_subsets, sample_subset, split_holdout, DatasetManifest,
    GeneratorConfig, SizeGrid,
};
use synthseg_core::scene::DomainTag;
use synthseg_core::stats::{aggregate_matrix, compute_stats, emit_reports, read_run_records, ReportFormat, StatsResult};
use synthseg_core::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "synthseg", version, about = "Synthetic segmentation datasets and experiment statistics")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a labeled dataset and its manifest.
    Generate(GenerateArgs),
    /// Print a built-in generator config as JSON.
    Config(ConfigArgs),
    /// Check a manifest against the files on disk.
    Validate(ValidateArgs),
    /// Per-class example counts and frequencies.
    Freq(FreqArgs),
    /// Split a manifest into train and holdout manifests.
    Split(SplitArgs),
    /// Draw a random subset, or nested subsets over a size grid.
    Sample(SampleArgs),
    /// Score predicted masks against a manifest's truth masks.
    EvalIou(EvalIouArgs),
    /// Aggregate run records into per-cell statistics.
    Stats(StatsArgs),
    /// Render statistics as CSV, JSON or SVG.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    A,
    B,
}

impl From<Preset> for DomainTag {
    fn from(p: Preset) -> DomainTag {
        match p {
            Preset::A => DomainTag::A,
            Preset::B => DomainTag::B,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Generator config JSON (see `synthseg config`).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in domain preset, used when no --config is given.
    #[arg(long, value_enum, default_value = "a")]
    preset: Preset,
    #[arg(long)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Render threads; output does not depend on it.
    #[arg(long, env = "SYNTHSEG_WORKERS")]
    workers: Option<usize>,
    /// Override the configured image width.
    #[arg(long)]
    width: Option<u32>,
    /// Override the configured image height.
    #[arg(long)]
    height: Option<u32>,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    #[arg(long, value_enum, default_value = "a")]
    preset: Preset,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Print a one-line summary on success.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Args)]
struct FreqArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Also write the table as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving `train.jsonl` and `holdout.jsonl`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Subset size.
    #[arg(long, conflicts_with = "grid_max", required_unless_present = "grid_max")]
    size: Option<usize>,
    /// Emit nested subsets for every grid size up to this value.
    #[arg(long)]
    grid_max: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory receiving `subset_<n>.jsonl` files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalIouArgs {
    /// Manifest with the truth masks.
    #[arg(long)]
    manifest: PathBuf,
    /// Directory of predicted masks named like the truth masks.
    #[arg(long)]
    predictions: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Output JSON file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Run-record JSONL.
    #[arg(long)]
    runs: PathBuf,
    #[arg(long, default_value_t = synthseg_core::stats::DEFAULT_ALPHA)]
    alpha: f64,
    /// Output JSON file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Stats JSON written by `synthseg stats`.
    #[arg(long)]
    stats: PathBuf,
    /// csv, json, svg-heatmap or svg-iqr.
    #[arg(long)]
    format: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Config(a) => config(a),
        Command::Validate(a) => validate(a),
        Command::Freq(a) => freq(a),
        Command::Split(a) => split(a),
        Command::Sample(a) => sample(a),
        Command::EvalIou(a) => eval_iou(a),
        Command::Stats(a) => stats(a),
        Command::Report(a) => report(a),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    std::fs::write(path, body).map_err(io_err(path))
}

fn manifest_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

fn generate(a: GenerateArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => GeneratorConfig::load(path)?,
        None => GeneratorConfig::preset(a.preset.into()),
    };
    if let Some(w) = a.width {
        cfg.randomization.camera.width = w;
    }
    if let Some(h) = a.height {
        cfg.randomization.camera.height = h;
    }
    generate_dataset(&cfg, a.count, a.seed, &a.out, a.workers)?;
    Ok(())
}

fn config(a: ConfigArgs) -> Result<()> {
    let body = GeneratorConfig::preset(a.preset.into()).to_json_pretty() + "\n";
    match a.out {
        Some(path) => write_file(&path, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn validate(a: ValidateArgs) -> Result<()> {
    let m = DatasetManifest::read(&a.manifest)?;
    let report = m.validate(manifest_dir(&a.manifest))?;
    if a.verbose {
        println!("ok: {} frames, {} masks", report.frames, report.masks_checked);
    }
    Ok(())
}

fn freq(a: FreqArgs) -> Result<()> {
    let m = DatasetManifest::read(&a.manifest)?;
    let table = compute_frequency_table(&m)?;
    print!("{}", table.render_text());
    if let Some(out) = a.out {
        write_file(&out, &(serde_json::to_string_pretty(&table)? + "\n"))?;
    }
    Ok(())
}

fn split(a: SplitArgs) -> Result<()> {
    let m = DatasetManifest::read(&a.manifest)?;
    let (train, hold) = split_holdout(&m, a.fraction, a.seed)?;
    std::fs::create_dir_all(&a.out).map_err(io_err(&a.out))?;
    let src = manifest_dir(&a.manifest);
    train.rebased(src)?.write(a.out.join("train.jsonl"))?;
    hold.rebased(src)?.write(a.out.join("holdout.jsonl"))
}

fn sample(a: SampleArgs) -> Result<()> {
    let m = DatasetManifest::read(&a.manifest)?;
    let subsets = match (a.size, a.grid_max) {
        (Some(n), _) => vec![sample_subset(&m, n, a.seed)?],
        (None, Some(max)) => nested_subsets(&m, &SizeGrid::up_to(max), a.seed)?,
        (None, None) => unreachable!("clap requires one of --size and --grid-max"),
    };
    std::fs::create_dir_all(&a.out).map_err(io_err(&a.out))?;
    let src = manifest_dir(&a.manifest);
    for s in subsets {
        s.rebased(src)?.write(a.out.join(format!("subset_{}.jsonl", s.len())))?;
    }
    Ok(())
}

fn eval_iou(a: EvalIouArgs) -> Result<()> {
    let m = DatasetManifest::read(&a.manifest)?;
    let report = evaluate_predictions(&m, manifest_dir(&a.manifest), &a.predictions, a.threshold)?;
    write_file(&a.out, &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn stats(a: StatsArgs) -> Result<()> {
    let records = read_run_records(&a.runs)?;
    let result = compute_stats(&aggregate_matrix(&records)?, a.alpha)?;
    write_file(&a.out, &synthseg_core::stats::render_json(&result))
}

fn report(a: ReportArgs) -> Result<()> {
    let format: ReportFormat = a.format.parse()?;
    let text = std::fs::read_to_string(&a.stats).map_err(io_err(&a.stats))?;
    let stats = StatsResult::from_json_str(&text)?;
    emit_reports(&stats, format, &a.out)?;
    Ok(())
}
