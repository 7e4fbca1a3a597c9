//! Acceptance gate: runs each primary criterion, prints one PASS/FAIL line
//! per criterion and exits non-zero if any fails.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use serde::Deserialize;
use synthseg_core::dataset::{
    compute_frequency_table, generate_dataset, split_holdout, DatasetManifest, DatasetRole, FrameRecord, GeneratorConfig,
    ManifestHeader,
};
use synthseg_core::randomize::{sample_scene, RandomizationConfig};
use synthseg_core::render::{render_class_masks, render_silhouette, MaskMode, RenderSettings};
use synthseg_core::rng::CounterRng;
use synthseg_core::scene::fixtures::{brute_force_class_ids, occlusion_scene};
use synthseg_core::scene::{build_procedural_subject, DomainTag, FeatureClass, ProceduralParams, SubjectModel};
use synthseg_core::stats::{
    aggregate_matrix, compute_stats, emit_reports, mean_iou, parse_run_records, welch_ttest_one_sided, CiRule, ReportFormat,
    SegmentationResult, DEFAULT_ALPHA,
};

const BIN: &str = env!("CARGO_BIN_EXE_synthseg");
const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    }};
}

fn load<T: for<'de> Deserialize<'de>>(name: &str) -> Result<T, String> {
    let text = std::fs::read_to_string(format!("{FIXTURES}/{name}")).map_err(|e| format!("{name}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))
}

fn dir_bytes(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let e = e.map_err(|e| e.to_string())?;
        out.insert(e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn generate_cli(out: &Path, workers: &str) -> Result<(), String> {
    let status = Command::new(BIN)
        .args(["generate", "--preset", "a", "--count", "16", "--seed", "1", "--width", "256", "--height", "256"])
        .args(["--workers", workers, "--out"])
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    ensure!(status.success(), "generate exited with {status}");
    Ok(())
}

fn p1_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let runs = [("a", "1"), ("b", "1"), ("c", "8")];
    for (name, workers) in runs {
        generate_cli(&tmp.path().join(name), workers)?;
    }
    let per_run = start.elapsed().as_secs_f64() / runs.len() as f64;
    let a = dir_bytes(&tmp.path().join("a"))?;
    ensure!(a.len() == 16 * 9 + 1, "expected 145 files, found {}", a.len());
    for other in ["b", "c"] {
        let b = dir_bytes(&tmp.path().join(other))?;
        ensure!(a.keys().eq(b.keys()), "file sets differ in run {other}");
        if let Some(name) = a.keys().find(|k| a[*k] != b[*k]) {
            return Err(format!("{name} differs in run {other}"));
        }
    }
    ensure!(per_run < 120.0, "run took {per_run:.1}s");
    Ok(format!("145 files identical across 3 runs (1, 1, 8 workers); {per_run:.1}s per run at 256x256"))
}

fn procedural() -> SubjectModel {
    build_procedural_subject(&ProceduralParams::default()).expect("default procedural subject")
}

fn scene_config(index: u64, res: u32) -> RandomizationConfig {
    let mut cfg = RandomizationConfig::preset(if index.is_multiple_of(2) { DomainTag::A } else { DomainTag::B });
    cfg.camera.width = res;
    cfg.camera.height = res;
    cfg
}

fn p2_mask_modes() -> Outcome {
    let subject = procedural();
    let settings = RenderSettings::default();
    let start = Instant::now();
    let mut labeled = 0usize;
    for i in 0..100 {
        let scene = sample_scene(&scene_config(i, 128), 2024, i).map_err(|e| e.to_string())?;
        let a = render_class_masks(&scene, &subject, &settings, MaskMode::PerClassPass).map_err(|e| e.to_string())?;
        let b = render_class_masks(&scene, &subject, &settings, MaskMode::IdBuffer).map_err(|e| e.to_string())?;
        ensure!(a == b, "scene {i}: modes disagree");
        labeled += a.iter().map(|m| m.count()).sum::<usize>();
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(labeled > 0, "no labeled pixels in 100 scenes");
    ensure!(secs < 300.0, "took {secs:.1}s");
    Ok(format!("100 scenes at 128x128 identical; {labeled} labeled pixels; {secs:.1}s"))
}

fn p3_occlusion() -> Outcome {
    let settings = RenderSettings::default();
    let mut occluded = 0usize;
    for seed in 0..20 {
        let (scene, subject) = occlusion_scene(seed, 64).map_err(|e| e.to_string())?;
        let oracle = brute_force_class_ids(&scene, &subject);
        for mode in [MaskMode::PerClassPass, MaskMode::IdBuffer] {
            let masks = render_class_masks(&scene, &subject, &settings, mode).map_err(|e| e.to_string())?;
            for m in &masks {
                for (p, want) in oracle.iter().enumerate() {
                    ensure!((m.bits()[p] == 1) == (*want == Some(m.class())), "scene {seed} {mode} class {} pixel {p}", m.class());
                }
            }
        }
        let near = subject.group("near").and_then(|g| g.feature_class);
        occluded += oracle.iter().filter(|&&c| c == near).count();
    }
    ensure!(occluded > 0, "near quads never visible");
    Ok("20 scenes at 64x64, both mask modes equal the nearest-hit oracle".into())
}

/// Minimal independent PNG reader for 8-bit grayscale masks.
fn read_gray(path: &Path) -> Result<(u32, u32, Vec<u8>), String> {
    let file = std::fs::File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut reader = png::Decoder::new(std::io::BufReader::new(file)).read_info().map_err(|e| e.to_string())?;
    let mut buf = vec![0; reader.output_buffer_size().ok_or("oversized png")?];
    let info = reader.next_frame(&mut buf).map_err(|e| e.to_string())?;
    ensure!(info.color_type == png::ColorType::Grayscale && info.bit_depth == png::BitDepth::Eight, "{}: not gray8", path.display());
    buf.truncate(info.buffer_size());
    Ok((info.width, info.height, buf))
}

struct GeneratedSet {
    config: GeneratorConfig,
    seed: u64,
    dir: tempfile::TempDir,
    manifest: DatasetManifest,
}

fn generated_set(domain: DomainTag, count: u64, seed: u64) -> Result<GeneratedSet, String> {
    let mut config = GeneratorConfig::preset(domain);
    config.randomization.camera.width = 32;
    config.randomization.camera.height = 32;
    config.render.samples_per_pixel = 1;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = generate_dataset(&config, count, seed, dir.path(), None).map_err(|e| e.to_string())?;
    Ok(GeneratedSet { config, seed, dir, manifest })
}

/// Per record, the eight mask planes read back from disk.
fn read_masks(set: &GeneratedSet, record: &FrameRecord) -> Result<Vec<Vec<u8>>, String> {
    FeatureClass::all()
        .map(|c| {
            let rel = record.mask_path(c).ok_or("missing mask path")?;
            read_gray(&set.dir.path().join(rel)).map(|(_, _, d)| d)
        })
        .collect()
}

fn p4_one_hot(sets: &[&GeneratedSet]) -> Outcome {
    let mut frames = 0usize;
    let mut labeled = 0usize;
    for set in sets {
        let subject = set.config.subject.load().map_err(|e| e.to_string())?;
        for record in &set.manifest.records {
            let planes = read_masks(set, record)?;
            let scene = sample_scene(&set.config.randomization, set.seed, record.frame).map_err(|e| e.to_string())?;
            let silhouette = render_silhouette(&scene, &subject, &set.config.render).map_err(|e| e.to_string())?;
            for (p, &inside) in silhouette.iter().enumerate() {
                let on = planes.iter().filter(|pl| pl[p] != 0).count();
                ensure!(on <= 1, "frame {} pixel {p} in {on} masks", record.frame);
                ensure!(on == 0 || inside, "frame {} pixel {p} outside silhouette", record.frame);
                labeled += on;
            }
            frames += 1;
        }
    }
    ensure!(frames >= 1000, "only {frames} frames checked");
    Ok(format!("{frames} generated frames, {labeled} labeled pixels, zero violations"))
}

fn p5_iou() -> Outcome {
    let mut rng = CounterRng::from_key(0x5005);
    for k in 0..500 {
        let (w, h) = (1 + rng.below(32) as u32, 1 + rng.below(32) as u32);
        let n = (w * h) as usize;
        let classes = 1 + rng.below(8) as usize;
        let density = rng.next_f64();
        let mut plane = || (0..n).map(|_| rng.next_f64() < density).collect::<Vec<bool>>();
        let pred: Vec<Vec<bool>> = (0..classes).map(|_| plane()).collect();
        let truth: Vec<Vec<bool>> = (0..classes).map(|_| plane()).collect();
        let mut ious = Vec::new();
        for (pm, tm) in pred.iter().zip(&truth) {
            let ps: HashSet<usize> = (0..n).filter(|&i| pm[i]).collect();
            let ts: HashSet<usize> = (0..n).filter(|&i| tm[i]).collect();
            let union = ps.union(&ts).count();
            if union > 0 {
                ious.push(ps.intersection(&ts).count() as f64 / union as f64);
            }
        }
        let oracle = (!ious.is_empty()).then(|| ious.iter().sum::<f64>() / ious.len() as f64);
        let result = SegmentationResult::from_binary(w, h, pred, truth).map_err(|e| e.to_string())?;
        let got = mean_iou(&result, 0.5).ok();
        match (got, oracle) {
            (Some(a), Some(b)) => ensure!((a - b).abs() <= 1e-12, "pair {k}: {a} vs {b}"),
            (a, b) => ensure!(a == b, "pair {k}: {a:?} vs {b:?}"),
        }
    }
    let block = |x0: u32| (0..64).map(|p| (x0..x0 + 4).contains(&(p % 8)) && (2..6).contains(&(p / 8))).collect::<Vec<bool>>();
    let iou = |a: Vec<bool>, b: Vec<bool>| -> Result<f64, String> {
        mean_iou(&SegmentationResult::from_binary(8, 8, vec![a], vec![b]).map_err(|e| e.to_string())?, 0.5).map_err(|e| e.to_string())
    };
    ensure!(iou(block(0), block(0))? == 1.0, "identity");
    ensure!(iou(block(0), block(4))? == 0.0, "disjoint");
    let shifted = iou(block(0), block(2))?;
    ensure!(shifted == 1.0 / 3.0, "shifted block gave {shifted}");
    Ok("500 random pairs within 1e-12; identity 1, disjoint 0, shifted block 1/3".into())
}

#[derive(Deserialize)]
struct WelchCase {
    a: Vec<f64>,
    b: Vec<f64>,
    p: f64,
}

#[derive(Deserialize)]
struct CiCase {
    values: Vec<f64>,
    stop_n: usize,
}

fn p6_statistics() -> Outcome {
    let cases: Vec<WelchCase> = load("welch_reference.json")?;
    ensure!(cases.len() == 200, "{} Welch fixtures", cases.len());
    let mut worst = 0.0f64;
    for (k, c) in cases.iter().enumerate() {
        let r = welch_ttest_one_sided(&c.a, &c.b).map_err(|e| format!("case {k}: {e}"))?;
        worst = worst.max((r.p - c.p).abs());
        ensure!((r.p - c.p).abs() <= 1e-9, "case {k}: p {} vs {}", r.p, c.p);
    }
    let seqs: Vec<CiCase> = load("ci_replication_reference.json")?;
    ensure!(seqs.len() == 50, "{} CI sequences", seqs.len());
    let rule = CiRule {
        alpha: 0.95,
        max_rel_width: 0.05,
        min_n: 7,
        max_n: 30,
    };
    for (k, s) in seqs.iter().enumerate() {
        let got = rule.stopping_point(&s.values).map_err(|e| e.to_string())?;
        ensure!(got == Some(s.stop_n), "sequence {k}: {got:?} vs {}", s.stop_n);
    }
    Ok(format!("200 Welch p-values (max error {worst:.1e}); 50 CI stop points"))
}

#[derive(Deserialize)]
struct ExpectedCell {
    r: u64,
    s: u64,
    percent_increase: Option<f64>,
    p_value: Option<f64>,
}

fn p7_figures() -> Outcome {
    let text = std::fs::read_to_string(format!("{FIXTURES}/figure_runs.jsonl")).map_err(|e| e.to_string())?;
    let runs = parse_run_records(&text).map_err(|e| e.to_string())?;
    let stats = compute_stats(&aggregate_matrix(&runs).map_err(|e| e.to_string())?, DEFAULT_ALPHA).map_err(|e| e.to_string())?;
    let expected: Vec<ExpectedCell> = load("figure_expected.json")?;
    ensure!(stats.cells.len() == expected.len(), "cell count {} vs {}", stats.cells.len(), expected.len());
    let mut significant = Vec::new();
    for e in &expected {
        let c = stats.cell(e.r, e.s).ok_or(format!("missing cell ({}, {})", e.r, e.s))?;
        ensure!(c.percent_increase == e.percent_increase, "({}, {}) percent {:?} vs {:?}", e.r, e.s, c.percent_increase, e.percent_increase);
        match (c.p_value, e.p_value) {
            (Some(a), Some(b)) => ensure!((a - b).abs() <= 1e-9, "({}, {}) p {a} vs {b}", e.r, e.s),
            (a, b) => ensure!(a == b, "({}, {}) p {a:?} vs {b:?}", e.r, e.s),
        }
        if e.p_value.is_some_and(|p| p <= 0.05) {
            significant.push((e.r, e.s));
        }
    }
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    emit_reports(&stats, ReportFormat::SvgHeatmap, tmp.path()).map_err(|e| e.to_string())?;
    let svg = std::fs::read_to_string(tmp.path().join("heatmap_p_value.svg")).map_err(|e| e.to_string())?;
    let marked = svg.matches(r#"class="cell significant""#).count();
    ensure!(marked == significant.len(), "{marked} highlighted cells, expected {}", significant.len());
    for (r, s) in &significant {
        let tag = format!(r#"class="cell significant" data-r="{r}" data-s="{s}""#);
        ensure!(svg.contains(&tag), "cell ({r}, {s}) not highlighted");
    }
    for name in ["heatmap_mean_iou.svg", "heatmap_percent_increase.svg"] {
        let other = std::fs::read_to_string(tmp.path().join(name)).map_err(|e| e.to_string())?;
        ensure!(!other.contains(r#"class="cell significant""#), "{name} carries highlights");
    }
    Ok(format!("{} cells match; {} cells highlighted at p <= 0.05", expected.len(), significant.len()))
}

fn p8_frequency(set: &GeneratedSet) -> Outcome {
    ensure!(set.manifest.len() == 500, "{} frames", set.manifest.len());
    let table = compute_frequency_table(&set.manifest).map_err(|e| e.to_string())?;
    let mut counts = [0usize; 8];
    for record in &set.manifest.records {
        for (c, plane) in FeatureClass::all().zip(read_masks(set, record)?) {
            counts[c.index()] += usize::from(plane.iter().any(|&v| v != 0));
        }
    }
    ensure!(table.total == 500, "table total {}", table.total);
    for c in FeatureClass::all() {
        let row = table.row(c);
        ensure!(row.count == counts[c.index()], "{c}: table {} vs rescan {}", row.count, counts[c.index()]);
        ensure!(row.frequency == counts[c.index()] as f64 / 500.0, "{c}: frequency {}", row.frequency);
    }
    let report = set.manifest.validate(set.dir.path()).map_err(|e| e.to_string())?;
    ensure!(report.masks_checked == 4000, "validated {} masks", report.masks_checked);

    let records: Vec<FrameRecord> = (0..14_125).map(|f| stub_record(&set.manifest.records[0], f)).collect();
    let corpus = DatasetManifest::new(ManifestHeader::new(DatasetRole::Synthetic, "fixture"), records).map_err(|e| e.to_string())?;
    let (train, hold) = split_holdout(&corpus, 0.10, 0).map_err(|e| e.to_string())?;
    ensure!((hold.len(), train.len()) == (1_413, 12_712), "split {}/{}", hold.len(), train.len());
    let present: Vec<String> = FeatureClass::all().map(|c| format!("{}={}", c.slug(), counts[c.index()])).collect();
    Ok(format!("500-frame table equals mask rescan ({}); holdout 1413/12712", present.join(" ")))
}

fn stub_record(template: &FrameRecord, frame: u64) -> FrameRecord {
    FrameRecord {
        frame,
        ..template.clone()
    }
}

fn main() {
    let mut failed = 0;
    let mut report = |name: &str, outcome: Outcome| {
        match &outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    };
    report("P1 determinism", p1_determinism());
    report("P2 mask-mode equivalence", p2_mask_modes());
    report("P3 occlusion oracle", p3_occlusion());
    let sets = (generated_set(DomainTag::A, 500, 11), generated_set(DomainTag::B, 500, 12));
    match &sets {
        (Ok(a), Ok(b)) => {
            report("P4 one-hot integrity", p4_one_hot(&[a, b]));
            report("P5 IoU oracle", p5_iou());
            report("P6 statistics oracle", p6_statistics());
            report("P7 figure transforms", p7_figures());
            report("P8 frequency accounting", p8_frequency(a));
        }
        (a, b) => {
            let why = a.as_ref().err().or(b.as_ref().err()).cloned().unwrap_or_default();
            report("P4 one-hot integrity", Err(format!("generation failed: {why}")));
            report("P5 IoU oracle", p5_iou());
            report("P6 statistics oracle", p6_statistics());
            report("P7 figure transforms", p7_figures());
            report("P8 frequency accounting", Err(format!("generation failed: {why}")));
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all primary criteria passed");
}
