//! Replays the checked-in fuzz corpus, plus deterministic truncations and
//! byte flips of every seed, through the parser entry points.

use std::path::PathBuf;

use synthseg_core::dataset::{DatasetManifest, GeneratorConfig};
use synthseg_core::render::image::{decode_gray8, decode_rgb8};
use synthseg_core::render::ClassMask;
use synthseg_core::scene::{parse_obj, FeatureClass, GroupMap};
use synthseg_core::stats::{aggregate_matrix, compute_stats, parse_run_records, DEFAULT_ALPHA};

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seeds: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    seeds.sort();
    assert!(!seeds.is_empty(), "empty corpus for {target}");
    seeds
}

fn variants(seed: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![seed.to_vec()];
    let n = seed.len();
    for cut in [n / 4, n / 2, n.saturating_sub(1)] {
        out.push(seed[..cut].to_vec());
    }
    for k in 0..24 {
        let mut v = seed.to_vec();
        if !v.is_empty() {
            let i = (k * 7919 + 13) % v.len();
            v[i] ^= 1 << (k % 8);
        }
        out.push(v);
    }
    out
}

fn as_text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

fn obj(data: &[u8]) -> bool {
    let Some(text) = as_text(data) else { return false };
    let labeled: GroupMap = [FeatureClass::FRONT_DOOR, FeatureClass::MIRROR].into_iter().map(|c| (c.slug().to_owned(), c)).collect();
    let plain = parse_obj(text, &GroupMap::new()).is_ok();
    let _ = parse_obj(text, &labeled);
    plain
}

fn manifest(data: &[u8]) -> bool {
    let Some(m) = as_text(data).and_then(|t| DatasetManifest::from_jsonl_str(t).ok()) else {
        return false;
    };
    assert_eq!(DatasetManifest::from_jsonl_str(&m.to_jsonl()).unwrap(), m);
    true
}

fn run_records(data: &[u8]) -> bool {
    let Some(records) = as_text(data).and_then(|t| parse_run_records(t).ok()) else {
        return false;
    };
    if let Ok(m) = aggregate_matrix(&records) {
        let _ = compute_stats(&m, DEFAULT_ALPHA);
    }
    true
}

fn config_json(data: &[u8]) -> bool {
    let Some(cfg) = as_text(data).and_then(|t| GeneratorConfig::from_json_str(t).ok()) else {
        return false;
    };
    GeneratorConfig::from_json_str(&cfg.to_json_pretty()).unwrap();
    true
}

fn mask_png(data: &[u8]) -> bool {
    let _ = decode_gray8(data);
    let _ = decode_rgb8(data);
    match ClassMask::decode_png(FeatureClass::MIRROR, data) {
        Ok(mask) => {
            let again = ClassMask::decode_png(FeatureClass::MIRROR, &mask.encode_png().unwrap()).unwrap();
            assert_eq!(again, mask);
            true
        }
        Err(_) => false,
    }
}

fn replay(target: &str, entry: fn(&[u8]) -> bool, must_accept: &[&str]) {
    for (name, seed) in corpus(target) {
        let accepted = entry(&seed);
        assert!(accepted || !must_accept.contains(&name.as_str()), "{target}/{name} rejected");
        for v in variants(&seed) {
            entry(&v);
        }
    }
}

#[test]
fn obj_corpus() {
    replay("obj", obj, &["quad_groups.obj", "uv_faces.obj"]);
}

#[test]
fn manifest_corpus() {
    replay("manifest", manifest, &["generated.jsonl", "rebased.jsonl"]);
}

#[test]
fn run_records_corpus() {
    replay("run_records", run_records, &["figure.jsonl", "small.jsonl"]);
}

#[test]
fn config_json_corpus() {
    replay("config_json", config_json, &["preset_a.json", "preset_b.json"]);
}

#[test]
fn mask_png_corpus() {
    replay("mask_png", mask_png, &["mask_front_door.png", "mask_mirror.png"]);
}
