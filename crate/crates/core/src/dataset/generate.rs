use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::randomize::sample_scene;
use crate::render::render_labeled_frame;
use crate::scene::{FeatureClass, SubjectModel};

use super::config::GeneratorConfig;
use super::manifest::{image_file_name, mask_file_name, DatasetManifest, DatasetRole, FrameRecord, ManifestHeader};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

/// Renders frames `0..count` into `out_dir` and writes `manifest.jsonl`
/// there. Every file is a pure function of `(config, master_seed, index)`;
/// `workers` only bounds the thread pool (`None` uses rayon's default).
pub fn generate_dataset(
    config: &GeneratorConfig,
    count: u64,
    master_seed: u64,
    out_dir: &Path,
    workers: Option<usize>,
) -> Result<DatasetManifest> {
    if count == 0 {
        return Err(Error::param("count must be at least 1"));
    }
    if workers == Some(0) {
        return Err(Error::param("workers must be at least 1"));
    }
    config.validate()?;
    let subject = config.subject.load()?;
    if !subject.has_full_registry() {
        return Err(Error::param("subject does not carry all eight feature classes"));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::param(format!("thread pool: {e}")))?;
    let records: Vec<FrameRecord> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| generate_frame(config, &subject, master_seed, i, out_dir))
            .collect::<Result<Vec<_>>>()
    })?;

    let header = ManifestHeader::new(DatasetRole::for_domain(config.randomization.domain), config.digest());
    let manifest = DatasetManifest::new(header, records)?;
    manifest.write(out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}

fn generate_frame(
    config: &GeneratorConfig,
    subject: &SubjectModel,
    master_seed: u64,
    index: u64,
    out_dir: &Path,
) -> Result<FrameRecord> {
    let mut scene = sample_scene(&config.randomization, master_seed, index)?;
    scene.config_digest = config.digest();
    let frame = render_labeled_frame(&scene, subject, &config.render)?;

    let image = image_file_name(index);
    write(out_dir, &image, &frame.beauty.encode_png()?)?;
    let mut masks = std::collections::BTreeMap::new();
    let mut present = std::collections::BTreeMap::new();
    for (class, mask) in FeatureClass::all().zip(&frame.masks) {
        let name = mask_file_name(index, class);
        write(out_dir, &name, &mask.encode_png()?)?;
        masks.insert(class.slug().to_owned(), name);
        present.insert(class.slug().to_owned(), frame.provenance.present[class.index()]);
    }
    Ok(FrameRecord {
        frame: index,
        image,
        masks,
        present,
        seed: scene.seed,
        domain: scene.domain,
    })
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
}
