//! JSON Lines dataset manifest.
//!
//! Line 1 is a header (`role`, `config_digest`, `classes`, optional `root`);
//! every following line is one frame record:
//!
//! ```text
//! {"frame":0,"image":"frame_000000.png","masks":{"back_door":"frame_000000_mask_back_door.png",...},
//!  "present":{"back_door":true,...},"seed":123,"domain":"A"}
//! ```
//!
//! Record paths are relative to the data root, which is the manifest's own
//! directory unless the header's `root` says otherwise.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::ClassMask;
use crate::scene::{default_registry, ClassInfo, DomainTag, FeatureClass, CLASS_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetRole {
    /// Real or pseudo-real images.
    Real,
    Synthetic,
}

impl fmt::Display for DatasetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetRole::Real => "real",
            DatasetRole::Synthetic => "synthetic",
        })
    }
}

impl DatasetRole {
    pub fn for_domain(domain: DomainTag) -> DatasetRole {
        match domain {
            DomainTag::A => DatasetRole::Synthetic,
            DomainTag::B => DatasetRole::Real,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestHeader {
    pub role: DatasetRole,
    pub config_digest: String,
    pub classes: Vec<ClassInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<PathBuf>,
}

impl ManifestHeader {
    pub fn new(role: DatasetRole, config_digest: impl Into<String>) -> Self {
        ManifestHeader {
            role,
            config_digest: config_digest.into(),
            classes: default_registry(),
            root: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub frame: u64,
    pub image: String,
    pub masks: BTreeMap<String, String>,
    pub present: BTreeMap<String, bool>,
    pub seed: u64,
    pub domain: DomainTag,
}

impl FrameRecord {
    pub fn is_present(&self, class: FeatureClass) -> bool {
        self.present.get(class.slug()).copied().unwrap_or(false)
    }

    pub fn mask_path(&self, class: FeatureClass) -> Option<&str> {
        self.masks.get(class.slug()).map(String::as_str)
    }

    fn check(&self) -> std::result::Result<(), String> {
        for c in FeatureClass::all() {
            if !self.masks.contains_key(c.slug()) {
                return Err(format!("frame {}: no mask for `{}`", self.frame, c.slug()));
            }
            if !self.present.contains_key(c.slug()) {
                return Err(format!("frame {}: no presence flag for `{}`", self.frame, c.slug()));
            }
        }
        if self.masks.len() != CLASS_COUNT || self.present.len() != CLASS_COUNT {
            return Err(format!("frame {}: unknown class key", self.frame));
        }
        Ok(())
    }
}

pub fn image_file_name(frame: u64) -> String {
    format!("frame_{frame:06}.png")
}

pub fn mask_file_name(frame: u64, class: FeatureClass) -> String {
    format!("frame_{frame:06}_mask_{}.png", class.slug())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub header: ManifestHeader,
    pub records: Vec<FrameRecord>,
}

/// Outcome of a disk re-scan.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub frames: usize,
    pub masks_checked: usize,
    /// Presence flags re-derived from the mask files, per record.
    pub rescanned: Vec<[bool; CLASS_COUNT]>,
}

impl DatasetManifest {
    pub fn new(header: ManifestHeader, records: Vec<FrameRecord>) -> Result<DatasetManifest> {
        let m = DatasetManifest { header, records };
        m.check_structure().map_err(Error::Validation)?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Same header, different records.
    pub fn with_records(&self, records: Vec<FrameRecord>) -> DatasetManifest {
        DatasetManifest {
            header: self.header.clone(),
            records,
        }
    }

    fn check_structure(&self) -> std::result::Result<(), String> {
        if self.header.classes != default_registry() {
            return Err("header class registry differs from the eight-class registry".into());
        }
        let mut seen = HashSet::new();
        for r in &self.records {
            if !seen.insert(r.frame) {
                return Err(format!("duplicate frame id {}", r.frame));
            }
            r.check()?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl_str(text: &str) -> Result<DatasetManifest> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, htext) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty manifest".into(),
        })?;
        let header: ManifestHeader = serde_json::from_str(htext).map_err(|e| Error::Parse {
            line: hline + 1,
            message: format!("header: {e}"),
        })?;
        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for (i, l) in lines {
            let rec: FrameRecord = serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            rec.check().map_err(|message| Error::Parse { line: i + 1, message })?;
            if !seen.insert(rec.frame) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("duplicate frame id {}", rec.frame),
                });
            }
            records.push(rec);
        }
        DatasetManifest::new(header, records)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<DatasetManifest> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        DatasetManifest::from_jsonl_str(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_jsonl()).map_err(|e| Error::io(path, e))
    }

    /// Directory that record paths resolve against, given the directory the
    /// manifest file lives in.
    pub fn data_root(&self, manifest_dir: &Path) -> PathBuf {
        match &self.header.root {
            Some(r) if r.is_absolute() => r.clone(),
            Some(r) => manifest_dir.join(r),
            None => manifest_dir.to_path_buf(),
        }
    }

    /// Copy whose record paths still resolve after the manifest is written to
    /// a different directory: the root becomes absolute.
    pub fn rebased(&self, manifest_dir: &Path) -> Result<DatasetManifest> {
        let root = self.data_root(manifest_dir);
        let abs = root.canonicalize().map_err(|e| Error::io(&root, e))?;
        let mut m = self.clone();
        m.header.root = Some(abs);
        Ok(m)
    }

    /// Checks that every referenced file exists, that masks are binary PNGs
    /// of the image's size, and that each presence flag equals "mask has at
    /// least one set pixel".
    pub fn validate(&self, manifest_dir: &Path) -> Result<ValidationReport> {
        self.check_structure().map_err(Error::Validation)?;
        let root = self.data_root(manifest_dir);
        let mut report = ValidationReport::default();
        for r in &self.records {
            let img_path = root.join(&r.image);
            let bytes = std::fs::read(&img_path).map_err(|e| Error::io(&img_path, e))?;
            let img = crate::render::image::decode_rgb8(&bytes)
                .map_err(|e| Error::Validation(format!("{}: {e}", img_path.display())))?;
            let mut flags = [false; CLASS_COUNT];
            for c in FeatureClass::all() {
                let mask = load_mask(&root, r, c)?;
                if (mask.width(), mask.height()) != (img.width(), img.height()) {
                    return Err(Error::Validation(format!(
                        "frame {}: `{}` mask is {}x{}, image is {}x{}",
                        r.frame,
                        c.slug(),
                        mask.width(),
                        mask.height(),
                        img.width(),
                        img.height()
                    )));
                }
                flags[c.index()] = mask.is_present();
                if flags[c.index()] != r.is_present(c) {
                    return Err(Error::Validation(format!(
                        "frame {}: presence flag for `{}` is {} but mask says {}",
                        r.frame,
                        c.slug(),
                        r.is_present(c),
                        flags[c.index()]
                    )));
                }
                report.masks_checked += 1;
            }
            report.rescanned.push(flags);
            report.frames += 1;
        }
        Ok(report)
    }
}

pub fn load_mask(root: &Path, record: &FrameRecord, class: FeatureClass) -> Result<ClassMask> {
    let rel = record
        .mask_path(class)
        .ok_or_else(|| Error::Validation(format!("frame {}: no `{}` mask", record.frame, class.slug())))?;
    let path = root.join(rel);
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    ClassMask::decode_png(class, &bytes).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}
