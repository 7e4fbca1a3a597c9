use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randomize::RandomizationConfig;
use crate::render::RenderSettings;
use crate::scene::{build_procedural_subject, load_obj_subject, DomainTag, GroupMap, ProceduralParams, SkyboxSource, SubjectModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SubjectSource {
    Procedural {
        #[serde(default)]
        params: ProceduralParams,
    },
    /// Wavefront OBJ whose `o`/`g` groups are mapped to feature classes.
    Obj { path: PathBuf, groups: GroupMap },
}

impl Default for SubjectSource {
    fn default() -> Self {
        SubjectSource::Procedural {
            params: ProceduralParams::default(),
        }
    }
}

impl SubjectSource {
    pub fn load(&self) -> Result<SubjectModel> {
        match self {
            SubjectSource::Procedural { params } => build_procedural_subject(params),
            SubjectSource::Obj { path, groups } => load_obj_subject(path, groups),
        }
    }
}

/// Everything `generate` needs besides count, seed and output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    #[serde(default)]
    pub subject: SubjectSource,
    pub randomization: RandomizationConfig,
    #[serde(default)]
    pub render: RenderSettings,
}

impl GeneratorConfig {
    pub fn preset(domain: DomainTag) -> GeneratorConfig {
        GeneratorConfig {
            subject: SubjectSource::default(),
            randomization: RandomizationConfig::preset(domain),
            render: RenderSettings::default(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<GeneratorConfig> {
        let cfg: GeneratorConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative OBJ and skybox image paths resolve
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<GeneratorConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = GeneratorConfig::from_json_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let SubjectSource::Obj { path: p, .. } = &mut cfg.subject {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let SkyboxSource::Image { path: p } = &mut cfg.randomization.skybox.source {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.randomization.validate()?;
        self.render.validate()
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn digest(&self) -> String {
        crate::digest::json_digest(self)
    }
}
