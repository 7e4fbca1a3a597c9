use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaterialKind {
    PaintedMetal,
    Glass,
    Rubber,
    Plastic,
    Matte,
}

impl MaterialKind {
    /// Kinds whose mirror term is traced through the scene rather than
    /// looked up directly in the environment.
    pub fn traces_reflections(self) -> bool {
        matches!(self, MaterialKind::PaintedMetal | MaterialKind::Glass)
    }
}

/// Parametric surface description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub kind: MaterialKind,
    /// Linear RGB albedo.
    pub base_color: Vec3,
    pub specular_reflectance: f64,
    pub roughness: f64,
    pub opacity: f64,
}

impl Material {
    pub fn paint(color: Vec3) -> Material {
        Material {
            kind: MaterialKind::PaintedMetal,
            base_color: color,
            specular_reflectance: 0.05,
            roughness: 0.02,
            opacity: 1.0,
        }
    }

    pub fn glass() -> Material {
        Material {
            kind: MaterialKind::Glass,
            base_color: Vec3::new(0.02, 0.025, 0.03),
            specular_reflectance: 0.08,
            roughness: 0.0,
            opacity: 0.35,
        }
    }

    pub fn rubber() -> Material {
        Material {
            kind: MaterialKind::Rubber,
            base_color: Vec3::splat(0.03),
            specular_reflectance: 0.02,
            roughness: 0.8,
            opacity: 1.0,
        }
    }

    pub fn plastic(color: Vec3) -> Material {
        Material {
            kind: MaterialKind::Plastic,
            base_color: color,
            specular_reflectance: 0.04,
            roughness: 0.3,
            opacity: 1.0,
        }
    }

    pub fn matte(color: Vec3) -> Material {
        Material {
            kind: MaterialKind::Matte,
            base_color: color,
            specular_reflectance: 0.0,
            roughness: 1.0,
            opacity: 1.0,
        }
    }

    /// Perfect mirror, used for reflection fixtures.
    pub fn mirror() -> Material {
        Material {
            kind: MaterialKind::PaintedMetal,
            base_color: Vec3::ZERO,
            specular_reflectance: 1.0,
            roughness: 0.0,
            opacity: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let c = self.base_color;
        if !(unit(c.x) && unit(c.y) && unit(c.z)) {
            return Err(Error::param(format!("base_color {c:?} outside [0, 1]")));
        }
        for (name, v) in [
            ("specular_reflectance", self.specular_reflectance),
            ("roughness", self.roughness),
            ("opacity", self.opacity),
        ] {
            if !unit(v) {
                return Err(Error::param(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(())
    }
}
