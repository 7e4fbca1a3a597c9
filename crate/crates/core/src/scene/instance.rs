use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::math::{Mat3, RigidTransform};

use super::camera::PhysicalCamera;
use super::environment::{EnvironmentMap, Skybox, SkyboxSource, SunLight};
use super::material::Material;

/// Which synthetic domain a scene was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainTag {
    /// Synthetic.
    A,
    /// Pseudo-real.
    B,
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainTag::A => "A",
            DomainTag::B => "B",
        })
    }
}

/// Which side of the subject the camera images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One fully randomized scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneInstance {
    pub frame_index: u64,
    /// Per-frame seed driving pixel sampling and sensor noise.
    pub seed: u64,
    pub domain: DomainTag,
    pub pose: RigidTransform,
    pub yaw: f64,
    pub paint_index: usize,
    pub paint: Material,
    pub sun_azimuth: f64,
    pub sun_elevation: f64,
    pub sun: SunLight,
    pub skybox: SkyboxSource,
    /// Yaw, pitch, roll in radians.
    pub skybox_angles: [f64; 3],
    pub skybox_orientation: Mat3,
    pub side: Side,
    /// Camera-rig draws before side mirroring.
    pub rig: crate::randomize::CameraSample,
    pub camera: PhysicalCamera,
    /// Standard deviation of additive sensor noise, in 8-bit code values / 255.
    pub sensor_noise: f64,
    /// Digest of the randomization config this scene was drawn from.
    pub config_digest: String,
}

impl SceneInstance {
    pub fn skybox(&self) -> Result<Skybox> {
        Skybox::new(EnvironmentMap::load(&self.skybox)?, self.skybox_orientation)
    }

    /// SHA-256 over the canonical JSON form.
    pub fn digest(&self) -> String {
        crate::digest::json_digest(self)
    }
}
