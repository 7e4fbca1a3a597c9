//! Deterministic sampling of randomized scenes.
//!
//! Each attribute group (pose, paint, sun, skybox, camera, side) draws from
//! its own counter-based stream keyed by `(master seed, frame index, tag)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{Mat3, RigidTransform, Vec3};
use crate::rng::{hash_words, CounterRng, StreamTag};
use crate::scene::{
    CameraPose, DomainTag, Material, PhysicalCamera, SceneInstance, Side, SkyFamily, SkyboxSource, SunLight,
};

/// Closed interval, serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for Interval {
    fn from(a: [f64; 2]) -> Self {
        Interval { lo: a[0], hi: a[1] }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub const fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    fn check(&self, name: &str) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::param(format!("{name}: invalid range [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut CounterRng) -> f64 {
        rng.uniform(self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseRanges {
    pub translation_min: Vec3,
    pub translation_max: Vec3,
    /// Rotation about +Y.
    pub yaw: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SunRanges {
    pub azimuth: Interval,
    pub elevation: Interval,
    pub irradiance: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkyboxRanges {
    pub source: SkyboxSource,
    pub yaw: Interval,
    pub pitch: Interval,
    pub roll: Interval,
}

/// Camera rig. Before side selection the camera sits on the +Z side at
/// `(lateral, height, distance)` and looks at `(target_x, target_y, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraRanges {
    pub focal_length_mm: f64,
    pub sensor_width_mm: f64,
    pub sensor_height_mm: f64,
    pub width: u32,
    pub height: u32,
    pub distance: Interval,
    pub height_m: Interval,
    pub lateral: Interval,
    pub target_x: Interval,
    pub target_y: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SidePolicy {
    Both,
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomizationConfig {
    pub domain: DomainTag,
    pub pose: PoseRanges,
    pub palette: Vec<Material>,
    pub sun: SunRanges,
    pub skybox: SkyboxRanges,
    pub camera: CameraRanges,
    pub sides: SidePolicy,
    /// Additive sensor noise standard deviation on the `[0, 1]` output scale.
    #[serde(default)]
    pub sensor_noise: f64,
}

/// Raw camera-rig draws, kept for auditing range containment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraSample {
    pub distance: f64,
    pub height: f64,
    pub lateral: f64,
    pub target_x: f64,
    pub target_y: f64,
}

impl RandomizationConfig {
    /// Built-in preset for domain A (synthetic) or B (pseudo-real).
    pub fn preset(domain: DomainTag) -> RandomizationConfig {
        let full = Interval::new(0.0, TAU);
        match domain {
            DomainTag::A => RandomizationConfig {
                domain,
                pose: PoseRanges {
                    translation_min: Vec3::new(-1.0, 0.0, -0.4),
                    translation_max: Vec3::new(1.0, 0.0, 0.4),
                    yaw: Interval::new(-0.25, 0.25),
                },
                palette: [
                    Vec3::new(0.85, 0.85, 0.85),
                    Vec3::new(0.02, 0.02, 0.02),
                    Vec3::new(0.55, 0.03, 0.03),
                    Vec3::new(0.04, 0.12, 0.45),
                    Vec3::new(0.45, 0.46, 0.48),
                    Vec3::new(0.12, 0.25, 0.15),
                ]
                .into_iter()
                .map(Material::paint)
                .collect(),
                sun: SunRanges {
                    azimuth: full,
                    elevation: Interval::new(0.15, 1.35),
                    irradiance: Vec3::new(3.0, 2.9, 2.7),
                },
                skybox: SkyboxRanges {
                    source: SkyboxSource::Procedural {
                        family: SkyFamily::Busy,
                        seed: 1,
                        width: 256,
                        height: 128,
                    },
                    yaw: full,
                    pitch: full,
                    roll: full,
                },
                camera: CameraRanges {
                    focal_length_mm: 24.0,
                    sensor_width_mm: 24.0,
                    sensor_height_mm: 24.0,
                    width: 256,
                    height: 256,
                    distance: Interval::new(3.6, 5.5),
                    height_m: Interval::new(0.9, 1.7),
                    lateral: Interval::new(-0.8, 0.8),
                    target_x: Interval::new(-0.6, 0.6),
                    target_y: Interval::new(0.6, 0.9),
                },
                sides: SidePolicy::Both,
                sensor_noise: 0.0,
            },
            DomainTag::B => {
                let mut c = RandomizationConfig::preset(DomainTag::A);
                c.domain = DomainTag::B;
                c.palette = [
                    Vec3::new(0.7, 0.72, 0.75),
                    Vec3::new(0.05, 0.05, 0.06),
                    Vec3::new(0.35, 0.08, 0.05),
                    Vec3::new(0.1, 0.18, 0.3),
                    Vec3::new(0.3, 0.3, 0.28),
                ]
                .into_iter()
                .map(|c| Material {
                    roughness: 0.12,
                    ..Material::paint(c)
                })
                .collect();
                c.skybox.source = SkyboxSource::Procedural {
                    family: SkyFamily::Industrial,
                    seed: 2,
                    width: 256,
                    height: 128,
                };
                // production hall: lights overhead, camera level, wider travel
                c.skybox.pitch = Interval::new(-0.15, 0.15);
                c.skybox.roll = Interval::new(-0.15, 0.15);
                c.sun.elevation = Interval::new(0.6, 1.45);
                c.sun.irradiance = Vec3::new(1.6, 1.55, 1.45);
                c.camera.lateral = Interval::new(-1.2, 1.2);
                c.sensor_noise = 0.02;
                c
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.pose;
        for axis in 0..3 {
            Interval::new(p.translation_min[axis], p.translation_max[axis]).check("pose.translation")?;
        }
        p.yaw.check("pose.yaw")?;
        if self.palette.is_empty() {
            return Err(Error::param("palette is empty"));
        }
        for m in &self.palette {
            m.validate()?;
        }
        self.sun.azimuth.check("sun.azimuth")?;
        self.sun.elevation.check("sun.elevation")?;
        if self.sun.elevation.lo < 0.0 || self.sun.elevation.hi > FRAC_PI_2 {
            return Err(Error::param("sun.elevation must lie within [0, pi/2]"));
        }
        let irr = self.sun.irradiance;
        if irr.x < 0.0 || irr.y < 0.0 || irr.z < 0.0 || !irr.is_finite() {
            return Err(Error::param("sun.irradiance must be non-negative"));
        }
        self.skybox.yaw.check("skybox.yaw")?;
        self.skybox.pitch.check("skybox.pitch")?;
        self.skybox.roll.check("skybox.roll")?;
        let c = &self.camera;
        for (name, r) in [
            ("camera.distance", c.distance),
            ("camera.height_m", c.height_m),
            ("camera.lateral", c.lateral),
            ("camera.target_x", c.target_x),
            ("camera.target_y", c.target_y),
        ] {
            r.check(name)?;
        }
        if c.distance.lo <= 0.0 {
            return Err(Error::param("camera.distance must be positive"));
        }
        // Validate lens and sensor through the camera type itself.
        let probe = CameraPose::look_at(Vec3::new(0.0, 0.0, 1.0), Vec3::ZERO, Vec3::Y)?;
        PhysicalCamera::new(c.focal_length_mm, c.sensor_width_mm, c.sensor_height_mm, c.width, c.height, probe)?;
        if !(0.0..=1.0).contains(&self.sensor_noise) {
            return Err(Error::param("sensor_noise must lie within [0, 1]"));
        }
        Ok(())
    }

    pub fn digest(&self) -> String {
        crate::digest::json_digest(self)
    }
}

/// Per-frame seed used for pixel sampling.
pub fn frame_seed(master_seed: u64, frame_index: u64) -> u64 {
    hash_words(&[master_seed, frame_index, StreamTag::SceneSeed as u64])
}

pub fn horizontal_side(config: &RandomizationConfig, master_seed: u64, frame_index: u64) -> Side {
    match config.sides {
        SidePolicy::Left => Side::Left,
        SidePolicy::Right => Side::Right,
        SidePolicy::Both => {
            let mut rng = CounterRng::for_stream(master_seed, frame_index, StreamTag::Side);
            if rng.coin() {
                Side::Left
            } else {
                Side::Right
            }
        }
    }
}

/// Draws the camera-rig parameters for a frame.
pub fn sample_camera_rig(config: &RandomizationConfig, master_seed: u64, frame_index: u64) -> CameraSample {
    let c = &config.camera;
    let mut rng = CounterRng::for_stream(master_seed, frame_index, StreamTag::Camera);
    CameraSample {
        distance: c.distance.sample(&mut rng),
        height: c.height_m.sample(&mut rng),
        lateral: c.lateral.sample(&mut rng),
        target_x: c.target_x.sample(&mut rng),
        target_y: c.target_y.sample(&mut rng),
    }
}

pub fn sample_scene(config: &RandomizationConfig, master_seed: u64, frame_index: u64) -> Result<SceneInstance> {
    config.validate()?;
    let stream = |tag| CounterRng::for_stream(master_seed, frame_index, tag);

    let mut rng = stream(StreamTag::Pose);
    let p = &config.pose;
    let translation = Vec3::new(
        rng.uniform(p.translation_min.x, p.translation_max.x),
        rng.uniform(p.translation_min.y, p.translation_max.y),
        rng.uniform(p.translation_min.z, p.translation_max.z),
    );
    let yaw = p.yaw.sample(&mut rng);
    let pose = RigidTransform::new(Mat3::rotation_y(yaw), translation);

    let paint_index = stream(StreamTag::Paint).below(config.palette.len() as u64) as usize;

    let mut rng = stream(StreamTag::Sun);
    let sun_azimuth = config.sun.azimuth.sample(&mut rng);
    let sun_elevation = config.sun.elevation.sample(&mut rng);
    let sun = SunLight::from_angles(sun_azimuth, sun_elevation, config.sun.irradiance)?;

    let mut rng = stream(StreamTag::Skybox);
    let s = &config.skybox;
    let angles = [s.yaw.sample(&mut rng), s.pitch.sample(&mut rng), s.roll.sample(&mut rng)];
    let skybox_orientation = Mat3::from_euler_yxz(angles[0], angles[1], angles[2]);

    let rig = sample_camera_rig(config, master_seed, frame_index);
    let c = &config.camera;
    let mut cam_pose = CameraPose::look_at(
        Vec3::new(rig.lateral, rig.height, rig.distance),
        Vec3::new(rig.target_x, rig.target_y, 0.0),
        Vec3::Y,
    )?;
    let side = horizontal_side(config, master_seed, frame_index);
    if side == Side::Left {
        cam_pose = cam_pose.mirrored(pose.translation, pose.rotation * Vec3::Z);
    }
    let camera = PhysicalCamera::new(c.focal_length_mm, c.sensor_width_mm, c.sensor_height_mm, c.width, c.height, cam_pose)?;

    Ok(SceneInstance {
        frame_index,
        seed: frame_seed(master_seed, frame_index),
        domain: config.domain,
        pose,
        yaw,
        paint_index,
        paint: config.palette[paint_index],
        sun_azimuth,
        sun_elevation,
        sun,
        skybox: s.source.clone(),
        skybox_angles: angles,
        skybox_orientation,
        side,
        rig,
        camera,
        sensor_noise: config.sensor_noise,
        config_digest: config.digest(),
    })
}
