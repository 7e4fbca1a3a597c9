//! Sun light, equirectangular environment maps and oriented skyboxes.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{Mat3, Vec3};
use crate::rng::{hash_words, mix64};

pub const MIN_MAP_WIDTH: u32 = 8;
pub const MIN_MAP_HEIGHT: u32 = 4;

/// Directional light; `direction` points from the scene toward the sun.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunLight {
    pub direction: Vec3,
    pub irradiance: Vec3,
}

impl SunLight {
    pub fn new(direction: Vec3, irradiance: Vec3) -> Result<SunLight> {
        if (direction.length() - 1.0).abs() > 1e-9 {
            return Err(Error::param("sun direction must be unit length"));
        }
        if irradiance.x < 0.0 || irradiance.y < 0.0 || irradiance.z < 0.0 || !irradiance.is_finite() {
            return Err(Error::param("sun irradiance must be non-negative"));
        }
        Ok(SunLight {
            direction,
            irradiance,
        })
    }

    /// Azimuth measured from +Z toward +X, elevation above the horizon.
    pub fn from_angles(azimuth: f64, elevation: f64, irradiance: Vec3) -> Result<SunLight> {
        let (se, ce) = elevation.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        SunLight::new(Vec3::new(ce * sa, se, ce * ca).normalized(), irradiance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkyFamily {
    /// High-contrast multi-octave colour noise.
    Busy,
    /// Dim hall with ceiling light strips; the pseudo-real domain.
    Industrial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkyboxSource {
    Procedural {
        family: SkyFamily,
        seed: u64,
        width: u32,
        height: u32,
    },
    /// 8-bit sRGB equirectangular PNG.
    Image { path: PathBuf },
    /// Uniform radiance; handy for fixtures.
    Constant { radiance: Vec3 },
}

impl Default for SkyboxSource {
    fn default() -> Self {
        SkyboxSource::Procedural {
            family: SkyFamily::Busy,
            seed: 1,
            width: 256,
            height: 128,
        }
    }
}

/// Linear-RGB equirectangular radiance map.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentMap {
    width: u32,
    height: u32,
    texels: Vec<Vec3>,
    mean: Vec3,
}

impl EnvironmentMap {
    pub fn from_texels(width: u32, height: u32, texels: Vec<Vec3>) -> Result<EnvironmentMap> {
        if width < MIN_MAP_WIDTH || height < MIN_MAP_HEIGHT {
            return Err(Error::param(format!(
                "environment map {width}x{height} below {MIN_MAP_WIDTH}x{MIN_MAP_HEIGHT}"
            )));
        }
        if texels.len() != (width * height) as usize {
            return Err(Error::param("texel count does not match dimensions"));
        }
        // solid-angle weighted mean
        let mut sum = Vec3::ZERO;
        let mut wsum = 0.0;
        for y in 0..height {
            let theta = PI * (f64::from(y) + 0.5) / f64::from(height);
            let w = theta.sin();
            for x in 0..width {
                sum += texels[(y * width + x) as usize] * w;
                wsum += w;
            }
        }
        Ok(EnvironmentMap {
            width,
            height,
            texels,
            mean: sum / wsum,
        })
    }

    pub fn constant(radiance: Vec3) -> EnvironmentMap {
        EnvironmentMap::from_texels(MIN_MAP_WIDTH, MIN_MAP_HEIGHT, vec![radiance; (MIN_MAP_WIDTH * MIN_MAP_HEIGHT) as usize])
            .expect("minimum-size map")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn mean_radiance(&self) -> Vec3 {
        self.mean
    }

    /// Direction of the texel center at `(x, y)`.
    pub fn texel_direction(width: u32, height: u32, x: u32, y: u32) -> Vec3 {
        let phi = TAU * ((f64::from(x) + 0.5) / f64::from(width) - 0.5);
        let theta = PI * (f64::from(y) + 0.5) / f64::from(height);
        Vec3::new(theta.sin() * phi.sin(), theta.cos(), -theta.sin() * phi.cos())
    }

    /// Bilinear lookup in map-local coordinates; wraps horizontally.
    pub fn lookup(&self, dir: Vec3) -> Vec3 {
        let d = dir.normalized();
        let u = 0.5 + d.x.atan2(-d.z) / TAU;
        let v = d.y.clamp(-1.0, 1.0).acos() / PI;
        let fx = u * f64::from(self.width) - 0.5;
        let fy = (v * f64::from(self.height) - 0.5).clamp(0.0, f64::from(self.height - 1));
        let x0 = fx.floor();
        let y0 = fy.floor();
        let (tx, ty) = (fx - x0, fy - y0);
        let w = i64::from(self.width);
        let xi = |x: f64| (x as i64).rem_euclid(w) as u32;
        let y1 = (y0 as u32 + 1).min(self.height - 1);
        let at = |x: u32, y: u32| self.texels[(y * self.width + x) as usize];
        let (xa, xb, ya) = (xi(x0), xi(x0 + 1.0), y0 as u32);
        let top = at(xa, ya).lerp(at(xb, ya), tx);
        let bottom = at(xa, y1).lerp(at(xb, y1), tx);
        top.lerp(bottom, ty)
    }

    pub fn load(source: &SkyboxSource) -> Result<Arc<EnvironmentMap>> {
        static CACHE: OnceLock<Mutex<HashMap<String, Arc<EnvironmentMap>>>> = OnceLock::new();
        let key = serde_json::to_string(source)?;
        let cache = CACHE.get_or_init(Default::default);
        if let Some(map) = cache.lock().expect("skybox cache poisoned").get(&key) {
            return Ok(Arc::clone(map));
        }
        let map = Arc::new(match source {
            SkyboxSource::Procedural {
                family,
                seed,
                width,
                height,
            } => procedural_map(*family, *seed, *width, *height)?,
            SkyboxSource::Image { path } => image_map(path)?,
            SkyboxSource::Constant { radiance } => EnvironmentMap::constant(*radiance),
        });
        cache
            .lock()
            .expect("skybox cache poisoned")
            .insert(key, Arc::clone(&map));
        Ok(map)
    }
}

/// Environment map plus its orientation in world space.
#[derive(Debug, Clone)]
pub struct Skybox {
    map: Arc<EnvironmentMap>,
    orientation: Mat3,
    inverse: Mat3,
}

impl Skybox {
    pub fn new(map: Arc<EnvironmentMap>, orientation: Mat3) -> Result<Skybox> {
        if !orientation.is_rotation(1e-9) {
            return Err(Error::param("skybox orientation is not a proper rotation"));
        }
        Ok(Skybox {
            map,
            orientation,
            inverse: orientation.transpose(),
        })
    }

    pub fn orientation(&self) -> Mat3 {
        self.orientation
    }

    pub fn map(&self) -> &EnvironmentMap {
        &self.map
    }

    /// Radiance arriving from world direction `dir`.
    pub fn radiance(&self, dir: Vec3) -> Vec3 {
        self.map.lookup(self.inverse * dir)
    }

    pub fn ambient(&self) -> Vec3 {
        self.map.mean_radiance()
    }
}

fn lattice(seed: u64, x: i64, y: i64, z: i64) -> f64 {
    let h = hash_words(&[seed, x as u64, y as u64, z as u64]);
    (h >> 11) as f64 / (1u64 << 53) as f64
}

fn value_noise(seed: u64, p: Vec3) -> f64 {
    let (fx, fy, fz) = (p.x.floor(), p.y.floor(), p.z.floor());
    let (ix, iy, iz) = (fx as i64, fy as i64, fz as i64);
    let s = |t: f64| t * t * (3.0 - 2.0 * t);
    let (tx, ty, tz) = (s(p.x - fx), s(p.y - fy), s(p.z - fz));
    let mut acc = 0.0;
    for dz in 0..2 {
        for dy in 0..2 {
            for dx in 0..2 {
                let w = (if dx == 1 { tx } else { 1.0 - tx })
                    * (if dy == 1 { ty } else { 1.0 - ty })
                    * (if dz == 1 { tz } else { 1.0 - tz });
                acc += w * lattice(seed, ix + dx, iy + dy, iz + dz);
            }
        }
    }
    acc
}

/// Fractal sum normalized to `[0, 1]`.
fn fbm(seed: u64, p: Vec3, octaves: u32) -> f64 {
    let mut sum = 0.0;
    let mut amp = 1.0;
    let mut norm = 0.0;
    let mut freq = 1.0;
    for o in 0..octaves {
        sum += amp * value_noise(mix64(seed ^ u64::from(o)), p * freq);
        norm += amp;
        amp *= 0.5;
        freq *= 2.03;
    }
    sum / norm
}

fn hsv(h: f64, s: f64, v: f64) -> Vec3 {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let c = v * s;
    let x = c * (1.0 - ((h6 % 2.0) - 1.0).abs());
    let (r, g, b) = match h6 as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    Vec3::new(r + m, g + m, b + m)
}

fn busy_texel(seed: u64, d: Vec3) -> Vec3 {
    let hue = fbm(seed, d * 3.0, 4);
    let detail = fbm(seed ^ 0xb5, d * 18.0, 4);
    let fine = fbm(seed ^ 0x3c, d * 60.0, 2);
    let stripes = if (detail * 9.0).fract() < 0.5 { 1.0 } else { 0.35 };
    let value = (0.15 + 1.1 * fine) * stripes;
    hsv(hue * 2.7 + detail * 0.6, 0.55 + 0.45 * fine, value)
}

fn industrial_texel(seed: u64, d: Vec3) -> Vec3 {
    let wall = 0.18 + 0.22 * fbm(seed, d * 2.5, 4);
    let grime = 0.85 + 0.15 * fbm(seed ^ 0x77, d * 24.0, 3);
    let tint = Vec3::new(1.0, 0.95, 0.85);
    if d.y < -0.05 {
        return tint * (0.06 * grime);
    }
    let azimuth = d.x.atan2(-d.z) / TAU + 0.5;
    if d.y > 0.45 && (azimuth * 14.0).fract() < 0.12 {
        return Vec3::new(3.2, 3.1, 2.8);
    }
    let window = fbm(seed ^ 0x1f, d * 6.0, 2);
    if d.y.abs() < 0.25 && window > 0.72 {
        return Vec3::new(0.55, 0.65, 0.8) * 1.6;
    }
    tint * (wall * grime)
}

fn procedural_map(family: SkyFamily, seed: u64, width: u32, height: u32) -> Result<EnvironmentMap> {
    if width < MIN_MAP_WIDTH || height < MIN_MAP_HEIGHT {
        return Err(Error::param(format!("skybox {width}x{height} below {MIN_MAP_WIDTH}x{MIN_MAP_HEIGHT}")));
    }
    let texels = (0..height)
        .flat_map(|y| (0..width).map(move |x| (x, y)))
        .map(|(x, y)| {
            let d = EnvironmentMap::texel_direction(width, height, x, y);
            match family {
                SkyFamily::Busy => busy_texel(seed, d),
                SkyFamily::Industrial => industrial_texel(seed, d),
            }
        })
        .collect();
    EnvironmentMap::from_texels(width, height, texels)
}

fn srgb_to_linear(c: u8) -> f64 {
    let c = f64::from(c) / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn image_map(path: &std::path::Path) -> Result<EnvironmentMap> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let img = crate::render::image::decode_rgb8(&bytes)?;
    let texels = img
        .pixels()
        .chunks_exact(3)
        .map(|p| Vec3::new(srgb_to_linear(p[0]), srgb_to_linear(p[1]), srgb_to_linear(p[2])))
        .collect();
    EnvironmentMap::from_texels(img.width(), img.height(), texels)
}
