//! Whitted-style beauty pass: sun with shadow rays, Fresnel-weighted mirror
//! reflections of the oriented skybox, straight-through glass transmission and
//! a constant ambient term from the environment's mean radiance.

use std::f64::consts::PI;

use crate::error::Result;
use crate::math::{Ray, Vec3};
use crate::rng::{hash_words, CounterRng};
use crate::scene::{build_bvh, Bvh, Material, SceneInstance, Skybox, SubjectModel};

use super::image::BeautyImage;
use super::{render_tiles, RenderSettings};

/// Transmission hops allowed per camera path.
const MAX_HOPS: u32 = 8;
const NOISE_TAG: u64 = 0x006e_6f69_7365;

/// Scene state shared by every pass: world-space BVH, skybox and resolved
/// per-group materials.
pub(crate) struct Prepared<'a> {
    pub scene: &'a SceneInstance,
    pub bvh: Option<Bvh>,
    pub skybox: Skybox,
    pub materials: Vec<Material>,
    pub group_class: Vec<Option<u8>>,
}

impl<'a> Prepared<'a> {
    pub fn new(scene: &'a SceneInstance, subject: Option<&SubjectModel>) -> Result<Prepared<'a>> {
        scene.camera.validate()?;
        let skybox = scene.skybox()?;
        let (bvh, materials, group_class) = match subject {
            Some(subject) => (
                Some(build_bvh(subject, scene)),
                subject
                    .groups()
                    .iter()
                    .map(|g| if g.paintable { scene.paint } else { g.material })
                    .collect(),
                subject.groups().iter().map(|g| g.feature_class.map(|c| c.id())).collect(),
            ),
            None => (None, Vec::new(), Vec::new()),
        };
        Ok(Prepared {
            scene,
            bvh,
            skybox,
            materials,
            group_class,
        })
    }

    pub fn nearest(&self, ray: &Ray) -> Option<crate::scene::Hit> {
        self.bvh.as_ref().and_then(|b| b.nearest(ray))
    }

    fn trace(&self, ray: &Ray, depth: u32, hops: u32, settings: &RenderSettings, rng: &mut CounterRng) -> Vec3 {
        let Some(hit) = self.nearest(ray) else {
            return self.skybox.radiance(ray.dir);
        };
        let bvh = self.bvh.as_ref().expect("hit implies geometry");
        let tri = bvh.triangle(hit.triangle);
        let mat = self.materials[hit.group as usize];
        let d = ray.dir;

        let mut ng = tri.geometric_normal();
        if ng.dot(d) > 0.0 {
            ng = -ng;
        }
        let mut n = tri.shading_normal(hit.u, hit.v);
        if n.dot(ng) < 0.0 {
            n = -n;
        }
        let p = ray.at(hit.t);
        let eps = 1e-7 * (1.0 + p.x.abs().max(p.y.abs()).max(p.z.abs()));
        let above = p + ng * eps;

        let sun = &self.scene.sun;
        let ndl = n.dot(sun.direction);
        let direct = if ndl > 0.0 && ng.dot(sun.direction) > 0.0 && !bvh.occluded(&Ray::new(above, sun.direction), f64::INFINITY) {
            sun.irradiance * ndl
        } else {
            Vec3::ZERO
        };
        let diffuse = mat.base_color.mul_elem(direct / PI + self.skybox.ambient());

        let cos_i = (-d.dot(n)).clamp(0.0, 1.0);
        let f0 = mat.specular_reflectance;
        let fresnel = f0 + (1.0 - f0) * (1.0 - cos_i).powi(5);

        let mirror = d.reflect(n);
        let mut refl = mirror;
        if mat.roughness > 0.0 {
            let jitter = Vec3::new(rng.normal(), rng.normal(), rng.normal()).normalized() * mat.roughness;
            refl = (mirror + jitter).normalized();
        }
        if refl.dot(ng) <= 0.0 {
            refl = if mirror.dot(ng) > 0.0 { mirror } else { d.reflect(ng) };
        }
        let reflected = if mat.kind.traces_reflections() && depth + 1 < settings.max_reflection_depth && hops + 1 < MAX_HOPS {
            self.trace(&Ray::new(above, refl), depth + 1, hops + 1, settings, rng)
        } else {
            self.skybox.radiance(refl)
        };

        let body = if mat.opacity < 1.0 {
            let through = if hops + 1 < MAX_HOPS {
                self.trace(&Ray::new(p - ng * eps, d), depth, hops + 1, settings, rng)
            } else {
                self.skybox.radiance(d)
            };
            diffuse * mat.opacity + through * (1.0 - mat.opacity)
        } else {
            diffuse
        };
        body * (1.0 - fresnel) + reflected * fresnel
    }

    pub fn render(&self, settings: &RenderSettings) -> Result<BeautyImage> {
        settings.validate()?;
        let cam = &self.scene.camera;
        let seed = self.scene.seed;
        let spp = settings.samples_per_pixel;
        let inv_gamma = 1.0 / settings.gamma;
        let noise = self.scene.sensor_noise;
        let rgb = render_tiles(cam.width, cam.height, settings.tile_size, |x, y| {
            let mut sum = Vec3::ZERO;
            for s in 0..spp {
                let mut rng = CounterRng::from_key(hash_words(&[seed, u64::from(x), u64::from(y), u64::from(s)]));
                let (dx, dy) = if spp == 1 { (0.5, 0.5) } else { (rng.next_f64(), rng.next_f64()) };
                sum += self.trace(&cam.ray(x, y, dx, dy), 0, 0, settings, &mut rng);
            }
            let c = sum / f64::from(spp);
            let mut noise_rng = CounterRng::from_key(hash_words(&[seed, u64::from(x), u64::from(y), NOISE_TAG]));
            let mut out = [0u8; 3];
            for (ch, v) in out.iter_mut().zip([c.x, c.y, c.z]) {
                let mut t = (v * settings.exposure).clamp(0.0, 1.0).powf(inv_gamma);
                if noise > 0.0 {
                    t += noise * noise_rng.normal();
                }
                *ch = (t.clamp(0.0, 1.0) * 255.0).round() as u8;
            }
            out
        });
        BeautyImage::new(cam.width, cam.height, rgb.into_iter().flatten().collect())
    }
}

pub fn render_beauty(scene: &SceneInstance, subject: &SubjectModel, settings: &RenderSettings) -> Result<BeautyImage> {
    Prepared::new(scene, Some(subject))?.render(settings)
}

/// The same pass with no subject: only the oriented skybox.
pub fn render_environment(scene: &SceneInstance, settings: &RenderSettings) -> Result<BeautyImage> {
    Prepared::new(scene, None)?.render(settings)
}
