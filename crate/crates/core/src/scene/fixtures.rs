//! Scripted scenes for tests and reference checks: hand-placed geometry,
//! a fixed camera and uniform or procedural skies, with no random sampling.

use crate::error::Result;
use crate::math::{Mat3, RigidTransform, Vec3};
use crate::randomize::CameraSample;
use crate::rng::CounterRng;

use super::bvh::TriangleSoup;
use super::camera::{CameraPose, PhysicalCamera};
use super::class::FeatureClass;
use super::environment::{SkyboxSource, SunLight};
use super::instance::{DomainTag, SceneInstance, Side};
use super::material::Material;
use super::subject::{Mesh, PartGroup, SubjectModel};

/// Axis-aligned rectangle in the plane `z = z`, facing +Z.
pub fn quad_z(x0: f64, x1: f64, y0: f64, y1: f64, z: f64) -> Result<Mesh> {
    Mesh::new(
        vec![Vec3::new(x0, y0, z), Vec3::new(x1, y0, z), Vec3::new(x1, y1, z), Vec3::new(x0, y1, z)],
        vec![[0, 1, 2], [0, 2, 3]],
        vec![Vec3::Z; 4],
    )
}

/// UV sphere with analytic vertex normals.
pub fn uv_sphere(center: Vec3, radius: f64, rings: u32, segments: u32) -> Result<Mesh> {
    let mut verts = Vec::new();
    let mut norms = Vec::new();
    for i in 0..=rings {
        let theta = std::f64::consts::PI * f64::from(i) / f64::from(rings);
        for j in 0..segments {
            let phi = std::f64::consts::TAU * f64::from(j) / f64::from(segments);
            let n = Vec3::new(theta.sin() * phi.cos(), theta.cos(), theta.sin() * phi.sin());
            verts.push(center + n * radius);
            norms.push(n);
        }
    }
    let idx = |i: u32, j: u32| i * segments + (j % segments);
    let mut tris = Vec::new();
    for i in 0..rings {
        for j in 0..segments {
            let (a, b, c, d) = (idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1));
            if i > 0 {
                tris.push([a, b, c]);
            }
            if i + 1 < rings {
                tris.push([b, d, c]);
            }
        }
    }
    Mesh::new(verts, tris, norms)
}

/// A labeled part for [`scripted_subject`].
#[derive(Debug, Clone)]
pub struct Part {
    pub name: String,
    pub mesh: Mesh,
    pub class: Option<FeatureClass>,
    pub material: Material,
}

impl Part {
    pub fn new(name: impl Into<String>, mesh: Mesh, class: Option<FeatureClass>, material: Material) -> Part {
        Part {
            name: name.into(),
            mesh,
            class,
            material,
        }
    }
}

/// Subject made of `parts`; every class not used by a part gets a tiny
/// triangle at `stash` so the subject carries the full registry.
pub fn scripted_subject(parts: Vec<Part>, stash: Vec3) -> Result<SubjectModel> {
    let mut meshes = Vec::new();
    let mut groups = Vec::new();
    for p in &parts {
        let mut g = PartGroup::new(p.name.clone(), p.material);
        g.feature_class = p.class;
        g.meshes.push(meshes.len());
        meshes.push(p.mesh.clone());
        groups.push(g);
    }
    for class in FeatureClass::all() {
        if parts.iter().any(|p| p.class == Some(class)) {
            continue;
        }
        let o = stash + Vec3::new(0.01 * f64::from(class.id()), 0.0, 0.0);
        meshes.push(Mesh::with_generated_normals(
            vec![o, o + Vec3::new(0.001, 0.0, 0.0), o + Vec3::new(0.0, 0.001, 0.0)],
            vec![[0, 1, 2]],
        )?);
        let mut g = PartGroup::new(format!("stash_{}", class.slug()), Material::matte(Vec3::splat(0.5)));
        g.feature_class = Some(class);
        g.meshes.push(meshes.len() - 1);
        groups.push(g);
    }
    SubjectModel::new(meshes, groups)
}

/// Square-sensor 36 mm camera at `eye` looking at `target`.
pub fn camera(eye: Vec3, target: Vec3, resolution: u32) -> Result<PhysicalCamera> {
    PhysicalCamera::new(36.0, 36.0, 36.0, resolution, resolution, CameraPose::look_at(eye, target, Vec3::Y)?)
}

/// Scene with the subject at the origin, a fixed sun and the given sky.
pub fn scripted_scene(camera: PhysicalCamera, sky: SkyboxSource, sun: SunLight, seed: u64) -> SceneInstance {
    let rig = CameraSample {
        distance: camera.pose.position.z,
        height: camera.pose.position.y,
        lateral: camera.pose.position.x,
        target_x: 0.0,
        target_y: 0.0,
    };
    SceneInstance {
        frame_index: 0,
        seed,
        domain: DomainTag::A,
        pose: RigidTransform::IDENTITY,
        yaw: 0.0,
        paint_index: 0,
        paint: Material::paint(Vec3::new(0.6, 0.1, 0.1)),
        sun_azimuth: 0.0,
        sun_elevation: 0.0,
        sun,
        skybox: sky,
        skybox_angles: [0.0; 3],
        skybox_orientation: Mat3::IDENTITY,
        side: Side::Right,
        rig,
        camera,
        sensor_noise: 0.0,
        config_digest: String::new(),
    }
}

pub fn grey_sky() -> SkyboxSource {
    SkyboxSource::Constant {
        radiance: Vec3::splat(0.3),
    }
}

/// Two overlapping parallel quads seen head-on, the nearer one partly
/// covering the farther one. Placement is drawn from `seed`.
pub fn occlusion_scene(seed: u64, resolution: u32) -> Result<(SceneInstance, SubjectModel)> {
    let mut rng = CounterRng::from_key(seed ^ 0x0cc1_u64);
    let classes: Vec<FeatureClass> = FeatureClass::all().collect();
    let near_class = classes[rng.below(8) as usize];
    let far_class = loop {
        let c = classes[rng.below(8) as usize];
        if c != near_class {
            break c;
        }
    };
    let far_z = rng.uniform(-1.5, -0.5);
    let near_z = rng.uniform(0.0, 0.8);
    let (fx, fy) = (rng.uniform(-0.6, 0.0), rng.uniform(-0.6, 0.0));
    let far = quad_z(fx, fx + rng.uniform(0.6, 1.2), fy, fy + rng.uniform(0.6, 1.2), far_z)?;
    let (nx, ny) = (rng.uniform(-0.3, 0.4), rng.uniform(-0.3, 0.4));
    let near = quad_z(nx, nx + rng.uniform(0.2, 0.6), ny, ny + rng.uniform(0.2, 0.6), near_z)?;
    let mut parts = vec![
        Part::new("far", far, Some(far_class), Material::matte(Vec3::splat(0.7))),
        Part::new("near", near, Some(near_class), Material::matte(Vec3::splat(0.4))),
    ];
    if rng.coin() {
        // an unlabeled occluder in front of both
        let (ux, uy) = (rng.uniform(-0.8, 0.6), rng.uniform(-0.8, 0.6));
        parts.push(Part::new("blocker", quad_z(ux, ux + 0.25, uy, uy + 0.25, 1.0)?, None, Material::matte(Vec3::splat(0.2))));
    }
    let subject = scripted_subject(parts, Vec3::new(0.0, 0.0, 50.0))?;
    let eye = Vec3::new(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), 4.0);
    let cam = camera(eye, Vec3::new(0.0, 0.0, -1.0), resolution)?;
    let sun = SunLight::from_angles(0.3, 0.8, Vec3::splat(2.0))?;
    Ok((scripted_scene(cam, grey_sky(), sun, seed), subject))
}

/// Per pixel, the class of the nearest hit along the pixel-center ray by
/// exhaustive intersection over every triangle (no acceleration structure).
pub fn brute_force_class_ids(scene: &SceneInstance, subject: &SubjectModel) -> Vec<Option<FeatureClass>> {
    let soup = TriangleSoup::from_subject(subject, &scene.pose);
    let cam = &scene.camera;
    let mut out = Vec::with_capacity((cam.width * cam.height) as usize);
    for y in 0..cam.height {
        for x in 0..cam.width {
            let hit = soup.brute_force(&cam.center_ray(x, y));
            out.push(hit.and_then(|h| subject.groups()[h.group as usize].feature_class));
        }
    }
    out
}
