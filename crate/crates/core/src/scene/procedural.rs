//! Procedural vehicle-like subject built from subdivided boxes.
//!
//! Local frame: +X toward the front, +Y up, +Z toward the right-hand side;
//! the ground plane is `y = 0`. Every side-mounted part exists on both sides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{Aabb, Vec3};

use super::class::FeatureClass;
use super::material::Material;
use super::subject::{Mesh, PartGroup, SubjectModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProceduralParams {
    pub length: f64,
    pub width: f64,
    pub height: f64,
    /// Each box face is split into `(detail + 1)²` quads.
    pub detail: u32,
}

impl Default for ProceduralParams {
    fn default() -> Self {
        ProceduralParams {
            length: 4.5,
            width: 1.8,
            height: 1.45,
            detail: 1,
        }
    }
}

/// Closed box with outward per-face normals.
pub fn box_mesh(min: Vec3, max: Vec3, segments: u32) -> Result<Mesh> {
    let n = segments.max(1);
    let mut verts = Vec::new();
    let mut norms = Vec::new();
    let mut tris = Vec::new();
    let e = max - min;
    // (normal, origin, u axis, v axis) with u × v = normal
    let faces = [
        (Vec3::X, Vec3::new(max.x, min.y, max.z), Vec3::new(0.0, 0.0, -e.z), Vec3::new(0.0, e.y, 0.0)),
        (-Vec3::X, Vec3::new(min.x, min.y, min.z), Vec3::new(0.0, 0.0, e.z), Vec3::new(0.0, e.y, 0.0)),
        (Vec3::Y, Vec3::new(min.x, max.y, max.z), Vec3::new(e.x, 0.0, 0.0), Vec3::new(0.0, 0.0, -e.z)),
        (-Vec3::Y, Vec3::new(min.x, min.y, min.z), Vec3::new(e.x, 0.0, 0.0), Vec3::new(0.0, 0.0, e.z)),
        (Vec3::Z, Vec3::new(min.x, min.y, max.z), Vec3::new(e.x, 0.0, 0.0), Vec3::new(0.0, e.y, 0.0)),
        (-Vec3::Z, Vec3::new(max.x, min.y, min.z), Vec3::new(-e.x, 0.0, 0.0), Vec3::new(0.0, e.y, 0.0)),
    ];
    for (normal, origin, u, v) in faces {
        let base = verts.len() as u32;
        for j in 0..=n {
            for i in 0..=n {
                let p = origin + u * (f64::from(i) / f64::from(n)) + v * (f64::from(j) / f64::from(n));
                verts.push(p);
                norms.push(normal);
            }
        }
        let row = n + 1;
        for j in 0..n {
            for i in 0..n {
                let a = base + j * row + i;
                let b = a + 1;
                let c = a + row;
                let d = c + 1;
                tris.push([a, b, d]);
                tris.push([a, d, c]);
            }
        }
    }
    Mesh::new(verts, tris, norms)
}

struct Builder {
    meshes: Vec<Mesh>,
    groups: Vec<PartGroup>,
    segments: u32,
}

impl Builder {
    fn part(
        &mut self,
        name: &str,
        class: Option<FeatureClass>,
        material: Material,
        paintable: bool,
        boxes: &[(Vec3, Vec3)],
    ) -> Result<()> {
        let mut group = PartGroup::new(name, material);
        group.feature_class = class;
        group.paintable = paintable;
        for &(a, b) in boxes {
            self.meshes.push(box_mesh(a.min(b), a.max(b), self.segments)?);
            group.meshes.push(self.meshes.len() - 1);
        }
        self.groups.push(group);
        Ok(())
    }

    /// Same box on the right (+Z) and mirrored onto the left side.
    fn both_sides(&mut self, name: &str, class: Option<FeatureClass>, material: Material, paintable: bool, right: (Vec3, Vec3)) -> Result<()> {
        let mirror = |v: Vec3| Vec3::new(v.x, v.y, -v.z);
        self.part(name, class, material, paintable, &[right, (mirror(right.0), mirror(right.1))])
    }
}

pub fn build_procedural_subject(params: &ProceduralParams) -> Result<SubjectModel> {
    for (name, v) in [("length", params.length), ("width", params.width), ("height", params.height)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(format!("{name} must be positive, got {v}")));
        }
    }
    let (l, w, h) = (params.length, params.width, params.height);
    let mut b = Builder {
        meshes: Vec::new(),
        groups: Vec::new(),
        segments: params.detail + 1,
    };
    let v = Vec3::new;
    let paint = Material::paint(Vec3::splat(0.5));
    let trim = Material::plastic(Vec3::splat(0.05));

    let sill = 0.21 * h;
    let belt = 0.655 * h;
    let half_w = 0.5 * w;
    let cabin_w = 0.42 * w;
    let (cabin_rear, cabin_front) = (-0.30 * l, 0.22 * l);
    let skin = 0.01 * w;

    b.part("body", None, paint, true, &[(v(-0.5 * l, sill, -half_w), v(0.5 * l, belt, half_w))])?;
    b.part("cabin", None, paint, true, &[(v(cabin_rear, belt, -cabin_w), v(cabin_front, h, cabin_w))])?;
    let wheel_r = 0.215 * h;
    let wheels: Vec<(Vec3, Vec3)> = [0.32 * l, -0.32 * l]
        .iter()
        .flat_map(|&x| {
            [1.0, -1.0].map(|s: f64| {
                let z0 = s * (half_w - 0.14 * w);
                let z1 = s * (half_w - 0.01 * w);
                (v(x - wheel_r, 0.0, z0), v(x + wheel_r, 2.0 * wheel_r, z1))
            })
        })
        .collect();
    b.part("wheels", None, Material::rubber(), false, &wheels)?;
    b.part(
        "windshield",
        None,
        Material::glass(),
        false,
        &[(v(cabin_front, belt + 0.03 * h, -0.9 * cabin_w), v(cabin_front + skin, h - 0.04 * h, 0.9 * cabin_w))],
    )?;

    let door_top = belt - 0.02 * h;
    let door_bottom = sill + 0.03 * h;
    let side = |x0: f64, x1: f64, y0: f64, y1: f64, z: f64, depth: f64| (v(x0, y0, z), v(x1, y1, z + depth));
    b.both_sides("front_door", Some(FeatureClass::FRONT_DOOR), paint, true, side(0.005 * l, 0.21 * l, door_bottom, door_top, half_w, skin))?;
    b.both_sides("back_door", Some(FeatureClass::BACK_DOOR), paint, true, side(-0.25 * l, -0.005 * l, door_bottom, door_top, half_w, skin))?;

    let win_bottom = belt + 0.04 * h;
    let win_top = h - 0.06 * h;
    b.both_sides("front_window", Some(FeatureClass::FRONT_WINDOW), Material::glass(), false, side(0.01 * l, 0.20 * l, win_bottom, win_top, cabin_w, skin))?;
    b.both_sides("back_window", Some(FeatureClass::BACK_WINDOW), Material::glass(), false, side(-0.27 * l, -0.01 * l, win_bottom, win_top, cabin_w, skin))?;
    b.part(
        "rear_window",
        Some(FeatureClass::REAR_WINDOW),
        Material::glass(),
        false,
        &[(v(cabin_rear - skin, win_bottom, -0.85 * cabin_w), v(cabin_rear, win_top, 0.85 * cabin_w))],
    )?;

    let handle_y = door_top - 0.09 * h;
    let handle_z = half_w + skin;
    let handle = |x_rear: f64| (v(x_rear, handle_y, handle_z), v(x_rear + 0.027 * l, handle_y + 0.025 * h, handle_z + 0.012 * w));
    let mirror_z = |v3: Vec3| Vec3::new(v3.x, v3.y, -v3.z);
    let (fh, bh) = (handle(0.03 * l), handle(-0.22 * l));
    b.part(
        "door_handles",
        Some(FeatureClass::DOOR_HANDLE),
        Material::plastic(Vec3::splat(0.65)),
        false,
        &[fh, bh, (mirror_z(fh.0), mirror_z(fh.1)), (mirror_z(bh.0), mirror_z(bh.1))],
    )?;

    // Mirrors stick out past the body and sit at the front of the cabin.
    b.both_sides(
        "side_mirror",
        Some(FeatureClass::MIRROR),
        paint,
        true,
        (v(cabin_front - 0.035 * l, belt, half_w + 0.01 * w), v(cabin_front - 0.005 * l, belt + 0.08 * h, half_w + 0.11 * w)),
    )?;
    // Tail lights at the rear extreme, wrapping slightly onto the sides.
    b.both_sides(
        "tail_light",
        Some(FeatureClass::TAIL_LIGHT),
        Material::plastic(Vec3::new(0.55, 0.02, 0.02)),
        false,
        (v(-0.5 * l - skin, belt - 0.13 * h, 0.28 * w), v(-0.5 * l + 0.02 * l, belt - 0.03 * h, half_w + skin)),
    )?;
    b.part(
        "bumpers",
        None,
        trim,
        false,
        &[
            (v(0.5 * l, sill - 0.02 * h, -0.47 * w), v(0.5 * l + 0.02 * l, sill + 0.1 * h, 0.47 * w)),
            (v(-0.5 * l - 0.02 * l, sill - 0.02 * h, -0.47 * w), v(-0.5 * l, sill + 0.1 * h, 0.47 * w)),
        ],
    )?;

    SubjectModel::new(b.meshes, b.groups)
}

/// Bounding box every vertex must lie in; convenience for camera framing.
pub fn framing_center(subject: &SubjectModel) -> Vec3 {
    let Aabb { min, max } = subject.bounds();
    Vec3::new(0.5 * (min.x + max.x), 0.5 * (min.y + max.y), 0.5 * (min.z + max.z))
}
