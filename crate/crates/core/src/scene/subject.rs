use crate::error::{Error, Result};
use crate::math::{Aabb, Vec3};

use super::class::FeatureClass;
use super::material::Material;

const NORMAL_TOL: f64 = 1e-6;

/// Indexed triangle mesh with per-vertex unit normals.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[u32; 3]>,
    normals: Vec<Vec3>,
}

impl Mesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>, normals: Vec<Vec3>) -> Result<Mesh> {
        if triangles.is_empty() {
            return Err(Error::param("mesh has no triangles"));
        }
        if normals.len() != vertices.len() {
            return Err(Error::param(format!(
                "{} normals for {} vertices",
                normals.len(),
                vertices.len()
            )));
        }
        let n = vertices.len() as u32;
        if let Some(t) = triangles.iter().find(|t| t.iter().any(|&i| i >= n)) {
            return Err(Error::param(format!("triangle {t:?} indexes past {n} vertices")));
        }
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(Error::param(format!("non-finite vertex {v:?}")));
        }
        if let Some(nrm) = normals.iter().find(|v| (v.length() - 1.0).abs() > NORMAL_TOL) {
            return Err(Error::param(format!("normal {nrm:?} is not unit length")));
        }
        Ok(Mesh {
            vertices,
            triangles,
            normals,
        })
    }

    /// Builds a mesh whose normals are area-weighted averages of the
    /// incident face normals.
    pub fn with_generated_normals(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Result<Mesh> {
        let mut acc = vec![Vec3::ZERO; vertices.len()];
        for t in &triangles {
            if t.iter().any(|&i| i as usize >= vertices.len()) {
                return Err(Error::param(format!("triangle {t:?} indexes past {} vertices", vertices.len())));
            }
            let [a, b, c] = t.map(|i| vertices[i as usize]);
            let n = (b - a).cross(c - a);
            for &i in t {
                acc[i as usize] += n;
            }
        }
        let normals = acc
            .into_iter()
            .map(|n| {
                let u = n.normalized();
                if (u.length() - 1.0).abs() > NORMAL_TOL {
                    Vec3::Y
                } else {
                    u
                }
            })
            .collect();
        Mesh::new(vertices, triangles, normals)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn bounds(&self) -> Aabb {
        let mut b = Aabb::EMPTY;
        for &v in &self.vertices {
            b.grow(v);
        }
        b
    }
}

/// Named set of meshes sharing a material and, optionally, a feature class.
#[derive(Debug, Clone, PartialEq)]
pub struct PartGroup {
    pub name: String,
    pub meshes: Vec<usize>,
    pub feature_class: Option<FeatureClass>,
    pub material: Material,
    /// Paintable groups take the scene's sampled paint instead of `material`.
    pub paintable: bool,
}

impl PartGroup {
    pub fn new(name: impl Into<String>, material: Material) -> Self {
        PartGroup {
            name: name.into(),
            meshes: Vec::new(),
            feature_class: None,
            material,
            paintable: false,
        }
    }
}

/// A subject: meshes partitioned into part groups.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectModel {
    meshes: Vec<Mesh>,
    groups: Vec<PartGroup>,
    bounds: Aabb,
}

impl SubjectModel {
    pub fn new(meshes: Vec<Mesh>, groups: Vec<PartGroup>) -> Result<SubjectModel> {
        if meshes.is_empty() {
            return Err(Error::param("subject has no meshes"));
        }
        let mut owner = vec![None; meshes.len()];
        for (g, group) in groups.iter().enumerate() {
            group.material.validate()?;
            for &m in &group.meshes {
                let slot = owner
                    .get_mut(m)
                    .ok_or_else(|| Error::param(format!("group `{}` references mesh {m}", group.name)))?;
                if slot.replace(g).is_some() {
                    return Err(Error::param(format!("mesh {m} belongs to more than one group")));
                }
            }
        }
        if let Some(m) = owner.iter().position(Option::is_none) {
            return Err(Error::param(format!("mesh {m} belongs to no group")));
        }
        let bounds = meshes.iter().fold(Aabb::EMPTY, |b, m| b.union(&m.bounds()));
        Ok(SubjectModel {
            meshes,
            groups,
            bounds,
        })
    }

    pub fn meshes(&self) -> &[Mesh] {
        &self.meshes
    }

    pub fn groups(&self) -> &[PartGroup] {
        &self.groups
    }

    pub fn group(&self, name: &str) -> Option<&PartGroup> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn bounds(&self) -> Aabb {
        self.bounds
    }

    pub fn triangle_count(&self) -> usize {
        self.meshes.iter().map(|m| m.triangles().len()).sum()
    }

    /// Per-mesh owning group index.
    pub fn mesh_groups(&self) -> Vec<usize> {
        let mut owner = vec![0; self.meshes.len()];
        for (g, group) in self.groups.iter().enumerate() {
            for &m in &group.meshes {
                owner[m] = g;
            }
        }
        owner
    }

    /// Feature classes carried by at least one group.
    pub fn classes(&self) -> Vec<FeatureClass> {
        let mut out: Vec<FeatureClass> = self.groups.iter().filter_map(|g| g.feature_class).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn has_full_registry(&self) -> bool {
        self.classes().len() == super::class::CLASS_COUNT
    }
}
