//! Reader for a triangulated Wavefront OBJ subset.
//!
//! Supported records: `v`, `vn`, `f` (3 corners, `v`, `v/vt`, `v//vn` or
//! `v/vt/vn`, negative indices allowed), `o`/`g` (start or resume a named
//! group). `vt`, `s`, `usemtl`, `mtllib` and comments are skipped. Anything
//! else is rejected with its line number.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::Vec3;

use super::class::FeatureClass;
use super::material::Material;
use super::subject::{Mesh, PartGroup, SubjectModel};

/// Part-group name → feature class.
pub type GroupMap = BTreeMap<String, FeatureClass>;

const DEFAULT_GROUP: &str = "default";

#[derive(Default)]
struct RawGroup {
    // (vertex index, optional normal index) per corner
    faces: Vec<[(usize, Option<usize>); 3]>,
}

pub fn load_obj_subject(path: impl AsRef<Path>, group_map: &GroupMap) -> Result<SubjectModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_obj(&text, group_map)
}

pub fn parse_obj(text: &str, group_map: &GroupMap) -> Result<SubjectModel> {
    let mut positions: Vec<Vec3> = Vec::new();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, RawGroup> = HashMap::new();
    let mut current = DEFAULT_GROUP.to_owned();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or("");
        let rest: Vec<&str> = fields.collect();
        match tag {
            "v" | "vn" => {
                if rest.len() < 3 || (tag == "vn" && rest.len() != 3) || rest.len() > 4 {
                    return Err(err(format!("`{tag}` expects 3 coordinates, got {}", rest.len())));
                }
                let mut c = [0.0; 3];
                for (slot, s) in c.iter_mut().zip(&rest) {
                    *slot = s
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| err(format!("bad coordinate `{s}`")))?;
                }
                let v = Vec3::from(c);
                if tag == "v" {
                    positions.push(v);
                } else {
                    if v.length() == 0.0 {
                        return Err(err("zero-length normal".into()));
                    }
                    normals.push(v.normalized());
                }
            }
            "f" => {
                if rest.len() != 3 {
                    return Err(err(format!(
                        "face has {} corners; only triangles are supported",
                        rest.len()
                    )));
                }
                let mut face = [(0usize, None); 3];
                for (slot, corner) in face.iter_mut().zip(&rest) {
                    *slot = parse_corner(corner, positions.len(), normals.len()).map_err(err)?;
                }
                if !groups.contains_key(&current) {
                    order.push(current.clone());
                }
                groups.entry(current.clone()).or_default().faces.push(face);
            }
            "o" | "g" => {
                let name = rest.join(" ");
                if name.is_empty() {
                    return Err(err(format!("`{tag}` without a name")));
                }
                current = name;
            }
            "vt" | "s" | "usemtl" | "mtllib" | "vp" => {}
            other => return Err(err(format!("unsupported record `{other}`"))),
        }
    }

    if order.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "no faces".into(),
        });
    }
    if let Some(missing) = group_map.keys().find(|k| !groups.contains_key(*k)) {
        return Err(Error::Mapping(missing.clone()));
    }

    let mut meshes = Vec::with_capacity(order.len());
    let mut parts = Vec::with_capacity(order.len());
    for name in order {
        let raw = &groups[&name];
        meshes.push(build_group_mesh(raw, &positions, &normals)?);
        let class = group_map.get(&name).copied();
        let mut part = PartGroup::new(name.clone(), default_material(&name, class));
        part.meshes = vec![meshes.len() - 1];
        part.feature_class = class;
        part.paintable = part.material.kind == super::material::MaterialKind::PaintedMetal;
        parts.push(part);
    }
    SubjectModel::new(meshes, parts)
}

fn parse_corner(corner: &str, n_pos: usize, n_norm: usize) -> std::result::Result<(usize, Option<usize>), String> {
    let mut it = corner.split('/');
    let v = it.next().unwrap_or("");
    let _vt = it.next();
    let vn = it.next();
    if it.next().is_some() {
        return Err(format!("bad face corner `{corner}`"));
    }
    let v = resolve_index(v, n_pos).map_err(|e| format!("vertex {e}"))?;
    let vn = match vn {
        Some(s) if !s.is_empty() => Some(resolve_index(s, n_norm).map_err(|e| format!("normal {e}"))?),
        _ => None,
    };
    Ok((v, vn))
}

fn resolve_index(s: &str, count: usize) -> std::result::Result<usize, String> {
    let i: i64 = s.parse().map_err(|_| format!("index `{s}` is not an integer"))?;
    let resolved = match i {
        0 => return Err("index 0 is invalid (OBJ indices are 1-based)".into()),
        i if i > 0 => (i - 1) as usize,
        i => {
            let back = i.unsigned_abs() as usize;
            if back > count {
                return Err(format!("relative index {i} precedes the first element"));
            }
            count - back
        }
    };
    if resolved >= count {
        return Err(format!("index {i} out of range ({count} defined)"));
    }
    Ok(resolved)
}

fn build_group_mesh(raw: &RawGroup, positions: &[Vec3], normals: &[Vec3]) -> Result<Mesh> {
    let has_normals = raw.faces.iter().flatten().all(|(_, n)| n.is_some());
    let mut remap: HashMap<(usize, Option<usize>), u32> = HashMap::new();
    let mut verts = Vec::new();
    let mut norms = Vec::new();
    let mut tris = Vec::with_capacity(raw.faces.len());
    for face in &raw.faces {
        let mut tri = [0u32; 3];
        for (slot, &(v, n)) in tri.iter_mut().zip(face) {
            let key = if has_normals { (v, n) } else { (v, None) };
            *slot = *remap.entry(key).or_insert_with(|| {
                verts.push(positions[v]);
                if let Some(n) = key.1 {
                    norms.push(normals[n]);
                }
                (verts.len() - 1) as u32
            });
        }
        tris.push(tri);
    }
    if has_normals {
        Mesh::new(verts, tris, norms)
    } else {
        Mesh::with_generated_normals(verts, tris)
    }
}

fn default_material(name: &str, class: Option<FeatureClass>) -> Material {
    let lname = name.to_ascii_lowercase();
    match class {
        Some(FeatureClass::FRONT_WINDOW | FeatureClass::BACK_WINDOW | FeatureClass::REAR_WINDOW) => Material::glass(),
        Some(FeatureClass::DOOR_HANDLE) => Material::plastic(Vec3::splat(0.6)),
        Some(FeatureClass::TAIL_LIGHT) => Material::plastic(Vec3::new(0.6, 0.02, 0.02)),
        _ if lname.contains("glass") || lname.contains("window") => Material::glass(),
        _ if lname.contains("tire") || lname.contains("tyre") || lname.contains("wheel") => Material::rubber(),
        _ => Material::paint(Vec3::splat(0.5)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRI: &str = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";

    #[test]
    fn single_triangle_empty_map() {
        let s = parse_obj(TRI, &GroupMap::new()).unwrap();
        assert_eq!(s.groups().len(), 1);
        assert_eq!(s.triangle_count(), 1);
        assert_eq!(s.groups()[0].feature_class, None);
    }

    #[test]
    fn mapped_and_unmapped_groups() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\ng door\nf 1 2 3\ng glass\nf 1 3 4\n";
        let mut map = GroupMap::new();
        map.insert("door".into(), FeatureClass::FRONT_DOOR);
        let s = parse_obj(text, &map).unwrap();
        assert_eq!(s.groups().len(), 2);
        assert_eq!(s.group("door").unwrap().feature_class, Some(FeatureClass::FRONT_DOOR));
        assert_eq!(s.group("glass").unwrap().feature_class, None);
    }

    #[test]
    fn zero_index_reports_line() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\n# comment\nf 0 1 2\n";
        match parse_obj(text, &GroupMap::new()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("1-based"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_group_is_mapping_error() {
        let mut map = GroupMap::new();
        map.insert("mirror".into(), FeatureClass::MIRROR);
        assert!(matches!(parse_obj(TRI, &map), Err(Error::Mapping(g)) if g == "mirror"));
    }

    #[test]
    fn explicit_normals_and_negative_indices() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 2\nf -3//1 -2//1 -1//1\n";
        let s = parse_obj(text, &GroupMap::new()).unwrap();
        assert_eq!(s.meshes()[0].normals(), &[Vec3::Z; 3]);
    }

    #[test]
    fn quads_and_unknown_records_rejected() {
        let quad = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n";
        assert!(matches!(parse_obj(quad, &GroupMap::new()), Err(Error::Parse { line: 5, .. })));
        let junk = "v 0 0 0\nbogus 1\n";
        assert!(matches!(parse_obj(junk, &GroupMap::new()), Err(Error::Parse { line: 2, .. })));
        let oob = "v 0 0 0\nf 1 2 3\n";
        assert!(matches!(parse_obj(oob, &GroupMap::new()), Err(Error::Parse { line: 2, .. })));
    }
}
