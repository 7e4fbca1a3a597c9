//! World-space triangle soup and a bounding volume hierarchy over it.
//!
//! Nearest hits are ordered by `(distance, triangle index)`, so the BVH and
//! the brute-force scan agree exactly even when two triangles tie.

use crate::math::{Aabb, Ray, RigidTransform, Vec3};

use super::subject::SubjectModel;

/// Rays start this far along their direction to avoid self-intersection.
pub const T_MIN: f64 = 1e-9;
const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v0: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub normals: [Vec3; 3],
    pub group: u32,
    degenerate: bool,
}

impl Triangle {
    pub fn new(v: [Vec3; 3], normals: [Vec3; 3], group: u32) -> Triangle {
        let e1 = v[1] - v[0];
        let e2 = v[2] - v[0];
        let area2 = e1.cross(e2).length();
        let degenerate = area2.partial_cmp(&(1e-12 * e1.length() * e2.length())) != Some(std::cmp::Ordering::Greater) || !area2.is_finite();
        Triangle {
            v0: v[0],
            e1,
            e2,
            normals,
            group,
            degenerate,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn vertices(&self) -> [Vec3; 3] {
        [self.v0, self.v0 + self.e1, self.v0 + self.e2]
    }

    pub fn geometric_normal(&self) -> Vec3 {
        self.e1.cross(self.e2).normalized()
    }

    pub fn bounds(&self) -> Aabb {
        let mut b = Aabb::EMPTY;
        for v in self.vertices() {
            b.grow(v);
        }
        b
    }

    /// Möller–Trumbore; returns `(t, u, v)` for hits with `T_MIN < t < t_max`.
    #[inline]
    pub fn intersect(&self, ray: &Ray, t_max: f64) -> Option<(f64, f64, f64)> {
        if self.degenerate {
            return None;
        }
        let p = ray.dir.cross(self.e2);
        let det = self.e1.dot(p);
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let inv = 1.0 / det;
        let s = ray.origin - self.v0;
        let u = s.dot(p) * inv;
        if !(0.0..=1.0).contains(&u) {
            return None;
        }
        let q = s.cross(self.e1);
        let v = ray.dir.dot(q) * inv;
        if v < 0.0 || u + v > 1.0 {
            return None;
        }
        let t = self.e2.dot(q) * inv;
        (t > T_MIN && t < t_max).then_some((t, u, v))
    }

    pub fn shading_normal(&self, u: f64, v: f64) -> Vec3 {
        let [n0, n1, n2] = self.normals;
        let n = (n0 * (1.0 - u - v) + n1 * u + n2 * v).normalized();
        if n.length() > 0.5 {
            n
        } else {
            self.geometric_normal()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub triangle: u32,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub group: u32,
}

impl Hit {
    fn closer_than(&self, other: &Hit) -> bool {
        self.t < other.t || (self.t == other.t && self.triangle < other.triangle)
    }
}

/// Subject triangles placed in world space by a pose.
#[derive(Debug, Clone)]
pub struct TriangleSoup {
    pub triangles: Vec<Triangle>,
}

impl TriangleSoup {
    pub fn from_subject(subject: &SubjectModel, pose: &RigidTransform) -> TriangleSoup {
        let owner = subject.mesh_groups();
        let mut triangles = Vec::with_capacity(subject.triangle_count());
        for (m, mesh) in subject.meshes().iter().enumerate() {
            let verts: Vec<Vec3> = mesh.vertices().iter().map(|&p| pose.apply_point(p)).collect();
            let norms: Vec<Vec3> = mesh.normals().iter().map(|&n| pose.apply_vector(n).normalized()).collect();
            for t in mesh.triangles() {
                let [a, b, c] = t.map(|i| i as usize);
                triangles.push(Triangle::new(
                    [verts[a], verts[b], verts[c]],
                    [norms[a], norms[b], norms[c]],
                    owner[m] as u32,
                ));
            }
        }
        TriangleSoup { triangles }
    }

    /// Reference nearest-hit scan over every triangle.
    pub fn brute_force(&self, ray: &Ray) -> Option<Hit> {
        let mut best: Option<Hit> = None;
        for (i, tri) in self.triangles.iter().enumerate() {
            if let Some((t, u, v)) = tri.intersect(ray, f64::INFINITY) {
                let hit = Hit {
                    triangle: i as u32,
                    t,
                    u,
                    v,
                    group: tri.group,
                };
                if best.is_none_or(|b| hit.closer_than(&b)) {
                    best = Some(hit);
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    bounds: Aabb,
    /// Leaf: first index into `order`. Interior: index of the right child
    /// (the left child follows the node directly).
    offset: u32,
    /// Zero for interior nodes.
    count: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildSummary {
    pub triangles: usize,
    pub degenerate_skipped: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone)]
pub struct Bvh {
    soup: TriangleSoup,
    nodes: Vec<Node>,
    order: Vec<u32>,
    summary: BuildSummary,
}

fn padded(b: Aabb) -> Aabb {
    let pad = |v: Vec3| Vec3::new(v.x.abs(), v.y.abs(), v.z.abs()) * 1e-9 + Vec3::splat(1e-12);
    Aabb {
        min: b.min - pad(b.min),
        max: b.max + pad(b.max),
    }
}

impl Bvh {
    pub fn build(soup: TriangleSoup) -> Bvh {
        let mut order: Vec<u32> = (0..soup.triangles.len() as u32)
            .filter(|&i| !soup.triangles[i as usize].is_degenerate())
            .collect();
        let degenerate_skipped = soup.triangles.len() - order.len();
        let bounds: Vec<Aabb> = soup.triangles.iter().map(Triangle::bounds).collect();
        let centroids: Vec<Vec3> = bounds.iter().map(Aabb::center).collect();
        let mut nodes = Vec::with_capacity(2 * order.len() / LEAF_SIZE + 1);
        if !order.is_empty() {
            let len = order.len();
            build_node(&mut nodes, &mut order, 0, len, &bounds, &centroids);
        }
        let summary = BuildSummary {
            triangles: soup.triangles.len(),
            degenerate_skipped,
            nodes: nodes.len(),
        };
        Bvh {
            soup,
            nodes,
            order,
            summary,
        }
    }

    pub fn from_subject(subject: &SubjectModel, pose: &RigidTransform) -> Bvh {
        Bvh::build(TriangleSoup::from_subject(subject, pose))
    }

    pub fn summary(&self) -> BuildSummary {
        self.summary
    }

    pub fn soup(&self) -> &TriangleSoup {
        &self.soup
    }

    pub fn triangle(&self, i: u32) -> &Triangle {
        &self.soup.triangles[i as usize]
    }

    pub fn bounds(&self) -> Aabb {
        self.nodes.first().map_or(Aabb::EMPTY, |n| n.bounds)
    }

    pub fn nearest(&self, ray: &Ray) -> Option<Hit> {
        self.traverse(ray, f64::INFINITY, false)
    }

    /// True if anything lies strictly between `T_MIN` and `t_max`.
    pub fn occluded(&self, ray: &Ray, t_max: f64) -> bool {
        self.traverse(ray, t_max, true).is_some()
    }

    fn traverse(&self, ray: &Ray, t_max: f64, any: bool) -> Option<Hit> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best: Option<Hit> = None;
        let mut limit = t_max;
        let mut stack: Vec<(u32, f64)> = Vec::with_capacity(64);
        if let Some(t) = self.nodes[0].bounds.hit(ray, limit) {
            stack.push((0, t));
        }
        while let Some((idx, entry)) = stack.pop() {
            // Equal entry distances are kept so index tie-breaks match the scan.
            if best.is_some() && entry > limit {
                continue;
            }
            let node = &self.nodes[idx as usize];
            if node.count > 0 {
                let start = node.offset as usize;
                for &tri_idx in &self.order[start..start + node.count as usize] {
                    let tri = &self.soup.triangles[tri_idx as usize];
                    // `limit` is inclusive for ties, hence the next-up bound.
                    let bound = if best.is_some() { next_up(limit) } else { limit };
                    if let Some((t, u, v)) = tri.intersect(ray, bound) {
                        let hit = Hit {
                            triangle: tri_idx,
                            t,
                            u,
                            v,
                            group: tri.group,
                        };
                        if any {
                            return Some(hit);
                        }
                        if best.is_none_or(|b| hit.closer_than(&b)) {
                            best = Some(hit);
                            limit = t;
                        }
                    }
                }
            } else {
                let left = idx + 1;
                let right = node.offset;
                let search = if best.is_some() { next_up(limit) } else { limit };
                let hl = self.nodes[left as usize].bounds.hit(ray, search);
                let hr = self.nodes[right as usize].bounds.hit(ray, search);
                match (hl, hr) {
                    (Some(a), Some(b)) => {
                        // push the farther child first
                        if a <= b {
                            stack.push((right, b));
                            stack.push((left, a));
                        } else {
                            stack.push((left, a));
                            stack.push((right, b));
                        }
                    }
                    (Some(a), None) => stack.push((left, a)),
                    (None, Some(b)) => stack.push((right, b)),
                    (None, None) => {}
                }
            }
        }
        best
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

fn build_node(
    nodes: &mut Vec<Node>,
    order: &mut [u32],
    start: usize,
    end: usize,
    bounds: &[Aabb],
    centroids: &[Vec3],
) -> u32 {
    let slice = &mut order[start..end];
    let bb = slice.iter().fold(Aabb::EMPTY, |acc, &i| acc.union(&bounds[i as usize]));
    let idx = nodes.len() as u32;
    nodes.push(Node {
        bounds: padded(bb),
        offset: start as u32,
        count: slice.len() as u32,
    });
    if slice.len() <= LEAF_SIZE {
        return idx;
    }
    let cb = slice.iter().fold(Aabb::EMPTY, |mut acc, &i| {
        acc.grow(centroids[i as usize]);
        acc
    });
    let ext = cb.extent();
    let axis = if ext.x >= ext.y && ext.x >= ext.z {
        0
    } else if ext.y >= ext.z {
        1
    } else {
        2
    };
    let mid = slice.len() / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| {
        centroids[a as usize][axis]
            .total_cmp(&centroids[b as usize][axis])
            .then(a.cmp(&b))
    });
    nodes[idx as usize].count = 0;
    build_node(nodes, order, start, start + mid, bounds, centroids);
    let right = build_node(nodes, order, start + mid, end, bounds, centroids);
    nodes[idx as usize].offset = right;
    idx
}
