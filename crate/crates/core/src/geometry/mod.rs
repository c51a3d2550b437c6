//! Surface meshes, indenter patch generation, and spatial search utilities.

mod closest;
mod kdtree;
mod patch;
mod stl;

pub use closest::{closest_point_on_triangle, MeshDistance, SurfaceHit};
pub use kdtree::KdTree;
pub use patch::{
    component_count, extract_patch, sample_outward_points, IndenterPatch, PatchParams,
    PatchProvenance,
};
pub use stl::{read_stl, write_stl_binary};

use nalgebra::{Point3, Vector3};

use crate::error::{Error, Result};

/// Indexed triangle mesh with positions in millimetres.
#[derive(Debug, Clone, Default)]
pub struct SurfaceMesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    pub fn new(vertices: Vec<Point3<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = Self {
            vertices,
            triangles,
        };
        for (k, t) in mesh.triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= mesh.vertices.len()) {
                return Err(Error::Mesh(format!("triangle {k} references a missing vertex")));
            }
        }
        Ok(mesh)
    }

    pub fn triangle_vertices(&self, t: usize) -> [Point3<f64>; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Unnormalized face normal (twice the signed area vector).
    pub fn face_normal_raw(&self, t: usize) -> Vector3<f64> {
        let [a, b, c] = self.triangle_vertices(t);
        (b - a).cross(&(c - a))
    }

    pub fn face_normal(&self, t: usize) -> Vector3<f64> {
        let n = self.face_normal_raw(t);
        let len = n.norm();
        if len > 0.0 {
            n / len
        } else {
            Vector3::zeros()
        }
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        0.5 * self.face_normal_raw(t).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Area-weighted surface centroid `c_M`.
    pub fn centroid(&self) -> Point3<f64> {
        let mut acc = Vector3::zeros();
        let mut total = 0.0;
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.triangle_vertices(t);
            let area = self.triangle_area(t);
            acc += area * (a.coords + b.coords + c.coords) / 3.0;
            total += area;
        }
        if total > 0.0 {
            Point3::from(acc / total)
        } else {
            Point3::origin()
        }
    }

    /// Angle-weighted unit vertex normals.
    pub fn vertex_normals(&self) -> Vec<Vector3<f64>> {
        let mut normals = vec![Vector3::zeros(); self.vertices.len()];
        for t in 0..self.triangles.len() {
            let idx = self.triangles[t];
            let v = self.triangle_vertices(t);
            let n = self.face_normal(t);
            for k in 0..3 {
                let e0 = (v[(k + 1) % 3] - v[k]).normalize();
                let e1 = (v[(k + 2) % 3] - v[k]).normalize();
                let angle = e0.dot(&e1).clamp(-1.0, 1.0).acos();
                normals[idx[k]] += angle * n;
            }
        }
        for n in &mut normals {
            let len = n.norm();
            if len > 0.0 {
                *n /= len;
            }
        }
        normals
    }

    pub fn bounds(&self) -> (Point3<f64>, Point3<f64>) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = Point3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Drops vertices not referenced by any triangle, remapping indices.
    pub fn compact(&mut self) {
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut kept = Vec::new();
        for t in &mut self.triangles {
            for i in t.iter_mut() {
                if remap[*i] == usize::MAX {
                    remap[*i] = kept.len();
                    kept.push(self.vertices[*i]);
                }
                *i = remap[*i];
            }
        }
        self.vertices = kept;
    }

    /// UV sphere, outward winding.
    pub fn uv_sphere(center: Point3<f64>, radius: f64, rings: usize, segments: usize) -> Self {
        assert!(rings >= 2 && segments >= 3);
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        vertices.push(center + Vector3::new(0.0, 0.0, radius));
        for i in 1..rings {
            let theta = std::f64::consts::PI * i as f64 / rings as f64;
            for j in 0..segments {
                let phi = std::f64::consts::TAU * j as f64 / segments as f64;
                vertices.push(
                    center
                        + Vector3::new(
                            radius * theta.sin() * phi.cos(),
                            radius * theta.sin() * phi.sin(),
                            radius * theta.cos(),
                        ),
                );
            }
        }
        vertices.push(center + Vector3::new(0.0, 0.0, -radius));
        let bottom = vertices.len() - 1;
        let ring = |i: usize, j: usize| 1 + (i - 1) * segments + (j % segments);
        for j in 0..segments {
            triangles.push([0, ring(1, j), ring(1, j + 1)]);
        }
        for i in 1..rings - 1 {
            for j in 0..segments {
                let a = ring(i, j);
                let b = ring(i, j + 1);
                let c = ring(i + 1, j);
                let d = ring(i + 1, j + 1);
                triangles.push([a, c, b]);
                triangles.push([b, c, d]);
            }
        }
        for j in 0..segments {
            triangles.push([bottom, ring(rings - 1, j + 1), ring(rings - 1, j)]);
        }
        Self {
            vertices,
            triangles,
        }
    }

    /// Rectangular plate in the z = 0 plane, +z winding, centered at origin.
    pub fn rect_plate(width: f64, depth: f64, nx: usize, ny: usize) -> Self {
        assert!(nx >= 1 && ny >= 1);
        let mut vertices = Vec::new();
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push(Point3::new(
                    width * (i as f64 / nx as f64 - 0.5),
                    depth * (j as f64 / ny as f64 - 0.5),
                    0.0,
                ));
            }
        }
        let at = |i: usize, j: usize| j * (nx + 1) + i;
        let mut triangles = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let (a, b, c, d) = (at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1));
                triangles.push([a, b, d]);
                triangles.push([a, d, c]);
            }
        }
        Self {
            vertices,
            triangles,
        }
    }
}
