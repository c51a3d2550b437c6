//! Closest-point queries against triangle meshes with signed distance.

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};

use super::SurfaceMesh;

/// Closest point on triangle `abc` to `p` (Ericson, Real-Time Collision
/// Detection §5.1.5). Returns the point and its barycentric coordinates.
pub fn closest_point_on_triangle(
    p: &Point3<f64>,
    a: &Point3<f64>,
    b: &Point3<f64>,
    c: &Point3<f64>,
) -> (Point3<f64>, [f64; 3]) {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (*a, [1.0, 0.0, 0.0]);
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (*b, [0.0, 1.0, 0.0]);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a + v * ab, [1.0 - v, v, 0.0]);
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (*c, [0.0, 0.0, 1.0]);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a + w * ac, [1.0 - w, 0.0, w]);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + w * (c - b), [0.0, 1.0 - w, w]);
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w, [1.0 - v - w, v, w])
}

/// Result of a signed-distance query against a mesh.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceHit {
    /// Signed distance: negative when the query point lies behind the surface
    /// (penetrating, by the angle-weighted pseudo-normal convention).
    pub signed_distance: f64,
    pub closest_point: Point3<f64>,
    /// Outward unit normal of the closest surface feature.
    pub normal: Vector3<f64>,
    pub triangle: usize,
}

/// Precomputed acceleration structure for signed distance to a triangle mesh.
///
/// Sign determination uses angle-weighted pseudo-normals, which are exact for
/// watertight meshes and well-behaved near faces, edges, and vertices of open
/// shells away from their free boundary.
#[derive(Debug, Clone)]
pub struct MeshDistance {
    mesh: SurfaceMesh,
    face_normals: Vec<Vector3<f64>>,
    vertex_normals: Vec<Vector3<f64>>,
    edge_normals: HashMap<(usize, usize), Vector3<f64>>,
    tri_centers: Vec<Point3<f64>>,
    tri_radius: Vec<f64>,
}

impl MeshDistance {
    pub fn new(mesh: SurfaceMesh) -> Self {
        let face_normals: Vec<_> = (0..mesh.triangles.len()).map(|t| mesh.face_normal(t)).collect();
        let vertex_normals = mesh.vertex_normals();
        let mut edge_normals: HashMap<(usize, usize), Vector3<f64>> = HashMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                let (i, j) = (tri[k], tri[(k + 1) % 3]);
                let key = (i.min(j), i.max(j));
                *edge_normals.entry(key).or_default() += face_normals[t];
            }
        }
        for n in edge_normals.values_mut() {
            let len = n.norm();
            if len > 0.0 {
                *n /= len;
            }
        }
        let tri_centers: Vec<_> = (0..mesh.triangles.len())
            .map(|t| {
                let [a, b, c] = mesh.triangle_vertices(t);
                Point3::from((a.coords + b.coords + c.coords) / 3.0)
            })
            .collect();
        let tri_radius: Vec<_> = (0..mesh.triangles.len())
            .map(|t| {
                let [a, b, c] = mesh.triangle_vertices(t);
                let ctr = tri_centers[t];
                (a - ctr)
                    .norm()
                    .max((b - ctr).norm())
                    .max((c - ctr).norm())
            })
            .collect();
        Self {
            mesh,
            face_normals,
            vertex_normals,
            edge_normals,
            tri_centers,
            tri_radius,
        }
    }

    pub fn mesh(&self) -> &SurfaceMesh {
        &self.mesh
    }

    /// Closest surface point with pseudo-normal sign. `None` for empty meshes.
    pub fn query(&self, p: &Point3<f64>) -> Option<SurfaceHit> {
        if self.mesh.triangles.is_empty() {
            return None;
        }
        let mut best_d2 = f64::INFINITY;
        let mut best: Option<(Point3<f64>, [f64; 3], usize)> = None;
        for t in 0..self.mesh.triangles.len() {
            // Sphere-bound prune.
            let center_dist = (p - self.tri_centers[t]).norm();
            let lower = (center_dist - self.tri_radius[t]).max(0.0);
            if lower * lower > best_d2 {
                continue;
            }
            let [a, b, c] = self.mesh.triangle_vertices(t);
            let (cp, bary) = closest_point_on_triangle(p, &a, &b, &c);
            let d2 = (p - cp).norm_squared();
            if d2 < best_d2 {
                best_d2 = d2;
                best = Some((cp, bary, t));
            }
        }
        let (cp, bary, t) = best?;
        let normal = self.feature_normal(t, &bary);
        let dist = best_d2.sqrt();
        let sign = if (p - cp).dot(&normal) >= 0.0 { 1.0 } else { -1.0 };
        Some(SurfaceHit {
            signed_distance: sign * dist,
            closest_point: cp,
            normal,
            triangle: t,
        })
    }

    fn feature_normal(&self, t: usize, bary: &[f64; 3]) -> Vector3<f64> {
        const EDGE_EPS: f64 = 1e-9;
        let tri = self.mesh.triangles[t];
        let zero: Vec<usize> = (0..3).filter(|&k| bary[k] <= EDGE_EPS).collect();
        let n = match zero.len() {
            2 => {
                // Vertex feature: the single nonzero barycentric coordinate.
                let k = (0..3).find(|k| !zero.contains(k)).unwrap();
                self.vertex_normals[tri[k]]
            }
            1 => {
                let (i, j) = match zero[0] {
                    0 => (tri[1], tri[2]),
                    1 => (tri[0], tri[2]),
                    _ => (tri[0], tri[1]),
                };
                self.edge_normals
                    .get(&(i.min(j), i.max(j)))
                    .copied()
                    .unwrap_or(self.face_normals[t])
            }
            _ => self.face_normals[t],
        };
        if n.norm() > 0.0 {
            n.normalize()
        } else {
            self.face_normals[t]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closest_point_regions() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(1.0, 0.0, 0.0);
        let c = Point3::new(0.0, 1.0, 0.0);
        // Interior projection.
        let (cp, _) = closest_point_on_triangle(&Point3::new(0.2, 0.2, 5.0), &a, &b, &c);
        assert!((cp - Point3::new(0.2, 0.2, 0.0)).norm() < 1e-12);
        // Vertex region.
        let (cp, _) = closest_point_on_triangle(&Point3::new(-1.0, -1.0, 0.0), &a, &b, &c);
        assert_eq!(cp, a);
        // Edge region.
        let (cp, _) = closest_point_on_triangle(&Point3::new(0.5, -2.0, 0.0), &a, &b, &c);
        assert!((cp - Point3::new(0.5, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn signed_distance_sphere() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 10.0, 24, 48);
        let dist = MeshDistance::new(sphere);
        let outside = dist.query(&Point3::new(0.0, 0.0, 12.0)).unwrap();
        assert!((outside.signed_distance - 2.0).abs() < 0.05);
        let inside = dist.query(&Point3::new(0.0, 0.0, 9.0)).unwrap();
        assert!(inside.signed_distance < 0.0);
        assert!((inside.signed_distance + 1.0).abs() < 0.05);
    }
}
