//! Indenter patch generation: spherical clipping of object meshes followed by
//! standardization for mounting.

use nalgebra::{Matrix3, Point3, Unit, UnitQuaternion, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SurfaceMesh;
use crate::error::{Error, Result};

/// Height of the standardized apex above the base plane, mm.
pub const APEX_HEIGHT: f64 = 44.0;
/// Mounting connector dimensions, mm.
pub const CONNECTOR_RADIUS: f64 = 5.0;
pub const CONNECTOR_HEIGHT: f64 = 10.0;

/// Samples surface points uniformly by area, keeping only those whose face
/// normal points away from the mesh centroid (`n · (p − c_M) > 0`). Rejected
/// samples are redrawn; gives up after a bounded number of attempts.
pub fn sample_outward_points<R: Rng>(
    mesh: &SurfaceMesh,
    count: usize,
    rng: &mut R,
) -> Result<Vec<(Point3<f64>, Vector3<f64>)>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if mesh.triangles.is_empty() || mesh.area() <= 0.0 {
        return Err(Error::InvalidInput("cannot sample a degenerate mesh".into()));
    }
    let centroid = mesh.centroid();
    let mut cumulative = Vec::with_capacity(mesh.triangles.len());
    let mut acc = 0.0;
    for t in 0..mesh.triangles.len() {
        acc += mesh.triangle_area(t);
        cumulative.push(acc);
    }
    let total = acc;

    let mut out = Vec::with_capacity(count);
    let max_attempts = count.max(16) * 1000;
    for _ in 0..max_attempts {
        if out.len() == count {
            break;
        }
        let target = rng.gen_range(0.0..total);
        let t = cumulative.partition_point(|&c| c < target).min(mesh.triangles.len() - 1);
        let [a, b, c] = mesh.triangle_vertices(t);
        let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
        let s = r1.sqrt();
        let (u, v) = (1.0 - s, s * r2);
        let p = Point3::from(u * a.coords + v * b.coords + (1.0 - u - v) * c.coords);
        let n = mesh.face_normal(t);
        if n.dot(&(p - centroid)) > 0.0 {
            out.push((p, n));
        }
    }
    if out.len() < count {
        return Err(Error::InvalidInput(format!(
            "only {} of {count} outward samples found within the attempt budget",
            out.len()
        )));
    }
    Ok(out)
}

/// Parameters of a patch extraction, mirrored into the provenance sidecar.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PatchParams {
    /// Displacement of the clip-sphere center along the sample normal.
    pub offset: f64,
    /// Clip sphere radius (same units as the source mesh).
    pub radius: f64,
    /// Uniform scale applied during standardization.
    pub scale: f64,
}

impl Default for PatchParams {
    fn default() -> Self {
        Self {
            offset: 5.0,
            radius: 18.0,
            scale: 425.0,
        }
    }
}

/// Provenance of an extracted patch, written as the JSON sidecar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatchProvenance {
    pub source_point: [f64; 3],
    pub source_normal: [f64; 3],
    pub offset: f64,
    pub sphere_radius: f64,
    pub scale: f64,
    pub apex_height: f64,
    pub connector_radius: f64,
    pub connector_height: f64,
    /// Output coordinates are treated as millimetres after scaling.
    pub output_units: String,
}

/// A standardized indenter patch: contact normal along +z, apex at
/// `APEX_HEIGHT` above the base plane z = 0, mounting connector below.
#[derive(Debug, Clone)]
pub struct IndenterPatch {
    pub mesh: SurfaceMesh,
    pub provenance: PatchProvenance,
}

/// Extracts the spherical neighborhood of `(p, n)` from `mesh` and
/// standardizes it: clip against the sphere centered at `p + offset·n`,
/// keep the largest connected component by area, rotate `n → +z`, scale,
/// translate the apex to `(0, 0, APEX_HEIGHT)`, and append the connector.
pub fn extract_patch(
    mesh: &SurfaceMesh,
    p: &Point3<f64>,
    n: &Vector3<f64>,
    params: &PatchParams,
) -> Result<IndenterPatch> {
    if params.radius <= 0.0 || params.scale <= 0.0 {
        return Err(Error::InvalidInput(
            "patch radius and scale must be positive".into(),
        ));
    }
    let normal = Unit::new_normalize(*n);
    let center = p + params.offset * normal.into_inner();

    let mut clipped = clip_to_sphere(mesh, &center, params.radius);
    if clipped.triangles.is_empty() {
        return Err(Error::Mesh(
            "clip sphere does not intersect the mesh; resample".into(),
        ));
    }
    keep_largest_component(&mut clipped);

    // Rotate the sample normal onto +z.
    let rot = UnitQuaternion::rotation_between(&normal, &Vector3::z_axis())
        .unwrap_or_else(|| UnitQuaternion::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI));
    let rot: Matrix3<f64> = rot.to_rotation_matrix().into_inner();
    let p_rot = rot * p.coords * params.scale;
    for v in &mut clipped.vertices {
        *v = Point3::from(rot * v.coords * params.scale);
    }

    // Laterally center on the sampled contact point, then lift the apex to
    // its standard height.
    let apex_z = clipped
        .vertices
        .iter()
        .fold(f64::NEG_INFINITY, |m, v| m.max(v.z));
    let shift = Vector3::new(-p_rot.x, -p_rot.y, APEX_HEIGHT - apex_z);
    for v in &mut clipped.vertices {
        *v += shift;
    }

    append_connector(&mut clipped);

    Ok(IndenterPatch {
        mesh: clipped,
        provenance: PatchProvenance {
            source_point: [p.x, p.y, p.z],
            source_normal: [normal.x, normal.y, normal.z],
            offset: params.offset,
            sphere_radius: params.radius,
            scale: params.scale,
            apex_height: APEX_HEIGHT,
            connector_radius: CONNECTOR_RADIUS,
            connector_height: CONNECTOR_HEIGHT,
            output_units: "mm (scaled from source units)".into(),
        },
    })
}

/// Clips triangles against a sphere. Triangles crossing the boundary are cut
/// along edge-sphere intersection points (polygonal approximation of the
/// circular cut); triangles with no vertex inside are dropped.
fn clip_to_sphere(mesh: &SurfaceMesh, center: &Point3<f64>, radius: f64) -> SurfaceMesh {
    let r2 = radius * radius;
    let inside = |v: &Point3<f64>| (v - center).norm_squared() <= r2;
    let mut out = SurfaceMesh::default();
    let mut push = |poly: &[Point3<f64>]| {
        if poly.len() < 3 {
            return;
        }
        let base = out.vertices.len();
        out.vertices.extend_from_slice(poly);
        for k in 1..poly.len() - 1 {
            out.triangles.push([base, base + k, base + k + 1]);
        }
    };

    for t in 0..mesh.triangles.len() {
        let tri = mesh.triangle_vertices(t);
        let flags = [inside(&tri[0]), inside(&tri[1]), inside(&tri[2])];
        if flags.iter().all(|&f| f) {
            push(&tri);
            continue;
        }
        if flags.iter().all(|&f| !f) {
            continue;
        }
        // Walk the triangle boundary, emitting kept vertices and crossings.
        let mut poly = Vec::with_capacity(5);
        for k in 0..3 {
            let (a, fa) = (tri[k], flags[k]);
            let (b, fb) = (tri[(k + 1) % 3], flags[(k + 1) % 3]);
            if fa {
                poly.push(a);
            }
            if fa != fb {
                if let Some(x) = edge_sphere_crossing(&a, &b, center, radius) {
                    poly.push(x);
                }
            }
        }
        push(&poly);
    }
    weld(&mut out);
    out
}

/// First intersection of segment `ab` with the sphere surface.
fn edge_sphere_crossing(
    a: &Point3<f64>,
    b: &Point3<f64>,
    center: &Point3<f64>,
    radius: f64,
) -> Option<Point3<f64>> {
    let d = b - a;
    let m = a - center;
    let qa = d.norm_squared();
    let qb = 2.0 * m.dot(&d);
    let qc = m.norm_squared() - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 || qa == 0.0 {
        return None;
    }
    let sqrt_disc = disc.sqrt();
    for t in [(-qb - sqrt_disc) / (2.0 * qa), (-qb + sqrt_disc) / (2.0 * qa)] {
        if (0.0..=1.0).contains(&t) {
            return Some(a + t * d);
        }
    }
    None
}

/// Welds vertices at identical (quantized) positions so component analysis
/// sees shared edges across clipped triangles.
fn weld(mesh: &mut SurfaceMesh) {
    use std::collections::HashMap;
    let quant = |v: f64| (v * 1e9).round() as i64;
    let mut map: HashMap<[i64; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut remap = vec![0usize; mesh.vertices.len()];
    for (i, v) in mesh.vertices.iter().enumerate() {
        let key = [quant(v.x), quant(v.y), quant(v.z)];
        remap[i] = *map.entry(key).or_insert_with(|| {
            vertices.push(*v);
            vertices.len() - 1
        });
    }
    let mut triangles = Vec::with_capacity(mesh.triangles.len());
    for t in &mesh.triangles {
        let idx = [remap[t[0]], remap[t[1]], remap[t[2]]];
        if idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2] {
            triangles.push(idx);
        }
    }
    mesh.vertices = vertices;
    mesh.triangles = triangles;
}

/// Keeps the connected component with the largest total triangle area.
fn keep_largest_component(mesh: &mut SurfaceMesh) {
    let n = mesh.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for t in &mesh.triangles {
        let a = find(&mut parent, t[0]);
        let b = find(&mut parent, t[1]);
        let c = find(&mut parent, t[2]);
        parent[b] = a;
        parent[c] = a;
    }
    use std::collections::HashMap;
    let mut area: HashMap<usize, f64> = HashMap::new();
    for t in 0..mesh.triangles.len() {
        let root = find(&mut parent, mesh.triangles[t][0]);
        *area.entry(root).or_default() += mesh.triangle_area(t);
    }
    let Some((&best, _)) = area
        .iter()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(a.0)))
    else {
        return;
    };
    mesh.triangles
        .retain(|t| find(&mut parent, t[0]) == best);
    mesh.compact();
}

/// Number of connected components (by shared vertices).
pub fn component_count(mesh: &SurfaceMesh) -> usize {
    let n = mesh.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        parent[x] = root;
        root
    }
    for t in &mesh.triangles {
        let a = find(&mut parent, t[0]);
        let b = find(&mut parent, t[1]);
        let c = find(&mut parent, t[2]);
        parent[b] = a;
        parent[c] = a;
    }
    let mut roots: Vec<usize> = (0..n)
        .filter(|&i| mesh.triangles.iter().any(|t| t.contains(&i)))
        .map(|i| find(&mut parent, i))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Appends the mounting cylinder under the base plane and stitches the patch
/// boundary loop down to the cylinder rim so the result is one component.
fn append_connector(mesh: &mut SurfaceMesh) {
    const SEGMENTS: usize = 32;
    let boundary = boundary_edges(mesh);
    let base = mesh.vertices.len();
    for ring_z in [0.0, -CONNECTOR_HEIGHT] {
        for k in 0..SEGMENTS {
            let ang = std::f64::consts::TAU * k as f64 / SEGMENTS as f64;
            mesh.vertices.push(Point3::new(
                CONNECTOR_RADIUS * ang.cos(),
                CONNECTOR_RADIUS * ang.sin(),
                ring_z,
            ));
        }
    }
    let bottom_center = mesh.vertices.len();
    mesh.vertices.push(Point3::new(0.0, 0.0, -CONNECTOR_HEIGHT));
    for k in 0..SEGMENTS {
        let k1 = (k + 1) % SEGMENTS;
        let (t0, t1) = (base + k, base + k1);
        let (b0, b1) = (base + SEGMENTS + k, base + SEGMENTS + k1);
        // Outward-facing side wall.
        mesh.triangles.push([t0, b0, t1]);
        mesh.triangles.push([t1, b0, b1]);
        // Downward-facing cap.
        mesh.triangles.push([bottom_center, b1, b0]);
    }

    // Skirt: connect each patch boundary edge to the nearest rim vertices.
    let rim_index = |v: &Point3<f64>| {
        let ang = v.y.atan2(v.x).rem_euclid(std::f64::consts::TAU);
        base + ((ang / std::f64::consts::TAU * SEGMENTS as f64).round() as usize % SEGMENTS)
    };
    for (a, b) in boundary {
        let ra = rim_index(&mesh.vertices[a]);
        let rb = rim_index(&mesh.vertices[b]);
        mesh.triangles.push([a, b, ra]);
        if ra != rb {
            mesh.triangles.push([b, rb, ra]);
        }
    }
}

/// Edges referenced by exactly one triangle.
fn boundary_edges(mesh: &SurfaceMesh) -> Vec<(usize, usize)> {
    use std::collections::HashMap;
    let mut count: HashMap<(usize, usize), (usize, (usize, usize))> = HashMap::new();
    for t in &mesh.triangles {
        for k in 0..3 {
            let (i, j) = (t[k], t[(k + 1) % 3]);
            let key = (i.min(j), i.max(j));
            let entry = count.entry(key).or_insert((0, (i, j)));
            entry.0 += 1;
        }
    }
    let mut edges: Vec<_> = count
        .into_iter()
        .filter(|(_, (c, _))| *c == 1)
        .map(|(_, (_, e))| e)
        .collect();
    edges.sort_unstable();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn convex_body_accepts_every_sample() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 10.0, 12, 24);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples = sample_outward_points(&sphere, 200, &mut rng).unwrap();
        assert_eq!(samples.len(), 200);
        let c = sphere.centroid();
        for (p, n) in samples {
            assert!(n.dot(&(p - c)) > 0.0);
        }
    }

    #[test]
    fn zero_count_is_empty() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 10.0, 6, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(sample_outward_points(&sphere, 0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn half_inverted_sphere_accepts_about_half() {
        // Monte-Carlo acceptance oracle: flipping the winding of half the
        // sphere's area makes those normals fail the outwardness test, so the
        // acceptance rate is 0.5. (A flat plane through the centroid is
        // degenerate for this check: its outwardness dot product is exactly
        // zero everywhere, so strict `> 0` rejects every sample.)
        let mut sphere = SurfaceMesh::uv_sphere(Point3::origin(), 10.0, 16, 32);
        let count = sphere.triangles.len();
        let mut flipped = 0.0;
        let total: f64 = sphere.area();
        for t in 0..count {
            if flipped < total / 2.0 {
                flipped += sphere.triangle_area(t);
                sphere.triangles[t].swap(1, 2);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut accepted = 0usize;
        let trials = 4000;
        let centroid = sphere.centroid();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for t in 0..sphere.triangles.len() {
            acc += sphere.triangle_area(t);
            cumulative.push(acc);
        }
        for _ in 0..trials {
            let target = rng.gen_range(0.0..acc);
            let t = cumulative.partition_point(|&c| c < target);
            let [a, b, c] = sphere.triangle_vertices(t);
            let p = Point3::from((a.coords + b.coords + c.coords) / 3.0);
            if sphere.face_normal(t).dot(&(p - centroid)) > 0.0 {
                accepted += 1;
            }
        }
        let rate = accepted as f64 / trials as f64;
        assert!((rate - 0.5).abs() < 0.05, "acceptance rate {rate}");
    }

    #[test]
    fn plane_through_centroid_rejects_all() {
        let plate = SurfaceMesh::rect_plate(20.0, 20.0, 8, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(sample_outward_points(&plate, 5, &mut rng).is_err());
    }

    #[test]
    fn contained_mesh_keeps_every_triangle() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 10.0, 10, 20);
        let clipped = clip_to_sphere(&sphere, &Point3::origin(), 100.0);
        assert_eq!(clipped.triangles.len(), sphere.triangles.len());
        assert!((clipped.area() - sphere.area()).abs() / sphere.area() < 1e-9);
    }

    #[test]
    fn plate_clip_area_matches_monte_carlo() {
        // Sphere radius r touching a plane at depth h cuts a disk of radius
        // √(r² − (r−h)²); compare the clipped area against a Monte-Carlo
        // estimate of that footprint.
        let plate = SurfaceMesh::rect_plate(60.0, 60.0, 240, 240);
        let (r, h) = (18.0, 4.0);
        let center = Point3::new(0.0, 0.0, r - h);
        let clipped = clip_to_sphere(&plate, &center, r);
        let clip_area = clipped.area();

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 2_000_000;
        let mut hits = 0usize;
        for _ in 0..trials {
            let x = rng.gen_range(-30.0..30.0);
            let y = rng.gen_range(-30.0..30.0);
            if (Point3::new(x, y, 0.0) - center).norm_squared() <= r * r {
                hits += 1;
            }
        }
        let mc_area = 3600.0 * hits as f64 / trials as f64;
        assert!(
            (clip_area - mc_area).abs() / mc_area < 0.02,
            "clip {clip_area:.2} vs MC {mc_area:.2}"
        );
    }

    #[test]
    fn patch_standardization_postconditions() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 30.0, 24, 48);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let samples = sample_outward_points(&sphere, 3, &mut rng).unwrap();
        for (p, n) in samples {
            let patch = extract_patch(
                &sphere,
                &p,
                &n,
                &PatchParams {
                    offset: 5.0,
                    radius: 15.0,
                    scale: 1.0,
                },
            )
            .unwrap();
            assert_eq!(component_count(&patch.mesh), 1, "patch must be connected");
            let apex = patch
                .mesh
                .vertices
                .iter()
                .fold(f64::NEG_INFINITY, |m, v| m.max(v.z));
            assert!((apex - APEX_HEIGHT).abs() < 1e-9, "apex at {apex}");
        }
    }

    #[test]
    fn patch_extraction_is_deterministic() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 30.0, 16, 32);
        let p = Point3::new(0.0, 0.0, 30.0);
        let n = nalgebra::Vector3::new(0.0, 0.0, 1.0);
        let params = PatchParams::default();
        let a = extract_patch(&sphere, &p, &n, &params).unwrap();
        let b = extract_patch(&sphere, &p, &n, &params).unwrap();
        assert_eq!(a.mesh.vertices.len(), b.mesh.vertices.len());
        for (va, vb) in a.mesh.vertices.iter().zip(&b.mesh.vertices) {
            assert_eq!(va, vb);
        }
    }

    #[test]
    fn patch_vertices_lie_within_clip_sphere() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 30.0, 24, 48);
        let p = Point3::new(30.0, 0.0, 0.0);
        let n = nalgebra::Vector3::new(1.0, 0.0, 0.0);
        let params = PatchParams {
            offset: 5.0,
            radius: 16.0,
            scale: 1.0,
        };
        let center = p + params.offset * n;
        let clipped = clip_to_sphere(&sphere, &center, params.radius);
        for v in &clipped.vertices {
            assert!((v - center).norm() <= params.radius + 1e-9);
        }
    }

    #[test]
    fn empty_intersection_is_an_error() {
        let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 5.0, 8, 16);
        let p = Point3::new(0.0, 0.0, 5.0);
        let n = nalgebra::Vector3::new(0.0, 0.0, 1.0);
        let params = PatchParams {
            offset: 100.0,
            radius: 10.0,
            scale: 1.0,
        };
        assert!(extract_patch(&sphere, &p, &n, &params).is_err());
    }
}
