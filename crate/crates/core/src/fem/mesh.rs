//! Tetrahedral gel meshes: graded generation, validation, and the ASCII tet
//! format.
//!
//! The graded mesher builds a layered lattice from the exposed (top) surface
//! down: depth steps start at `fine_h` and grow geometrically by `growth`
//! until capped near `coarse_h`, while the in-plane grid coarsens through
//! conforming 2:1 transition slabs so interior cells are coarse in all three
//! directions. The graded (depth) direction respects the `growth` ratio
//! between adjacent steps; lateral coarsening happens in discrete 2:1 jumps.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::{Point3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::SurfaceMesh;

/// Tolerance for assigning bottom-plane nodes to the clamped base set, mm.
pub const ENCASTRE_TOL: f64 = 0.1;

/// Deformable tetrahedral gel volume.
#[derive(Debug, Clone, Default)]
pub struct TetMesh {
    /// Reference node positions, mm.
    pub nodes: Vec<Point3<f64>>,
    /// Tetrahedra with positive signed volume.
    pub tets: Vec<[usize; 4]>,
    /// Boundary triangles, outward winding.
    pub surface_tris: Vec<[usize; 3]>,
    /// Named node sets ("encastre_base", "gel_surface", ...).
    pub node_sets: BTreeMap<String, Vec<usize>>,
    /// Characteristic fine element size used by solver heuristics, mm.
    pub fine_h: f64,
}

impl TetMesh {
    /// Builds from nodes and tets: orients tets positive, extracts the
    /// boundary, and assigns the base/surface node sets.
    pub fn from_cells(nodes: Vec<Point3<f64>>, mut tets: Vec<[usize; 4]>, fine_h: f64) -> Result<Self> {
        for t in &mut tets {
            if t.iter().any(|&i| i >= nodes.len()) {
                return Err(Error::Mesh("tet references a missing node".into()));
            }
            let v = signed_volume(&nodes, t);
            if v == 0.0 {
                return Err(Error::Mesh("degenerate (zero-volume) tet".into()));
            }
            if v < 0.0 {
                t.swap(2, 3);
            }
        }
        let surface_tris = extract_boundary(&nodes, &tets)?;
        let mut mesh = Self {
            nodes,
            tets,
            surface_tris,
            node_sets: BTreeMap::new(),
            fine_h,
        };
        mesh.assign_default_sets();
        mesh.validate()?;
        Ok(mesh)
    }

    fn assign_default_sets(&mut self) {
        let mut on_boundary = vec![false; self.nodes.len()];
        for t in &self.surface_tris {
            for &n in t {
                on_boundary[n] = true;
            }
        }
        let mut base = Vec::new();
        let mut surface = Vec::new();
        for (i, p) in self.nodes.iter().enumerate() {
            if p.y.abs() <= ENCASTRE_TOL {
                base.push(i);
            } else if on_boundary[i] {
                surface.push(i);
            }
        }
        self.node_sets.insert("encastre_base".into(), base);
        self.node_sets.insert("gel_surface".into(), surface);
    }

    pub fn validate(&self) -> Result<()> {
        for (k, t) in self.tets.iter().enumerate() {
            if signed_volume(&self.nodes, t) <= 0.0 {
                return Err(Error::Mesh(format!("tet {k} has non-positive volume")));
            }
        }
        if self
            .node_sets
            .get("encastre_base")
            .map_or(true, |s| s.is_empty())
        {
            return Err(Error::Mesh("encastre_base node set is empty".into()));
        }
        Ok(())
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        signed_volume(&self.nodes, &self.tets[t])
    }

    pub fn node_set(&self, name: &str) -> &[usize] {
        self.node_sets.get(name).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Boundary triangles restricted to the exposed (non-base) surface.
    pub fn exposed_surface_tris(&self) -> Vec<[usize; 3]> {
        self.surface_tris
            .iter()
            .filter(|t| t.iter().any(|&n| self.nodes[n].y > ENCASTRE_TOL))
            .copied()
            .collect()
    }

    /// Reference tributary area per node over the exposed surface, mm².
    pub fn surface_node_areas(&self) -> Vec<f64> {
        let mut areas = vec![0.0; self.nodes.len()];
        for t in &self.exposed_surface_tris() {
            let a = triangle_area(&self.nodes, t) / 3.0;
            for &n in t {
                areas[n] += a;
            }
        }
        areas
    }

    /// The boundary as an indexed surface mesh, optionally displaced.
    pub fn surface_mesh(&self, displacements: Option<&[Vector3<f64>]>) -> SurfaceMesh {
        let mut used: Vec<i64> = vec![-1; self.nodes.len()];
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        for t in &self.surface_tris {
            let mut tri = [0usize; 3];
            for (k, &n) in t.iter().enumerate() {
                if used[n] < 0 {
                    used[n] = vertices.len() as i64;
                    let mut p = self.nodes[n];
                    if let Some(u) = displacements {
                        p += u[n];
                    }
                    vertices.push(p);
                }
                tri[k] = used[n] as usize;
            }
            triangles.push(tri);
        }
        SurfaceMesh {
            vertices,
            triangles,
        }
    }

    /// All unique tet edges.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = std::collections::HashSet::new();
        for t in &self.tets {
            for i in 0..4 {
                for j in i + 1..4 {
                    let (a, b) = (t[i].min(t[j]), t[i].max(t[j]));
                    set.insert((a, b));
                }
            }
        }
        let mut v: Vec<_> = set.into_iter().collect();
        v.sort_unstable();
        v
    }
}

pub(crate) fn signed_volume(nodes: &[Point3<f64>], t: &[usize; 4]) -> f64 {
    let d1 = nodes[t[1]] - nodes[t[0]];
    let d2 = nodes[t[2]] - nodes[t[0]];
    let d3 = nodes[t[3]] - nodes[t[0]];
    d1.cross(&d2).dot(&d3) / 6.0
}

fn triangle_area(nodes: &[Point3<f64>], t: &[usize; 3]) -> f64 {
    let a = nodes[t[1]] - nodes[t[0]];
    let b = nodes[t[2]] - nodes[t[0]];
    0.5 * a.cross(&b).norm()
}

/// Boundary faces (appearing in exactly one tet), wound outward.
fn extract_boundary(nodes: &[Point3<f64>], tets: &[[usize; 4]]) -> Result<Vec<[usize; 3]>> {
    let mut faces: HashMap<[usize; 3], (usize, usize)> = HashMap::new();
    // Local faces with outward winding for a positively oriented tet.
    const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    for (ti, t) in tets.iter().enumerate() {
        for f in &FACES {
            let tri = [t[f[0]], t[f[1]], t[f[2]]];
            let mut key = tri;
            key.sort_unstable();
            let e = faces.entry(key).or_insert((0, ti));
            e.0 += 1;
        }
    }
    let mut boundary = Vec::new();
    for (ti, t) in tets.iter().enumerate() {
        for f in &FACES {
            let tri = [t[f[0]], t[f[1]], t[f[2]]];
            let mut key = tri;
            key.sort_unstable();
            match faces.get(&key) {
                Some(&(1, owner)) if owner == ti => boundary.push(tri),
                Some(&(count, _)) if count > 2 => {
                    return Err(Error::Mesh(format!(
                        "face shared by {count} tets; mesh is non-manifold"
                    )))
                }
                _ => {}
            }
        }
    }
    let _ = nodes;
    Ok(boundary)
}

/// Gel volume description for the graded mesher. The base sits on y = 0 and
/// the exposed surface faces +y.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum GelProfile {
    /// Rectangular block `size_x × height × size_z`, centered in x/z.
    Box {
        size_x: f64,
        height: f64,
        size_z: f64,
    },
    /// Flat-bottomed dome: cylindrical skirt of `skirt_height` topped by a
    /// spherical cap of `cap_height`, footprint radius `base_radius`.
    Dome {
        base_radius: f64,
        skirt_height: f64,
        cap_height: f64,
    },
}

impl GelProfile {
    fn footprint_half_extents(&self) -> (f64, f64) {
        match self {
            GelProfile::Box { size_x, size_z, .. } => (size_x / 2.0, size_z / 2.0),
            GelProfile::Dome { base_radius, .. } => (*base_radius, *base_radius),
        }
    }

    fn max_height(&self) -> f64 {
        match self {
            GelProfile::Box { height, .. } => *height,
            GelProfile::Dome {
                skirt_height,
                cap_height,
                ..
            } => skirt_height + cap_height,
        }
    }

    /// Column height at footprint parameter (u, v) ∈ [−1, 1]², and the world
    /// (x, z) of that column.
    fn column(&self, u: f64, v: f64) -> (f64, f64, f64) {
        match self {
            GelProfile::Box { size_x, height, size_z } => {
                (u * size_x / 2.0, v * size_z / 2.0, *height)
            }
            GelProfile::Dome {
                base_radius,
                skirt_height,
                cap_height,
            } => {
                // Elliptical square-to-disk map keeps the lattice conforming
                // while filling the circular footprint.
                let x = u * (1.0 - v * v / 2.0).sqrt() * base_radius;
                let z = v * (1.0 - u * u / 2.0).sqrt() * base_radius;
                let r2 = x * x + z * z;
                let rs = (base_radius * base_radius + cap_height * cap_height) / (2.0 * cap_height);
                let cap = ((rs * rs - r2).max(0.0)).sqrt() - (rs - cap_height);
                (x, z, skirt_height + cap.max(0.0))
            }
        }
    }
}

/// Graded tetrahedral mesh of a gel volume.
///
/// Depth steps start at `fine_h` under the exposed surface and grow by at
/// most `growth` per step, capped near `coarse_h`; the in-plane grid halves
/// its resolution through conforming transition slabs as depth increases.
/// Bottom-plane nodes (|y| ≤ 0.1 mm) form the `encastre_base` set.
pub fn generate_graded_mesh(
    profile: &GelProfile,
    fine_h: f64,
    coarse_h: f64,
    growth: f64,
) -> Result<TetMesh> {
    if !(fine_h > 0.0) || fine_h > coarse_h {
        return Err(Error::Mesh(format!(
            "need 0 < fine_h <= coarse_h, got {fine_h} / {coarse_h}"
        )));
    }
    if !(growth > 1.0) {
        return Err(Error::Mesh(format!("growth must exceed 1, got {growth}")));
    }

    let height = profile.max_height();
    let (hx, hz) = profile.footprint_half_extents();

    // In-plane fine spacing; cell counts padded to a multiple of 2^levels so
    // coarser layers stay aligned.
    let depth_steps = build_depth_steps(height, 0.95 * fine_h, 0.95 * coarse_h, growth);
    let levels = max_doubling(fine_h, coarse_h);
    let layer_level = assign_layer_levels(&depth_steps, levels, fine_h);
    let max_level = layer_level.iter().copied().max().unwrap_or(0);

    let base_cells = (2.0 * hx.max(hz) / (0.95 * fine_h)).ceil() as usize;
    let m = 1usize << max_level;
    let nx = base_cells.div_ceil(m).max(1) * m;

    let mut builder = LatticeBuilder::new(profile, &depth_steps, nx);
    for (layer, &level) in layer_level.iter().enumerate() {
        let level_above = if layer == 0 { level } else { layer_level[layer - 1] };
        if level == level_above {
            builder.regular_layer(layer, level);
        } else {
            builder.transition_layer(layer, level_above, level);
        }
    }
    let (nodes, tets) = builder.finish();
    TetMesh::from_cells(nodes, tets, fine_h)
}

/// Depth step sizes from the exposed surface downward.
fn build_depth_steps(height: f64, first: f64, cap: f64, growth: f64) -> Vec<f64> {
    let mut steps = Vec::new();
    let mut rem = height;
    let mut s = first.min(cap);
    loop {
        if s >= cap - 1e-12 || s >= rem - 1e-12 {
            let unit = s.min(cap).min(rem.max(1e-12));
            let n = (rem / unit).ceil().max(1.0) as usize;
            let step = rem / n as f64;
            steps.extend(std::iter::repeat(step).take(n));
            break;
        }
        steps.push(s);
        rem -= s;
        s = (s * growth).min(cap);
    }
    steps
}

fn max_doubling(fine_h: f64, coarse_h: f64) -> usize {
    let mut d = 0usize;
    let mut s = fine_h;
    while s * 2.0 <= coarse_h * 1.001 && d < 4 {
        s *= 2.0;
        d += 1;
    }
    d
}

/// In-plane coarsening level per depth layer: non-decreasing, one doubling at
/// a time, targeting cells roughly as wide as they are deep.
fn assign_layer_levels(depth_steps: &[f64], max_levels: usize, fine_h: f64) -> Vec<usize> {
    let mut out = Vec::with_capacity(depth_steps.len());
    let mut current = 0usize;
    for &s in depth_steps {
        let ideal = if s > fine_h {
            (s / fine_h).log2().round().max(0.0) as usize
        } else {
            0
        };
        let next = ideal.min(max_levels).min(current + 1).max(current);
        out.push(next);
        current = next;
    }
    out
}

/// Node key on the conceptual fine lattice (plus transition cell centers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum NodeKey {
    /// (fine i, depth node j, fine k)
    Lattice(usize, usize, usize),
    /// Center of transition cell (coarse I, layer j, coarse K).
    Center(usize, usize, usize),
}

struct LatticeBuilder<'a> {
    profile: &'a GelProfile,
    /// Cumulative depth fractions per depth-node index (0 at surface, 1 at base).
    depth_fracs: Vec<f64>,
    nx: usize,
    nodes: Vec<Point3<f64>>,
    index: HashMap<NodeKey, usize>,
    tets: Vec<[usize; 4]>,
}

impl<'a> LatticeBuilder<'a> {
    fn new(profile: &'a GelProfile, depth_steps: &[f64], nx: usize) -> Self {
        let total: f64 = depth_steps.iter().sum();
        let mut fracs = vec![0.0];
        let mut acc = 0.0;
        for s in depth_steps {
            acc += s;
            fracs.push(acc / total);
        }
        *fracs.last_mut().unwrap() = 1.0;
        Self {
            profile,
            depth_fracs: fracs,
            nx,
            nodes: Vec::new(),
            index: HashMap::new(),
            tets: Vec::new(),
        }
    }

    fn lattice_node(&mut self, i: usize, j: usize, k: usize) -> usize {
        let key = NodeKey::Lattice(i, j, k);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let u = 2.0 * i as f64 / self.nx as f64 - 1.0;
        let v = 2.0 * k as f64 / self.nx as f64 - 1.0;
        let (x, z, h) = self.profile.column(u, v);
        let y = h * (1.0 - self.depth_fracs[j]);
        let id = self.nodes.len();
        self.nodes.push(Point3::new(x, y, z));
        self.index.insert(key, id);
        id
    }

    fn center_node(&mut self, ci: usize, layer: usize, ck: usize, level: usize) -> usize {
        let key = NodeKey::Center(ci, layer, ck);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let m = 1usize << level;
        let iu = (ci * m) as f64 + m as f64 / 2.0;
        let ik = (ck * m) as f64 + m as f64 / 2.0;
        let u = 2.0 * iu / self.nx as f64 - 1.0;
        let v = 2.0 * ik / self.nx as f64 - 1.0;
        let (x, z, h) = self.profile.column(u, v);
        let y = h * (1.0 - 0.5 * (self.depth_fracs[layer] + self.depth_fracs[layer + 1]));
        let id = self.nodes.len();
        self.nodes.push(Point3::new(x, y, z));
        self.index.insert(key, id);
        id
    }

    fn push_tet(&mut self, t: [usize; 4]) {
        self.tets.push(t);
    }

    /// Regular 5-tet parity split of every cell in this layer at `level`.
    fn regular_layer(&mut self, layer: usize, level: usize) {
        let m = 1usize << level;
        let cells = self.nx / m;
        for ci in 0..cells {
            for ck in 0..cells {
                let n = |di: usize, dj: usize, dk: usize, b: &mut Self| {
                    b.lattice_node((ci + di) * m, layer + dj, (ck + dk) * m)
                };
                // Corner ids c[x][y][z] with x, z in-plane and y the depth axis
                // (dj = 0 is the layer top).
                let c000 = n(0, 0, 0, self);
                let c100 = n(1, 0, 0, self);
                let c001 = n(0, 0, 1, self);
                let c101 = n(1, 0, 1, self);
                let c010 = n(0, 1, 0, self);
                let c110 = n(1, 1, 0, self);
                let c011 = n(0, 1, 1, self);
                let c111 = n(1, 1, 1, self);
                let even = (ci + layer + ck) % 2 == 0;
                let tets: [[usize; 4]; 5] = if even {
                    [
                        [c000, c110, c011, c101],
                        [c100, c000, c110, c101],
                        [c010, c000, c011, c110],
                        [c001, c000, c101, c011],
                        [c111, c110, c101, c011],
                    ]
                } else {
                    [
                        [c100, c010, c111, c001],
                        [c000, c100, c010, c001],
                        [c110, c100, c111, c010],
                        [c101, c100, c001, c111],
                        [c011, c111, c010, c001],
                    ]
                };
                for t in tets {
                    self.push_tet(t);
                }
            }
        }
    }

    /// Conforming 2:1 transition: fine grid (level_above) on top, coarse grid
    /// (level) below, one cell-center Steiner point each.
    fn transition_layer(&mut self, layer: usize, level_above: usize, level: usize) {
        debug_assert_eq!(level, level_above + 1);
        let m_f = 1usize << level_above;
        let m_c = 1usize << level;
        let cells = self.nx / m_c;
        for ci in 0..cells {
            for ck in 0..cells {
                let center = self.center_node(ci, layer, ck, level);
                let fi0 = ci * 2;
                let fk0 = ck * 2;
                // Top: 8 fine triangles (2 per fine square, parity diagonal).
                for di in 0..2 {
                    for dk in 0..2 {
                        let (fi, fk) = (fi0 + di, fk0 + dk);
                        let q = [
                            self.lattice_node(fi * m_f, layer, fk * m_f),
                            self.lattice_node((fi + 1) * m_f, layer, fk * m_f),
                            self.lattice_node((fi + 1) * m_f, layer, (fk + 1) * m_f),
                            self.lattice_node(fi * m_f, layer, (fk + 1) * m_f),
                        ];
                        for tri in split_square(&q, (fi + layer + fk) % 2 == 0) {
                            self.push_tet([tri[0], tri[1], tri[2], center]);
                        }
                    }
                }
                // Bottom: 2 coarse triangles.
                let qb = [
                    self.lattice_node(fi0 * m_f, layer + 1, fk0 * m_f),
                    self.lattice_node((fi0 + 2) * m_f, layer + 1, fk0 * m_f),
                    self.lattice_node((fi0 + 2) * m_f, layer + 1, (fk0 + 2) * m_f),
                    self.lattice_node(fi0 * m_f, layer + 1, (fk0 + 2) * m_f),
                ];
                for tri in split_square(&qb, (ci + layer + 1 + ck) % 2 == 0) {
                    self.push_tet([tri[0], tri[1], tri[2], center]);
                }
                // Four side pentagons: bottom corners b0-b1, top corners
                // t0-t1 with midpoint tm.
                let side = |b0: usize, b1: usize, t0: usize, tm: usize, t1: usize, s: &mut Self| {
                    s.push_tet([b0, b1, tm, center]);
                    s.push_tet([b0, tm, t0, center]);
                    s.push_tet([b1, t1, tm, center]);
                };
                let ln = |i: usize, j: usize, k: usize, s: &mut Self| s.lattice_node(i, j, k);
                let (i0, i1, i2) = (fi0 * m_f, (fi0 + 1) * m_f, (fi0 + 2) * m_f);
                let (k0, k1, k2) = (fk0 * m_f, (fk0 + 1) * m_f, (fk0 + 2) * m_f);
                // k = k0 side.
                let (b0, b1) = (ln(i0, layer + 1, k0, self), ln(i2, layer + 1, k0, self));
                let (t0, tm, t1) = (
                    ln(i0, layer, k0, self),
                    ln(i1, layer, k0, self),
                    ln(i2, layer, k0, self),
                );
                side(b0, b1, t0, tm, t1, self);
                // k = k2 side.
                let (b0, b1) = (ln(i0, layer + 1, k2, self), ln(i2, layer + 1, k2, self));
                let (t0, tm, t1) = (
                    ln(i0, layer, k2, self),
                    ln(i1, layer, k2, self),
                    ln(i2, layer, k2, self),
                );
                side(b0, b1, t0, tm, t1, self);
                // i = i0 side.
                let (b0, b1) = (ln(i0, layer + 1, k0, self), ln(i0, layer + 1, k2, self));
                let (t0, tm, t1) = (
                    ln(i0, layer, k0, self),
                    ln(i0, layer, k1, self),
                    ln(i0, layer, k2, self),
                );
                side(b0, b1, t0, tm, t1, self);
                // i = i2 side.
                let (b0, b1) = (ln(i2, layer + 1, k0, self), ln(i2, layer + 1, k2, self));
                let (t0, tm, t1) = (
                    ln(i2, layer, k0, self),
                    ln(i2, layer, k1, self),
                    ln(i2, layer, k2, self),
                );
                side(b0, b1, t0, tm, t1, self);
            }
        }
    }

    fn finish(self) -> (Vec<Point3<f64>>, Vec<[usize; 4]>) {
        (self.nodes, self.tets)
    }
}

/// Splits a quad (ccw corners) into two triangles along the parity diagonal.
fn split_square(q: &[usize; 4], even: bool) -> [[usize; 3]; 2] {
    if even {
        [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
    } else {
        [[q[1], q[2], q[3]], [q[1], q[3], q[0]]]
    }
}

/// Writes the documented ASCII tet format: `node x y z`, `tet a b c d`, and
/// `set name i0 i1 ...` lines (zero-based indices, order-preserving).
pub fn write_tet_ascii<W: Write>(mesh: &TetMesh, mut out: W) -> Result<()> {
    for n in &mesh.nodes {
        writeln!(out, "node {} {} {}", n.x, n.y, n.z)?;
    }
    for t in &mesh.tets {
        writeln!(out, "tet {} {} {} {}", t[0], t[1], t[2], t[3])?;
    }
    for (name, ids) in &mesh.node_sets {
        write!(out, "set {name}")?;
        for id in ids {
            write!(out, " {id}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads the ASCII tet format written by [`write_tet_ascii`].
pub fn read_tet_ascii<R: Read>(input: R, fine_h: f64) -> Result<TetMesh> {
    let reader = BufReader::new(input);
    let mut nodes = Vec::new();
    let mut tets = Vec::new();
    let mut sets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("node") => {
                let mut c = [0.0f64; 3];
                for slot in &mut c {
                    *slot = tok
                        .next()
                        .ok_or_else(|| Error::Format(format!("line {lineno}: short node")))?
                        .parse()
                        .map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
                }
                nodes.push(Point3::new(c[0], c[1], c[2]));
            }
            Some("tet") => {
                let mut c = [0usize; 4];
                for slot in &mut c {
                    *slot = tok
                        .next()
                        .ok_or_else(|| Error::Format(format!("line {lineno}: short tet")))?
                        .parse()
                        .map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
                }
                tets.push(c);
            }
            Some("set") => {
                let name = tok
                    .next()
                    .ok_or_else(|| Error::Format(format!("line {lineno}: set without name")))?
                    .to_string();
                let ids: std::result::Result<Vec<usize>, _> =
                    tok.map(|s| s.parse::<usize>()).collect();
                sets.insert(
                    name,
                    ids.map_err(|e| Error::Format(format!("line {lineno}: {e}")))?,
                );
            }
            _ => {}
        }
    }
    let mut mesh = TetMesh::from_cells(nodes, tets, fine_h)?;
    if !sets.is_empty() {
        for (k, v) in sets {
            mesh.node_sets.insert(k, v);
        }
        mesh.validate()?;
    }
    Ok(mesh)
}
