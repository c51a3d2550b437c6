//! Converged simulation frames and their CSV / STL exports.

use std::io::Write;

use nalgebra::{Isometry3, Matrix3, Vector3};

use super::contact::ContactStatus;
use super::mesh::TetMesh;
use crate::error::Result;
use crate::geometry::write_stl_binary;

/// State of one converged quasi-static equilibrium.
#[derive(Debug, Clone)]
pub struct SimFrame {
    pub step: usize,
    /// Nodal displacements, mm.
    pub displacements: Vec<Vector3<f64>>,
    /// Per-element Cauchy stress, MPa.
    pub element_stress: Vec<Matrix3<f64>>,
    /// Per-node contact normal force vector, N (zero when not in contact).
    pub contact_normal_force: Vec<Vector3<f64>>,
    /// Per-node contact shear force vector, N.
    pub contact_shear_force: Vec<Vector3<f64>>,
    /// Per-node contact status.
    pub contact_status: Vec<ContactStatus>,
    /// Per-node contact area, mm² (zero when not in contact).
    pub contact_area: Vec<f64>,
    /// Per-node owning indenter (usize::MAX when free).
    pub contact_indenter: Vec<usize>,
    /// Per-indenter reaction force RF = −Σ contact forces, N.
    pub indenter_reactions: Vec<Vector3<f64>>,
    /// Indenter poses at this frame.
    pub indenter_poses: Vec<Isometry3<f64>>,
    /// Total strain energy, mJ (N·mm).
    pub strain_energy: f64,
    /// Largest contact penetration depth, mm.
    pub max_penetration: f64,
    /// Largest contact normal traction, MPa.
    pub max_normal_traction: f64,
    /// Final residual norm of the Newton solve, N.
    pub residual_norm: f64,
    /// Newton iterations spent (including substep retries).
    pub newton_iterations: usize,
}

impl SimFrame {
    pub fn zero(mesh: &TetMesh, n_indenters: usize) -> Self {
        Self {
            step: 0,
            displacements: vec![Vector3::zeros(); mesh.nodes.len()],
            element_stress: vec![Matrix3::zeros(); mesh.tets.len()],
            contact_normal_force: vec![Vector3::zeros(); mesh.nodes.len()],
            contact_shear_force: vec![Vector3::zeros(); mesh.nodes.len()],
            contact_status: vec![ContactStatus::Free; mesh.nodes.len()],
            contact_area: vec![0.0; mesh.nodes.len()],
            contact_indenter: vec![usize::MAX; mesh.nodes.len()],
            indenter_reactions: vec![Vector3::zeros(); n_indenters],
            indenter_poses: vec![Isometry3::identity(); n_indenters],
            strain_energy: 0.0,
            max_penetration: 0.0,
            max_normal_traction: 0.0,
            residual_norm: 0.0,
            newton_iterations: 0,
        }
    }

    /// Volume-weighted nodal average of the element stresses.
    pub fn nodal_stress(&self, mesh: &TetMesh) -> Vec<Matrix3<f64>> {
        let mut acc = vec![Matrix3::zeros(); mesh.nodes.len()];
        let mut weight = vec![0.0f64; mesh.nodes.len()];
        for (e, t) in mesh.tets.iter().enumerate() {
            let v = mesh.tet_volume(e);
            for &n in t {
                acc[n] += v * self.element_stress[e];
                weight[n] += v;
            }
        }
        for (a, w) in acc.iter_mut().zip(&weight) {
            if *w > 0.0 {
                *a /= *w;
            }
        }
        acc
    }

    /// Writes the per-node CSV mirror of the frame: id, reference position,
    /// displacement, averaged stress, contact vectors, status, area.
    pub fn write_csv<W: Write>(&self, mesh: &TetMesh, mut out: W) -> Result<()> {
        writeln!(
            out,
            "node,x,y,z,ux,uy,uz,sxx,syy,szz,sxy,sxz,syz,cnx,cny,cnz,csx,csy,csz,status,area"
        )?;
        let stress = self.nodal_stress(mesh);
        for i in 0..mesh.nodes.len() {
            let p = mesh.nodes[i];
            let u = self.displacements[i];
            let s = stress[i];
            let cn = self.contact_normal_force[i];
            let cs = self.contact_shear_force[i];
            let status = match self.contact_status[i] {
                ContactStatus::Free => "free",
                ContactStatus::Stick => "stick",
                ContactStatus::Slip => "slip",
            };
            writeln!(
                out,
                "{i},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{status},{}",
                p.x,
                p.y,
                p.z,
                u.x,
                u.y,
                u.z,
                s[(0, 0)],
                s[(1, 1)],
                s[(2, 2)],
                s[(0, 1)],
                s[(0, 2)],
                s[(1, 2)],
                cn.x,
                cn.y,
                cn.z,
                cs.x,
                cs.y,
                cs.z,
                self.contact_area[i],
            )?;
        }
        Ok(())
    }

    /// Writes the deformed boundary surface as binary STL.
    pub fn write_deformed_stl<W: Write>(&self, mesh: &TetMesh, out: W) -> Result<()> {
        let surface = mesh.surface_mesh(Some(&self.displacements));
        write_stl_binary(&surface, out)
    }

    /// Sum of all per-node contact forces attributed to `indenter`.
    pub fn contact_force_total(&self, indenter: usize) -> Vector3<f64> {
        let mut total = Vector3::zeros();
        for i in 0..self.contact_normal_force.len() {
            if self.contact_indenter[i] == indenter {
                total += self.contact_normal_force[i] + self.contact_shear_force[i];
            }
        }
        total
    }
}
