//! Rigid indenters and node-to-surface penalty contact with regularized
//! Coulomb friction.

use nalgebra::{Isometry3, Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{MeshDistance, SurfaceMesh};

/// Default friction coefficient between indenter and gel.
pub const DEFAULT_FRICTION: f64 = 2.2;
/// Default tangential regularization slip, mm.
pub const DEFAULT_SLIP_REG: f64 = 1e-3;

/// Contact law parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContactParams {
    /// Coulomb friction coefficient (≥ 0).
    pub friction_mu: f64,
    /// Normal penalty stiffness per unit area, N/mm per mm².
    pub normal_penalty: f64,
    /// Tangential regularization slip scale, mm.
    pub slip_reg: f64,
}

impl ContactParams {
    /// Paper-faithful defaults for a given material: μ = 2.2, penalty
    /// 100 · C1 / fine_h, slip regularization 1e-3 mm.
    pub fn for_material(c1: f64, fine_h: f64) -> Self {
        Self {
            friction_mu: DEFAULT_FRICTION,
            normal_penalty: 100.0 * c1 / fine_h,
            slip_reg: DEFAULT_SLIP_REG,
        }
    }
}

/// Rigid triangulated indenter with a reference pose.
#[derive(Debug, Clone)]
pub struct RigidIndenter {
    pub name: String,
    distance: MeshDistance,
    pub reference_pose: Isometry3<f64>,
}

impl RigidIndenter {
    pub fn new(name: impl Into<String>, surface: SurfaceMesh, reference_pose: Isometry3<f64>) -> Self {
        Self {
            name: name.into(),
            distance: MeshDistance::new(surface),
            reference_pose,
        }
    }

    pub fn surface(&self) -> &SurfaceMesh {
        self.distance.mesh()
    }

    /// Signed distance (mm) from a world point to the indenter surface at
    /// `pose`, with the world-frame closest point and outward normal.
    pub fn world_distance(
        &self,
        pose: &Isometry3<f64>,
        point: &Point3<f64>,
    ) -> Option<(f64, Point3<f64>, Vector3<f64>)> {
        let local = pose.inverse_transform_point(point);
        let hit = self.distance.query(&local)?;
        Some((
            hit.signed_distance,
            pose.transform_point(&hit.closest_point),
            pose.transform_vector(&hit.normal),
        ))
    }

    /// Conservative world-space bounding sphere at `pose`, padded by `margin`.
    pub fn bounding_sphere(&self, pose: &Isometry3<f64>, margin: f64) -> (Point3<f64>, f64) {
        let (lo, hi) = self.distance.mesh().bounds();
        let center_local = Point3::from((lo.coords + hi.coords) / 2.0);
        let radius = (hi - lo).norm() / 2.0 + margin;
        (pose.transform_point(&center_local), radius)
    }
}

/// Per-node contact state within a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum ContactStatus {
    #[default]
    Free,
    Stick,
    Slip,
}

/// Contact force contribution at one gel surface node.
#[derive(Debug, Clone, Copy)]
pub struct NodeContact {
    pub node: usize,
    pub indenter: usize,
    pub status: ContactStatus,
    /// Normal force vector on the gel node, N.
    pub normal_force: Vector3<f64>,
    /// Tangential (friction) force vector on the gel node, N.
    pub shear_force: Vector3<f64>,
    /// Tributary contact area, mm².
    pub area: f64,
    /// Penetration depth (positive), mm.
    pub penetration: f64,
}

/// Evaluates penalty contact at one node against one indenter.
///
/// `x` is the current node position; `x_rel_prev` is the node position at the
/// previous converged step mapped through the indenter's motion since then
/// (the friction anchor). Returns `None` when the node is separated.
pub fn evaluate_node_contact(
    indenter: &RigidIndenter,
    indenter_idx: usize,
    pose: &Isometry3<f64>,
    node: usize,
    x: &Point3<f64>,
    anchor: &Point3<f64>,
    area: f64,
    params: &ContactParams,
) -> Option<NodeContact> {
    let (gap, _cp, normal) = indenter.world_distance(pose, x)?;
    if gap >= 0.0 {
        return None;
    }
    let penetration = -gap;
    let t_n = params.normal_penalty * penetration;
    let normal_force = t_n * area * normal;

    let mut shear_force = Vector3::zeros();
    let mut status = ContactStatus::Stick;
    if params.friction_mu > 0.0 {
        let slip = x - anchor;
        let tangential = slip - normal * slip.dot(&normal);
        let mag = tangential.norm();
        if mag > 1e-14 {
            // Smooth saturation: traction cap·tanh(|ξ|/reg) stays below the
            // Coulomb limit μ·t_n while keeping the stick stiffness cap/reg
            // at zero slip; C¹ smoothness keeps Newton stable.
            let cap = params.friction_mu * t_n;
            let s = mag / params.slip_reg;
            let t_t = cap * s.tanh();
            if s > 1.0 {
                status = ContactStatus::Slip;
            }
            shear_force = -(t_t * area) * (tangential / mag);
        }
    }
    Some(NodeContact {
        node,
        indenter: indenter_idx,
        status,
        normal_force,
        shear_force,
        area,
        penetration,
    })
}
