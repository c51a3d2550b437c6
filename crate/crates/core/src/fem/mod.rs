//! Quasi-static nonlinear finite elements: graded gel meshes, penalty contact
//! with regularized Coulomb friction, Newton equilibrium solves, and keypoint
//! sequence stepping.

mod contact;
mod frame;
mod linsys;
mod mesh;
mod solver;

pub use contact::{ContactParams, ContactStatus, RigidIndenter, DEFAULT_FRICTION};
pub use frame::SimFrame;
pub use mesh::{
    generate_graded_mesh, read_tet_ascii, write_tet_ascii, GelProfile, TetMesh, ENCASTRE_TOL,
};
pub use solver::{solve_step, Constraints, SolverControls};

use nalgebra::{Isometry3, Point3, Vector3};

use crate::error::{Error, Result};
use crate::material::HyperelasticModel;
use crate::trajectory::{apply_motion, SimConfig};

/// Outcome of a keypoint sequence simulation. Frames hold one converged
/// equilibrium per keypoint; on a step failure, the frames computed so far
/// are still returned together with the failing step and its error.
#[derive(Debug)]
pub struct SequenceResult {
    pub frames: Vec<SimFrame>,
    pub failure: Option<(usize, Error)>,
}

/// Steps the gel through a keypoint motion plan: one converged frame per
/// keypoint, each warm-started from the previous. Indenters move
/// independently per step.
pub fn simulate_sequence(
    mesh: &TetMesh,
    model: &HyperelasticModel,
    indenters: &[&RigidIndenter],
    config: &SimConfig,
    params: &ContactParams,
    controls: &SolverControls,
) -> Result<SequenceResult> {
    if indenters.len() != config.indenters.len() {
        return Err(Error::InvalidInput(format!(
            "{} indenters supplied but the motion plan describes {}",
            indenters.len(),
            config.indenters.len()
        )));
    }
    let pose_tracks: Vec<Vec<Isometry3<f64>>> =
        config.indenters.iter().map(apply_motion).collect();
    let n_steps = pose_tracks.iter().map(|t| t.len()).max().unwrap_or(1);
    for track in &pose_tracks {
        if track.len() != n_steps {
            return Err(Error::InvalidInput(
                "all indenters must have the same number of motion steps".into(),
            ));
        }
    }

    let constraints = Constraints::default();
    let mut frames: Vec<SimFrame> = Vec::with_capacity(n_steps);
    for step in 0..n_steps {
        let placed: Vec<(&RigidIndenter, Isometry3<f64>)> = indenters
            .iter()
            .enumerate()
            .map(|(k, ind)| (*ind, pose_tracks[k][step]))
            .collect();
        let prev = frames.last();
        match solve_step(
            mesh,
            model,
            &placed,
            params,
            &constraints,
            prev,
            controls,
            step,
        ) {
            Ok(frame) => frames.push(frame),
            Err(err) => {
                return Ok(SequenceResult {
                    frames,
                    failure: Some((step, err)),
                })
            }
        }
    }
    Ok(SequenceResult {
        frames,
        failure: None,
    })
}

/// Per-indenter contact extraction from a converged frame.
#[derive(Debug, Clone)]
pub struct IndenterContact {
    pub indenter: usize,
    /// (node, normal force, shear force) triples attributed to this indenter.
    pub nodes: Vec<(usize, Vector3<f64>, Vector3<f64>)>,
    pub total_normal: Vector3<f64>,
    pub total_shear: Vector3<f64>,
}

impl IndenterContact {
    pub fn total(&self) -> Vector3<f64> {
        self.total_normal + self.total_shear
    }
}

/// Groups contact nodes and attributes them to indenters by k-means over the
/// deformed node positions, with cluster centers seeded at (and clusters
/// assigned to) the nearest indenter reference points.
pub fn extract_contact_forces(
    mesh: &TetMesh,
    frame: &SimFrame,
    indenter_refs: &[Point3<f64>],
) -> Result<Vec<IndenterContact>> {
    let contact_nodes: Vec<usize> = (0..mesh.nodes.len())
        .filter(|&n| frame.contact_status[n] != ContactStatus::Free)
        .collect();
    if contact_nodes.is_empty() {
        return Ok((0..indenter_refs.len())
            .map(|i| IndenterContact {
                indenter: i,
                nodes: Vec::new(),
                total_normal: Vector3::zeros(),
                total_shear: Vector3::zeros(),
            })
            .collect());
    }
    if indenter_refs.is_empty() {
        return Err(Error::Attribution(
            "contact nodes present but no indenters flagged active".into(),
        ));
    }

    let positions: Vec<Point3<f64>> = contact_nodes
        .iter()
        .map(|&n| mesh.nodes[n] + frame.displacements[n])
        .collect();
    let k = indenter_refs.len().min(positions.len());
    let mut centers: Vec<Point3<f64>> = indenter_refs.iter().take(k).copied().collect();
    let mut assignment = vec![0usize; positions.len()];
    for _ in 0..50 {
        let mut changed = false;
        for (pi, p) in positions.iter().enumerate() {
            let best = (0..k)
                .min_by(|&a, &b| {
                    (p - centers[a])
                        .norm_squared()
                        .partial_cmp(&(p - centers[b]).norm_squared())
                        .unwrap()
                })
                .unwrap();
            if assignment[pi] != best {
                assignment[pi] = best;
                changed = true;
            }
        }
        let mut sums = vec![Vector3::zeros(); k];
        let mut counts = vec![0usize; k];
        for (pi, &c) in assignment.iter().enumerate() {
            sums[c] += positions[pi].coords;
            counts[c] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = Point3::from(sums[c] / counts[c] as f64);
            }
        }
        if !changed {
            break;
        }
    }
    // Assign each cluster to the nearest indenter reference point.
    let cluster_owner: Vec<usize> = (0..k)
        .map(|c| {
            (0..indenter_refs.len())
                .min_by(|&a, &b| {
                    (centers[c] - indenter_refs[a])
                        .norm_squared()
                        .partial_cmp(&(centers[c] - indenter_refs[b]).norm_squared())
                        .unwrap()
                })
                .unwrap()
        })
        .collect();

    let mut out: Vec<IndenterContact> = (0..indenter_refs.len())
        .map(|i| IndenterContact {
            indenter: i,
            nodes: Vec::new(),
            total_normal: Vector3::zeros(),
            total_shear: Vector3::zeros(),
        })
        .collect();
    for (pi, &node) in contact_nodes.iter().enumerate() {
        let owner = cluster_owner[assignment[pi]];
        let nf = frame.contact_normal_force[node];
        let sf = frame.contact_shear_force[node];
        out[owner].nodes.push((node, nf, sf));
        out[owner].total_normal += nf;
        out[owner].total_shear += sf;
    }
    Ok(out)
}
