//! Quasi-static Newton solver for hyperelastic indentation.

use std::collections::HashMap;

use nalgebra::{Isometry3, Matrix3, Point3, Vector3};

use super::contact::{evaluate_node_contact, ContactParams, ContactStatus, RigidIndenter};
use super::frame::SimFrame;
use super::linsys::{reverse_cuthill_mckee, BandedUnsymmetric};
use super::mesh::TetMesh;
use crate::error::{Error, Result};
use crate::material::{stress_from_deformation, strain_energy, DeformationGradient, HyperelasticModel};

/// Newton iteration controls.
#[derive(Debug, Clone, Copy)]
pub struct SolverControls {
    /// Residual tolerance as a multiple of the characteristic force
    /// (shear-modulus × fine_h²).
    pub relative_tolerance: f64,
    pub max_iterations: usize,
    /// Backtracking halvings per iteration.
    pub max_line_search: usize,
    /// Substep bisection depth on non-convergence.
    pub max_bisection: usize,
}

impl Default for SolverControls {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-8,
            max_iterations: 50,
            max_line_search: 8,
            max_bisection: 6,
        }
    }
}

/// Dirichlet boundary conditions: the encastre base plus optional prescribed
/// nodal displacements (e.g. an affine patch test).
#[derive(Debug, Clone, Default)]
pub struct Constraints {
    pub prescribed: HashMap<usize, Vector3<f64>>,
}

impl Constraints {
    pub fn prescribe(&mut self, node: usize, u: Vector3<f64>) {
        self.prescribed.insert(node, u);
    }
}

struct Element {
    nodes: [usize; 4],
    /// Reference shape-function gradients, one column per node.
    grads: [Vector3<f64>; 4],
    volume: f64,
}

/// Precomputed assembly context reused across Newton iterations and steps.
pub struct StaticProblem<'a> {
    pub mesh: &'a TetMesh,
    pub model: &'a HyperelasticModel,
    elements: Vec<Element>,
    surface_nodes: Vec<usize>,
    surface_areas: Vec<f64>,
    /// node -> free-dof base index (usize::MAX when fully constrained).
    free_index: Vec<usize>,
    n_free: usize,
    bandwidth: usize,
    char_force: f64,
}

impl<'a> StaticProblem<'a> {
    pub fn new(
        mesh: &'a TetMesh,
        model: &'a HyperelasticModel,
        constraints: &Constraints,
    ) -> Result<Self> {
        model.validate()?;
        let mut fixed = vec![false; mesh.nodes.len()];
        for &n in mesh.node_set("encastre_base") {
            fixed[n] = true;
        }
        for &n in constraints.prescribed.keys() {
            fixed[n] = true;
        }

        let mut elements = Vec::with_capacity(mesh.tets.len());
        for t in &mesh.tets {
            let x0 = mesh.nodes[t[0]];
            let d = Matrix3::from_columns(&[
                mesh.nodes[t[1]] - x0,
                mesh.nodes[t[2]] - x0,
                mesh.nodes[t[3]] - x0,
            ]);
            let volume = d.determinant() / 6.0;
            if volume <= 0.0 {
                return Err(Error::Mesh("non-positive tet volume in assembly".into()));
            }
            let dinv_t = d
                .try_inverse()
                .ok_or_else(|| Error::Mesh("singular tet edge matrix".into()))?
                .transpose();
            let g1 = dinv_t.column(0).into_owned();
            let g2 = dinv_t.column(1).into_owned();
            let g3 = dinv_t.column(2).into_owned();
            let g0 = -(g1 + g2 + g3);
            elements.push(Element {
                nodes: *t,
                grads: [g0, g1, g2, g3],
                volume,
            });
        }

        // Free-node ordering by reverse Cuthill-McKee over the free subgraph.
        let free_nodes: Vec<usize> = (0..mesh.nodes.len()).filter(|&n| !fixed[n]).collect();
        let mut local_of_node = vec![usize::MAX; mesh.nodes.len()];
        for (l, &n) in free_nodes.iter().enumerate() {
            local_of_node[n] = l;
        }
        let mut adj = vec![Vec::new(); free_nodes.len()];
        for t in &mesh.tets {
            for i in 0..4 {
                for j in i + 1..4 {
                    let (a, b) = (local_of_node[t[i]], local_of_node[t[j]]);
                    if a != usize::MAX && b != usize::MAX {
                        adj[a].push(b);
                        adj[b].push(a);
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let perm = reverse_cuthill_mckee(&adj);
        let mut order_of_local = vec![0usize; free_nodes.len()];
        for (new, &old) in perm.iter().enumerate() {
            order_of_local[old] = new;
        }
        let mut free_index = vec![usize::MAX; mesh.nodes.len()];
        for (l, &n) in free_nodes.iter().enumerate() {
            free_index[n] = 3 * order_of_local[l];
        }
        let mut bandwidth = 0usize;
        for (a, list) in adj.iter().enumerate() {
            for &b in list {
                bandwidth = bandwidth.max(order_of_local[a].abs_diff(order_of_local[b]));
            }
        }
        let bandwidth = 3 * bandwidth + 2;

        let surface_nodes = mesh.node_set("gel_surface").to_vec();
        let surface_areas = mesh.surface_node_areas();
        let fine_h = if mesh.fine_h > 0.0 { mesh.fine_h } else { 1.0 };
        let char_force = (0.5 * model.shear_modulus()).max(1e-12) * fine_h * fine_h;

        Ok(Self {
            mesh,
            model,
            elements,
            surface_nodes,
            surface_areas,
            free_index,
            n_free: free_nodes.len() * 3,
            bandwidth,
            char_force,
        })
    }

    fn deformation_gradient(&self, e: &Element, u: &[Vector3<f64>]) -> Matrix3<f64> {
        let mut f = Matrix3::identity();
        for (a, &n) in e.nodes.iter().enumerate() {
            // F += u_n ⊗ ∇N_a
            f += u[n] * e.grads[a].transpose();
        }
        f
    }

    fn first_piola(&self, f_mat: &Matrix3<f64>) -> Result<Matrix3<f64>> {
        let f = DeformationGradient::new(*f_mat)
            .map_err(|_| Error::Mesh("element inverted during iteration".into()))?;
        let sigma = stress_from_deformation(self.model, &f)?;
        let j = f.volume_ratio();
        let f_inv_t = f_mat
            .try_inverse()
            .ok_or_else(|| Error::Mesh("singular deformation gradient".into()))?
            .transpose();
        Ok(j * sigma.matrix() * f_inv_t)
    }
}

/// Contact anchor bookkeeping across a step: node position at the previous
/// converged frame, expressed in each indenter's local frame.
struct FrictionAnchors {
    /// Per (indenter, node): anchor in indenter-local coordinates.
    anchors: HashMap<(usize, usize), Point3<f64>>,
}

impl FrictionAnchors {
    fn from_previous(
        mesh: &TetMesh,
        indenters: &[(&RigidIndenter, Isometry3<f64>)],
        prev: Option<&SimFrame>,
    ) -> Self {
        let mut anchors = HashMap::new();
        if let Some(frame) = prev {
            for (idx, (_, pose_prev)) in indenters.iter().enumerate() {
                let pose_prev = if frame.indenter_poses.len() == indenters.len() {
                    frame.indenter_poses[idx]
                } else {
                    *pose_prev
                };
                for n in 0..mesh.nodes.len() {
                    let x_prev = mesh.nodes[n] + frame.displacements[n];
                    anchors.insert((idx, n), pose_prev.inverse_transform_point(&x_prev));
                }
            }
        }
        Self { anchors }
    }

    fn world_anchor(
        &self,
        indenter: usize,
        node: usize,
        pose_now: &Isometry3<f64>,
        x_now: &Point3<f64>,
    ) -> Point3<f64> {
        match self.anchors.get(&(indenter, node)) {
            Some(local) => pose_now.transform_point(local),
            None => *x_now,
        }
    }
}

struct Evaluation {
    residual: Vec<f64>,
    contact: Vec<super::contact::NodeContact>,
    element_f: Vec<Matrix3<f64>>,
    residual_norm: f64,
}

fn evaluate(
    problem: &StaticProblem,
    u: &[Vector3<f64>],
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    params: &ContactParams,
    anchors: &FrictionAnchors,
) -> Result<Evaluation> {
    let mut forces = vec![Vector3::zeros(); problem.mesh.nodes.len()];
    let mut element_f = Vec::with_capacity(problem.elements.len());

    for e in &problem.elements {
        let f = problem.deformation_gradient(e, u);
        let p = problem.first_piola(&f)?;
        for (a, &n) in e.nodes.iter().enumerate() {
            forces[n] += e.volume * p * e.grads[a];
        }
        element_f.push(f);
    }

    let mut contact = Vec::new();
    for (idx, (indenter, pose)) in indenters.iter().enumerate() {
        let (center, radius) = indenter.bounding_sphere(pose, 2.0 * problem.mesh.fine_h.max(1.0));
        for &n in &problem.surface_nodes {
            let x = problem.mesh.nodes[n] + u[n];
            if (x - center).norm() > radius {
                continue;
            }
            let anchor = anchors.world_anchor(idx, n, pose, &x);
            if let Some(c) = evaluate_node_contact(
                indenter,
                idx,
                pose,
                n,
                &x,
                &anchor,
                problem.surface_areas[n],
                params,
            ) {
                forces[c.node] -= c.normal_force + c.shear_force;
                contact.push(c);
            }
        }
    }

    // Residual over free dofs: internal − external(=contact) forces, already
    // combined in `forces`.
    let mut residual = vec![0.0; problem.n_free];
    let mut norm2 = 0.0;
    for n in 0..problem.mesh.nodes.len() {
        let base = problem.free_index[n];
        if base == usize::MAX {
            continue;
        }
        for k in 0..3 {
            residual[base + k] = forces[n][k];
        }
        norm2 += forces[n].norm_squared();
    }
    Ok(Evaluation {
        residual,
        contact,
        element_f,
        residual_norm: norm2.sqrt(),
    })
}

/// Assembles the symmetric tangent by forward differences of the element
/// first Piola stress and a diagonal 3×3 block per contact node.
fn assemble_tangent(
    problem: &StaticProblem,
    u: &[Vector3<f64>],
    eval: &Evaluation,
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    params: &ContactParams,
    anchors: &FrictionAnchors,
    matrix: &mut BandedUnsymmetric,
) -> Result<()> {
    matrix.reset();
    let h = 1e-7;

    for (ei, e) in problem.elements.iter().enumerate() {
        let f0 = eval.element_f[ei];
        let p0 = problem.first_piola(&f0)?;
        // dP/dF column by column: dpdf[k][l] = ∂P/∂F_kl (a 3×3 matrix each).
        let mut dpdf = [[Matrix3::zeros(); 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                let mut fp = f0;
                fp[(k, l)] += h;
                let pp = problem.first_piola(&fp)?;
                dpdf[k][l] = (pp - p0) / h;
            }
        }
        // K[a][b]_(i,k) = V · Σ_{J,L} dP_iJ/dF_kL ∇N_a[J] ∇N_b[L]
        for (a, &na) in e.nodes.iter().enumerate() {
            let fa = problem.free_index[na];
            if fa == usize::MAX {
                continue;
            }
            for (b, &nb) in e.nodes.iter().enumerate() {
                let fb = problem.free_index[nb];
                if fb == usize::MAX {
                    continue;
                }
                for i in 0..3 {
                    for k in 0..3 {
                        let mut acc = 0.0;
                        for jj in 0..3 {
                            for ll in 0..3 {
                                acc += dpdf[k][ll][(i, jj)] * e.grads[a][jj] * e.grads[b][ll];
                            }
                        }
                        matrix.add(fa + i, fb + k, e.volume * acc);
                    }
                }
            }
        }
    }

    // Contact tangent: forward differences of the nodal contact force with
    // respect to that node's displacement (3×3 diagonal blocks).
    for c in &eval.contact {
        let base = problem.free_index[c.node];
        if base == usize::MAX {
            continue;
        }
        let (indenter, pose) = &indenters[c.indenter];
        let x0 = problem.mesh.nodes[c.node] + u[c.node];
        let f0 = c.normal_force + c.shear_force;
        let mut block = Matrix3::zeros();
        for k in 0..3 {
            let mut xp = x0;
            xp[k] += h;
            let anchor = anchors.world_anchor(c.indenter, c.node, pose, &xp);
            let fp = match evaluate_node_contact(
                indenter,
                c.indenter,
                pose,
                c.node,
                &xp,
                &anchor,
                c.area,
                params,
            ) {
                Some(cp) => cp.normal_force + cp.shear_force,
                None => Vector3::zeros(),
            };
            let col = -(fp - f0) / h;
            for i in 0..3 {
                block[(i, k)] = col[i];
            }
        }
        for i in 0..3 {
            for k in 0..3 {
                matrix.add(base + i, base + k, block[(i, k)]);
            }
        }
    }
    Ok(())
}

/// One quasi-static equilibrium solve.
///
/// Newton iteration on the total nodal residual (internal elastic forces plus
/// contact penalty forces) with backtracking line search; on non-convergence
/// the boundary-condition increment from `prev` is bisected recursively.
#[allow(clippy::too_many_arguments)]
pub fn solve_step(
    mesh: &TetMesh,
    model: &HyperelasticModel,
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    params: &ContactParams,
    constraints: &Constraints,
    prev: Option<&SimFrame>,
    controls: &SolverControls,
    step_index: usize,
) -> Result<SimFrame> {
    let problem = StaticProblem::new(mesh, model, constraints)?;
    let mut u: Vec<Vector3<f64>> = match prev {
        Some(f) => f.displacements.clone(),
        None => vec![Vector3::zeros(); mesh.nodes.len()],
    };
    let prev_poses: Vec<Isometry3<f64>> = match prev {
        Some(f) if f.indenter_poses.len() == indenters.len() => f.indenter_poses.clone(),
        _ => indenters.iter().map(|(_, p)| *p).collect(),
    };
    let prev_prescribed: HashMap<usize, Vector3<f64>> = match prev {
        Some(f) => constraints
            .prescribed
            .keys()
            .map(|&n| (n, f.displacements[n]))
            .collect(),
        None => constraints.prescribed.keys().map(|&n| (n, Vector3::zeros())).collect(),
    };

    let mut total_iterations = 0usize;
    let frame = solve_increment(
        &problem,
        &mut u,
        indenters,
        &prev_poses,
        constraints,
        &prev_prescribed,
        params,
        prev,
        controls,
        0,
        step_index,
        &mut total_iterations,
    )?;
    Ok(frame)
}

#[allow(clippy::too_many_arguments)]
fn solve_increment(
    problem: &StaticProblem,
    u: &mut Vec<Vector3<f64>>,
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    from_poses: &[Isometry3<f64>],
    constraints: &Constraints,
    from_prescribed: &HashMap<usize, Vector3<f64>>,
    params: &ContactParams,
    prev: Option<&SimFrame>,
    controls: &SolverControls,
    depth: usize,
    step_index: usize,
    total_iterations: &mut usize,
) -> Result<SimFrame> {
    let u_backup = u.clone();
    match newton_solve(
        problem,
        u,
        indenters,
        &constraints.prescribed,
        params,
        prev,
        controls,
        step_index,
        total_iterations,
    ) {
        Ok(frame) => Ok(frame),
        Err(_) if depth < controls.max_bisection => {
            *u = u_backup;
            // Bisect the increment: solve to the midpoint, then continue.
            let mid_poses: Vec<Isometry3<f64>> = from_poses
                .iter()
                .zip(indenters.iter())
                .map(|(a, (_, b))| a.lerp_slerp(b, 0.5))
                .collect();
            let mid_prescribed: HashMap<usize, Vector3<f64>> = constraints
                .prescribed
                .iter()
                .map(|(&n, &target)| {
                    let start = from_prescribed.get(&n).copied().unwrap_or_default();
                    (n, 0.5 * (start + target))
                })
                .collect();
            let mid_indenters: Vec<(&RigidIndenter, Isometry3<f64>)> = indenters
                .iter()
                .zip(mid_poses.iter())
                .map(|((ind, _), p)| (*ind, *p))
                .collect();
            let mid_constraints = Constraints {
                prescribed: mid_prescribed.clone(),
            };
            let mid_frame = solve_increment(
                problem,
                u,
                &mid_indenters,
                from_poses,
                &mid_constraints,
                from_prescribed,
                params,
                prev,
                controls,
                depth + 1,
                step_index,
                total_iterations,
            )?;
            solve_increment(
                problem,
                u,
                indenters,
                &mid_poses,
                constraints,
                &mid_prescribed,
                params,
                Some(&mid_frame),
                controls,
                depth + 1,
                step_index,
                total_iterations,
            )
            .map_err(|e| match e {
                Error::NonConvergence { residual, .. } => Error::NonConvergence {
                    step: step_index,
                    detail: format!("bisection exhausted at depth {}", depth + 1),
                    residual,
                },
                other => other,
            })
        }
        Err(err) => Err(err),
    }
}

#[allow(clippy::too_many_arguments)]
fn newton_solve(
    problem: &StaticProblem,
    u: &mut Vec<Vector3<f64>>,
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    target_prescribed: &HashMap<usize, Vector3<f64>>,
    params: &ContactParams,
    prev: Option<&SimFrame>,
    controls: &SolverControls,
    step_index: usize,
    total_iterations: &mut usize,
) -> Result<SimFrame> {
    // Clamp the base, then apply prescribed displacements (which may
    // override base nodes, e.g. in an affine patch test).
    for &n in problem.mesh.node_set("encastre_base") {
        u[n] = Vector3::zeros();
    }
    for (&n, &val) in target_prescribed {
        u[n] = val;
    }

    let anchors = FrictionAnchors::from_previous(problem.mesh, indenters, prev);
    let tolerance = controls.relative_tolerance * problem.char_force;

    // Friction continuation: solve with a softened regularization slip first
    // and tighten toward the target, warm-starting each stage. The final
    // stage runs at the requested slip_reg and the full tolerance.
    let mut stages = Vec::new();
    if params.friction_mu > 0.0 {
        let start = (0.05 * problem.mesh.fine_h.max(1e-6)).max(params.slip_reg);
        let mut reg = start;
        while reg > params.slip_reg * 1.0001 {
            stages.push(reg);
            reg /= 8.0;
        }
    }
    stages.push(params.slip_reg);
    let n_stages = stages.len();
    for (si, reg) in stages.into_iter().enumerate() {
        let stage_params = ContactParams {
            slip_reg: reg,
            ..*params
        };
        let stage_tol = if si + 1 == n_stages {
            tolerance
        } else {
            tolerance.max(1e-4 * problem.char_force)
        };
        if std::env::var("TACSIM_TRACE").is_ok() {
            eprintln!(" stage {si}/{n_stages} reg {reg:.2e} tol {stage_tol:.2e}");
        }
        newton_core(
            problem,
            u,
            indenters,
            &stage_params,
            &anchors,
            stage_tol,
            controls,
            step_index,
            total_iterations,
        )?;
    }
    // Final evaluation for frame assembly at the converged state.
    let eval = evaluate(problem, u, indenters, params, &anchors)?;
    return Ok(finalize(
        problem,
        u,
        indenters,
        &eval,
        step_index,
        *total_iterations,
    ));
}

#[allow(clippy::too_many_arguments)]
fn newton_core(
    problem: &StaticProblem,
    u: &mut Vec<Vector3<f64>>,
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    params: &ContactParams,
    anchors: &FrictionAnchors,
    tolerance: f64,
    controls: &SolverControls,
    step_index: usize,
    total_iterations: &mut usize,
) -> Result<()> {
    let trace = std::env::var("TACSIM_TRACE").is_ok();
    let mut matrix = BandedUnsymmetric::zeros(
        problem.n_free,
        problem.bandwidth.min(problem.n_free.saturating_sub(1)),
    );

    let mut eval = evaluate(problem, u, indenters, params, anchors)?;
    for iter in 0..controls.max_iterations {
        if trace {
            eprintln!(
                "  newton it {iter}: residual {:.4e} (tol {:.2e}) contacts {}",
                eval.residual_norm,
                tolerance,
                eval.contact.len()
            );
        }
        if eval.residual_norm <= tolerance {
            *total_iterations += iter;
            return Ok(());
        }
        assemble_tangent(problem, u, &eval, indenters, params, anchors, &mut matrix)?;

        // Factor with adaptive diagonal regularization.
        let mut shift = 0.0;
        let mut factored = false;
        for attempt in 0..6 {
            let mut trial = matrix.clone();
            if shift > 0.0 {
                trial.add_diagonal(shift);
            }
            if trial.factor_lu(1e-14).is_ok() {
                matrix = trial;
                factored = true;
                break;
            }
            shift = if attempt == 0 {
                1e-8 * matrix.max_diagonal().max(1e-12)
            } else {
                shift * 100.0
            };
        }
        if !factored {
            return Err(Error::NonConvergence {
                step: step_index,
                detail: "tangent factorization failed".into(),
                residual: eval.residual_norm,
            });
        }

        let mut delta: Vec<f64> = eval.residual.iter().map(|r| -r).collect();
        matrix.solve_factored(&mut delta);

        // Backtracking line search on the residual norm.
        let base_norm = eval.residual_norm;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..=controls.max_line_search {
            let mut trial_u = u.clone();
            for n in 0..problem.mesh.nodes.len() {
                let base = problem.free_index[n];
                if base == usize::MAX {
                    continue;
                }
                trial_u[n] += alpha
                    * Vector3::new(delta[base], delta[base + 1], delta[base + 2]);
            }
            match evaluate(problem, &trial_u, indenters, params, anchors) {
                Ok(trial_eval) if trial_eval.residual_norm < base_norm * (1.0 - 1e-4 * alpha) => {
                    *u = trial_u;
                    eval = trial_eval;
                    accepted = true;
                    break;
                }
                Ok(trial_eval) => {
                    if trace && alpha < 0.01 {
                        eprintln!(
                            "    ls alpha {alpha:.4}: {:.4e} vs base {:.4e}",
                            trial_eval.residual_norm, base_norm
                        );
                    }
                    alpha *= 0.5;
                }
                _ => alpha *= 0.5,
            }
        }
        if !accepted {
            return Err(Error::NonConvergence {
                step: step_index,
                detail: format!("line search stalled at iteration {iter}"),
                residual: eval.residual_norm,
            });
        }
    }
    if eval.residual_norm <= tolerance {
        *total_iterations += controls.max_iterations;
        return Ok(());
    }
    Err(Error::NonConvergence {
        step: step_index,
        detail: format!("no convergence in {} iterations", controls.max_iterations),
        residual: eval.residual_norm,
    })
}

fn finalize(
    problem: &StaticProblem,
    u: &[Vector3<f64>],
    indenters: &[(&RigidIndenter, Isometry3<f64>)],
    eval: &Evaluation,
    step_index: usize,
    iterations: usize,
) -> SimFrame {
    let mesh = problem.mesh;
    let mut frame = SimFrame::zero(mesh, indenters.len());
    frame.step = step_index;
    frame.displacements = u.to_vec();
    frame.indenter_poses = indenters.iter().map(|(_, p)| *p).collect();
    frame.residual_norm = eval.residual_norm;
    frame.newton_iterations = iterations;

    let mut energy = 0.0;
    for (ei, e) in problem.elements.iter().enumerate() {
        let f_mat = eval.element_f[ei];
        if let Ok(f) = DeformationGradient::new(f_mat) {
            frame.element_stress[ei] = stress_from_deformation(problem.model, &f)
                .map(|s| *s.matrix())
                .unwrap_or_else(|_| Matrix3::zeros());
            energy += e.volume * strain_energy(problem.model, &f).unwrap_or(0.0);
        }
    }
    frame.strain_energy = energy;

    for c in &eval.contact {
        frame.max_penetration = frame.max_penetration.max(c.penetration);
        if c.area > 0.0 {
            frame.max_normal_traction =
                frame.max_normal_traction.max(c.normal_force.norm() / c.area);
        }
        frame.contact_normal_force[c.node] += c.normal_force;
        frame.contact_shear_force[c.node] += c.shear_force;
        frame.contact_status[c.node] = match (frame.contact_status[c.node], c.status) {
            (ContactStatus::Slip, _) | (_, ContactStatus::Slip) => ContactStatus::Slip,
            _ => ContactStatus::Stick,
        };
        frame.contact_area[c.node] = frame.contact_area[c.node].max(c.area);
        frame.contact_indenter[c.node] = c.indenter;
        frame.indenter_reactions[c.indenter] -= c.normal_force + c.shear_force;
    }
    frame
}
