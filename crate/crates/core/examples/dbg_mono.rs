// debug binary for monotone failure
fn main() {
    use nalgebra::{Isometry3, Point3, Translation3, UnitQuaternion};
    use tacsim::fem::*;
    use tacsim::geometry::SurfaceMesh;
    use tacsim::material::HyperelasticModel;
    let mesh = generate_graded_mesh(
        &GelProfile::Dome { base_radius: 9.0, skirt_height: 2.5, cap_height: 4.5 },
        1.6, 3.2, 1.97).unwrap();
    println!("mesh: {} nodes {} tets, surface nodes {}", mesh.nodes.len(), mesh.tets.len(), mesh.node_set("gel_surface").len());
    let model = HyperelasticModel::NeoHookean { c1: 0.1, d1: None }.with_bulk_ratio(100.0);
    let mut params = ContactParams::for_material(0.1, mesh.fine_h);
    if std::env::var("NOFRICTION").is_ok() { params.friction_mu = 0.0; }
    if let Ok(p) = std::env::var("PENALTY") { params.normal_penalty = p.parse().unwrap(); }
    if let Ok(s) = std::env::var("SLIPREG") { params.slip_reg = s.parse().unwrap(); }
    println!("penalty {}", params.normal_penalty);
    let surface = SurfaceMesh::uv_sphere(Point3::origin(), 4.0, 16, 32);
    let ind = RigidIndenter::new("sphere", surface, Isometry3::identity());
    let top = mesh.nodes.iter().fold(0.0f64, |m, p| m.max(p.y));
    println!("top {top}");
    let mut prev = None;
    for (step, depth) in [0.5f64, 1.0, 1.5].iter().enumerate() {
        let pose = Isometry3::from_parts(Translation3::new(0.0, top + 4.0 - depth, 0.0), UnitQuaternion::identity());
        let t0 = std::time::Instant::now();
        match solve_step(&mesh, &model, &[(&ind, pose)], &params, &Constraints::default(), prev.as_ref(), &SolverControls::default(), step) {
            Ok(f) => {
                println!("step {step} depth {depth}: RF {:?} iters {} resid {:.3e} energy {:.4} in {:?}",
                    f.indenter_reactions[0], f.newton_iterations, f.residual_norm, f.strain_energy, t0.elapsed());
                prev = Some(f);
            }
            Err(e) => { println!("step {step} FAILED after {:?}: {e}", t0.elapsed()); break; }
        }
    }
}
