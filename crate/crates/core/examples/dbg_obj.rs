fn main() {
    use nalgebra::{Isometry3, Point3, Translation3, UnitQuaternion, Vector3};
    use tacsim::fem::*;
    use tacsim::geometry::SurfaceMesh;
    use tacsim::material::HyperelasticModel;
    let mesh = generate_graded_mesh(
        &GelProfile::Dome { base_radius: 8.0, skirt_height: 2.5, cap_height: 4.5 },
        1.0, 2.5, 1.97).unwrap();
    let model = HyperelasticModel::NeoHookean { c1: 0.1, d1: None }.with_bulk_ratio(100.0);
    let params = ContactParams::for_material(0.1, mesh.fine_h);
    let sphere = SurfaceMesh::uv_sphere(Point3::origin(), 4.0, 32, 64);
    let ind = RigidIndenter::new("sphere", sphere, Isometry3::identity());
    let top = mesh.nodes.iter().fold(0.0f64, |m, p| m.max(p.y));
    let pose = Isometry3::from_parts(Translation3::new(0.0, top + 4.0 - 1.0, 0.0), UnitQuaternion::identity());
    let base = match solve_step(&mesh, &model, &[(&ind, pose)], &params, &Constraints::default(), None, &SolverControls::default(), 0) {
        Ok(f) => f, Err(e) => { println!("base failed: {e}"); return; } };
    let ncontact = base.contact_status.iter().filter(|s| **s != ContactStatus::Free).count();
    println!("base: RF {:?} contacts {} iters {}", base.indenter_reactions[0], ncontact, base.newton_iterations);

    let r = UnitQuaternion::from_axis_angle(&Vector3::y_axis(), 0.7);
    let rot_nodes: Vec<_> = mesh.nodes.iter().map(|p| r.transform_point(p)).collect();
    let rot_mesh = TetMesh::from_cells(rot_nodes, mesh.tets.clone(), mesh.fine_h).unwrap();
    let rot_pose = Isometry3::from_parts(Translation3::from(r.transform_vector(&pose.translation.vector)), r * pose.rotation);
    let rot = solve_step(&rot_mesh, &model, &[(&ind, rot_pose)], &params, &Constraints::default(), None, &SolverControls::default(), 0).unwrap();
    let ncontact2 = rot.contact_status.iter().filter(|s| **s != ContactStatus::Free).count();
    println!("rot:  RF {:?} contacts {} iters {}", rot.indenter_reactions[0], ncontact2, rot.newton_iterations);
    println!("RF rotated back: {:?}", r.inverse_transform_vector(&rot.indenter_reactions[0]));
    // top-5 discrepancy nodes
    let mut errs: Vec<(f64, usize)> = (0..mesh.nodes.len()).map(|n| {
        let expected = r.transform_vector(&base.displacements[n]);
        ((rot.displacements[n] - expected).norm(), n)
    }).collect();
    errs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for (e, n) in errs.iter().take(5) {
        println!("node {n} at {:?}: err {e:.4} |u_base| {:.4} status base {:?} rot {:?}", mesh.nodes[*n], base.displacements[*n].norm(), base.contact_status[*n], rot.contact_status[*n]);
    }
}
