//! Constitutive-law checks against independent oracles.

mod common;

use common::{fd_cauchy_stress, hyperelastic_variants, random_deformation, random_rotation, rng};
use nalgebra::Matrix3;
use tacsim::material::{cauchy_stress, strain_energy, DeformationGradient};

#[test]
fn analytic_stress_matches_finite_differences() {
    let mut rng = rng(0x5eed_0001);
    for model in hyperelastic_variants() {
        for trial in 0..250 {
            let f = random_deformation(&mut rng);
            let analytic = cauchy_stress(&model, &f).unwrap();
            let reference = fd_cauchy_stress(&model, &f);
            let scale = reference.amax().max(1e-8);
            let err = (analytic.matrix() - reference).amax() / scale;
            assert!(
                err < 1e-5,
                "{model:?} trial {trial}: relative stress error {err:.3e}"
            );
        }
    }
}

#[test]
fn energy_is_frame_indifferent() {
    let mut rng = rng(0x5eed_0002);
    for model in hyperelastic_variants() {
        for _ in 0..100 {
            let f = random_deformation(&mut rng);
            let r = random_rotation(&mut rng);
            let rf = DeformationGradient::new(r * f.matrix()).unwrap();
            let w = strain_energy(&model, &f).unwrap();
            let w_rot = strain_energy(&model, &rf).unwrap();
            assert!(
                (w - w_rot).abs() <= 1e-10 * w.abs().max(1.0),
                "{model:?}: W(F) = {w}, W(RF) = {w_rot}"
            );
        }
    }
}

#[test]
fn energy_is_isotropic() {
    let mut rng = rng(0x5eed_0003);
    for model in hyperelastic_variants() {
        for _ in 0..100 {
            let f = random_deformation(&mut rng);
            let r = random_rotation(&mut rng);
            let fr = DeformationGradient::new(f.matrix() * r).unwrap();
            let w = strain_energy(&model, &f).unwrap();
            let w_rot = strain_energy(&model, &fr).unwrap();
            assert!(
                (w - w_rot).abs() <= 1e-10 * w.abs().max(1.0),
                "{model:?}: W(F) = {w}, W(FR) = {w_rot}"
            );
        }
    }
}

#[test]
fn stress_is_symmetric_by_construction() {
    let mut rng = rng(0x5eed_0004);
    for model in hyperelastic_variants() {
        for _ in 0..50 {
            let f = random_deformation(&mut rng);
            let s = cauchy_stress(&model, &f).unwrap();
            let m: &Matrix3<f64> = s.matrix();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(m[(i, j)], m[(j, i)]);
                }
            }
        }
    }
}
