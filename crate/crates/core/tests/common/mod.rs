//! Shared test oracles, independent of the library's analytic stress path.

#![allow(dead_code)]

use nalgebra::{Matrix3, UnitQuaternion, Vector3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tacsim::material::{strain_energy_of_c, DeformationGradient, HyperelasticModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> Matrix3<f64> {
    let axis = Vector3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    if axis.norm() < 1e-9 {
        return Matrix3::identity();
    }
    UnitQuaternion::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle)
        .to_rotation_matrix()
        .into_inner()
}

/// Random deformation gradient with det(F) in [0.5, 2]: rotated stretch with
/// principal values in [0.6, 1.6], resampled until the volume ratio fits.
pub fn random_deformation(rng: &mut ChaCha8Rng) -> DeformationGradient {
    loop {
        let l1 = rng.gen_range(0.6..1.6);
        let l2 = rng.gen_range(0.6..1.6);
        let l3 = rng.gen_range(0.6..1.6);
        let j = l1 * l2 * l3;
        if !(0.5..=2.0).contains(&j) {
            continue;
        }
        let r1 = random_rotation(rng);
        let r2 = random_rotation(rng);
        let f = r1 * Matrix3::from_diagonal(&[l1, l2, l3].into()) * r2.transpose();
        return DeformationGradient::new(f).expect("constructed F must be valid");
    }
}

/// Finite-difference Cauchy stress oracle: central differences of the strain
/// energy with respect to C, pushed forward via σ = (1/J) F S Fᵀ with
/// S = 2 ∂W/∂C. Never touches the analytic stress path.
pub fn fd_cauchy_stress(model: &HyperelasticModel, f: &DeformationGradient) -> Matrix3<f64> {
    let c = f.right_cauchy_green();
    let scale = c.norm().max(1.0);
    let h = 5e-6 * scale;
    let mut dw_dc = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let mut cp = c;
            let mut cm = c;
            cp[(i, j)] += h;
            cm[(i, j)] -= h;
            if i != j {
                cp[(j, i)] += h;
                cm[(j, i)] -= h;
            }
            let wp = strain_energy_of_c(model, &cp).expect("perturbed C stays admissible");
            let wm = strain_energy_of_c(model, &cm).expect("perturbed C stays admissible");
            let g = (wp - wm) / (2.0 * h);
            // Off-diagonal perturbations move both symmetric entries.
            let val = if i == j { g } else { 0.5 * g };
            dw_dc[(i, j)] = val;
            dw_dc[(j, i)] = val;
        }
    }
    let s = 2.0 * dw_dc;
    let jdet = f.volume_ratio();
    (f.matrix() * s * f.matrix().transpose()) / jdet
}

/// The four hyperelastic variants with near-incompressible volumetric terms.
pub fn hyperelastic_variants() -> Vec<HyperelasticModel> {
    use tacsim::material::OgdenTerm;
    vec![
        HyperelasticModel::NeoHookean {
            c1: 0.3,
            d1: Some(0.5),
        },
        HyperelasticModel::MooneyRivlin {
            c1: 0.25,
            c2: 0.06,
            d1: Some(0.5),
        },
        HyperelasticModel::Ogden {
            terms: vec![
                OgdenTerm { mu: 0.5, alpha: 2.1 },
                OgdenTerm {
                    mu: 0.04,
                    alpha: -1.7,
                },
            ],
            d1: Some(0.5),
        },
        HyperelasticModel::Yeoh {
            c: vec![0.2, 0.05, 0.01],
            d1: Some(0.5),
        },
    ]
}
