//! Hyperelastic and linear-elastic constitutive models.
//!
//! Stress derives from a strain energy density `W` over the right Cauchy-Green
//! tensor `C = FᵀF` via `σ = (2/J) F (∂W/∂C) Fᵀ`. The invariant-based models
//! (Neo-Hookean, Mooney-Rivlin, Yeoh) and the stretch-based Ogden model are all
//! evaluated in their near-incompressible form: the deviatoric part uses
//! isochoric invariants `Ī_k = J^(−2k/3) I_k` (stretches `λ̄_i = J^(−1/3) λ_i`)
//! and an optional volumetric term `(1/D1)(J − 1)²` supplies hydrostatic
//! pressure. With `d1: None` the volumetric term is absent and the model is the
//! pure deviatoric (incompressible) form.
//!
//! Units: stresses and moduli in MPa, consistent with mm / N / tonne-mm-s.

use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deformation gradient `F`, validated to be finite and orientation-preserving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationGradient {
    matrix: Matrix3<f64>,
    det: f64,
}

impl DeformationGradient {
    /// Wraps a 3×3 matrix, rejecting non-finite entries and `det(F) ≤ 0`.
    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "deformation gradient has non-finite entries".into(),
            ));
        }
        let det = matrix.determinant();
        if det <= 0.0 {
            return Err(Error::DegenerateDeformation { det });
        }
        Ok(Self { matrix, det })
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix3::identity(),
            det: 1.0,
        }
    }

    /// Uniaxial stretch `diag(λ, 1/√λ, 1/√λ)` (isochoric).
    pub fn uniaxial(stretch: f64) -> Result<Self> {
        if stretch <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "uniaxial stretch must be positive, got {stretch}"
            )));
        }
        let lat = 1.0 / stretch.sqrt();
        Self::new(Matrix3::from_diagonal(&[stretch, lat, lat].into()))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    /// `J = det(F)`, the local volume ratio.
    pub fn volume_ratio(&self) -> f64 {
        self.det
    }

    /// Right Cauchy-Green tensor `C = FᵀF`.
    pub fn right_cauchy_green(&self) -> Matrix3<f64> {
        self.matrix.transpose() * self.matrix
    }

    /// Left Cauchy-Green tensor `B = FFᵀ`.
    pub fn left_cauchy_green(&self) -> Matrix3<f64> {
        self.matrix * self.matrix.transpose()
    }
}

/// Principal invariants of `C = FᵀF` together with the principal stretches.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CauchyGreenInvariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    /// Volume ratio `J = det F = √I3`.
    pub j: f64,
    /// Principal stretches, sorted descending.
    pub stretches: [f64; 3],
}

/// Computes `I1 = tr C`, `I2 = ½[(tr C)² − tr C²]`, `I3 = det C`, `J = det F`
/// and the principal stretches (eigenvalues of the right stretch tensor).
pub fn invariants(f: &DeformationGradient) -> CauchyGreenInvariants {
    let c = f.right_cauchy_green();
    invariants_of_c(&c, f.volume_ratio())
}

fn invariants_of_c(c: &Matrix3<f64>, j: f64) -> CauchyGreenInvariants {
    let i1 = c.trace();
    let c2 = c * c;
    let i2 = 0.5 * (i1 * i1 - c2.trace());
    let i3 = c.determinant();
    let eig = SymmetricEigen::new(*c);
    let mut stretches = [
        eig.eigenvalues[0].max(0.0).sqrt(),
        eig.eigenvalues[1].max(0.0).sqrt(),
        eig.eigenvalues[2].max(0.0).sqrt(),
    ];
    stretches.sort_by(|a, b| b.partial_cmp(a).unwrap());
    CauchyGreenInvariants {
        i1,
        i2,
        i3,
        j,
        stretches,
    }
}

/// One Ogden series term `(μ_p, α_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OgdenTerm {
    pub mu: f64,
    pub alpha: f64,
}

/// Constitutive law variant with empirical constants.
///
/// `d1: None` selects the pure incompressible (deviatoric-only) form; `Some(d1)`
/// adds the volumetric term `(1/d1)(J − 1)²`, giving bulk modulus `K = 2/d1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum HyperelasticModel {
    NeoHookean { c1: f64, d1: Option<f64> },
    MooneyRivlin { c1: f64, c2: f64, d1: Option<f64> },
    Ogden { terms: Vec<OgdenTerm>, d1: Option<f64> },
    Yeoh { c: Vec<f64>, d1: Option<f64> },
    LinearElastic { youngs: f64, poisson: f64 },
}

impl HyperelasticModel {
    /// Validates the variant's parameter invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        match self {
            Self::NeoHookean { c1, d1 } => {
                if *c1 <= 0.0 {
                    return bad(format!("Neo-Hookean requires C1 > 0, got {c1}"));
                }
                check_d1(d1)?;
            }
            Self::MooneyRivlin { c1, d1, .. } => {
                if *c1 <= 0.0 {
                    return bad(format!("Mooney-Rivlin requires C1 > 0, got {c1}"));
                }
                check_d1(d1)?;
            }
            Self::Ogden { terms, d1 } => {
                if terms.is_empty() {
                    return bad("Ogden model needs at least one (mu, alpha) term".into());
                }
                let ground_shear: f64 = terms.iter().map(|t| t.mu * t.alpha).sum();
                if ground_shear <= 0.0 {
                    return bad(format!(
                        "Ogden ground-state shear modulus Σ μ_p α_p must be positive, got {ground_shear}"
                    ));
                }
                check_d1(d1)?;
            }
            Self::Yeoh { c, d1 } => {
                if c.is_empty() || c.len() > 3 {
                    return bad(format!("Yeoh order must be 1..=3, got {}", c.len()));
                }
                if c[0] <= 0.0 {
                    return bad(format!("Yeoh requires C1 > 0, got {}", c[0]));
                }
                check_d1(d1)?;
            }
            Self::LinearElastic { youngs, poisson } => {
                if *youngs <= 0.0 {
                    return bad(format!("Young's modulus must be positive, got {youngs}"));
                }
                if *poisson <= -1.0 || *poisson >= 0.5 {
                    return bad(format!("Poisson's ratio must be in (-1, 0.5), got {poisson}"));
                }
            }
        }
        Ok(())
    }

    /// Ground-state shear modulus μ₀ of the variant.
    pub fn shear_modulus(&self) -> f64 {
        match self {
            Self::NeoHookean { c1, .. } => 2.0 * c1,
            Self::MooneyRivlin { c1, c2, .. } => 2.0 * (c1 + c2),
            Self::Ogden { terms, .. } => {
                0.5 * terms.iter().map(|t| t.mu * t.alpha).sum::<f64>()
            }
            Self::Yeoh { c, .. } => 2.0 * c[0],
            Self::LinearElastic { youngs, poisson } => youngs / (2.0 * (1.0 + poisson)),
        }
    }

    /// Returns a copy with the volumetric coefficient set so that the bulk to
    /// shear modulus ratio equals `ratio` (`K = 2/D1 = ratio · μ₀`).
    pub fn with_bulk_ratio(&self, ratio: f64) -> Self {
        let d1 = 2.0 / (ratio * self.shear_modulus());
        let mut out = self.clone();
        match &mut out {
            Self::NeoHookean { d1: slot, .. }
            | Self::MooneyRivlin { d1: slot, .. }
            | Self::Ogden { d1: slot, .. }
            | Self::Yeoh { d1: slot, .. } => *slot = Some(d1),
            Self::LinearElastic { .. } => {}
        }
        out
    }

    fn d1(&self) -> Option<f64> {
        match self {
            Self::NeoHookean { d1, .. }
            | Self::MooneyRivlin { d1, .. }
            | Self::Ogden { d1, .. }
            | Self::Yeoh { d1, .. } => *d1,
            Self::LinearElastic { .. } => None,
        }
    }
}

fn check_d1(d1: &Option<f64>) -> Result<()> {
    match d1 {
        Some(v) if *v <= 0.0 => Err(Error::InvalidInput(format!(
            "volumetric coefficient D1 must be positive, got {v}"
        ))),
        _ => Ok(()),
    }
}

/// Symmetric Cauchy stress tensor (MPa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressTensor(Matrix3<f64>);

impl StressTensor {
    /// Builds from an arbitrary 3×3 by symmetrizing, so `σ_ij = σ_ji` exactly.
    pub fn from_symmetric_part(m: Matrix3<f64>) -> Self {
        let mut s = Matrix3::zeros();
        for i in 0..3 {
            for j in i..3 {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        Self(s)
    }

    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Diagonal components `(σ_xx, σ_yy, σ_zz)`.
    pub fn normal_components(&self) -> [f64; 3] {
        [self.0[(0, 0)], self.0[(1, 1)], self.0[(2, 2)]]
    }

    /// Off-diagonal components `(σ_xy, σ_xz, σ_yz)`.
    pub fn shear_components(&self) -> [f64; 3] {
        [self.0[(0, 1)], self.0[(0, 2)], self.0[(1, 2)]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// Strain energy density `W(F)` for the given model. `W(identity) = 0`.
pub fn strain_energy(model: &HyperelasticModel, f: &DeformationGradient) -> Result<f64> {
    model.validate()?;
    let c = f.right_cauchy_green();
    strain_energy_of_c(model, &c)
}

/// `W` as a function of `C` alone (`J = √det C`). Used by the stress relation
/// and by finite-difference checks.
pub fn strain_energy_of_c(model: &HyperelasticModel, c: &Matrix3<f64>) -> Result<f64> {
    let det_c = c.determinant();
    if det_c <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "right Cauchy-Green tensor must be positive definite, det(C) = {det_c}"
        )));
    }
    let j = det_c.sqrt();
    let inv = invariants_of_c(c, j);
    let vol = match model.d1() {
        Some(d1) => (j - 1.0).powi(2) / d1,
        None => 0.0,
    };
    let w = match model {
        HyperelasticModel::NeoHookean { c1, .. } => {
            let i1_bar = inv.i1 * j.powf(-2.0 / 3.0);
            c1 * (i1_bar - 3.0) + vol
        }
        HyperelasticModel::MooneyRivlin { c1, c2, .. } => {
            let i1_bar = inv.i1 * j.powf(-2.0 / 3.0);
            let i2_bar = inv.i2 * j.powf(-4.0 / 3.0);
            c1 * (i1_bar - 3.0) + c2 * (i2_bar - 3.0) + vol
        }
        HyperelasticModel::Yeoh { c, .. } => {
            let i1_bar = inv.i1 * j.powf(-2.0 / 3.0);
            let x = i1_bar - 3.0;
            let mut acc = 0.0;
            let mut pow = 1.0;
            for ci in c {
                pow *= x;
                acc += ci * pow;
            }
            acc + vol
        }
        HyperelasticModel::Ogden { terms, .. } => {
            let s = j.powf(-1.0 / 3.0);
            let lb = [
                inv.stretches[0] * s,
                inv.stretches[1] * s,
                inv.stretches[2] * s,
            ];
            let mut acc = 0.0;
            for t in terms {
                acc += t.mu / t.alpha
                    * (lb[0].powf(t.alpha) + lb[1].powf(t.alpha) + lb[2].powf(t.alpha) - 3.0);
            }
            acc + vol
        }
        HyperelasticModel::LinearElastic { youngs, poisson } => {
            // Small-strain energy evaluated at ε = ½(C − I) linearized: use the
            // symmetric displacement-gradient approximation ε ≈ ½(C − I).
            let eps = 0.5 * (c - Matrix3::identity());
            let (lambda, mu) = lame_parameters(*youngs, *poisson);
            let tr = eps.trace();
            0.5 * lambda * tr * tr + mu * (eps * eps).trace()
        }
    };
    Ok(w)
}

/// Analytic Cauchy stress `σ = (2/J) F (∂W/∂C) Fᵀ` for the hyperelastic variants.
///
/// `LinearElastic` is rejected here; use [`linear_stress`] with a small-strain
/// tensor instead.
pub fn cauchy_stress(model: &HyperelasticModel, f: &DeformationGradient) -> Result<StressTensor> {
    model.validate()?;
    let j = f.volume_ratio();
    let b = f.left_cauchy_green();
    let pressure = match model.d1() {
        Some(d1) => 2.0 / d1 * (j - 1.0),
        None => 0.0,
    };
    let eye = Matrix3::identity();

    let sigma = match model {
        HyperelasticModel::LinearElastic { .. } => {
            return Err(Error::InvalidInput(
                "cauchy_stress expects a hyperelastic variant; use linear_stress for linear elasticity".into(),
            ));
        }
        HyperelasticModel::Ogden { terms, .. } => {
            // Principal-space evaluation; the deviatoric formula is smooth in the
            // stretches, so coincident eigenvalues need no special casing beyond
            // the orthonormal eigenbasis itself.
            let eig = SymmetricEigen::new(b);
            let s = j.powf(-1.0 / 3.0);
            let lam_bar: Vec<f64> = (0..3)
                .map(|i| eig.eigenvalues[i].max(1e-300).sqrt() * s)
                .collect();
            let mut principal = [pressure; 3];
            for t in terms {
                let powers: Vec<f64> = lam_bar.iter().map(|l| l.powf(t.alpha)).collect();
                let mean = (powers[0] + powers[1] + powers[2]) / 3.0;
                for i in 0..3 {
                    principal[i] += t.mu / j * (powers[i] - mean);
                }
            }
            let mut sigma = Matrix3::zeros();
            for i in 0..3 {
                let n = eig.eigenvectors.column(i);
                sigma += principal[i] * n * n.transpose();
            }
            sigma
        }
        _ => {
            let b_bar = b * j.powf(-2.0 / 3.0);
            let i1_bar = b_bar.trace();
            let b_bar2 = b_bar * b_bar;
            let i2_bar = 0.5 * (i1_bar * i1_bar - b_bar2.trace());
            let (w1, w2) = match model {
                HyperelasticModel::NeoHookean { c1, .. } => (*c1, 0.0),
                HyperelasticModel::MooneyRivlin { c1, c2, .. } => (*c1, *c2),
                HyperelasticModel::Yeoh { c, .. } => {
                    let x = i1_bar - 3.0;
                    let mut w1 = 0.0;
                    let mut pow = 1.0;
                    for (k, ci) in c.iter().enumerate() {
                        w1 += (k as f64 + 1.0) * ci * pow;
                        pow *= x;
                    }
                    (w1, 0.0)
                }
                _ => unreachable!(),
            };
            let dev1 = b_bar - (i1_bar / 3.0) * eye;
            let dev2 = i1_bar * b_bar - b_bar2 - (2.0 * i2_bar / 3.0) * eye;
            (2.0 / j) * (w1 * dev1 + w2 * dev2) + pressure * eye
        }
    };
    Ok(StressTensor::from_symmetric_part(sigma))
}

fn lame_parameters(youngs: f64, poisson: f64) -> (f64, f64) {
    let lambda = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
    let mu = youngs / (2.0 * (1.0 + poisson));
    (lambda, mu)
}

/// Isotropic Hooke's law `σ_ij = C_ijkl ε_kl`.
///
/// Rejects `ν` outside `(-1, 0.5)`; at `ν = 0.5` the volumetric modulus is
/// singular.
pub fn linear_stress(youngs: f64, poisson: f64, strain: &Matrix3<f64>) -> Result<StressTensor> {
    if youngs <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "Young's modulus must be positive, got {youngs}"
        )));
    }
    if poisson <= -1.0 || poisson >= 0.5 {
        return Err(Error::InvalidInput(format!(
            "Poisson's ratio must be in (-1, 0.5), got {poisson}"
        )));
    }
    let eps = 0.5 * (strain + strain.transpose());
    let (lambda, mu) = lame_parameters(youngs, poisson);
    let sigma = lambda * eps.trace() * Matrix3::identity() + 2.0 * mu * eps;
    Ok(StressTensor::from_symmetric_part(sigma))
}

/// Cauchy stress from `F` for any variant, dispatching linear elasticity
/// through [`linear_stress`] with the small-strain tensor `½(∇u + ∇uᵀ)`.
pub fn stress_from_deformation(
    model: &HyperelasticModel,
    f: &DeformationGradient,
) -> Result<StressTensor> {
    match model {
        HyperelasticModel::LinearElastic { youngs, poisson } => {
            let grad_u = f.matrix() - Matrix3::identity();
            let eps = 0.5 * (grad_u + grad_u.transpose());
            linear_stress(*youngs, *poisson, &eps)
        }
        _ => cauchy_stress(model, f),
    }
}

/// Loading mode of a stress-strain sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadingMode {
    Uniaxial,
    Equibiaxial,
}

/// One engineering stress-strain measurement at stretch `λ`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StressStrainSample {
    pub stretch: f64,
    /// Engineering (nominal) stress, MPa.
    pub stress: f64,
    pub mode: LoadingMode,
}

/// Closed-form incompressible uniaxial Cauchy stress with the lateral faces
/// traction-free (pressure eliminated). For Neo-Hookean this is
/// `2 C1 (λ² − 1/λ)`.
pub fn incompressible_uniaxial_cauchy(model: &HyperelasticModel, stretch: f64) -> Result<f64> {
    model.validate()?;
    if stretch <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "stretch must be positive, got {stretch}"
        )));
    }
    let l = stretch;
    let value = match model {
        HyperelasticModel::Ogden { terms, .. } => terms
            .iter()
            .map(|t| t.mu * (l.powf(t.alpha) - l.powf(-t.alpha / 2.0)))
            .sum(),
        HyperelasticModel::LinearElastic { youngs, .. } => youngs * (l - 1.0),
        _ => {
            let i1 = l * l + 2.0 / l;
            let i2 = 2.0 * l + 1.0 / (l * l);
            let (w1, w2) = invariant_derivatives(model, i1, i2);
            2.0 * (l * l - 1.0 / l) * (w1 + w2 / l)
        }
    };
    Ok(value)
}

/// Nominal (engineering) uniaxial stress `P = σ/λ` for the incompressible case.
pub fn incompressible_uniaxial_nominal(model: &HyperelasticModel, stretch: f64) -> Result<f64> {
    Ok(incompressible_uniaxial_cauchy(model, stretch)? / stretch)
}

/// Nominal in-plane stress for incompressible equibiaxial loading
/// (`λ1 = λ2 = λ`, `λ3 = λ⁻²`).
pub fn incompressible_equibiaxial_nominal(model: &HyperelasticModel, stretch: f64) -> Result<f64> {
    model.validate()?;
    if stretch <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "stretch must be positive, got {stretch}"
        )));
    }
    let l = stretch;
    let value = match model {
        HyperelasticModel::Ogden { terms, .. } => terms
            .iter()
            .map(|t| t.mu * (l.powf(t.alpha - 1.0) - l.powf(-2.0 * t.alpha - 1.0)))
            .sum(),
        HyperelasticModel::LinearElastic { youngs, poisson } => {
            youngs / (1.0 - poisson) * (l - 1.0)
        }
        _ => {
            let i1 = 2.0 * l * l + l.powi(-4);
            let i2 = l.powi(4) + 2.0 / (l * l);
            let (w1, w2) = invariant_derivatives(model, i1, i2);
            2.0 * (l - l.powi(-5)) * (w1 + w2 * l * l)
        }
    };
    Ok(value)
}

fn invariant_derivatives(model: &HyperelasticModel, i1: f64, i2: f64) -> (f64, f64) {
    let _ = i2;
    match model {
        HyperelasticModel::NeoHookean { c1, .. } => (*c1, 0.0),
        HyperelasticModel::MooneyRivlin { c1, c2, .. } => (*c1, *c2),
        HyperelasticModel::Yeoh { c, .. } => {
            let x = i1 - 3.0;
            let mut w1 = 0.0;
            let mut pow = 1.0;
            for (k, ci) in c.iter().enumerate() {
                w1 += (k as f64 + 1.0) * ci * pow;
                pow *= x;
            }
            (w1, 0.0)
        }
        _ => unreachable!("invariant_derivatives only called for invariant-based models"),
    }
}

/// Result of a Yeoh least-squares fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct YeohFit {
    pub model: HyperelasticModel,
    /// Root-mean-square residual of the fitted nominal stresses (MPa).
    pub residual_rms: f64,
}

/// Fits Yeoh coefficients `C1..Cn` to engineering stress-strain samples by
/// linear least squares (the Yeoh nominal stress is linear in the
/// coefficients). Incompressibility (`J = 1`) is assumed; the returned model
/// carries no volumetric term.
pub fn fit_yeoh(samples: &[StressStrainSample], order: usize) -> Result<YeohFit> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidInput(format!(
            "Yeoh order must be 1..=3, got {order}"
        )));
    }
    if samples.iter().any(|s| s.stretch <= 0.0) {
        return Err(Error::InvalidInput("sample stretch must be positive".into()));
    }
    let mut distinct: Vec<f64> = samples.iter().map(|s| s.stretch).collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if distinct.len() < order {
        return Err(Error::FitFailed(format!(
            "need at least {order} distinct stretch levels for a Yeoh fit of order {order}, got {}",
            distinct.len()
        )));
    }

    let n = samples.len();
    let mut design = nalgebra::DMatrix::zeros(n, order);
    let mut rhs = nalgebra::DVector::zeros(n);
    for (row, s) in samples.iter().enumerate() {
        let l = s.stretch;
        let (i1, kin) = match s.mode {
            LoadingMode::Uniaxial => (l * l + 2.0 / l, 2.0 * (l - l.powi(-2))),
            LoadingMode::Equibiaxial => (2.0 * l * l + l.powi(-4), 2.0 * (l - l.powi(-5))),
        };
        let x = i1 - 3.0;
        let mut pow = 1.0;
        for k in 0..order {
            design[(row, k)] = kin * (k as f64 + 1.0) * pow;
            pow *= x;
        }
        rhs[row] = s.stress;
    }

    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax <= 0.0 || smin / smax < 1e-10 {
        return Err(Error::FitFailed(format!(
            "rank-deficient design matrix (condition {:.3e}); add samples at more distinct stretches",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    let coeffs = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::FitFailed(e.to_string()))?;

    let residual = (&design * &coeffs - &rhs).norm() / (n as f64).sqrt();
    Ok(YeohFit {
        model: HyperelasticModel::Yeoh {
            c: coeffs.iter().copied().collect(),
            d1: None,
        },
        residual_rms: residual,
    })
}

/// Reads stress-strain samples from CSV with header `stretch,stress,mode`.
pub fn read_samples_csv<R: std::io::Read>(reader: R) -> Result<Vec<StressStrainSample>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() != 3 {
            return Err(Error::Format(format!(
                "expected 3 columns (stretch,stress,mode), got {}",
                record.len()
            )));
        }
        let stretch: f64 = record[0]
            .trim()
            .parse()
            .map_err(|e| Error::Format(format!("bad stretch {:?}: {e}", &record[0])))?;
        let stress: f64 = record[1]
            .trim()
            .parse()
            .map_err(|e| Error::Format(format!("bad stress {:?}: {e}", &record[1])))?;
        let mode = match record[2].trim() {
            "uniaxial" => LoadingMode::Uniaxial,
            "equibiaxial" => LoadingMode::Equibiaxial,
            other => {
                return Err(Error::Format(format!(
                    "unknown loading mode {other:?} (expected uniaxial or equibiaxial)"
                )))
            }
        };
        out.push(StressStrainSample {
            stretch,
            stress,
            mode,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn invariants_identity() {
        let inv = invariants(&DeformationGradient::identity());
        assert_eq!(inv.i1, 3.0);
        assert_eq!(inv.i2, 3.0);
        assert_eq!(inv.i3, 1.0);
        assert_eq!(inv.j, 1.0);
        assert_eq!(inv.stretches, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn invariants_uniaxial_two() {
        // F = diag(2, 1/√2, 1/√2): I1 = 4 + 1 = 5, I3 = 1, J = 1.
        let f = DeformationGradient::uniaxial(2.0).unwrap();
        let inv = invariants(&f);
        assert_relative_eq!(inv.i1, 5.0, max_relative = 1e-12);
        assert_relative_eq!(inv.i3, 1.0, max_relative = 1e-12);
        assert_relative_eq!(inv.j, 1.0, max_relative = 1e-12);
        assert_relative_eq!(inv.stretches[0], 2.0, max_relative = 1e-12);
    }

    #[test]
    fn invariants_simple_shear() {
        // F = I + γ e1⊗e2 with γ = 0.3: I1 = 3 + γ² = 3.09, J = 1.
        let gamma = 0.3;
        let mut m = Matrix3::identity();
        m[(0, 1)] = gamma;
        let f = DeformationGradient::new(m).unwrap();
        let inv = invariants(&f);
        assert_relative_eq!(inv.i1, 3.09, max_relative = 1e-12);
        assert_relative_eq!(inv.j, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_reflecting_f() {
        let m = Matrix3::from_diagonal(&[-1.0, 1.0, 1.0].into());
        assert!(DeformationGradient::new(m).is_err());
    }

    #[test]
    fn energy_zero_at_identity_all_variants() {
        let f = DeformationGradient::identity();
        for model in test_models() {
            let w = strain_energy(&model, &f).unwrap();
            assert_eq!(w, 0.0, "W(I) must be exactly zero for {model:?}");
        }
    }

    #[test]
    fn energy_simple_shear_neo_hookean() {
        let gamma = 0.3;
        let mut m = Matrix3::identity();
        m[(0, 1)] = gamma;
        let f = DeformationGradient::new(m).unwrap();
        let model = HyperelasticModel::NeoHookean { c1: 1.0, d1: None };
        // W = C1 (I1 − 3) = 0.09 at J = 1.
        assert_relative_eq!(strain_energy(&model, &f).unwrap(), 0.09, max_relative = 1e-12);
    }

    #[test]
    fn energy_yeoh_uniaxial() {
        let model = HyperelasticModel::Yeoh {
            c: vec![1.0, 0.5, 0.1],
            d1: None,
        };
        let f = DeformationGradient::uniaxial(1.5).unwrap();
        let i1 = 1.5f64.powi(2) + 2.0 / 1.5;
        let x = i1 - 3.0;
        let expected = x + 0.5 * x * x + 0.1 * x * x * x;
        assert_relative_eq!(strain_energy(&model, &f).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn stress_zero_at_identity_all_variants() {
        let f = DeformationGradient::identity();
        for model in test_models() {
            let s = stress_from_deformation(&model, &f).unwrap();
            assert_eq!(s.max_abs(), 0.0, "σ(I) must be exactly zero for {model:?}");
        }
    }

    #[test]
    fn neo_hookean_uniaxial_closed_form() {
        // Incompressible uniaxial λ = 2, C1 = 1: σ_axial = 2 C1 (λ² − 1/λ) = 7.
        let model = HyperelasticModel::NeoHookean { c1: 1.0, d1: None };
        let sigma = incompressible_uniaxial_cauchy(&model, 2.0).unwrap();
        assert_relative_eq!(sigma, 7.0, max_relative = 1e-14);

        // The full tensor path must agree once the deviatoric stress is
        // corrected by the lateral-face condition σ_22 = 0: the axial
        // difference σ_11 − σ_22 is pressure-independent.
        let f = DeformationGradient::uniaxial(2.0).unwrap();
        let s = cauchy_stress(&model, &f).unwrap();
        let diff = s.matrix()[(0, 0)] - s.matrix()[(1, 1)];
        assert_relative_eq!(diff, 7.0, max_relative = 1e-12);
    }

    #[test]
    fn linear_stress_hand_cases() {
        let s = linear_stress(1.0, 0.0, &Matrix3::from_diagonal(&[0.01, 0.0, 0.0].into())).unwrap();
        assert_relative_eq!(s.matrix()[(0, 0)], 0.01, max_relative = 1e-12);
        assert_eq!(s.matrix()[(1, 1)], 0.0);

        let mut shear = Matrix3::zeros();
        shear[(0, 1)] = 0.01;
        shear[(1, 0)] = 0.01;
        let s = linear_stress(1.0, 0.25, &shear).unwrap();
        assert_relative_eq!(s.matrix()[(0, 1)], 0.008, max_relative = 1e-12);
    }

    #[test]
    fn linear_stress_rejects_incompressible_limit() {
        assert!(linear_stress(1.0, 0.5, &Matrix3::zeros()).is_err());
        assert!(linear_stress(1.0, 0.4999, &Matrix3::zeros()).is_ok());
    }

    #[test]
    fn yeoh_fit_single_sample_exact() {
        let samples = [StressStrainSample {
            stretch: 1.3,
            stress: 0.5,
            mode: LoadingMode::Uniaxial,
        }];
        let fit = fit_yeoh(&samples, 1).unwrap();
        assert!(fit.residual_rms < 1e-12);
        let p = incompressible_uniaxial_nominal(&fit.model, 1.3).unwrap();
        assert_relative_eq!(p, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn yeoh_fit_recovers_planted_parameters() {
        let truth = HyperelasticModel::Yeoh {
            c: vec![0.2, 0.05, 0.01],
            d1: None,
        };
        let mut samples = Vec::new();
        let mut l = 1.05;
        while l <= 1.5 + 1e-9 {
            samples.push(StressStrainSample {
                stretch: l,
                stress: incompressible_uniaxial_nominal(&truth, l).unwrap(),
                mode: LoadingMode::Uniaxial,
            });
            l += 0.05;
        }
        let fit = fit_yeoh(&samples, 3).unwrap();
        let HyperelasticModel::Yeoh { c, .. } = &fit.model else {
            panic!("fit must return a Yeoh model")
        };
        for (got, want) in c.iter().zip([0.2, 0.05, 0.01]) {
            assert!(
                (got - want).abs() / want < 0.01,
                "recovered {got} vs planted {want}"
            );
        }
    }

    #[test]
    fn yeoh_fit_mixed_modes_noiseless_residual() {
        let truth = HyperelasticModel::Yeoh {
            c: vec![0.15, 0.04, 0.008],
            d1: None,
        };
        let mut samples = Vec::new();
        for k in 0..8 {
            let l = 1.05 + 0.05 * k as f64;
            samples.push(StressStrainSample {
                stretch: l,
                stress: incompressible_uniaxial_nominal(&truth, l).unwrap(),
                mode: LoadingMode::Uniaxial,
            });
            samples.push(StressStrainSample {
                stretch: l,
                stress: incompressible_equibiaxial_nominal(&truth, l).unwrap(),
                mode: LoadingMode::Equibiaxial,
            });
        }
        let fit = fit_yeoh(&samples, 3).unwrap();
        assert!(fit.residual_rms < 1e-10, "residual {}", fit.residual_rms);
    }

    #[test]
    fn yeoh_fit_rank_deficient_reports_failure() {
        // Two samples at the same stretch level cannot determine order 2.
        let samples = [
            StressStrainSample {
                stretch: 1.2,
                stress: 0.3,
                mode: LoadingMode::Uniaxial,
            },
            StressStrainSample {
                stretch: 1.2,
                stress: 0.31,
                mode: LoadingMode::Uniaxial,
            },
        ];
        assert!(matches!(fit_yeoh(&samples, 2), Err(Error::FitFailed(_))));
    }

    #[test]
    fn stiffness_ordering_across_gel_families() {
        // Hard / soft / extra-soft synthetic stand-ins: fitted C1 must decrease
        // monotonically, with the softest about a quarter of the hardest.
        let families = [0.4, 0.2, 0.1];
        let mut fitted = Vec::new();
        for c1 in families {
            let truth = HyperelasticModel::Yeoh {
                c: vec![c1, c1 * 0.25, c1 * 0.05],
                d1: None,
            };
            let samples: Vec<_> = (0..10)
                .map(|k| {
                    let l = 1.05 + 0.045 * k as f64;
                    StressStrainSample {
                        stretch: l,
                        stress: incompressible_uniaxial_nominal(&truth, l).unwrap(),
                        mode: LoadingMode::Uniaxial,
                    }
                })
                .collect();
            let fit = fit_yeoh(&samples, 3).unwrap();
            let HyperelasticModel::Yeoh { c, .. } = fit.model else {
                unreachable!()
            };
            fitted.push(c[0]);
        }
        assert!(fitted[0] > fitted[1] && fitted[1] > fitted[2]);
    }

    #[test]
    fn samples_csv_round_trip() {
        let csv = "stretch,stress,mode\n1.1,0.05,uniaxial\n1.2,0.12,equibiaxial\n";
        let samples = read_samples_csv(csv.as_bytes()).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(samples[1].mode, LoadingMode::Equibiaxial);
    }

    #[test]
    fn model_json_round_trip() {
        for model in test_models() {
            let text = serde_json::to_string(&model).unwrap();
            let back: HyperelasticModel = serde_json::from_str(&text).unwrap();
            assert_eq!(model, back);
        }
    }

    fn test_models() -> Vec<HyperelasticModel> {
        vec![
            HyperelasticModel::NeoHookean {
                c1: 0.3,
                d1: Some(0.2),
            },
            HyperelasticModel::MooneyRivlin {
                c1: 0.25,
                c2: 0.05,
                d1: Some(0.2),
            },
            HyperelasticModel::Ogden {
                terms: vec![
                    OgdenTerm {
                        mu: 0.6,
                        alpha: 1.8,
                    },
                    OgdenTerm {
                        mu: 0.05,
                        alpha: -2.0,
                    },
                ],
                d1: Some(0.2),
            },
            HyperelasticModel::Yeoh {
                c: vec![0.2, 0.05, 0.01],
                d1: Some(0.2),
            },
            HyperelasticModel::LinearElastic {
                youngs: 1.2,
                poisson: 0.45,
            },
        ]
    }
}
