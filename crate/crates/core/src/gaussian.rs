//! Two-mode Gaussian states in the covariance-matrix picture.
//!
//! Quadratures are ordered `(X1, P1, X2, P2)` and normalised so that the
//! vacuum has covariance equal to the identity. Partial transposition on B is
//! the sign flip `P2 -> -P2`.

use nalgebra::{Complex, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::criteria::{CriterionId, CriterionReport};
use crate::error::{Error, Result};

const SYM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    gamma: Matrix4<f64>,
}

/// Symplectic eigenvalues `nu1 <= nu2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticPair {
    pub nu1: f64,
    pub nu2: f64,
}

impl SymplecticPair {
    /// Orders the pair ascending.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DomainError(format!("symplectic eigenvalues must be non-negative, got ({a}, {b})")));
        }
        Ok(Self { nu1: a.min(b), nu2: a.max(b) })
    }

    pub fn product(&self) -> f64 {
        self.nu1 * self.nu2
    }
}

/// Symplectic form `1_2 ⊗ iσ_2`.
pub fn symplectic_form() -> Matrix4<f64> {
    let j = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let mut omega = Matrix4::zeros();
    omega.fixed_view_mut::<2, 2>(0, 0).copy_from(&j);
    omega.fixed_view_mut::<2, 2>(2, 2).copy_from(&j);
    omega
}

impl CovarianceMatrix {
    /// Requires a symmetric matrix; physicality is checked separately.
    pub fn new(gamma: Matrix4<f64>) -> Result<Self> {
        let deviation = (gamma - gamma.transpose()).amax();
        if deviation > SYM_TOL || gamma.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotSymmetric { deviation });
        }
        Ok(Self { gamma: (gamma + gamma.transpose()) * 0.5 })
    }

    pub fn vacuum() -> Self {
        Self { gamma: Matrix4::identity() }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.gamma
    }

    /// Smallest eigenvalue of `γ + iΩ`; negative values flag unphysical matrices.
    pub fn physicality_margin(&self) -> f64 {
        let omega = symplectic_form();
        let h = self.gamma.map(|x| Complex::new(x, 0.0)) + omega.map(|x| Complex::new(0.0, x));
        h.symmetric_eigenvalues().min()
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.physicality_margin() >= -tol
    }

    pub fn determinant(&self) -> f64 {
        self.gamma.determinant()
    }
}

/// `Λ γ Λ` with `Λ = diag(1, 1, 1, -1)`.
pub fn pt_covariance(gamma: &CovarianceMatrix) -> CovarianceMatrix {
    let lambda = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    CovarianceMatrix { gamma: lambda * gamma.gamma * lambda }
}

/// Moduli of the eigenvalues of `iΩγ`, collapsed to one value per mode.
///
/// Computed from the hermitian matrix `γ^{1/2} iΩ γ^{1/2}`, which shares its
/// spectrum with `iΩγ`; requires `γ` positive definite.
pub fn symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Result<SymplecticPair> {
    let deviation = (gamma.gamma - gamma.gamma.transpose()).amax();
    if deviation > SYM_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    let eig = gamma.gamma.symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::DomainError("covariance matrix must be positive definite".into()));
    }
    let sqrt =
        eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let omega = symplectic_form();
    let s = sqrt.map(|x| Complex::new(x, 0.0));
    let h = s * omega.map(|x| Complex::new(0.0, x)) * s;
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().map(|v| v.abs()).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    // Eigenvalues come in ± pairs.
    SymplecticPair::new(0.5 * (vals[0] + vals[1]), 0.5 * (vals[2] + vals[3]))
}

/// Symplectic eigenvalues of the partial transpose.
pub fn pt_symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Result<SymplecticPair> {
    symplectic_eigenvalues(&pt_covariance(gamma))
}

/// Witness `min(ν1, ν2) - 1` on the partially transposed pair.
pub fn simon_test(pair: SymplecticPair) -> CriterionReport {
    let mut r = CriterionReport::new(CriterionId::Simon, pair.nu1.min(pair.nu2) - 1.0, 1.0);
    r.gaussian_only = true;
    r
}

/// `Π_j 2^n / [(ν_j + 1)^n - (ν_j - 1)^n]`
pub fn gaussian_pt_moment(pair: SymplecticPair, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadOrder("moment order must be at least 1".into()));
    }
    if n == 1 {
        return Ok(1.0);
    }
    let factor = |nu: f64| {
        let k = n as i32;
        2f64.powi(k) / ((nu + 1.0).powi(k) - (nu - 1.0).powi(k))
    };
    Ok(factor(pair.nu1) * factor(pair.nu2))
}

/// `(quadratic, linear)` third-order criteria written in the PT symplectic
/// eigenvalues, with the overall positive denominators dropped.
pub fn symplectic_p3_criteria(pair: SymplecticPair) -> (CriterionReport, CriterionReport) {
    let (a, b) = (pair.nu1, pair.nu2);
    let (a2, b2) = (a * a, b * b);
    let quad = 7.0 * a2 * b2 - 3.0 * (a2 + b2) - 1.0;
    let lin = (a2 + 3.0 * a2 * b2 + b2) * (a * b - 3.0) + 11.0 * a * b - 1.0;
    (CriterionReport::new(CriterionId::Quadratic3, quad, 0.0), CriterionReport::new(CriterionId::Linear3, lin, 0.0))
}

/// Two-mode squeezed thermal state `U_r (ρ_n̄ ⊗ ρ_n̄) U_r†` with
/// `U_r = exp[r(ab - a†b†)]`.
pub fn tmsv_thermal(n_bar: f64, r: f64) -> Result<CovarianceMatrix> {
    if !(n_bar >= 0.0) || !r.is_finite() {
        return Err(Error::DomainError(format!("need n_bar >= 0 and finite r, got ({n_bar}, {r})")));
    }
    let s = 2.0 * n_bar + 1.0;
    let (c, sh) = ((2.0 * r).cosh() * s, (2.0 * r).sinh() * s);
    #[rustfmt::skip]
    let gamma = Matrix4::new(
        c,   0.0, sh,  0.0,
        0.0, c,   0.0, -sh,
        sh,  0.0, c,   0.0,
        0.0, -sh, 0.0, c,
    );
    CovarianceMatrix::new(gamma)
}

/// Closed-form PT symplectic pair of [`tmsv_thermal`].
pub fn tmsv_thermal_pair(n_bar: f64, r: f64) -> Result<SymplecticPair> {
    if !(n_bar >= 0.0) || !r.is_finite() {
        return Err(Error::DomainError(format!("need n_bar >= 0 and finite r, got ({n_bar}, {r})")));
    }
    let s = 2.0 * n_bar + 1.0;
    SymplecticPair::new((-2.0 * r).exp() * s, (2.0 * r).exp() * s)
}
