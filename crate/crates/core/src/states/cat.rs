use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::check_tail;
use crate::error::{Error, Result};
use crate::fock::coherent::{coherent_cutoff, coherent_vector};
use crate::fock::{BipartiteDensityOperator, ModeCutoff, C64};
use crate::tolerance::ToleranceProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Dephased two-mode cat state built on `|α, β>` and `|-α, -β>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    pub alpha: C64,
    pub beta: C64,
    /// Dephasing: 0 is a pure cat, 1 a classical mixture.
    pub z: f64,
    pub parity: Parity,
}

impl CatParams {
    pub fn new(alpha: C64, beta: C64, z: f64, parity: Parity) -> Result<Self> {
        let p = Self { alpha, beta, z, parity };
        p.validate()?;
        Ok(p)
    }

    pub fn real(alpha: f64, beta: f64, z: f64, parity: Parity) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0), z, parity)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.z) {
            return Err(Error::DomainError(format!("z = {} must lie in [0, 1]", self.z)));
        }
        if !(self.alpha.norm().is_finite() && self.beta.norm().is_finite()) {
            return Err(Error::DomainError("displacements must be finite".into()));
        }
        if self.normalization() <= 0.0 {
            return Err(Error::DomainError("odd cat with zero displacement requires z > 0".into()));
        }
        Ok(())
    }

    fn mean_photons(&self) -> (f64, f64) {
        (self.alpha.norm_sqr(), self.beta.norm_sqr())
    }

    /// `2[1 ± (1 - z) e^{-2(|α|² + |β|²)}]`
    pub fn normalization(&self) -> f64 {
        let (a, b) = self.mean_photons();
        2.0 * (1.0 + self.parity.sign() * (1.0 - self.z) * (-2.0 * (a + b)).exp())
    }
}

/// Smallest cutoff meeting the truncation tolerance on both modes.
pub fn cat_cutoff(p: &CatParams, tol: f64) -> ModeCutoff {
    let (a, b) = p.mean_photons();
    ModeCutoff::new(coherent_cutoff(a, tol), coherent_cutoff(b, tol)).expect("cutoffs are positive")
}

pub fn cat_density(p: &CatParams, cutoff: ModeCutoff) -> Result<BipartiteDensityOperator> {
    p.validate()?;
    let tol = ToleranceProfile::default().trunc;
    let (a, b) = p.mean_photons();
    check_tail(a, cutoff.d_a(), tol)?;
    check_tail(b, cutoff.d_b(), tol)?;
    let plus = coherent_vector(p.alpha, cutoff.d_a()).kronecker(&coherent_vector(p.beta, cutoff.d_b()));
    let minus = coherent_vector(-p.alpha, cutoff.d_a()).kronecker(&coherent_vector(-p.beta, cutoff.d_b()));
    let coh = C64::new(p.parity.sign() * (1.0 - p.z), 0.0);
    let pa = plus.adjoint();
    let ma = minus.adjoint();
    let m: DMatrix<C64> = &plus * &pa + &minus * &ma + (&plus * &ma + &minus * &pa) * coh;
    BipartiteDensityOperator::normalized(cutoff, m)
}

/// Closed-form `(p2, p3)`.
pub fn cat_pt_moments(p: &CatParams) -> Result<(f64, f64)> {
    p.validate()?;
    let (a, b) = p.mean_photons();
    let s = a + b;
    let y = 1.0 - p.z;
    let sg = p.parity.sign();
    let c = p.normalization();
    let e = |x: f64| x.exp();
    let p2 = 2.0 / (c * c) * ((1.0 + y * y) * (1.0 + e(-4.0 * s)) + sg * 4.0 * y * e(-2.0 * s));
    let p3 = 2.0 / c.powi(3)
        * (1.0
            + 3.0 * e(-4.0 * s)
            + sg * 3.0 * y * e(-2.0 * s) * (2.0 + e(-4.0 * a) + e(-4.0 * b))
            + 3.0 * y * y * (2.0 * e(-4.0 * s) + e(-4.0 * b) + e(-4.0 * a))
            + sg * y.powi(3) * (e(-6.0 * s) + 3.0 * e(-2.0 * s)));
    Ok((p2, p3))
}

/// Radius `sqrt(|α|² + |β|²)` below which the dephased cat is separable.
pub fn cat_separability_radius(z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::DomainError(format!("z = {z} must lie in [0, 1]")));
    }
    Ok((-0.5 * (-z).ln_1p()).sqrt())
}
