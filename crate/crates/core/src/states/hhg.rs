use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::check_tail;
use crate::error::{Error, Result};
use crate::fock::coherent::{coherent_cutoff, coherent_vector};
use crate::fock::{BipartiteDensityOperator, ModeCutoff, C64};
use crate::tolerance::ToleranceProfile;

/// Driving mode (A) and one harmonic mode (B) after high harmonic generation
/// with `n_modes` harmonics sharing the depletion `delta_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HhgParams {
    pub alpha: f64,
    pub delta_alpha: f64,
    pub n_modes: usize,
}

impl HhgParams {
    pub fn new(alpha: f64, delta_alpha: f64, n_modes: usize) -> Result<Self> {
        let p = Self { alpha, delta_alpha, n_modes };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::DomainError("HHG needs at least one mode".into()));
        }
        if !(self.delta_alpha > 0.0) || !self.delta_alpha.is_finite() || !self.alpha.is_finite() {
            return Err(Error::DomainError(format!(
                "need finite alpha and delta_alpha > 0, got ({}, {})",
                self.alpha, self.delta_alpha
            )));
        }
        Ok(())
    }
}

/// Harmonic amplitude `2 δα / sqrt(N² + 2N - 3)`; undefined for a single mode.
pub fn hhg_chi(delta_alpha: f64, n_modes: usize) -> Result<f64> {
    if n_modes < 2 {
        return Err(Error::DomainError("harmonic amplitude requires at least two modes".into()));
    }
    let n = n_modes as f64;
    Ok(2.0 * delta_alpha / (n * n + 2.0 * n - 3.0).sqrt())
}

pub fn hhg_cutoff(p: &HhgParams, tol: f64) -> Result<ModeCutoff> {
    p.validate()?;
    let mean_a = p.alpha.powi(2).max((p.alpha - p.delta_alpha).powi(2));
    let d_b = match p.n_modes {
        1 => 1,
        n => coherent_cutoff(hhg_chi(p.delta_alpha, n)?.powi(2), tol),
    };
    ModeCutoff::new(coherent_cutoff(mean_a, tol), d_b)
}

/// Reduced state of the driving mode and one harmonic.
///
/// For a single mode there is no harmonic to trace out; the pure driver state
/// is returned with mode B in vacuum.
pub fn hhg_reduced_density(p: &HhgParams, cutoff: ModeCutoff) -> Result<BipartiteDensityOperator> {
    p.validate()?;
    let tol = ToleranceProfile::default().trunc;
    check_tail(p.alpha.powi(2), cutoff.d_a(), tol)?;
    check_tail((p.alpha - p.delta_alpha).powi(2), cutoff.d_a(), tol)?;
    let da = p.delta_alpha;
    let shifted = coherent_vector(C64::new(p.alpha - da, 0.0), cutoff.d_a());
    let driver = coherent_vector(C64::new(p.alpha, 0.0), cutoff.d_a());
    let overlap = (-da * da / 2.0).exp();
    if p.n_modes == 1 {
        let psi = shifted - driver * C64::new(overlap, 0.0);
        let mut vac = DMatrix::zeros(cutoff.d_b(), cutoff.d_b());
        vac[(0, 0)] = C64::new(1.0, 0.0);
        let rho_a = &psi * psi.adjoint();
        return BipartiteDensityOperator::normalized(cutoff, rho_a.kronecker(&vac));
    }
    let chi = hhg_chi(da, p.n_modes)?;
    let rest = (p.n_modes - 1) as f64;
    check_tail(chi * chi, cutoff.d_b(), tol)?;
    let u = shifted.kronecker(&coherent_vector(C64::new(chi, 0.0), cutoff.d_b()));
    let mut vac = nalgebra::DVector::zeros(cutoff.d_b());
    vac[0] = C64::new(1.0, 0.0);
    let v = driver.kronecker(&vac);
    // <α|α-δα> Π_j <0|χ>, and the trace over the remaining harmonics of |χ><0|.
    let c = overlap * (-rest * chi * chi / 2.0).exp();
    let t = (-(rest - 1.0) * chi * chi / 2.0).exp();
    let cross = C64::new(c * t, 0.0);
    let m = &u * u.adjoint() - (&u * v.adjoint() + &v * u.adjoint()) * cross + &v * v.adjoint() * C64::new(c * c, 0.0);
    BipartiteDensityOperator::normalized(cutoff, m)
}

/// Closed-form `(p2, p3)`; independent of `alpha`.
pub fn hhg_pt_moments(p: &HhgParams) -> Result<(f64, f64)> {
    p.validate()?;
    if p.n_modes == 1 {
        return Ok((1.0, 1.0));
    }
    let chi = hhg_chi(p.delta_alpha, p.n_modes)?;
    let d = p.delta_alpha.powi(2);
    let x = chi * chi;
    let n = p.n_modes as f64;
    let q = (-d - (n - 1.0) * x).exp();
    let c = 1.0 - q;
    let e = f64::exp;
    let p2 = (1.0 - 2.0 * q * (2.0 - e(-(d + x))) + q * q * (2.0 * e(d + x) - 1.0)) / (c * c);
    let p3 = (1.0 - 3.0 * q * (2.0 - e(-(d + x)))
        + 3.0 * q * q * (2.0 + e(-(d + x)) + e(d) - 2.0 * e(-d) + e(x) - 2.0 * e(-x))
        - q.powi(3) * (1.0 + 6.0 * e(d + x) - 3.0 * e(d) - 3.0 * e(x)))
        / c.powi(3);
    Ok((p2, p3))
}
