use std::f64::consts::FRAC_1_SQRT_2;

use anyhow::{bail, Context, Result};
use ptmoment::criteria::PtMomentVector;
use ptmoment::fock::{partial_transpose, spectrum, BipartiteDensityOperator, ModeCutoff, C64};
use ptmoment::gaussian::{gaussian_pt_moment, tmsv_thermal_pair, SymplecticPair};
use ptmoment::states::{
    cat_cutoff, cat_density, hhg_cutoff, hhg_reduced_density, lossy_noon_density, noon_state, qutrit_state,
    tmsv_thermal_density, CatParams, HhgParams, LossyNoonParams, NoonParams, Parity,
};
use ptmoment::ToleranceProfile;

use crate::config::{Family, StateSpec};

/// Highest moment order reported for Fock-space states.
pub const MAX_ORDER: usize = 7;

const DEFAULT_TMSV_CUTOFF: usize = 30;

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.with_context(|| format!("family {family} needs --{flag}"))
}

pub fn noon_params(spec: &StateSpec) -> Result<NoonParams> {
    let n = spec.n.unwrap_or(1);
    let alpha = spec.alpha.unwrap_or(FRAC_1_SQRT_2);
    Ok(match spec.beta {
        Some(beta) => NoonParams::new(n, C64::new(alpha, 0.0), C64::new(beta, 0.0))?,
        None => NoonParams::balanced_real(n, alpha)?,
    })
}

pub fn lossy_noon_params(spec: &StateSpec, default_tau: Option<f64>) -> Result<LossyNoonParams> {
    let tau = match spec.tau.or(default_tau) {
        Some(t) => t,
        None => bail!("family lossy-noon needs --tau"),
    };
    Ok(LossyNoonParams::new(noon_params(spec)?, tau, tau)?)
}

pub fn cat_params(spec: &StateSpec) -> Result<CatParams> {
    let alpha = require(spec.alpha, "alpha", "cat")?;
    let beta = require(spec.beta, "beta", "cat")?;
    let parity: Parity = spec.parity.map(Into::into).unwrap_or(Parity::Odd);
    Ok(CatParams::real(alpha, beta, spec.z.unwrap_or(0.0), parity)?)
}

pub fn hhg_params(spec: &StateSpec) -> Result<HhgParams> {
    let da = require(spec.delta_alpha, "delta-alpha", "hhg")?;
    Ok(HhgParams::new(spec.alpha.unwrap_or(2.0), da, spec.n.unwrap_or(2))?)
}

pub fn tmsv_pair(spec: &StateSpec) -> Result<SymplecticPair> {
    let r = require(spec.r, "r", "tmsv")?;
    Ok(tmsv_thermal_pair(spec.n_bar.unwrap_or(0.0), r)?)
}

/// Density operator of the family in Fock space.
pub fn density(spec: &StateSpec, cutoff: Option<usize>, tol: &ToleranceProfile) -> Result<BipartiteDensityOperator> {
    let family = spec.family.context("no --family given")?;
    let rho = match family {
        Family::Noon if spec.tau.is_none() => noon_state(&noon_params(spec)?)?.density(),
        Family::Noon | Family::LossyNoon => lossy_noon_density(&lossy_noon_params(spec, None)?)?,
        Family::Cat => {
            let p = cat_params(spec)?;
            let cut = match cutoff {
                Some(c) => ModeCutoff::square(c)?,
                None => cat_cutoff(&p, tol.trunc),
            };
            cat_density(&p, cut)?
        }
        Family::Hhg => {
            let p = hhg_params(spec)?;
            let cut = match cutoff {
                Some(c) => ModeCutoff::square(c)?,
                None => hhg_cutoff(&p, tol.trunc)?,
            };
            hhg_reduced_density(&p, cut)?
        }
        Family::Tmsv => {
            let r = require(spec.r, "r", "tmsv")?;
            tmsv_thermal_density(spec.n_bar.unwrap_or(0.0), r, cutoff.unwrap_or(DEFAULT_TMSV_CUTOFF))?
        }
        Family::Qutrit => qutrit_state().density(),
    };
    Ok(rho)
}

/// PT moments `p_1..p_order`: exact for the Gaussian family, from the
/// partially transposed spectrum otherwise.
pub fn moments(spec: &StateSpec, cutoff: Option<usize>, tol: &ToleranceProfile) -> Result<PtMomentVector> {
    if spec.family == Some(Family::Tmsv) && cutoff.is_none() {
        let pair = tmsv_pair(spec)?;
        let m = (1..=MAX_ORDER as u32).map(|n| gaussian_pt_moment(pair, n)).collect::<Result<Vec<_>, _>>()?;
        return Ok(PtMomentVector::new(m)?);
    }
    let rho = density(spec, cutoff, tol)?;
    let spec = spectrum(&partial_transpose(&rho))?;
    let m = (1..=MAX_ORDER as u32).map(|n| spec.power_sum(n)).collect();
    Ok(PtMomentVector::new(m)?)
}
