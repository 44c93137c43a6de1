//! State families with truncated-Fock constructors and closed-form moments.

mod cat;
mod hhg;
mod noon;
mod superposition;
mod tmsv;

pub use cat::{cat_cutoff, cat_density, cat_pt_moments, cat_separability_radius, CatParams, Parity};
pub use hhg::{hhg_chi, hhg_cutoff, hhg_pt_moments, hhg_reduced_density, HhgParams};
pub use noon::{
    lossy_noon_crossing, lossy_noon_density, lossy_noon_pt_moments, noon_pt_moment, noon_state, LossyNoonParams,
    NoonParams,
};
pub use superposition::{qutrit_state, FockSuperposition};
pub use tmsv::{tmsv_pure_state, tmsv_thermal_density};

use crate::error::{Error, Result};
use crate::fock::coherent::poisson_tail;

/// Fails when a coherent amplitude of the given mean photon number leaks more
/// than `tol` probability beyond `d` levels.
pub(crate) fn check_tail(mean: f64, d: usize, tol: f64) -> Result<()> {
    let tail = poisson_tail(mean, d);
    if tail > tol {
        return Err(Error::CutoffTooSmall { cutoff: d, tail, tolerance: tol });
    }
    Ok(())
}
