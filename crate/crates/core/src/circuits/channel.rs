use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BipartiteDensityOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    A,
    B,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Kraus operators `K_k = Σ_n sqrt(C(n,k)) τ^{(n-k)/2} (1-τ)^{k/2} |n-k><n|`
/// of the pure-loss channel on `d` levels.
pub fn loss_kraus(tau: f64, d: usize) -> Result<Vec<DMatrix<f64>>> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::DomainError(format!("transmissivity {tau} must lie in [0, 1]")));
    }
    Ok((0..d)
        .map(|k| {
            let mut m = DMatrix::zeros(d, d);
            for n in k..d {
                m[(n - k, n)] =
                    binomial(n, k).sqrt() * tau.powf((n - k) as f64 / 2.0) * (1.0 - tau).powf(k as f64 / 2.0);
            }
            m
        })
        .collect())
}

/// Pure-loss channel of transmissivity `tau` on one mode.
pub fn lossy_channel(rho: &BipartiteDensityOperator, tau: f64, mode: Mode) -> Result<BipartiteDensityOperator> {
    let cut = rho.cutoff();
    let (d_a, d_b) = (cut.d_a(), cut.d_b());
    let kraus = match mode {
        Mode::A => loss_kraus(tau, d_a)?,
        Mode::B => loss_kraus(tau, d_b)?,
    };
    let mut out = DMatrix::<C64>::zeros(cut.dim(), cut.dim());
    for k in kraus {
        let kc = k.map(|x| C64::new(x, 0.0));
        let full = match mode {
            Mode::A => kc.kronecker(&DMatrix::identity(d_b, d_b)),
            Mode::B => DMatrix::identity(d_a, d_a).kronecker(&kc),
        };
        out += &full * rho.elements() * full.adjoint();
    }
    BipartiteDensityOperator::new(cut, out)
}
