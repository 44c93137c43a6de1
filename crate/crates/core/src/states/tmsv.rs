use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::{BipartiteDensityOperator, BipartitePureState, ModeCutoff, C64};

/// `sech r Σ (-tanh r)^m |m, m>` truncated to `d` levels per mode and renormalised.
pub fn tmsv_pure_state(r: f64, d: usize) -> Result<BipartitePureState> {
    if !r.is_finite() || d == 0 {
        return Err(Error::DomainError(format!("need finite r and d >= 1, got ({r}, {d})")));
    }
    let t = -r.tanh();
    let s = 1.0 / r.cosh();
    let mut c = DMatrix::zeros(d, d);
    let mut amp = s;
    for m in 0..d {
        c[(m, m)] = C64::new(amp, 0.0);
        amp *= t;
    }
    BipartitePureState::normalized(c)
}

/// `U_r (ρ_n̄ ⊗ ρ_n̄) U_r†` with `U_r = exp[r(ab - a†b†)]`, truncated to `d`
/// levels per mode.
///
/// The squeezer conserves `n_A - n_B`, so it is exponentiated exactly on each
/// difference sector of a padded space before truncating back to `d`.
pub fn tmsv_thermal_density(n_bar: f64, r: f64, d: usize) -> Result<BipartiteDensityOperator> {
    if !(n_bar >= 0.0) || !r.is_finite() || d == 0 {
        return Err(Error::DomainError(format!("need n_bar >= 0, finite r, d >= 1, got ({n_bar}, {r}, {d})")));
    }
    let work = 2 * d + 20;
    let q = n_bar / (n_bar + 1.0);
    let thermal: Vec<f64> = (0..work).map(|m| q.powi(m as i32) / (n_bar + 1.0)).collect();
    let cut = ModeCutoff::square(d)?;
    let mut out = DMatrix::<C64>::zeros(cut.dim(), cut.dim());
    for delta in -(work as i64 - 1)..=(work as i64 - 1) {
        // Sector basis |m + max(delta,0), m + max(-delta,0)>.
        let (oa, ob) = (delta.max(0) as usize, (-delta).max(0) as usize);
        let len = work - oa.max(ob);
        let basis: Vec<(usize, usize)> = (0..len).map(|m| (m + oa, m + ob)).collect();
        // Generator G = r(ab - a†b†); iG is hermitian.
        let mut h = DMatrix::<C64>::zeros(len, len);
        for k in 0..len.saturating_sub(1) {
            let (i, j) = basis[k];
            let g = r * (((i + 1) * (j + 1)) as f64).sqrt();
            // <k|ab|k+1> = g/r·r, <k+1|a†b†|k> = g
            h[(k, k + 1)] = C64::new(0.0, g);
            h[(k + 1, k)] = C64::new(0.0, -g);
        }
        let eig = h.symmetric_eigen();
        let v = eig.eigenvectors.clone();
        // U = exp(G) = exp(-i H) with H = iG.
        let phases = DVector::from_iterator(len, eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -l)));
        let u = &v * DMatrix::from_diagonal(&phases) * v.adjoint();
        let weights = DVector::from_iterator(len, basis.iter().map(|&(i, j)| C64::new(thermal[i] * thermal[j], 0.0)));
        let rho = &u * DMatrix::from_diagonal(&weights) * u.adjoint();
        let kept: Vec<(usize, usize)> =
            basis.iter().enumerate().filter(|(_, &(i, j))| i < d && j < d).map(|(k, _)| (k, 0)).collect();
        for &(x, _) in &kept {
            let (i, j) = basis[x];
            for &(y, _) in &kept {
                let (k, l) = basis[y];
                out[(cut.index(i, j), cut.index(k, l))] = rho[(x, y)];
            }
        }
    }
    let lost = 1.0 - out.trace().re;
    if lost > 1e-6 {
        return Err(Error::CutoffTooSmall { cutoff: d, tail: lost, tolerance: 1e-6 });
    }
    let herm = (&out + out.adjoint()).scale(0.5);
    BipartiteDensityOperator::normalized(cut, herm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{pt_moment, purity};
    use crate::gaussian::{gaussian_pt_moment, tmsv_thermal_pair};
    use approx::assert_abs_diff_eq;

    #[test]
    fn pure_tmsv_matches_squeezer_on_vacuum() {
        let a = tmsv_pure_state(0.4, 20).unwrap().density();
        let b = tmsv_thermal_density(0.0, 0.4, 20).unwrap();
        assert!((a.elements() - b.elements()).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn thermal_purity_depends_on_population_only() {
        let nb = (2f64.sqrt() - 1.0) / 2.0;
        let rho = tmsv_thermal_density(nb, 0.3, 30).unwrap();
        assert_abs_diff_eq!(purity(&rho), 0.5, epsilon = 1e-8);
        let pair = tmsv_thermal_pair(nb, 0.3).unwrap();
        for n in 3..=4 {
            assert_abs_diff_eq!(pt_moment(&rho, n).unwrap(), gaussian_pt_moment(pair, n).unwrap(), epsilon = 1e-8);
        }
    }
}
