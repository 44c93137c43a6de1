use nalgebra::{DMatrix, DVector};

use super::operator::projector;
use super::{BipartiteDensityOperator, ModeCutoff, C64};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Pure two-mode state `Σ c_ij |i>_A |j>_B` with a `d_a × d_b` coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePureState {
    cutoff: ModeCutoff,
    coefficients: DMatrix<C64>,
}

impl BipartitePureState {
    /// Requires `Σ|c_ij|² = 1` within 1e-12.
    pub fn new(coefficients: DMatrix<C64>) -> Result<Self> {
        let cutoff = ModeCutoff::new(coefficients.nrows(), coefficients.ncols())?;
        let norm = coefficients.norm_squared();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { trace: norm, tolerance: NORM_TOL });
        }
        Ok(Self { cutoff, coefficients })
    }

    /// Rescales the coefficients to unit norm.
    pub fn normalized(coefficients: DMatrix<C64>) -> Result<Self> {
        let norm = coefficients.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DomainError("cannot normalise a zero state".into()));
        }
        Self::new(coefficients.unscale(norm))
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    pub fn coefficients(&self) -> &DMatrix<C64> {
        &self.coefficients
    }

    /// State vector in the `i * d_b + j` layout.
    pub fn vector(&self) -> DVector<C64> {
        let cut = self.cutoff;
        DVector::from_fn(cut.dim(), |idx, _| {
            let (i, j) = cut.split(idx);
            self.coefficients[(i, j)]
        })
    }

    pub fn density(&self) -> BipartiteDensityOperator {
        BipartiteDensityOperator::from_trusted(self.cutoff, projector(&self.vector()))
    }

    /// Squared singular values of the coefficient matrix, descending.
    pub fn schmidt_probabilities(&self) -> Vec<f64> {
        let sv = self.coefficients.clone().singular_values();
        let mut p: Vec<f64> = sv.iter().map(|s| s * s).collect();
        p.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::pt_moment;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_unnormalised_coefficients() {
        let m = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(BipartitePureState::new(m.clone()).is_err());
        let s = BipartitePureState::normalized(m).unwrap();
        assert_abs_diff_eq!(s.schmidt_probabilities()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_law_on_a_small_state() {
        let m = DMatrix::from_row_slice(
            2,
            3,
            &[
                C64::new(0.3, 0.1),
                C64::new(-0.2, 0.0),
                C64::new(0.5, 0.2),
                C64::new(0.0, 0.4),
                C64::new(0.6, -0.1),
                C64::new(0.1, 0.0),
            ],
        );
        let s = BipartitePureState::normalized(m).unwrap();
        let lam = s.schmidt_probabilities();
        let rho = s.density();
        let p3: f64 = lam.iter().map(|l| l.powi(3)).sum();
        let p4: f64 = lam.iter().map(|l| l * l).sum::<f64>().powi(2);
        assert_abs_diff_eq!(pt_moment(&rho, 3).unwrap(), p3, epsilon = 1e-12);
        assert_abs_diff_eq!(pt_moment(&rho, 4).unwrap(), p4, epsilon = 1e-12);
    }
}
