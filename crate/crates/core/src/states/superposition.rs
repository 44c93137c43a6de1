use nalgebra::DMatrix;

use crate::error::Result;
use crate::fock::{BipartiteDensityOperator, BipartitePureState, C64};

/// Finite superposition `Σ c_jj' |j, j'>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSuperposition {
    state: BipartitePureState,
}

impl FockSuperposition {
    /// Coefficients must have unit norm within 1e-12.
    pub fn new(coefficients: DMatrix<C64>) -> Result<Self> {
        Ok(Self { state: BipartitePureState::new(coefficients)? })
    }

    pub fn state(&self) -> &BipartitePureState {
        &self.state
    }

    pub fn density(&self) -> BipartiteDensityOperator {
        self.state.density()
    }
}

/// `(sqrt(2)|0,0> + |2,0> + |0,2>) / 2`
pub fn qutrit_state() -> FockSuperposition {
    let mut c = DMatrix::zeros(3, 3);
    c[(0, 0)] = C64::new(std::f64::consts::SQRT_2 / 2.0, 0.0);
    c[(2, 0)] = C64::new(0.5, 0.0);
    c[(0, 2)] = C64::new(0.5, 0.0);
    FockSuperposition::new(c).expect("qutrit coefficients are normalised")
}
