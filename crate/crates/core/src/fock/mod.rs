//! Truncated two-mode Fock space.
//!
//! Density operators are stored densely with row index `i * d_b + j` for the
//! basis vector `|i>_A |j>_B`. Every closed formula elsewhere in the crate is
//! checked against the routines here, so they favour exactness over speed,
//! with one exception: operators that split into disconnected blocks (a very
//! common situation for states with a conserved photon-number difference) are
//! processed block by block. The decomposition is exact because it only ever
//! looks at entries that are identically zero.

mod blocks;
pub mod coherent;
mod operator;
mod pure;

pub use blocks::connected_blocks;
pub use operator::{
    mode_moment, partial_transpose, pt_moment, pt_moment_with, purity, spectrum, BipartiteDensityOperator,
    BipartiteOperator, Spectrum,
};
pub use pure::BipartitePureState;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Number of Fock levels kept on each side (`0..d_a` and `0..d_b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCutoff", into = "RawCutoff")]
pub struct ModeCutoff {
    d_a: usize,
    d_b: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCutoff {
    d_a: usize,
    d_b: usize,
}

impl TryFrom<RawCutoff> for ModeCutoff {
    type Error = Error;
    fn try_from(raw: RawCutoff) -> Result<Self> {
        ModeCutoff::new(raw.d_a, raw.d_b)
    }
}

impl From<ModeCutoff> for RawCutoff {
    fn from(c: ModeCutoff) -> Self {
        RawCutoff { d_a: c.d_a, d_b: c.d_b }
    }
}

impl ModeCutoff {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::DomainError(format!("mode cutoffs must be positive, got ({d_a}, {d_b})")));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    /// Dimension of the joint space.
    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.d_b + j
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.d_b, idx % self.d_b)
    }
}
