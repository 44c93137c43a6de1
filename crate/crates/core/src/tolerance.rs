use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every validation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceProfile {
    pub herm: f64,
    pub trace: f64,
    pub imag: f64,
    pub psd: f64,
    /// Probability mass that may be dropped by Fock-space truncation.
    pub trunc: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self { herm: 1e-9, trace: 1e-9, imag: 1e-9, psd: 1e-8, trunc: 1e-6 }
    }
}
