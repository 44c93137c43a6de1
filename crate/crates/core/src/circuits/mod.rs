//! Multicopy linear-optics readout.
//!
//! Alice's modes of the `n` copies and Bob's modes are fed into two identical
//! interferometers acting on disjoint mode sets; output modes `2..n` of each
//! side are counted and mode 1 is discarded.

mod channel;
mod multimode;
mod readout;
mod unitary;

pub use channel::{loss_kraus, lossy_channel, Mode};
pub use multimode::{apply_circuit, apply_passive, MultimodeState, Occupation};
pub use readout::{
    multicopy_expectation, multicopy_expectation_complex, multicopy_expectation_with, outcome_distribution,
    outcome_weight, pure_ensemble, EnsembleSampler, OutcomeDistribution, OutcomeKey, PureComponent,
};
pub use unitary::{
    compose, decompose_f3, decompose_f3_truncated, dft, parse_circuit, to_json, CircuitElement, PassiveUnitary,
};
