//! Finite-statistics layer on top of the readout circuits.

mod noise;
mod rng;
mod sampling;
mod simulation;
mod witness;

pub use noise::{noisy_copy_draw, CopyDraw, NoiseSpec, ParameterNoise};
pub use rng::{stream_rng, Channel};
pub use sampling::{repeated_estimates, sample_pn, EstimateSample, OutcomeSampler};
pub use simulation::{full_simulation, SamplingPlan, SimulationOutput, SimulationPoint};
pub use witness::{min_samples, summarize, witness_estimators, witness_variances, EstimatorResult, SampleCriterion};
