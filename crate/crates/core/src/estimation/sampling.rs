use rand::Rng;
use rand_distr::{Distribution, WeightedAliasIndex};
use rayon::prelude::*;

use super::rng::{stream_rng, Channel};
use super::witness::witness_estimators;
use crate::circuits::{outcome_weight, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::fock::C64;

/// Alias table over the outcomes of a readout distribution.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    values: Vec<C64>,
    table: WeightedAliasIndex<f64>,
}

impl OutcomeSampler {
    pub fn new(dist: &OutcomeDistribution) -> Result<Self> {
        let n = dist.n_copies();
        let (values, weights): (Vec<C64>, Vec<f64>) =
            dist.probabilities().iter().filter(|(_, &p)| p > 0.0).map(|(k, &p)| (outcome_weight(k, n), p)).unzip();
        let table = WeightedAliasIndex::new(weights).map_err(|e| Error::DomainError(e.to_string()))?;
        Ok(Self { values, table })
    }

    /// One per-outcome root of unity.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> C64 {
        self.values[self.table.sample(rng)]
    }

    /// Mean of `k` draws.
    pub fn estimate<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<C64> {
        if k == 0 {
            return Err(Error::DomainError("need at least one sample".into()));
        }
        let sum: C64 = (0..k).map(|_| self.draw(rng)).sum();
        Ok(sum / k as f64)
    }
}

/// `p_n^{(k)}`: the average of `k` sampled roots of unity.
pub fn sample_pn<R: Rng + ?Sized>(dist: &OutcomeDistribution, k: usize, rng: &mut R) -> Result<C64> {
    OutcomeSampler::new(dist)?.estimate(k, rng)
}

/// One repetition of the two estimator experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateSample {
    pub p2: f64,
    pub p3: C64,
    pub w_linear: C64,
    pub w_quadratic: C64,
}

/// Independent repetitions of `p2^{(k)}`, `p3^{(k)}` and both witness
/// estimators, drawn from separate two- and three-copy experiments.
pub fn repeated_estimates(
    dist2: &OutcomeDistribution,
    dist3: &OutcomeDistribution,
    k: usize,
    repetitions: usize,
    master_seed: u64,
) -> Result<Vec<EstimateSample>> {
    if dist2.n_copies() != 2 || dist3.n_copies() != 3 {
        return Err(Error::ShapeMismatch("need a two-copy and a three-copy distribution".into()));
    }
    let s2 = OutcomeSampler::new(dist2)?;
    let s3 = OutcomeSampler::new(dist3)?;
    (0..repetitions as u64)
        .into_par_iter()
        .map(|r| {
            let p2 = s2.estimate(k, &mut stream_rng(master_seed, Channel::TwoCopy, r))?.re;
            let p3 = s3.estimate(k, &mut stream_rng(master_seed, Channel::ThreeCopy, r))?;
            let (w_linear, w_quadratic) = witness_estimators(p2, p3, k)?;
            Ok(EstimateSample { p2, p3, w_linear, w_quadratic })
        })
        .collect()
}
