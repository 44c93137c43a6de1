use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::noise::{noisy_copy_draw, NoiseSpec};
use super::rng::{stream_rng, Channel};
use super::witness::{summarize, witness_variances, EstimatorResult};
use crate::circuits::{EnsembleSampler, PureComponent};
use crate::criteria::optimal_threshold;
use crate::error::{Error, Result};
use crate::fock::C64;
use crate::states::lossy_noon_pt_moments;

/// Floor applied to sampled purities before evaluating the optimal threshold,
/// which is undefined at `p2 <= 0`.
const P2_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    /// Sample sizes, strictly increasing; each repetition reuses prefixes of
    /// one stream of shots.
    pub k_grid: Vec<usize>,
    pub repetitions: usize,
    pub master_seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self { k_grid: vec![10, 20, 50, 100, 200, 500, 1000, 2000], repetitions: 500, master_seed: 42 }
    }
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        if self.k_grid.is_empty() || self.k_grid[0] < 2 {
            return Err(Error::DomainError("sample sizes must be at least 2".into()));
        }
        if self.k_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DomainError("sample sizes must be strictly increasing".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::DomainError("need at least one repetition".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationPoint {
    /// Statistics of the optimal third-order witness over repetitions.
    pub witness: EstimatorResult,
    pub std: f64,
    /// `reference ± sqrt(Var W_l(k))` of the noise-free lossy state.
    pub band_low: f64,
    pub band_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub points: Vec<SimulationPoint>,
    /// Optimal witness of the noise-free lossy state.
    pub reference: f64,
    pub clamped: usize,
}

fn pick<'a, R: Rng + ?Sized>(ensemble: &'a [PureComponent], rng: &mut R) -> &'a nalgebra::DMatrix<C64> {
    let total: f64 = ensemble.iter().map(|c| c.weight).sum();
    let mut u = rng.gen::<f64>() * total;
    for c in ensemble {
        if u < c.weight {
            return &c.coefficients;
        }
        u -= c.weight;
    }
    &ensemble[ensemble.len() - 1].coefficients
}

/// Sum of `k_max` shots of the `n`-copy readout with fresh noisy copies per
/// shot, recorded at each grid point.
fn run_channel<R: Rng + ?Sized>(
    sampler: &EnsembleSampler,
    n_photons: usize,
    noise: &NoiseSpec,
    k_grid: &[usize],
    rng: &mut R,
) -> Result<(Vec<C64>, usize)> {
    let n = sampler.n_copies();
    let mut sums = Vec::with_capacity(k_grid.len());
    let mut acc = C64::new(0.0, 0.0);
    let mut clamped = 0;
    let mut next = 0;
    for shot in 1..=*k_grid.last().expect("validated") {
        let draws = noisy_copy_draw(noise, n, rng);
        let mut ensembles = Vec::with_capacity(n);
        for d in &draws {
            clamped += d.clamped;
            ensembles.push(noise.lossy_noon_params(n_photons, d)?.pure_ensemble());
        }
        let comps: Vec<_> = ensembles.iter().map(|e| pick(e, rng)).collect();
        acc += sampler.sample_value(&comps, rng)?;
        if shot == k_grid[next] {
            sums.push(acc);
            next += 1;
        }
    }
    Ok((sums, clamped))
}

/// Simulated experiment on noisy lossy NOON copies: for each sample size,
/// mean and spread over repetitions of the optimal third-order witness.
pub fn full_simulation(n_photons: usize, noise: &NoiseSpec, plan: &SamplingPlan) -> Result<SimulationOutput> {
    plan.validate()?;
    let base = crate::estimation::CopyDraw { values: noise.entries.iter().map(|e| e.mean).collect(), clamped: 0 };
    let base = noise.lossy_noon_params(n_photons, &base)?;
    let d = n_photons + 1;
    let s2 = EnsembleSampler::new(2, d, d)?;
    let s3 = EnsembleSampler::new(3, d, d)?;
    let runs: Vec<Result<(Vec<f64>, usize)>> = (0..plan.repetitions as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng2 = stream_rng(plan.master_seed, Channel::TwoCopy, r);
            let mut rng3 = stream_rng(plan.master_seed, Channel::ThreeCopy, r);
            let (sum2, c2) = run_channel(&s2, n_photons, noise, &plan.k_grid, &mut rng2)?;
            let (sum3, c3) = run_channel(&s3, n_photons, noise, &plan.k_grid, &mut rng3)?;
            let mut w = Vec::with_capacity(plan.k_grid.len());
            for (i, &k) in plan.k_grid.iter().enumerate() {
                let p2 = (sum2[i].re / k as f64).clamp(P2_FLOOR, 1.0);
                let p3 = sum3[i].re / k as f64;
                w.push(p3 - optimal_threshold(p2)?);
            }
            Ok((w, c2 + c3))
        })
        .collect();
    let mut per_k = vec![Vec::with_capacity(plan.repetitions); plan.k_grid.len()];
    let mut clamped = 0;
    for run in runs {
        let (w, c) = run?;
        clamped += c;
        for (i, v) in w.into_iter().enumerate() {
            per_k[i].push(v);
        }
    }
    let (p2, p3) = lossy_noon_pt_moments(&base)?;
    let reference = p3 - optimal_threshold(p2)?;
    let points = plan
        .k_grid
        .iter()
        .zip(per_k)
        .map(|(&k, values)| {
            let witness = summarize(&values, k);
            let (var_l, _) = witness_variances(p2, p3, k)?;
            Ok(SimulationPoint {
                witness,
                std: witness.variance.sqrt(),
                band_low: reference - var_l.sqrt(),
                band_high: reference + var_l.sqrt(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationOutput { points, reference, clamped })
}
