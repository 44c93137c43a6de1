use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{LossyNoonParams, NoonParams};

/// Gaussian fluctuation of one named parameter, clamped to a validity range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterNoise {
    pub name: String,
    pub mean: f64,
    pub std: f64,
    pub clamp: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub entries: Vec<ParameterNoise>,
}

impl NoiseSpec {
    pub fn new(entries: Vec<ParameterNoise>) -> Result<Self> {
        for e in &entries {
            if !(e.std >= 0.0) || !e.mean.is_finite() || !e.std.is_finite() {
                return Err(Error::DomainError(format!("{}: need finite mean and std >= 0", e.name)));
            }
            if !(e.clamp[0] <= e.clamp[1]) {
                return Err(Error::DomainError(format!("{}: empty clamp range", e.name)));
            }
        }
        Ok(Self { entries })
    }

    /// Amplitude `alpha` with relative spread and independent transmissivities
    /// `tau_a`, `tau_b` with absolute spread.
    pub fn lossy_noon(alpha: f64, tau: f64, alpha_rel_std: f64, tau_std: f64) -> Result<Self> {
        Self::new(vec![
            ParameterNoise { name: "alpha".into(), mean: alpha, std: alpha_rel_std * alpha.abs(), clamp: [0.0, 1.0] },
            ParameterNoise { name: "tau_a".into(), mean: tau, std: tau_std, clamp: [0.0, 1.0] },
            ParameterNoise { name: "tau_b".into(), mean: tau, std: tau_std, clamp: [0.0, 1.0] },
        ])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    /// Entries whose spread exceeds a tenth of their mean.
    pub fn warnings(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| e.std > e.mean.abs() / 10.0)
            .map(|e| format!("{}: std {} exceeds a tenth of the mean {}", e.name, e.std, e.mean))
            .collect()
    }

    /// Lossy NOON parameters from a draw; `beta = sqrt(1 - alpha²)`.
    pub fn lossy_noon_params(&self, n: usize, draw: &CopyDraw) -> Result<LossyNoonParams> {
        let get = |name: &str| {
            self.index_of(name)
                .map(|i| draw.values[i])
                .ok_or_else(|| Error::DomainError(format!("noise spec has no entry {name:?}")))
        };
        LossyNoonParams::new(NoonParams::balanced_real(n, get("alpha")?)?, get("tau_a")?, get("tau_b")?)
    }
}

/// Parameter values for one copy, in the order of the spec entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CopyDraw {
    pub values: Vec<f64>,
    /// Number of values that fell outside their range and were clamped.
    pub clamped: usize,
}

/// Independent draws for each of `n_copies` copies.
pub fn noisy_copy_draw<R: Rng + ?Sized>(spec: &NoiseSpec, n_copies: usize, rng: &mut R) -> Vec<CopyDraw> {
    (0..n_copies)
        .map(|_| {
            let mut clamped = 0;
            let values = spec
                .entries
                .iter()
                .map(|e| {
                    let z: f64 = rng.sample(StandardNormal);
                    let x = e.mean + e.std * z;
                    let y = x.clamp(e.clamp[0], e.clamp[1]);
                    if y != x {
                        clamped += 1;
                    }
                    y
                })
                .collect();
            CopyDraw { values, clamped }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_spread_returns_base() {
        let spec = NoiseSpec::lossy_noon(0.6, 0.8, 0.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for d in noisy_copy_draw(&spec, 3, &mut rng) {
            assert_eq!(d.values, vec![0.6, 0.8, 0.8]);
            assert_eq!(d.clamped, 0);
        }
    }

    #[test]
    fn draws_stay_in_range() {
        let spec = NoiseSpec::lossy_noon(0.7, 0.9, 0.05, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut clamped = 0;
        for _ in 0..2000 {
            for d in noisy_copy_draw(&spec, 3, &mut rng) {
                assert!(d.values.iter().all(|v| (0.0..=1.0).contains(v)));
                clamped += d.clamped;
                spec.lossy_noon_params(1, &d).unwrap();
            }
        }
        assert!(clamped > 0);
    }

    #[test]
    fn warns_on_wide_spread() {
        let spec = NoiseSpec::lossy_noon(0.7, 0.3, 0.05, 0.05).unwrap();
        assert_eq!(spec.warnings().len(), 2);
        assert!(NoiseSpec::lossy_noon(0.7, 0.9, -0.1, 0.0).is_err());
    }
}
