use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::C64;

/// Mean and spread of repeated estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mean: f64,
    /// Unbiased sample variance over repetitions.
    pub variance: f64,
    pub std_error: f64,
    pub k: usize,
    pub repetitions: usize,
}

/// Summarises repetitions in the order given.
pub fn summarize(values: &[f64], k: usize) -> EstimatorResult {
    let m = values.len();
    let mean = if m == 0 { f64::NAN } else { values.iter().sum::<f64>() / m as f64 };
    let variance = if m < 2 { 0.0 } else { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64 };
    EstimatorResult { mean, variance, std_error: (variance / m.max(1) as f64).sqrt(), k, repetitions: m }
}

/// `(W_l, W_q)` from independent `p2^{(k)}` and `p3^{(k)}`; `W_q` is unbiased
/// for `p3 - p2²`.
pub fn witness_estimators(p2_k: f64, p3_k: C64, k: usize) -> Result<(C64, C64)> {
    if k < 2 {
        return Err(Error::DomainError("the quadratic estimator needs k >= 2".into()));
    }
    let kf = k as f64;
    let w_l = p3_k - (3.0 * p2_k - 1.0) / 2.0;
    let w_q = p3_k - (kf * p2_k * p2_k - 1.0) / (kf - 1.0);
    Ok((w_l, w_q))
}

/// `(Var W_l, Var W_q)` at sample size `k`.
pub fn witness_variances(p2: f64, p3: f64, k: usize) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::DomainError("the quadratic estimator needs k >= 2".into()));
    }
    let kf = k as f64;
    let v3 = (1.0 - p3 * p3) / kf;
    let v_l = v3 + 2.25 * (1.0 - p2 * p2) / kf;
    let v_q = v3 + 2.0 * (1.0 - p2 * p2) * (1.0 + (2.0 * kf - 3.0) * p2 * p2) / (kf * (kf - 1.0));
    Ok((v_l, v_q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleCriterion {
    Linear,
    Quadratic,
}

/// Smallest `k >= 2` with `W + sqrt(Var W(k)) < 0`, or `None` if the witness
/// is not negative.
pub fn min_samples(p2: f64, p3: f64, criterion: SampleCriterion) -> Result<Option<u64>> {
    let w = match criterion {
        SampleCriterion::Linear => p3 - (3.0 * p2 - 1.0) / 2.0,
        SampleCriterion::Quadratic => p3 - p2 * p2,
    };
    if !(w < 0.0) {
        return Ok(None);
    }
    let ok = |k: u64| -> Result<bool> {
        let (vl, vq) = witness_variances(p2, p3, k as usize)?;
        let v = match criterion {
            SampleCriterion::Linear => vl,
            SampleCriterion::Quadratic => vq,
        };
        Ok(w + v.max(0.0).sqrt() < 0.0)
    };
    let mut hi = 2u64;
    while !ok(hi)? {
        if hi > 1 << 60 {
            return Ok(None);
        }
        hi *= 2;
    }
    if hi == 2 {
        return Ok(Some(2));
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
