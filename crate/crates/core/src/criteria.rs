//! Separability tests built from PT-moments.
//!
//! Every test reports a witness whose negativity flags entanglement.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

const MOMENT_TOL: f64 = 1e-9;

/// Ordered PT-moments `p_1..p_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PtMomentVector {
    moments: Vec<f64>,
}

impl TryFrom<Vec<f64>> for PtMomentVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PtMomentVector> for Vec<f64> {
    fn from(p: PtMomentVector) -> Self {
        p.moments
    }
}

impl PtMomentVector {
    /// Validates `p_1 = 1` and `|p_k| <= p_2^{k/2}`.
    pub fn new(moments: Vec<f64>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::BadOrder("at least p_1 is required".into()));
        }
        if moments.iter().any(|p| !p.is_finite()) {
            return Err(Error::DomainError("moments must be finite".into()));
        }
        if (moments[0] - 1.0).abs() > MOMENT_TOL {
            return Err(Error::DomainError(format!("p_1 = {} must equal 1", moments[0])));
        }
        if let Some(&p2) = moments.get(1) {
            if p2 <= 0.0 || p2 > 1.0 + MOMENT_TOL {
                return Err(Error::DomainError(format!("p_2 = {p2} must lie in (0, 1]")));
            }
            for (idx, &pk) in moments.iter().enumerate().skip(2) {
                let k = (idx + 1) as f64;
                if pk.abs() > p2.powf(k / 2.0) + MOMENT_TOL {
                    return Err(Error::DomainError(format!(
                        "|p_{}| = {} exceeds p_2^{} bound",
                        idx + 1,
                        pk.abs(),
                        k / 2.0
                    )));
                }
            }
        }
        Ok(Self { moments })
    }

    /// `(1, p2, p3)`
    pub fn third_order(p2: f64, p3: f64) -> Result<Self> {
        Self::new(vec![1.0, p2, p3])
    }

    /// Moments `Σ λ^k`, `k = 1..=n`, of a unit-trace spectrum.
    pub fn from_spectrum(eigenvalues: &[f64], n: usize) -> Result<Self> {
        Self::new((1..=n).map(|k| eigenvalues.iter().map(|l| l.powi(k as i32)).sum()).collect())
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    pub fn order(&self) -> usize {
        self.moments.len()
    }

    /// `p_k`, 1-based.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.moments.get(i).copied())
    }
}

/// Parses `p_1..p_n` separated by commas and/or whitespace.
impl std::str::FromStr for PtMomentVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let moments = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("moment {t:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        Self::new(moments)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    Linear3,
    Quadratic3,
    Optimal3,
    Hankel(usize),
    Newton(usize),
    SimonGaussian3,
    Simon,
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionId::Linear3 => write!(f, "linear3"),
            CriterionId::Quadratic3 => write!(f, "quadratic3"),
            CriterionId::Optimal3 => write!(f, "optimal3"),
            CriterionId::Hankel(n) => write!(f, "hankel({n})"),
            CriterionId::Newton(n) => write!(f, "newton({n})"),
            CriterionId::SimonGaussian3 => write!(f, "simon_gaussian3"),
            CriterionId::Simon => write!(f, "simon"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: CriterionId,
    pub witness: f64,
    pub threshold: f64,
    pub detected: bool,
    /// Valid only under the assumption that the state is Gaussian.
    pub gaussian_only: bool,
}

impl CriterionReport {
    pub fn new(id: CriterionId, witness: f64, threshold: f64) -> Self {
        Self { id, witness, threshold, detected: witness < 0.0, gaussian_only: false }
    }

    fn gaussian(mut self) -> Self {
        self.gaussian_only = true;
        self
    }
}

fn require_odd(n: usize) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::BadOrder(format!("Hankel order must be odd, got {n}")));
    }
    Ok(())
}

fn require_moments(p: &PtMomentVector, n: usize) -> Result<()> {
    if p.order() < n {
        return Err(Error::BadOrder(format!("order {n} needs p_1..p_{n}, got {} moments", p.order())));
    }
    Ok(())
}

/// Hankel matrix with entries `p_{r+c+1}`, of size `(n+1)/2`.
pub fn hankel_matrix(p: &PtMomentVector, n: usize) -> Result<DMatrix<f64>> {
    require_odd(n)?;
    require_moments(p, n)?;
    let m = n.div_ceil(2);
    Ok(DMatrix::from_fn(m, m, |r, c| p.moments[r + c]))
}

/// Witness is the minimum eigenvalue of the Hankel matrix.
pub fn hankel_test(p: &PtMomentVector, n: usize) -> Result<CriterionReport> {
    let h = hankel_matrix(p, n)?;
    let min = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CriterionReport::new(CriterionId::Hankel(n), min, 0.0))
}

/// Elementary symmetric polynomials `e_0..e_n` of the PT spectrum via Newton's identities.
pub fn newton_elementary(p: &PtMomentVector) -> Vec<f64> {
    let n = p.order();
    let mut e = Vec::with_capacity(n + 1);
    e.push(1.0);
    for m in 1..=n {
        let mut acc = 0.0;
        for j in 1..=m {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[m - j] * p.moments[j - 1];
        }
        e.push(acc / m as f64);
    }
    e
}

/// Witness is `min(e_1..e_n)`.
pub fn descartes_test(p: &PtMomentVector, n: usize) -> Result<CriterionReport> {
    if n == 0 {
        return Err(Error::BadOrder("order must be at least 1".into()));
    }
    require_moments(p, n)?;
    let head = PtMomentVector { moments: p.moments[..n].to_vec() };
    let e = newton_elementary(&head);
    let min = e[1..].iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CriterionReport::new(CriterionId::Newton(n), min, 0.0))
}

/// `p3 - (3 p2 - 1)/2`
pub fn p3_linear(p2: f64, p3: f64) -> CriterionReport {
    let threshold = (3.0 * p2 - 1.0) / 2.0;
    CriterionReport::new(CriterionId::Linear3, p3 - threshold, threshold)
}

/// `p3 - p2²`
pub fn p3_quadratic(p2: f64, p3: f64) -> CriterionReport {
    let threshold = p2 * p2;
    CriterionReport::new(CriterionId::Quadratic3, p3 - threshold, threshold)
}

/// Smallest `Σλ³` over non-negative spectra with `Σλ = 1`, `Σλ² = p2`.
pub fn optimal_threshold(p2: f64) -> Result<f64> {
    if !(p2 > 0.0 && p2 <= 1.0) {
        return Err(Error::DomainError(format!("p2 = {p2} must lie in (0, 1]")));
    }
    // Nudged inward so that p2 = 1/m does not round down to m - 1.
    let a = ((1.0 / p2) * (1.0 + 1e-12)).floor();
    let disc = (a * (p2 * (a + 1.0) - 1.0)).max(0.0);
    let u = (a + disc.sqrt()) / (a * (a + 1.0));
    Ok(a * u.powi(3) + (1.0 - a * u).powi(3))
}

pub fn p3_optimal(p2: f64, p3: f64) -> Result<CriterionReport> {
    let threshold = optimal_threshold(p2)?;
    Ok(CriterionReport::new(CriterionId::Optimal3, p3 - threshold, threshold))
}

/// Third-order bound that is tight for Gaussian states.
pub fn simon_gaussian3(p2: f64, p3: f64) -> Result<CriterionReport> {
    if !(p2 > 0.0 && p2 <= 1.0) {
        return Err(Error::DomainError(format!("p2 = {p2} must lie in (0, 1]")));
    }
    let threshold = 4.0 * p2 * p2 / (3.0 + p2 * p2);
    Ok(CriterionReport::new(CriterionId::SimonGaussian3, p3 - threshold, threshold).gaussian())
}

/// Largest `p3` a physical Gaussian state of purity `p2` can have.
pub fn gaussian_physicality_bound(p2: f64) -> f64 {
    let x = 4.0 * p2 / (3.0 + p2);
    x * x
}

/// All applicable tests for a moment vector.
pub fn all_reports(p: &PtMomentVector) -> Vec<CriterionReport> {
    let mut out = Vec::new();
    if let (Some(p2), Some(p3)) = (p.get(2), p.get(3)) {
        out.push(p3_linear(p2, p3));
        out.push(p3_quadratic(p2, p3));
        if let Ok(r) = p3_optimal(p2, p3) {
            out.push(r);
        }
    }
    let mut n = 3;
    while n <= p.order() {
        if let Ok(r) = hankel_test(p, n) {
            out.push(r);
        }
        n += 2;
    }
    for n in 2..=p.order() {
        if let Ok(r) = descartes_test(p, n) {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hankel_examples() {
        let p = PtMomentVector::new(vec![1.0]).unwrap();
        assert_eq!(hankel_matrix(&p, 1).unwrap(), DMatrix::from_element(1, 1, 1.0));
        let p = PtMomentVector::third_order(0.6, 0.3).unwrap();
        assert_eq!(hankel_matrix(&p, 3).unwrap(), DMatrix::from_row_slice(2, 2, &[1.0, 0.6, 0.6, 0.3]));
        assert!(matches!(hankel_matrix(&p, 2), Err(Error::BadOrder(_))));
        assert!(matches!(hankel_matrix(&p, 5), Err(Error::BadOrder(_))));
        let ones = PtMomentVector::new(vec![1.0; 5]).unwrap();
        let h = hankel_matrix(&ones, 5).unwrap();
        assert_eq!(h, DMatrix::from_element(3, 3, 1.0));
        assert_abs_diff_eq!(hankel_test(&ones, 5).unwrap().witness, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn newton_examples() {
        let e = newton_elementary(&PtMomentVector::new(vec![1.0]).unwrap());
        assert_eq!(e, vec![1.0, 1.0]);
        let e = newton_elementary(&PtMomentVector::third_order(0.6, 0.3).unwrap());
        assert_abs_diff_eq!(e[2], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(e[3], (0.2 - 0.6 + 0.3) / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn descartes_examples() {
        let ones = PtMomentVector::new(vec![1.0; 4]).unwrap();
        assert!(!descartes_test(&ones, 4).unwrap().detected);
        let bell = PtMomentVector::third_order(1.0, 0.25).unwrap();
        let r = descartes_test(&bell, 3).unwrap();
        assert!(r.detected);
        assert_abs_diff_eq!(r.witness, (0.0 - 1.0 + 0.25) / 3.0, epsilon = 1e-15);
        let sep = PtMomentVector::from_spectrum(&[0.7, 0.3], 3).unwrap();
        assert!(!descartes_test(&sep, 3).unwrap().detected);
    }

    #[test]
    fn third_order_examples() {
        assert_eq!(p3_linear(1.0, 1.0).witness, 0.0);
        assert_eq!(p3_linear(0.5, 0.25).witness, 0.0);
        assert_eq!(p3_linear(1.0, 0.25).witness, -0.75);
        assert_eq!(p3_quadratic(1.0, 1.0).witness, 0.0);
        assert_eq!(p3_quadratic(0.5, 0.25).witness, 0.0);
        assert_eq!(p3_quadratic(1.0, 0.25).witness, -0.75);
        assert_abs_diff_eq!(optimal_threshold(0.75).unwrap(), 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(optimal_threshold(1.0).unwrap(), 1.0, epsilon = 1e-15);
        let u = (2.0 + 0.4_f64.sqrt()) / 6.0;
        assert_abs_diff_eq!(
            optimal_threshold(0.4).unwrap(),
            2.0 * u.powi(3) + (1.0 - 2.0 * u).powi(3),
            epsilon = 1e-15
        );
        assert!(matches!(p3_optimal(0.0, 0.1), Err(Error::DomainError(_))));
        assert!(matches!(p3_optimal(1.2, 0.1), Err(Error::DomainError(_))));
    }

    #[test]
    fn optimal_threshold_at_unit_fractions() {
        for m in 1..8 {
            let p2 = 1.0 / m as f64;
            // A flat spectrum of m eigenvalues sits on the bound.
            assert_abs_diff_eq!(optimal_threshold(p2).unwrap(), p2 * p2, epsilon = 1e-9);
        }
    }

    #[test]
    fn gaussian_examples() {
        let r = simon_gaussian3(1.0, 1.0).unwrap();
        assert_eq!(r.threshold, 1.0);
        assert!(r.gaussian_only);
        assert_eq!(gaussian_physicality_bound(1.0), 1.0);
        assert_abs_diff_eq!(gaussian_physicality_bound(0.5), 16.0 / 49.0, epsilon = 1e-15);
        assert_abs_diff_eq!(simon_gaussian3(0.5, 0.3).unwrap().threshold, 4.0 / 13.0, epsilon = 1e-15);
    }

    #[test]
    fn moment_vector_validation() {
        assert!(PtMomentVector::new(vec![]).is_err());
        assert!(PtMomentVector::new(vec![0.9, 0.5]).is_err());
        assert!(PtMomentVector::new(vec![1.0, 0.5, 0.9]).is_err());
        assert!(PtMomentVector::new(vec![1.0, 0.0]).is_err());
        let p: PtMomentVector = serde_json::from_str("[1.0, 0.5, 0.25]").unwrap();
        assert_eq!(p.get(3), Some(0.25));
        assert!(serde_json::from_str::<PtMomentVector>("[2.0]").is_err());
        let p: PtMomentVector = "1, 0.5 0.25".parse().unwrap();
        assert_eq!(p.moments(), &[1.0, 0.5, 0.25]);
        assert!("1, x".parse::<PtMomentVector>().is_err());
        assert!("".parse::<PtMomentVector>().is_err());
    }
}
