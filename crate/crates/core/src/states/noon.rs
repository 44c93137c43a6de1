use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::circuits::PureComponent;
use crate::criteria::p3_optimal;
use crate::error::{Error, Result};
use crate::fock::{BipartiteDensityOperator, BipartitePureState, ModeCutoff, C64};

const NORM_TOL: f64 = 1e-12;

/// `α|N, 0> + β|0, N>`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoonParams {
    pub n: usize,
    pub alpha: C64,
    pub beta: C64,
}

impl NoonParams {
    pub fn new(n: usize, alpha: C64, beta: C64) -> Result<Self> {
        let p = Self { n, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    /// Real amplitudes with `β = sqrt(1 - α²)`.
    pub fn balanced_real(n: usize, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::DomainError(format!("alpha = {alpha} must lie in [0, 1]")));
        }
        Self::new(n, C64::new(alpha, 0.0), C64::new((1.0 - alpha * alpha).sqrt(), 0.0))
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::DomainError("NOON population must be positive".into()));
        }
        let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { trace: norm, tolerance: NORM_TOL });
        }
        Ok(())
    }
}

pub fn noon_state(p: &NoonParams) -> Result<BipartitePureState> {
    p.validate()?;
    let d = p.n + 1;
    let mut c = DMatrix::zeros(d, d);
    c[(p.n, 0)] = p.alpha;
    c[(0, p.n)] = p.beta;
    BipartitePureState::new(c)
}

/// `|α|^{2n} + |β|^{2n}` for odd `n`, `(|α|^n + |β|^n)²` for even `n`.
pub fn noon_pt_moment(p: &NoonParams, n: u32) -> Result<f64> {
    p.validate()?;
    if n == 0 {
        return Err(Error::BadOrder("moment order must be at least 1".into()));
    }
    let (a, b) = (p.alpha.norm_sqr(), p.beta.norm_sqr());
    Ok(if n % 2 == 1 {
        a.powi(n as i32) + b.powi(n as i32)
    } else {
        let h = (n / 2) as i32;
        (a.powi(h) + b.powi(h)).powi(2)
    })
}

/// NOON state after independent pure-loss channels on each mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossyNoonParams {
    pub noon: NoonParams,
    pub tau_a: f64,
    pub tau_b: f64,
}

impl LossyNoonParams {
    pub fn new(noon: NoonParams, tau_a: f64, tau_b: f64) -> Result<Self> {
        let p = Self { noon, tau_a, tau_b };
        p.validate()?;
        Ok(p)
    }

    pub fn symmetric(n: usize, alpha: f64, tau: f64) -> Result<Self> {
        Self::new(NoonParams::balanced_real(n, alpha)?, tau, tau)
    }

    fn validate(&self) -> Result<()> {
        self.noon.validate()?;
        for t in [self.tau_a, self.tau_b] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::DomainError(format!("transmissivity {t} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn lossy_noon_density(p: &LossyNoonParams) -> Result<BipartiteDensityOperator> {
    p.validate()?;
    let n = p.noon.n;
    let cut = ModeCutoff::square(n + 1)?;
    let (a2, b2) = (p.noon.alpha.norm_sqr(), p.noon.beta.norm_sqr());
    let mut m = DMatrix::zeros(cut.dim(), cut.dim());
    for k in 0..=n {
        let wa = binom(n, k) * p.tau_a.powi((n - k) as i32) * (1.0 - p.tau_a).powi(k as i32);
        let wb = binom(n, k) * p.tau_b.powi((n - k) as i32) * (1.0 - p.tau_b).powi(k as i32);
        let ia = cut.index(n - k, 0);
        let ib = cut.index(0, n - k);
        m[(ia, ia)] += C64::new(a2 * wa, 0.0);
        m[(ib, ib)] += C64::new(b2 * wb, 0.0);
    }
    let coh = p.noon.alpha * p.noon.beta.conj() * (p.tau_a * p.tau_b).sqrt().powi(n as i32);
    let (ia, ib) = (cut.index(n, 0), cut.index(0, n));
    m[(ia, ib)] += coh;
    m[(ib, ia)] += coh.conj();
    BipartiteDensityOperator::new(cut, m)
}

/// Closed-form `(p2, p3)`, valid for unequal losses on the two modes.
pub fn lossy_noon_pt_moments(p: &LossyNoonParams) -> Result<(f64, f64)> {
    p.validate()?;
    let n = p.noon.n;
    let ni = n as i32;
    let (a, b) = (p.noon.alpha.norm_sqr(), p.noon.beta.norm_sqr());
    let (ta, tb) = (p.tau_a, p.tau_b);
    let (la, lb) = (1.0 - ta, 1.0 - tb);
    let sum = |t: f64, l: f64, pow: i32| -> f64 {
        (0..=n).map(|k| binom(n, k).powi(pow) * t.powi(pow * (n - k) as i32) * l.powi(pow * k as i32)).sum()
    };
    let p2 = a * a * sum(ta, la, 2) + 2.0 * a * b * ((ta * tb).powi(ni) + (la * lb).powi(ni)) + b * b * sum(tb, lb, 2);
    let tt = (ta * tb).powi(ni);
    let p3 = a.powi(3) * sum(ta, la, 3)
        + 3.0
            * a
            * b
            * (a * tt * la.powi(ni)
                + b * tt * lb.powi(ni)
                + a * la.powi(2 * ni) * lb.powi(ni)
                + b * la.powi(ni) * lb.powi(2 * ni))
        + b.powi(3) * sum(tb, lb, 3);
    Ok((p2, p3))
}

/// Largest transmissivity in `[lo, hi]` at which the optimal third-order
/// witness of the symmetric lossy NOON state changes sign, by bisection.
///
/// Returns `None` when the witness does not change sign on the interval.
pub fn lossy_noon_crossing(n: usize, alpha: f64, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>> {
    let w = |tau: f64| -> Result<f64> {
        let (p2, p3) = lossy_noon_pt_moments(&LossyNoonParams::symmetric(n, alpha, tau)?)?;
        Ok(p3_optimal(p2, p3)?.witness)
    };
    let (mut a, mut b) = (lo, hi);
    let (wa, wb) = (w(a)?, w(b)?);
    if (wa < 0.0) == (wb < 0.0) {
        return Ok(None);
    }
    let neg_at_b = wb < 0.0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if (w(mid)? < 0.0) == neg_at_b {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

impl LossyNoonParams {
    /// Pure-state decomposition: the surviving coherent superposition plus
    /// incoherent partial losses on either mode.
    pub fn pure_ensemble(&self) -> Vec<PureComponent> {
        let n = self.noon.n;
        let d = n + 1;
        let (a2, b2) = (self.noon.alpha.norm_sqr(), self.noon.beta.norm_sqr());
        let mut out = Vec::with_capacity(2 * n + 1);
        let (ca, cb) = (self.tau_a.powi(n as i32).sqrt(), self.tau_b.powi(n as i32).sqrt());
        let w = a2 * ca * ca + b2 * cb * cb;
        if w > 0.0 {
            let mut c = DMatrix::zeros(d, d);
            c[(n, 0)] = self.noon.alpha * (ca / w.sqrt());
            c[(0, n)] = self.noon.beta * (cb / w.sqrt());
            out.push(PureComponent { weight: w, coefficients: c });
        }
        for k in 1..=n {
            let wa = a2 * binom(n, k) * self.tau_a.powi((n - k) as i32) * (1.0 - self.tau_a).powi(k as i32);
            let wb = b2 * binom(n, k) * self.tau_b.powi((n - k) as i32) * (1.0 - self.tau_b).powi(k as i32);
            if k == n {
                if wa + wb > 0.0 {
                    let mut c = DMatrix::zeros(d, d);
                    c[(0, 0)] = C64::new(1.0, 0.0);
                    out.push(PureComponent { weight: wa + wb, coefficients: c });
                }
                continue;
            }
            for (w, i, j) in [(wa, n - k, 0), (wb, 0, n - k)] {
                if w > 0.0 {
                    let mut c = DMatrix::zeros(d, d);
                    c[(i, j)] = C64::new(1.0, 0.0);
                    out.push(PureComponent { weight: w, coefficients: c });
                }
            }
        }
        out
    }
}
