use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};

use super::unitary::{CircuitElement, PassiveUnitary};
use crate::error::{Error, Result};
use crate::fock::C64;
use crate::tolerance::ToleranceProfile;

/// Photon numbers per mode.
pub type Occupation = Vec<usize>;

/// Sparse pure state over `n_modes` modes, each truncated to `levels` Fock levels.
#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeState {
    n_modes: usize,
    levels: usize,
    amplitudes: BTreeMap<Occupation, C64>,
}

impl MultimodeState {
    pub fn vacuum(n_modes: usize, levels: usize) -> Result<Self> {
        Self::fock(vec![0; n_modes], levels)
    }

    pub fn fock(occupation: Occupation, levels: usize) -> Result<Self> {
        Self::from_amplitudes(occupation.len(), levels, [(occupation, C64::new(1.0, 0.0))])
    }

    /// Requires unit norm within 1e-12.
    pub fn from_amplitudes(
        n_modes: usize,
        levels: usize,
        amplitudes: impl IntoIterator<Item = (Occupation, C64)>,
    ) -> Result<Self> {
        if n_modes == 0 || levels == 0 {
            return Err(Error::DomainError("need at least one mode and one level".into()));
        }
        let mut map = BTreeMap::new();
        for (occ, amp) in amplitudes {
            if occ.len() != n_modes {
                return Err(Error::ShapeMismatch(format!("occupation {occ:?} does not have {n_modes} modes")));
            }
            if occ.iter().any(|&n| n >= levels) {
                return Err(Error::CutoffExceeded { lost: amp.norm_sqr(), tolerance: 0.0 });
            }
            *map.entry(occ).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        let s = Self { n_modes, levels, amplitudes: map };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { trace: norm, tolerance: 1e-12 });
        }
        Ok(s)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn amplitudes(&self) -> &BTreeMap<Occupation, C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: &[usize]) -> C64 {
        self.amplitudes.get(occ).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn probability(&self, occ: &[usize]) -> f64 {
        self.amplitude(occ).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Distribution of the total photon number.
    pub fn total_photon_distribution(&self) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for (occ, a) in &self.amplitudes {
            *out.entry(occ.iter().sum()).or_insert(0.0) += a.norm_sqr();
        }
        out
    }
}

fn sqrt_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).sqrt()).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Acts with `a_k† -> Σ_j m[j,k] a_j†` on modes `(mu, nu)`; returns the
/// probability mass pushed beyond the truncation.
fn two_mode(state: &mut MultimodeState, mu: usize, nu: usize, m: &Matrix2<C64>) -> f64 {
    let mut out: BTreeMap<Occupation, C64> = BTreeMap::new();
    let mut lost = 0.0;
    for (occ, &amp) in &state.amplitudes {
        let (n1, n2) = (occ[mu], occ[nu]);
        let norm = amp / (sqrt_factorial(n1) * sqrt_factorial(n2));
        let mut local: BTreeMap<usize, C64> = BTreeMap::new();
        for p in 0..=n1 {
            let cp = m[(0, 0)].powu(p as u32) * m[(1, 0)].powu((n1 - p) as u32) * binomial(n1, p);
            if cp == C64::new(0.0, 0.0) {
                continue;
            }
            for q in 0..=n2 {
                let cq = m[(0, 1)].powu(q as u32) * m[(1, 1)].powu((n2 - q) as u32) * binomial(n2, q);
                *local.entry(p + q).or_insert(C64::new(0.0, 0.0)) += cp * cq;
            }
        }
        for (m1, c) in local {
            let m2 = n1 + n2 - m1;
            let value = norm * c * sqrt_factorial(m1) * sqrt_factorial(m2);
            if m1 >= state.levels || m2 >= state.levels {
                lost += value.norm_sqr();
                continue;
            }
            let mut o = occ.clone();
            o[mu] = m1;
            o[nu] = m2;
            *out.entry(o).or_insert(C64::new(0.0, 0.0)) += value;
        }
    }
    state.amplitudes = out;
    lost
}

fn phase(state: &mut MultimodeState, mode: usize, factor: C64) {
    for (occ, amp) in state.amplitudes.iter_mut() {
        *amp *= factor.powu(occ[mode] as u32);
    }
}

fn check_modes(state: &MultimodeState, modes: &[usize]) -> Result<()> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= state.n_modes {
            return Err(Error::ShapeMismatch(format!("mode {m} out of range for {} modes", state.n_modes)));
        }
        if modes[..i].contains(&m) {
            return Err(Error::ShapeMismatch(format!("mode {m} listed twice")));
        }
    }
    Ok(())
}

fn finish(state: MultimodeState, lost: f64, tol: f64) -> Result<MultimodeState> {
    if lost > tol {
        return Err(Error::CutoffExceeded { lost, tolerance: tol });
    }
    Ok(state)
}

/// Runs a sequence of elements whose mode indices refer to `modes`.
pub fn apply_circuit(state: &MultimodeState, elements: &[CircuitElement], modes: &[usize]) -> Result<MultimodeState> {
    check_modes(state, modes)?;
    let mut s = state.clone();
    let mut lost = 0.0;
    for e in elements {
        if e.max_mode() >= modes.len() {
            return Err(Error::ShapeMismatch(format!("element acts on mode {} of {}", e.max_mode(), modes.len())));
        }
        match *e {
            CircuitElement::BeamSplitter { modes: (a, b), tau } => {
                let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
                let m = Matrix2::new(C64::new(t, 0.0), C64::new(r, 0.0), C64::new(r, 0.0), C64::new(-t, 0.0));
                lost += two_mode(&mut s, modes[a], modes[b], &m);
            }
            CircuitElement::Phase { mode, phi } => phase(&mut s, modes[mode], C64::from_polar(1.0, -phi)),
        }
    }
    finish(s, lost, ToleranceProfile::default().trunc)
}

/// Applies `u` to the listed modes by sweeping it into two-mode rotations
/// followed by single-mode phases.
pub fn apply_passive(state: &MultimodeState, u: &PassiveUnitary, modes: &[usize]) -> Result<MultimodeState> {
    check_modes(state, modes)?;
    if u.n_modes() != modes.len() {
        return Err(Error::ShapeMismatch(format!("unitary on {} modes applied to {}", u.n_modes(), modes.len())));
    }
    let (rotations, diag) = givens(u.matrix());
    let mut s = state.clone();
    for (i, d) in diag.iter().enumerate() {
        phase(&mut s, modes[i], *d);
    }
    let mut lost = 0.0;
    for (r, g) in rotations.iter().rev() {
        lost += two_mode(&mut s, modes[r - 1], modes[*r], &g.adjoint());
    }
    finish(s, lost, ToleranceProfile::default().trunc)
}

/// `u = G_1† … G_K† D`, returned as the rotations `(row, G_k)` acting on rows
/// `(row - 1, row)` and the diagonal of `D`.
fn givens(u: &DMatrix<C64>) -> (Vec<(usize, Matrix2<C64>)>, Vec<C64>) {
    let n = u.nrows();
    let mut v = u.clone();
    let mut out = Vec::new();
    for c in 0..n {
        for r in ((c + 1)..n).rev() {
            let (a, b) = (v[(r - 1, c)], v[(r, c)]);
            if b.norm() == 0.0 {
                continue;
            }
            let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let g = Matrix2::new(a.conj(), b.conj(), -b, a) / C64::new(nrm, 0.0);
            for k in 0..n {
                let (x, y) = (v[(r - 1, k)], v[(r, k)]);
                v[(r - 1, k)] = g[(0, 0)] * x + g[(0, 1)] * y;
                v[(r, k)] = g[(1, 0)] * x + g[(1, 1)] * y;
            }
            out.push((r, g));
        }
    }
    ((out), (0..n).map(|i| v[(i, i)]).collect())
}
