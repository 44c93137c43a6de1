use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::multimode::{apply_circuit, apply_passive, MultimodeState, Occupation};
use super::unitary::{decompose_f3, dft, CircuitElement};
use crate::error::{Error, Result};
use crate::fock::{connected_blocks, BipartiteDensityOperator, C64};
use crate::tolerance::ToleranceProfile;

const NORM_TOL: f64 = 1e-10;
const ENSEMBLE_CUTOFF: f64 = 1e-15;

/// Counts on output modes `2..n` of Alice (`a`) and Bob (`b`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OutcomeKey {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Exact joint photon-number distribution of the readout.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    n_copies: usize,
    probabilities: BTreeMap<OutcomeKey, f64>,
}

impl OutcomeDistribution {
    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn probabilities(&self) -> &BTreeMap<OutcomeKey, f64> {
        &self.probabilities
    }

    /// Probability of an outcome; zero for outcomes the circuit cannot produce.
    pub fn get(&self, a: &[usize], b: &[usize]) -> f64 {
        self.probabilities.get(&OutcomeKey { a: a.to_vec(), b: b.to_vec() }).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Largest total photon number with non-zero probability.
    pub fn max_photons(&self) -> usize {
        self.probabilities
            .iter()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, _)| k.a.iter().sum::<usize>() + k.b.iter().sum::<usize>())
            .max()
            .unwrap_or(0)
    }
}

/// `ω_n^{Σ_{j>=2} (j-1)(N_j^A - N_j^B)}`
pub fn outcome_weight(key: &OutcomeKey, n: usize) -> C64 {
    C64::from_polar(1.0, -TAU * exponent(&key.a, &key.b, n) as f64 / n as f64)
}

fn exponent(a: &[usize], b: &[usize], n: usize) -> usize {
    let side = |v: &[usize]| v.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum::<usize>() % n;
    (side(a) + n - side(b)) % n
}

/// Weighted pure state `weight · |ψ><ψ|` with `ψ` given as a `d_a × d_b` coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PureComponent {
    pub weight: f64,
    pub coefficients: DMatrix<C64>,
}

/// Eigen-ensemble of a density operator, block by block.
pub fn pure_ensemble(rho: &BipartiteDensityOperator) -> Vec<PureComponent> {
    let cut = rho.cutoff();
    let m = rho.elements();
    let mut out = Vec::new();
    for block in connected_blocks(m) {
        let sub = DMatrix::from_fn(block.len(), block.len(), |r, c| m[(block[r], block[c])]);
        let eig = sub.symmetric_eigen();
        for (k, &w) in eig.eigenvalues.iter().enumerate() {
            if w <= ENSEMBLE_CUTOFF {
                continue;
            }
            let mut c = DMatrix::zeros(cut.d_a(), cut.d_b());
            for (r, &idx) in block.iter().enumerate() {
                let (i, j) = cut.split(idx);
                c[(i, j)] = eig.eigenvectors[(r, k)];
            }
            out.push(PureComponent { weight: w, coefficients: c });
        }
    }
    out
}

fn readout_circuit(n: usize) -> Result<Option<Vec<CircuitElement>>> {
    Ok(match n {
        2 => Some(vec![CircuitElement::beam_splitter(0, 1, 0.5)?]),
        3 => Some(decompose_f3()),
        _ => None,
    })
}

/// Output amplitudes of one party's interferometer for every input tuple.
#[derive(Debug, Clone)]
struct Transfer {
    dims: Vec<usize>,
    matrix: DMatrix<C64>,
    /// `Σ_{j>=2} (j-1) N_j mod n` for each output row.
    exponents: Vec<usize>,
    /// Counts on modes `2..n` for each output row.
    keys: Vec<Vec<usize>>,
}

impl Transfer {
    fn new(dims: &[usize]) -> Result<Self> {
        let n = dims.len();
        let inputs: usize = dims.iter().product();
        let max_total: usize = dims.iter().map(|d| d - 1).sum();
        let circuit = readout_circuit(n)?;
        let f = dft(n)?;
        let modes: Vec<usize> = (0..n).collect();
        let mut rows: BTreeMap<Occupation, usize> = BTreeMap::new();
        let mut columns: Vec<Vec<(usize, C64)>> = Vec::with_capacity(inputs);
        for x in 0..inputs {
            let occ = unravel(x, dims);
            let s = MultimodeState::fock(occ, max_total + 1)?;
            let out = match &circuit {
                Some(c) => apply_circuit(&s, c, &modes)?,
                None => apply_passive(&s, &f, &modes)?,
            };
            let mut col = Vec::new();
            for (o, &amp) in out.amplitudes() {
                let next = rows.len();
                let r = *rows.entry(o.clone()).or_insert(next);
                col.push((r, amp));
            }
            columns.push(col);
        }
        let mut matrix = DMatrix::zeros(rows.len(), inputs);
        for (x, col) in columns.into_iter().enumerate() {
            for (r, amp) in col {
                matrix[(r, x)] = amp;
            }
        }
        let mut keys = vec![Vec::new(); rows.len()];
        let mut exponents = vec![0; rows.len()];
        for (o, &r) in &rows {
            keys[r] = o[1..].to_vec();
            exponents[r] = o[1..].iter().enumerate().map(|(i, &c)| (i + 1) * c).sum::<usize>() % n;
        }
        Ok(Self { dims: dims.to_vec(), matrix, exponents, keys })
    }

    /// Input amplitudes of the product of per-copy vectors along this party.
    fn inputs(&self) -> usize {
        self.dims.iter().product()
    }
}

fn unravel(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let mut occ = vec![0; dims.len()];
    for t in (0..dims.len()).rev() {
        occ[t] = x % dims[t];
        x /= dims[t];
    }
    occ
}

/// Joint input amplitude matrix (Alice tuples × Bob tuples) of a product of pure copies.
fn joint_input(components: &[&DMatrix<C64>]) -> DMatrix<C64> {
    let mut psi = components[0].clone();
    for c in &components[1..] {
        psi = psi.kronecker(*c);
    }
    psi
}

fn check_copies(copies: &[BipartiteDensityOperator], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DomainError("the readout needs at least two copies".into()));
    }
    if copies.len() != n {
        return Err(Error::ShapeMismatch(format!("expected {n} copies, got {}", copies.len())));
    }
    Ok(())
}

/// Outcome distribution of the `n`-copy readout on possibly different copies.
pub fn outcome_distribution(copies: &[BipartiteDensityOperator], n: usize) -> Result<OutcomeDistribution> {
    check_copies(copies, n)?;
    let dims_a: Vec<usize> = copies.iter().map(|c| c.cutoff().d_a()).collect();
    let dims_b: Vec<usize> = copies.iter().map(|c| c.cutoff().d_b()).collect();
    let ta = Transfer::new(&dims_a)?;
    let tb = Transfer::new(&dims_b)?;
    let ensembles: Vec<Vec<PureComponent>> = copies.iter().map(pure_ensemble).collect();
    let tbt = tb.matrix.transpose();
    let mut joint = DMatrix::<f64>::zeros(ta.matrix.nrows(), tb.matrix.nrows());
    let mut pick = vec![0usize; n];
    'outer: loop {
        let weight: f64 = pick.iter().enumerate().map(|(t, &k)| ensembles[t][k].weight).product();
        let comps: Vec<&DMatrix<C64>> = pick.iter().enumerate().map(|(t, &k)| &ensembles[t][k].coefficients).collect();
        let out = &ta.matrix * joint_input(&comps) * &tbt;
        joint.zip_apply(&out, |p, z| *p += weight * z.norm_sqr());
        for t in (0..n).rev() {
            pick[t] += 1;
            if pick[t] < ensembles[t].len() {
                continue 'outer;
            }
            pick[t] = 0;
        }
        break;
    }
    let mut probabilities = BTreeMap::new();
    for ra in 0..joint.nrows() {
        for rb in 0..joint.ncols() {
            let key = OutcomeKey { a: ta.keys[ra].clone(), b: tb.keys[rb].clone() };
            *probabilities.entry(key).or_insert(0.0) += joint[(ra, rb)];
        }
    }
    let dist = OutcomeDistribution { n_copies: n, probabilities };
    let total = dist.total();
    let expected: f64 = ensembles.iter().map(|e| e.iter().map(|c| c.weight).sum::<f64>()).product();
    if (total - expected).abs() > NORM_TOL || (total - 1.0).abs() > NORM_TOL.max(1e-8) {
        return Err(Error::NotNormalized { trace: total, tolerance: NORM_TOL });
    }
    Ok(dist)
}

/// `Σ f(outcome) ω^{...}`; the imaginary residue must vanish within `tol.imag`.
pub fn multicopy_expectation(dist: &OutcomeDistribution) -> Result<f64> {
    multicopy_expectation_with(dist, &ToleranceProfile::default())
}

pub fn multicopy_expectation_with(dist: &OutcomeDistribution, tol: &ToleranceProfile) -> Result<f64> {
    let z = multicopy_expectation_complex(dist);
    if z.im.abs() > tol.imag {
        return Err(Error::TolExceeded { residue: z.im.abs(), tolerance: tol.imag });
    }
    Ok(z.re)
}

pub fn multicopy_expectation_complex(dist: &OutcomeDistribution) -> C64 {
    dist.probabilities.iter().map(|(k, &p)| outcome_weight(k, dist.n_copies) * p).sum()
}

/// Draws single readout outcomes for products of pure copies, without ever
/// forming the full distribution.
#[derive(Debug, Clone)]
pub struct EnsembleSampler {
    n: usize,
    a: Transfer,
    b_t: DMatrix<C64>,
    b_exponents: Vec<usize>,
    b_keys: Vec<Vec<usize>>,
    roots: Vec<C64>,
}

impl EnsembleSampler {
    /// Copies have `d_a × d_b` coefficient matrices.
    pub fn new(n: usize, d_a: usize, d_b: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DomainError("the readout needs at least two copies".into()));
        }
        let a = Transfer::new(&vec![d_a; n])?;
        let b = Transfer::new(&vec![d_b; n])?;
        let roots = (0..n).map(|k| C64::from_polar(1.0, -TAU * k as f64 / n as f64)).collect();
        Ok(Self { n, b_t: b.matrix.transpose(), b_exponents: b.exponents, b_keys: b.keys, a, roots })
    }

    pub fn n_copies(&self) -> usize {
        self.n
    }

    fn amplitudes(&self, copies: &[&DMatrix<C64>]) -> Result<DMatrix<C64>> {
        if copies.len() != self.n {
            return Err(Error::ShapeMismatch(format!("expected {} copies, got {}", self.n, copies.len())));
        }
        let psi = joint_input(copies);
        if psi.nrows() != self.a.inputs() || psi.ncols() != self.b_t.nrows() {
            return Err(Error::ShapeMismatch("copy dimensions do not match the sampler".into()));
        }
        Ok(&self.a.matrix * psi * &self.b_t)
    }

    /// Draws one outcome and returns its key.
    pub fn sample_key<R: Rng + ?Sized>(&self, copies: &[&DMatrix<C64>], rng: &mut R) -> Result<OutcomeKey> {
        let (ra, rb) = self.sample_rows(copies, rng)?;
        Ok(OutcomeKey { a: self.a.keys[ra].clone(), b: self.b_keys[rb].clone() })
    }

    /// Draws one outcome and returns its root-of-unity value.
    pub fn sample_value<R: Rng + ?Sized>(&self, copies: &[&DMatrix<C64>], rng: &mut R) -> Result<C64> {
        let (ra, rb) = self.sample_rows(copies, rng)?;
        let e = (self.a.exponents[ra] + self.n - self.b_exponents[rb]) % self.n;
        Ok(self.roots[e])
    }

    fn sample_rows<R: Rng + ?Sized>(&self, copies: &[&DMatrix<C64>], rng: &mut R) -> Result<(usize, usize)> {
        let amps = self.amplitudes(copies)?;
        let total: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        let mut u = rng.gen::<f64>() * total;
        let mut last = (0, 0);
        for rb in 0..amps.ncols() {
            for ra in 0..amps.nrows() {
                let p = amps[(ra, rb)].norm_sqr();
                if p == 0.0 {
                    continue;
                }
                last = (ra, rb);
                if u < p {
                    return Ok(last);
                }
                u -= p;
            }
        }
        Ok(last)
    }
}
