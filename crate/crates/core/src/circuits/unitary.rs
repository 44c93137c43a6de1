use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, TAU};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::C64;

const UNITARY_TOL: f64 = 1e-10;

/// Interferometer matrix acting on mode annihilation operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveUnitary {
    matrix: DMatrix<C64>,
}

impl PassiveUnitary {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "unitary must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        let defect =
            (matrix.adjoint() * &matrix - DMatrix::<C64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > UNITARY_TOL {
            return Err(Error::DomainError(format!("matrix is not unitary (defect {defect:.3e})")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n, n) }
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Largest entrywise distance to another unitary.
    pub fn distance(&self, other: &PassiveUnitary) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `F(n)_{jk} = ω^{jk} / sqrt(n)`, `ω = e^{-2πi/n}`.
pub fn dft(n: usize) -> Result<PassiveUnitary> {
    if n == 0 {
        return Err(Error::DomainError("DFT needs at least one mode".into()));
    }
    let norm = 1.0 / (n as f64).sqrt();
    let m = DMatrix::from_fn(n, n, |j, k| C64::from_polar(norm, -TAU * ((j * k) % n) as f64 / n as f64));
    Ok(PassiveUnitary { matrix: m })
}

/// Beam splitter or phase shifter on 0-based mode indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub enum CircuitElement {
    /// `[[√τ, √(1-τ)], [√(1-τ), -√τ]]` on modes `(mu, nu)`.
    BeamSplitter { modes: (usize, usize), tau: f64 },
    /// `e^{-iφ}` on one mode, with `φ` reduced to `[0, 2π)`.
    Phase { mode: usize, phi: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    kind: String,
    modes: Vec<usize>,
    parameter: f64,
}

impl TryFrom<RawElement> for CircuitElement {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        match (raw.kind.as_str(), raw.modes.as_slice()) {
            ("beam_splitter", &[mu, nu]) => CircuitElement::beam_splitter(mu, nu, raw.parameter),
            ("phase", &[mu]) => CircuitElement::phase(mu, raw.parameter),
            (kind, modes) => {
                Err(Error::Parse(format!("unsupported element kind {kind:?} with {} mode indices", modes.len())))
            }
        }
    }
}

impl From<CircuitElement> for RawElement {
    fn from(e: CircuitElement) -> Self {
        match e {
            CircuitElement::BeamSplitter { modes, tau } => {
                RawElement { kind: "beam_splitter".into(), modes: vec![modes.0, modes.1], parameter: tau }
            }
            CircuitElement::Phase { mode, phi } => {
                RawElement { kind: "phase".into(), modes: vec![mode], parameter: phi }
            }
        }
    }
}

impl CircuitElement {
    pub fn beam_splitter(mu: usize, nu: usize, tau: f64) -> Result<Self> {
        if mu == nu {
            return Err(Error::DomainError("beam splitter needs two distinct modes".into()));
        }
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::DomainError(format!("transmissivity {tau} must lie in [0, 1]")));
        }
        Ok(CircuitElement::BeamSplitter { modes: (mu, nu), tau })
    }

    pub fn phase(mode: usize, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::DomainError("phase must be finite".into()));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(CircuitElement::Phase { mode, phi })
    }

    pub fn max_mode(&self) -> usize {
        match *self {
            CircuitElement::BeamSplitter { modes, .. } => modes.0.max(modes.1),
            CircuitElement::Phase { mode, .. } => mode,
        }
    }

    /// Matrix of the element embedded in `n` modes.
    pub fn matrix(&self, n: usize) -> Result<DMatrix<C64>> {
        if self.max_mode() >= n {
            return Err(Error::ShapeMismatch(format!("element acts on mode {} of {n}", self.max_mode())));
        }
        let mut m = DMatrix::identity(n, n);
        match *self {
            CircuitElement::BeamSplitter { modes: (mu, nu), tau } => {
                let (t, r) = (tau.sqrt(), (1.0 - tau).sqrt());
                m[(mu, mu)] = C64::new(t, 0.0);
                m[(mu, nu)] = C64::new(r, 0.0);
                m[(nu, mu)] = C64::new(r, 0.0);
                m[(nu, nu)] = C64::new(-t, 0.0);
            }
            CircuitElement::Phase { mode, phi } => m[(mode, mode)] = C64::from_polar(1.0, -phi),
        }
        Ok(m)
    }
}

/// Unitary of a sequence of elements, the first element acting first.
pub fn compose(elements: &[CircuitElement], n: usize) -> Result<PassiveUnitary> {
    let mut u = DMatrix::identity(n, n);
    for e in elements {
        u = e.matrix(n)? * u;
    }
    PassiveUnitary::new(u)
}

/// Three beam splitters and three phases realising `F(3)`, in application order.
pub fn decompose_f3() -> Vec<CircuitElement> {
    let mut v = decompose_f3_truncated();
    v.push(CircuitElement::phase(1, -FRAC_PI_6).expect("finite"));
    v.push(CircuitElement::phase(2, FRAC_PI_6).expect("finite"));
    v
}

/// [`decompose_f3`] without the final two output phases; equals `F(3)` up to
/// phases on the output modes, which photon counting cannot see.
pub fn decompose_f3_truncated() -> Vec<CircuitElement> {
    vec![
        CircuitElement::beam_splitter(0, 1, 0.5).expect("valid"),
        CircuitElement::beam_splitter(0, 2, 2.0 / 3.0).expect("valid"),
        CircuitElement::phase(2, FRAC_PI_2).expect("finite"),
        CircuitElement::beam_splitter(1, 2, 0.5).expect("valid"),
    ]
}

pub fn parse_circuit(json: &str) -> Result<Vec<CircuitElement>> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json(elements: &[CircuitElement]) -> String {
    serde_json::to_string(elements).expect("circuit elements always serialise")
}
