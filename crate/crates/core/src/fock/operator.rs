use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::blocks::{connected_blocks, submatrix};
use super::{ModeCutoff, C64};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceProfile;

/// A (not necessarily positive) operator on the truncated two-mode space.
///
/// This is what a partial transpose produces: hermitian with unit trace, but
/// possibly with negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    cutoff: ModeCutoff,
    elements: DMatrix<C64>,
}

impl BipartiteOperator {
    pub fn new(cutoff: ModeCutoff, elements: DMatrix<C64>) -> Result<Self> {
        if elements.nrows() != cutoff.dim() || elements.ncols() != cutoff.dim() {
            return Err(Error::ShapeMismatch(format!(
                "expected {0}x{0} matrix for cutoff ({1}, {2}), got {3}x{4}",
                cutoff.dim(),
                cutoff.d_a(),
                cutoff.d_b(),
                elements.nrows(),
                elements.ncols()
            )));
        }
        Ok(Self { cutoff, elements })
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.cutoff
    }

    pub fn elements(&self) -> &DMatrix<C64> {
        &self.elements
    }

    pub fn into_elements(self) -> DMatrix<C64> {
        self.elements
    }

    /// `<i,j| O |k,l>`
    pub fn element(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.elements[(self.cutoff.index(i, j), self.cutoff.index(k, l))]
    }

    pub fn trace(&self) -> C64 {
        self.elements.trace()
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.elements.nrows();
        let mut worst = 0.0_f64;
        for c in 0..n {
            for r in c..n {
                let d = (self.elements[(r, c)] - self.elements[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn partial_transpose(&self) -> BipartiteOperator {
        let cut = self.cutoff;
        let n = cut.dim();
        let mut out = DMatrix::zeros(n, n);
        for col in 0..n {
            let (k, l) = cut.split(col);
            for row in 0..n {
                let (i, j) = cut.split(row);
                // <i,j|rho~|k,l> = <i,l|rho|k,j>
                out[(row, col)] = self.elements[(cut.index(i, l), cut.index(k, j))];
            }
        }
        BipartiteOperator { cutoff: cut, elements: out }
    }
}

/// Validated density operator: hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteDensityOperator {
    op: BipartiteOperator,
}

impl BipartiteDensityOperator {
    pub fn new(cutoff: ModeCutoff, elements: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerances(cutoff, elements, &ToleranceProfile::default())
    }

    pub fn with_tolerances(cutoff: ModeCutoff, elements: DMatrix<C64>, tol: &ToleranceProfile) -> Result<Self> {
        let op = BipartiteOperator::new(cutoff, elements)?;
        let deviation = op.hermiticity_defect();
        if deviation > tol.herm {
            return Err(Error::NotHermitian { deviation, tolerance: tol.herm });
        }
        let trace = op.trace();
        if (trace.re - 1.0).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::NotNormalized { trace: trace.re, tolerance: tol.trace });
        }
        let spec = spectrum_of(&op, tol)?;
        let min = spec.min();
        if min < -tol.psd {
            return Err(Error::NotPositive { min_eigenvalue: min, tolerance: tol.psd });
        }
        Ok(Self { op })
    }

    /// Normalises `elements` to unit trace, then validates.
    pub fn normalized(cutoff: ModeCutoff, elements: DMatrix<C64>) -> Result<Self> {
        let tr = elements.trace().re;
        if !(tr > 0.0) {
            return Err(Error::NotNormalized { trace: tr, tolerance: 0.0 });
        }
        Self::new(cutoff, elements.unscale(tr))
    }

    /// `rho_a ⊗ rho_b` from single-mode density matrices.
    pub fn product(rho_a: &DMatrix<C64>, rho_b: &DMatrix<C64>) -> Result<Self> {
        let cutoff = ModeCutoff::new(rho_a.nrows(), rho_b.nrows())?;
        Self::new(cutoff, rho_a.kronecker(rho_b))
    }

    pub fn vacuum(cutoff: ModeCutoff) -> Self {
        let mut m = DMatrix::zeros(cutoff.dim(), cutoff.dim());
        m[(0, 0)] = C64::new(1.0, 0.0);
        Self { op: BipartiteOperator { cutoff, elements: m } }
    }

    pub(crate) fn from_trusted(cutoff: ModeCutoff, elements: DMatrix<C64>) -> Self {
        debug_assert_eq!(elements.nrows(), cutoff.dim());
        Self { op: BipartiteOperator { cutoff, elements } }
    }

    pub fn cutoff(&self) -> ModeCutoff {
        self.op.cutoff
    }

    pub fn elements(&self) -> &DMatrix<C64> {
        &self.op.elements
    }

    pub fn as_operator(&self) -> &BipartiteOperator {
        &self.op
    }

    pub fn element(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.op.element(i, j, k, l)
    }

    pub fn partial_transpose(&self) -> BipartiteOperator {
        self.op.partial_transpose()
    }

    /// Reduced state of mode A.
    pub fn reduced_a(&self) -> DMatrix<C64> {
        let cut = self.cutoff();
        DMatrix::from_fn(cut.d_a(), cut.d_a(), |i, k| (0..cut.d_b()).map(|j| self.element(i, j, k, j)).sum())
    }

    /// Reduced state of mode B.
    pub fn reduced_b(&self) -> DMatrix<C64> {
        let cut = self.cutoff();
        DMatrix::from_fn(cut.d_b(), cut.d_b(), |j, l| (0..cut.d_a()).map(|i| self.element(i, j, i, l)).sum())
    }

    /// Embeds the state into a larger cutoff (zero padding).
    pub fn embed(&self, cutoff: ModeCutoff) -> Result<Self> {
        let old = self.cutoff();
        if cutoff.d_a() < old.d_a() || cutoff.d_b() < old.d_b() {
            return Err(Error::DomainError("embedding requires a cutoff at least as large".into()));
        }
        let mut m = DMatrix::zeros(cutoff.dim(), cutoff.dim());
        for r in 0..old.dim() {
            let (i, j) = old.split(r);
            for c in 0..old.dim() {
                let (k, l) = old.split(c);
                m[(cutoff.index(i, j), cutoff.index(k, l))] = self.elements()[(r, c)];
            }
        }
        Ok(Self::from_trusted(cutoff, m))
    }
}

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `Σ λ^n`
    pub fn power_sum(&self, n: u32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(n as i32)).sum()
    }

    /// Sum of the negative eigenvalues' magnitudes.
    pub fn negativity(&self) -> f64 {
        self.eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum()
    }
}

pub fn partial_transpose(rho: &BipartiteDensityOperator) -> BipartiteOperator {
    rho.partial_transpose()
}

/// `Tr{rho~^n}` with the default tolerance profile.
pub fn pt_moment(rho: &BipartiteDensityOperator, n: u32) -> Result<f64> {
    pt_moment_with(rho, n, &ToleranceProfile::default())
}

pub fn pt_moment_with(rho: &BipartiteDensityOperator, n: u32, tol: &ToleranceProfile) -> Result<f64> {
    if n == 0 {
        return Err(Error::BadOrder("moment order must be at least 1".into()));
    }
    let pt = rho.partial_transpose();
    let m = pt.elements();
    let mut total = C64::new(0.0, 0.0);
    for block in connected_blocks(m) {
        total += trace_power(&submatrix(m, &block), n);
    }
    if total.im.abs() > tol.imag {
        return Err(Error::TolExceeded { residue: total.im.abs(), tolerance: tol.imag });
    }
    Ok(total.re)
}

fn trace_power(b: &DMatrix<C64>, n: u32) -> C64 {
    match n {
        1 => b.trace(),
        _ => {
            // Tr{B^n} = Σ_ij (B^{n-1})_ij B_ji
            let mut acc = b.clone();
            for _ in 2..n {
                acc = &acc * b;
            }
            acc.component_mul(&b.transpose()).sum()
        }
    }
}

/// `Tr{rho^2}`
pub fn purity(rho: &BipartiteDensityOperator) -> f64 {
    rho.elements().iter().map(|z| z.norm_sqr()).sum()
}

/// Spectrum of a hermitian operator on the truncated two-mode space.
pub fn spectrum(op: &BipartiteOperator) -> Result<Spectrum> {
    spectrum_of(op, &ToleranceProfile::default())
}

fn spectrum_of(op: &BipartiteOperator, tol: &ToleranceProfile) -> Result<Spectrum> {
    let deviation = op.hermiticity_defect();
    if deviation > tol.herm {
        return Err(Error::NotHermitian { deviation, tolerance: tol.herm });
    }
    let m = op.elements();
    // (value, block's first basis index, position within block)
    let mut tagged: Vec<(f64, usize, usize)> = Vec::with_capacity(m.nrows());
    for block in connected_blocks(m) {
        let first = block[0];
        if block.len() == 1 {
            tagged.push((m[(first, first)].re, first, 0));
            continue;
        }
        let sub = submatrix(m, &block);
        let sym = (&sub + sub.adjoint()).scale(0.5);
        let eig = sym.symmetric_eigen();
        tagged.extend(eig.eigenvalues.iter().enumerate().map(|(pos, &v)| (v, first, pos)));
    }
    tagged.sort_by(|a, b| {
        b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    });
    Ok(Spectrum { eigenvalues: tagged.into_iter().map(|t| t.0).collect() })
}

/// `Tr{rho a†^i a^j b†^k b^l}` evaluated with exact ladder actions on the
/// truncated basis.
///
/// Terms whose image leaves the truncated space are dropped; if the reduced
/// population carried by such terms exceeds `tol.trunc` the call fails.
pub fn mode_moment(rho: &BipartiteDensityOperator, i: usize, j: usize, k: usize, l: usize) -> Result<C64> {
    mode_moment_with(rho, i, j, k, l, &ToleranceProfile::default())
}

pub fn mode_moment_with(
    rho: &BipartiteDensityOperator,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    tol: &ToleranceProfile,
) -> Result<C64> {
    let cut = rho.cutoff();
    let ladder_a = ladder_coefficients(cut.d_a(), i, j);
    let ladder_b = ladder_coefficients(cut.d_b(), k, l);

    let lost_a = lost_population(&rho.reduced_a(), &ladder_a, i, j);
    let lost_b = lost_population(&rho.reduced_b(), &ladder_b, k, l);
    let lost = lost_a + lost_b;
    if lost > tol.trunc {
        return Err(Error::CutoffExceeded { lost, tolerance: tol.trunc });
    }

    // Tr{rho O} = Σ_x <x|rho|O x>, with O|m,n> = ca(m) cb(n) |m-j+i, n-l+k>
    let mut acc = C64::new(0.0, 0.0);
    for m in j..cut.d_a() {
        let Some(ca) = ladder_a[m] else { continue };
        let m_out = m - j + i;
        for n in l..cut.d_b() {
            let Some(cb) = ladder_b[n] else { continue };
            let n_out = n - l + k;
            acc += rho.element(m, n, m_out, n_out) * (ca * cb);
        }
    }
    Ok(acc)
}

/// `c(m)` such that `a†^raise a^lower |m> = c(m) |m - lower + raise>`, or `None`
/// when the image falls outside `0..d` (or the state is annihilated).
fn ladder_coefficients(d: usize, raise: usize, lower: usize) -> Vec<Option<f64>> {
    (0..d)
        .map(|m| {
            if m < lower {
                return Some(0.0);
            }
            let mid = m - lower;
            if mid + raise >= d {
                return None;
            }
            let down: f64 = ((mid + 1)..=m).map(|x| (x as f64).sqrt()).product();
            let up: f64 = ((mid + 1)..=(mid + raise)).map(|x| (x as f64).sqrt()).product();
            Some(down * up)
        })
        .collect()
}

fn lost_population(reduced: &DMatrix<C64>, ladder: &[Option<f64>], raise: usize, lower: usize) -> f64 {
    if raise == 0 && lower == 0 {
        return 0.0;
    }
    ladder.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(m, _)| reduced[(m, m)].re.max(0.0)).sum()
}

/// Density matrix `|v><v|` of a vector.
pub(crate) fn projector(v: &DVector<C64>) -> DMatrix<C64> {
    v * v.adjoint()
}
