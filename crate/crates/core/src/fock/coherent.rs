//! Truncated coherent states.

use nalgebra::DVector;

use super::C64;

/// First `d` Fock amplitudes of `|alpha>` (not renormalised).
pub fn coherent_vector(alpha: C64, d: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    if d == 0 {
        return v;
    }
    let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    v[0] = amp;
    for m in 1..d {
        amp = amp * alpha / (m as f64).sqrt();
        v[m] = amp;
    }
    v
}

/// Poisson mass beyond the first `d` levels, `P(n >= d)` for the given mean.
pub fn poisson_tail(mean: f64, d: usize) -> f64 {
    if mean <= 0.0 {
        return if d == 0 { 1.0 } else { 0.0 };
    }
    let mut term = (-mean).exp();
    let mut head = 0.0;
    for m in 0..d {
        head += term;
        term *= mean / (m + 1) as f64;
    }
    // The direct complement underflows to 0 long before the tail is negligible
    // relative to 1, so sum the tail explicitly once it is small.
    if head < 0.5 {
        return (1.0 - head).max(0.0);
    }
    let mut tail = 0.0;
    let mut k = d;
    while term > 0.0 && k < d + 10_000 {
        tail += term;
        term *= mean / (k + 1) as f64;
        if term < tail * 1e-18 && (k as f64) > mean {
            break;
        }
        k += 1;
    }
    tail
}

/// Smallest `d` such that the Poisson tail beyond `d` levels is below `tol`.
pub fn coherent_cutoff(mean: f64, tol: f64) -> usize {
    let mut d = 1;
    while poisson_tail(mean, d) >= tol {
        d += 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coherent_vector_norm_matches_tail() {
        let a = C64::new(1.2, -0.7);
        let d = 12;
        let v = coherent_vector(a, d);
        assert_abs_diff_eq!(1.0 - v.norm_squared(), poisson_tail(a.norm_sqr(), d), epsilon = 1e-14);
    }

    #[test]
    fn cutoff_rule() {
        assert_eq!(coherent_cutoff(0.0, 1e-6), 1);
        let d = coherent_cutoff(4.0, 1e-6);
        assert!(poisson_tail(4.0, d) < 1e-6);
        assert!(poisson_tail(4.0, d - 1) >= 1e-6);
    }
}
