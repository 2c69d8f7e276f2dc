//! Eigenvalues of a zero-diagonal symmetric tridiagonal matrix by Sturm
//! sequence bisection with Newton polishing.
//!
//! Each eigenvalue is located independently from the Sturm count, so the
//! output is ordered by construction and the work splits cleanly across
//! threads.

use super::BandMatrix;
use crate::exec::Exec;

/// Relative tolerance (in units of the matrix norm) used when none is given.
pub const DEFAULT_TOL: f64 = 1e-15;

/// Which eigenvalues are bisected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    /// Bisect every eigenvalue.
    #[default]
    Reference,
    /// Bisect only the upper half and mirror it. A zero-diagonal tridiagonal
    /// `T` satisfies `D T D = −T` with `D = diag((−1)^i)`, so its spectrum is
    /// symmetric and an odd-sized `T` has the exact eigenvalue 0.
    HalfSpectrum,
}

/// Number of eigenvalues strictly below `x` (for the matrix with zero
/// diagonal and off-diagonal `e`), from the signs of the `LDLᵀ` pivots of
/// `T − xI`.
pub fn sturm_count(e: &[f64], x: f64, pivmin: f64) -> usize {
    let mut q = -x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    let mut count = usize::from(q < 0.0);
    for b in e {
        q = -x - b * b / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `D(x) / D'(x)` for the characteristic polynomial, by the three-term
/// recursion and its derivative, rescaled to avoid overflow.
fn newton_ratio(e: &[f64], x: f64) -> f64 {
    let (mut p_prev, mut p) = (1.0_f64, x);
    let (mut d_prev, mut d) = (0.0_f64, 1.0_f64);
    for b in e {
        let b2 = b * b;
        let p_next = x * p - b2 * p_prev;
        let d_next = p + x * d - b2 * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let m = p.abs().max(d.abs()).max(p_prev.abs()).max(d_prev.abs());
        if m > 1e150 || (m > 0.0 && m < 1e-150) {
            let s = 1.0 / m;
            p *= s;
            p_prev *= s;
            d *= s;
            d_prev *= s;
        }
    }
    p / d
}

struct Bisector<'a> {
    e: &'a [f64],
    bound: f64,
    abs_tol: f64,
    pivmin: f64,
}

impl Bisector<'_> {
    /// The `index`-th smallest eigenvalue (0-based).
    fn eigenvalue(&self, index: usize) -> f64 {
        let (mut lo, mut hi) = (-self.bound, self.bound);
        loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= self.abs_tol || mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(self.e, mid, self.pivmin) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        // Safeguarded Newton: only steps that stay inside the bracket.
        for _ in 0..3 {
            let ratio = newton_ratio(self.e, x);
            let next = x - ratio;
            if !next.is_finite() || next < lo || next > hi || next == x {
                break;
            }
            x = next;
        }
        x
    }
}

/// All eigenvalues of `m`, ascending, each within `tol · ‖m‖` of exact.
pub fn tridiag_eigenvalues(m: &BandMatrix, tol: f64) -> Vec<f64> {
    tridiag_eigenvalues_with(m, tol, Solver::Reference, Exec::default())
}

pub fn tridiag_eigenvalues_with(m: &BandMatrix, tol: f64, solver: Solver, exec: Exec) -> Vec<f64> {
    let size = m.size();
    let e = m.scaled_offdiag();
    let norm = m.norm_bound();
    if size == 1 || norm == 0.0 {
        return vec![0.0; size];
    }
    let tol = if tol > 0.0 && tol.is_finite() { tol } else { DEFAULT_TOL };
    let max_e2 = e.iter().map(|b| b * b).fold(0.0, f64::max);
    let bisector = Bisector {
        e: &e,
        bound: norm * (1.0 + 1e-12),
        abs_tol: (tol * norm).max(f64::EPSILON * norm * 0.25),
        pivmin: f64::MIN_POSITIVE * max_e2.max(1.0),
    };
    match solver {
        Solver::Reference => exec.map_range(size, |i| bisector.eigenvalue(i)),
        Solver::HalfSpectrum => {
            let first_upper = size.div_ceil(2);
            let upper = exec.map_range(size - first_upper, |j| bisector.eigenvalue(first_upper + j));
            let mut values = Vec::with_capacity(size);
            values.extend(upper.iter().rev().map(|v| -v));
            if size % 2 == 1 {
                values.push(0.0);
            }
            values.extend(upper);
            values
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::QuantumParams;

    #[test]
    fn two_by_two_closed_form() {
        let m = BandMatrix::for_index(&QuantumParams::new(1), 1);
        let ev = tridiag_eigenvalues(&m, 1e-15);
        let s = 0.5f64.powf(1.5);
        assert!((ev[0] + s).abs() < 1e-15 && (ev[1] - s).abs() < 1e-15);
    }

    #[test]
    fn one_by_one_is_zero() {
        let m = BandMatrix::for_index(&QuantumParams::new(5), 0);
        assert_eq!(tridiag_eigenvalues(&m, 1e-12), vec![0.0]);
    }

    #[test]
    fn sturm_count_brackets() {
        let m = BandMatrix::for_index(&QuantumParams::new(1), 1);
        let e = m.scaled_offdiag();
        assert_eq!(sturm_count(&e, -1.0, 1e-300), 0);
        assert_eq!(sturm_count(&e, 0.0, 1e-300), 1);
        assert_eq!(sturm_count(&e, 1.0, 1e-300), 2);
    }

    #[test]
    fn half_spectrum_matches_reference() {
        for n in [2u32, 7, 30, 101] {
            let p = QuantumParams::new(n);
            for ell0 in [0u64, 1, u64::from(n) / 2, u64::from(n), u64::from(n) + 5] {
                let m = BandMatrix::for_index(&p, ell0);
                let a = tridiag_eigenvalues_with(&m, 1e-15, Solver::Reference, Exec::Sequential);
                let b = tridiag_eigenvalues_with(&m, 1e-15, Solver::HalfSpectrum, Exec::Parallel);
                assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-12, "n={n} ell0={ell0}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn trace_and_frobenius_identities() {
        // Σλ = tr M = 0 and Σλ² = ‖M‖_F² = 2 Σ e².
        let m = BandMatrix::for_index(&QuantumParams::new(40), 40);
        let ev = tridiag_eigenvalues(&m, 1e-15);
        let e2: f64 = m.scaled_offdiag().iter().map(|b| b * b).sum();
        let sum: f64 = ev.iter().sum();
        let sq: f64 = ev.iter().map(|v| v * v).sum();
        assert!(sum.abs() < 1e-13);
        assert!((sq - 2.0 * e2).abs() < 1e-12 * sq);
    }
}
