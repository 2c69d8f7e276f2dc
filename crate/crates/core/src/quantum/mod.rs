//! Quantum spin-oscillator: `Ĵ`-eigenspaces and the matrix of `Ĥ` on them.
//!
//! At level `n` the sphere is quantized with `ħ = 2/(n + 1)`. The spectrum of
//! `Ĵ` is `ħ((1 − n)/2 + m)`, `m = 0, 1, 2, …`; on the eigenspace with index
//! `m` (called `ℓ₀` below) `Ĥ` acts as the zero-diagonal symmetric tridiagonal
//! matrix `(ħ/2)^{3/2} tridiag(β_k)` with `β_k = √((ℓ₀ + 1 − k) k (n − k + 1))`,
//! of size `1 + min(ℓ₀, n)`.

mod eigen;
mod spectrum;

pub use eigen::{sturm_count, tridiag_eigenvalues, tridiag_eigenvalues_with, Solver, DEFAULT_TOL};
pub use spectrum::{joint_spectrum, Column, JointSpectrum};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exec::Exec;

/// Residual allowed when matching a `λ` to the `Ĵ` spectrum.
pub const INDEX_GUARD: f64 = 1e-9;

/// Quantization level `n` and `ħ = 2/(n + 1)` (so that `ħ(n + 1) = E = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumParams {
    n: u32,
    hbar: f64,
}

impl QuantumParams {
    pub fn new(n: u32) -> Self {
        QuantumParams {
            n,
            hbar: 2.0 / (f64::from(n) + 1.0),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// The `Ĵ`-eigenvalue with index `m`: `ħ(m − (n − 1)/2)`.
    pub fn lambda_at(&self, m: u64) -> f64 {
        self.hbar * (m as f64 - 0.5 * (f64::from(self.n) - 1.0))
    }

    /// `λ/ħ + (n − 1)/2` before rounding.
    fn raw_index(&self, lambda: f64) -> f64 {
        lambda / self.hbar + 0.5 * (f64::from(self.n) - 1.0)
    }

    /// The integer `ℓ₀ = λ/ħ + (n − 1)/2` for an eigenvalue `λ` of `Ĵ`.
    pub fn column_index(&self, lambda: f64) -> Result<u64> {
        let raw = self.raw_index(lambda);
        let rounded = raw.round();
        if !raw.is_finite() || (raw - rounded).abs() > INDEX_GUARD || rounded < 0.0 {
            return Err(Error::NotAnEigenvalue {
                lambda,
                n: self.n,
                index: raw,
            });
        }
        Ok(rounded as u64)
    }

    /// Index range `m` with `λ_m ∈ [lambda_min, lambda_max]`.
    pub fn index_range(&self, lambda_min: f64, lambda_max: f64) -> Option<(u64, u64)> {
        let lo = (self.raw_index(lambda_min) - INDEX_GUARD).ceil().max(0.0);
        let hi = (self.raw_index(lambda_max) + INDEX_GUARD).floor();
        (hi >= lo).then(|| (lo as u64, hi as u64))
    }
}

/// The first `count` eigenvalues of `Ĵ`, ascending.
pub fn j_eigenvalues(params: &QuantumParams, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(domain("eigenvalue count", 0.0, "positive integers"));
    }
    Ok((0..count as u64).map(|m| params.lambda_at(m)).collect())
}

/// `dim ker(Ĵ − λ) = 1 + min(n, λ/ħ + (n − 1)/2)`.
pub fn eigenspace_dim(params: &QuantumParams, lambda: f64) -> Result<usize> {
    let m = params.column_index(lambda)?;
    Ok(1 + m.min(u64::from(params.n)) as usize)
}

/// The matrix of `Ĥ` on one `Ĵ`-eigenspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandMatrix {
    n: u32,
    ell0: u64,
    offdiag: Vec<f64>,
    scale: f64,
}

impl BandMatrix {
    /// Matrix for the eigenspace with integer index `ell0`.
    pub fn for_index(params: &QuantumParams, ell0: u64) -> Self {
        let n = u64::from(params.n);
        let mu = ell0.min(n);
        let offdiag = (1..=mu)
            .map(|k| (((ell0 + 1 - k) * k * (n - k + 1)) as f64).sqrt())
            .collect();
        BandMatrix {
            n: params.n,
            ell0,
            offdiag,
            scale: (0.5 * params.hbar).powf(1.5),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ell0(&self) -> u64 {
        self.ell0
    }

    /// `μ = min(ℓ₀, n)`.
    pub fn mu(&self) -> usize {
        self.offdiag.len()
    }

    pub fn size(&self) -> usize {
        self.offdiag.len() + 1
    }

    /// `β_1 … β_μ`, without the `(ħ/2)^{3/2}` factor.
    pub fn betas(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Off-diagonal entries of the actual matrix, `scale · β_k`.
    pub fn scaled_offdiag(&self) -> Vec<f64> {
        self.offdiag.iter().map(|b| self.scale * b).collect()
    }

    /// Gershgorin bound on the spectral radius (an upper bound on `‖M‖₂`).
    pub fn norm_bound(&self) -> f64 {
        let e = &self.offdiag;
        (0..self.size())
            .map(|i| {
                let left = if i > 0 { e[i - 1] } else { 0.0 };
                let right = e.get(i).copied().unwrap_or(0.0);
                left + right
            })
            .fold(0.0, f64::max)
            * self.scale
    }

    /// Dense row-major copy, for inspection and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let size = self.size();
        let mut m = vec![vec![0.0; size]; size];
        for (k, b) in self.scaled_offdiag().into_iter().enumerate() {
            m[k][k + 1] = b;
            m[k + 1][k] = b;
        }
        m
    }
}

/// `M_{B_λ}(Ĥ)`; fails if `λ` is not an eigenvalue of `Ĵ`.
pub fn build_h_matrix(params: &QuantumParams, lambda: f64) -> Result<BandMatrix> {
    let ell0 = params.column_index(lambda)?;
    Ok(BandMatrix::for_index(params, ell0))
}

/// `Σ(n)`: the spectrum of `Ĥ` on `ker(Ĵ − 1)`, i.e. the column `ℓ₀ = n`.
pub fn sigma_n(params: &QuantumParams, tol: f64, exec: Exec) -> Vec<f64> {
    let m = BandMatrix::for_index(params, u64::from(params.n));
    tridiag_eigenvalues_with(&m, tol, Solver::default(), exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_times_levels_is_two() {
        for n in [0u32, 1, 13, 1025] {
            let p = QuantumParams::new(n);
            assert!((p.hbar() * (f64::from(n) + 1.0) - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn j_spectrum_examples() {
        let v = j_eigenvalues(&QuantumParams::new(1), 4).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 2.0, 3.0]);
        let v = j_eigenvalues(&QuantumParams::new(13), 1).unwrap();
        assert!((v[0] + 6.0 / 7.0).abs() < 1e-15);
        assert!(j_eigenvalues(&QuantumParams::new(3), 0).is_err());
    }

    #[test]
    fn one_is_always_an_eigenvalue() {
        for n in 0..200u32 {
            let p = QuantumParams::new(n);
            assert_eq!(p.column_index(1.0).unwrap(), u64::from(n));
            assert_eq!(eigenspace_dim(&p, 1.0).unwrap(), n as usize + 1);
        }
    }

    #[test]
    fn dimension_growth() {
        let p = QuantumParams::new(9);
        assert_eq!(eigenspace_dim(&p, p.lambda_at(0)).unwrap(), 1);
        for m in 0..30u64 {
            let d = eigenspace_dim(&p, p.lambda_at(m)).unwrap();
            assert_eq!(d, 1 + m.min(9) as usize);
        }
    }

    #[test]
    fn non_eigenvalue_rejected() {
        let p = QuantumParams::new(3);
        assert!(matches!(
            eigenspace_dim(&p, 0.1),
            Err(Error::NotAnEigenvalue { .. })
        ));
        assert!(build_h_matrix(&p, p.lambda_at(0) - p.hbar()).is_err());
    }

    #[test]
    fn matrix_examples() {
        let p = QuantumParams::new(1);
        let m = build_h_matrix(&p, 1.0).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.betas(), &[1.0]);
        assert!((m.scale() - 0.5f64.powf(1.5)).abs() < 1e-16);

        let p = QuantumParams::new(2);
        let m = build_h_matrix(&p, 1.0).unwrap();
        assert_eq!(m.ell0(), 2);
        assert_eq!(m.mu(), 2);
        assert!((m.betas()[0] - 2.0).abs() < 1e-15);
        assert!((m.betas()[1] - 2f64.sqrt()).abs() < 1e-15);

        for n in [0u32, 4, 17] {
            let p = QuantumParams::new(n);
            let m = build_h_matrix(&p, p.lambda_at(0)).unwrap();
            assert_eq!(m.size(), 1);
            assert_eq!(m.to_dense(), vec![vec![0.0]]);
        }
    }

    #[test]
    fn dense_form_is_symmetric_with_zero_diagonal() {
        let p = QuantumParams::new(6);
        let m = BandMatrix::for_index(&p, 4);
        let d = m.to_dense();
        for i in 0..d.len() {
            assert_eq!(d[i][i], 0.0);
            for j in 0..d.len() {
                assert_eq!(d[i][j], d[j][i]);
            }
        }
        assert!(m.betas().iter().all(|b| *b > 0.0));
    }
}
