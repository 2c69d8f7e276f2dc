use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{tridiag_eigenvalues_with, BandMatrix, QuantumParams, Solver};
use crate::error::{domain, Result};
use crate::exec::Exec;
use crate::fmt::sig;

/// One vertical line of the joint spectrum: a `Ĵ`-eigenvalue and the sorted
/// eigenvalues of `Ĥ` on its eigenspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub lambda: f64,
    pub index: u64,
    pub nus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpectrum {
    pub n: u32,
    pub hbar: f64,
    pub columns: Vec<Column>,
}

impl JointSpectrum {
    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn len(&self) -> usize {
        self.columns.iter().map(|c| c.nus.len()).sum()
    }

    /// All `(λ, ν)` pairs, `λ` ascending then `ν` ascending.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.columns
            .iter()
            .flat_map(|c| c.nus.iter().map(move |nu| (c.lambda, *nu)))
    }

    pub fn column(&self, index: u64) -> Option<&Column> {
        self.columns.iter().find(|c| c.index == index)
    }

    /// Largest `|ν_k + ν_{d−1−k}|` over all columns: zero for a spectrum
    /// symmetric about `ν = 0`.
    pub fn max_asymmetry(&self) -> f64 {
        self.columns
            .iter()
            .flat_map(|c| {
                let d = c.nus.len();
                (0..d).map(move |k| (c.nus[k] + c.nus[d - 1 - k]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// CSV with header `lambda,nu`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,nu\n");
        for (lambda, nu) in self.points() {
            let _ = writeln!(out, "{},{}", sig(lambda, 17), sig(nu, 17));
        }
        out
    }
}

/// Joint spectrum of `(Ĵ, Ĥ)` for all `Ĵ`-eigenvalues in `[lambda_min, lambda_max]`.
///
/// Columns may be computed concurrently; they are assembled in `λ` order.
pub fn joint_spectrum(
    params: &QuantumParams,
    lambda_min: f64,
    lambda_max: f64,
    tol: f64,
    exec: Exec,
) -> Result<JointSpectrum> {
    if !(lambda_min <= lambda_max) {
        return Err(domain("joint spectrum λ range", lambda_min, "λ_min ≤ λ_max"));
    }
    let indices: Vec<u64> = match params.index_range(lambda_min, lambda_max) {
        Some((lo, hi)) => (lo..=hi).collect(),
        None => Vec::new(),
    };
    let columns = exec.map(&indices, |&m| {
        let matrix = BandMatrix::for_index(params, m);
        Column {
            lambda: params.lambda_at(m),
            index: m,
            nus: tridiag_eigenvalues_with(&matrix, tol, Solver::Reference, exec),
        }
    });
    Ok(JointSpectrum {
        n: params.n(),
        hbar: params.hbar(),
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n13_column_at_one() {
        let p = QuantumParams::new(13);
        let js = joint_spectrum(&p, -6.0 / 7.0, 3.0, 1e-15, Exec::Parallel).unwrap();
        let c = js.column(13).unwrap();
        assert!((c.lambda - 1.0).abs() < 1e-15);
        assert_eq!(c.nus.len(), 14);
        assert_eq!(js.columns.first().unwrap().index, 0);
    }

    #[test]
    fn n1_small_range() {
        let p = QuantumParams::new(1);
        let js = joint_spectrum(&p, 0.0, 1.0, 1e-15, Exec::Sequential).unwrap();
        assert_eq!(js.columns.len(), 2);
        assert_eq!(js.columns[0].nus, vec![0.0]);
        assert_eq!(js.columns[1].nus.len(), 2);
    }

    #[test]
    fn empty_and_invalid_ranges() {
        let p = QuantumParams::new(3);
        let js = joint_spectrum(&p, -5.0, -4.0, 1e-12, Exec::Sequential).unwrap();
        assert!(js.is_empty());
        let js = joint_spectrum(&p, 0.1, 0.2, 1e-12, Exec::Sequential).unwrap();
        assert!(js.is_empty());
        assert!(joint_spectrum(&p, 1.0, 0.0, 1e-12, Exec::Sequential).is_err());
    }

    #[test]
    fn csv_layout() {
        let p = QuantumParams::new(1);
        let js = joint_spectrum(&p, 0.0, 1.0, 1e-15, Exec::Sequential).unwrap();
        let csv = js.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "lambda,nu");
        assert_eq!(lines[1], "0,0");
        assert_eq!(lines.len(), 4);
        let nu: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert!((nu - 0.5f64.powf(1.5)).abs() < 1e-16);
    }
}
