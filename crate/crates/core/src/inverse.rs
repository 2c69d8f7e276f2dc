//! Recovery of `B₂₂` and `a₂` from the minimal spacing of `Σ(n)`.
//!
//! The minimal normalized spacing obeys
//! `2π / t_min(ħ) = B₂₂ (|ln ħ| + a₂ + ln 2 + γ) + O(ħ ln ħ)`, which is inverted
//! directly (simple estimator) or across two values of `ħ` to cancel the
//! constant term (accelerated estimator).

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, TAU};
use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::fmt::sig;
use crate::quantum::{sigma_n, QuantumParams, DEFAULT_TOL};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

/// Ground truth for the coupled spin-oscillator.
pub const TRUE_B22: f64 = 2.0;
pub const TRUE_A2: f64 = 5.0 * LN_2;

/// Largest level `k` accepted by [`convergence_study`].
pub const MAX_LEVEL: u32 = 12;

/// Minimal normalized spacing of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacingDatum {
    pub n: u32,
    pub hbar: f64,
    pub t_min: f64,
    /// For an even number of eigenvalues (odd `n`): whether the minimal gap
    /// is the one straddling 0. `None` otherwise.
    pub straddles_zero: Option<bool>,
}

impl SpacingDatum {
    /// A datum with a prescribed `t_min`, e.g. for manufactured spacings.
    pub fn synthetic(hbar: f64, t_min: f64) -> Self {
        SpacingDatum {
            n: 0,
            hbar,
            t_min,
            straddles_zero: None,
        }
    }
}

/// `min_k (E_{k+1} − E_k) / ħ` over the ascending spectrum `sigma`.
///
/// When `sigma` has an even number of points the gap across 0, `2 E⁺_min / ħ`,
/// is compared with the full scan and the outcome recorded in
/// `straddles_zero`.
pub fn t_min(sigma: &[f64], hbar: f64) -> Result<SpacingDatum> {
    if sigma.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "spacing needs at least 2 eigenvalues, got {}",
            sigma.len()
        )));
    }
    if !(hbar > 0.0) {
        return Err(domain("ħ", hbar, "ħ > 0"));
    }
    let (gap_index, min_gap) = sigma
        .windows(2)
        .map(|w| w[1] - w[0])
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, g)| if g < best.1 { (i, g) } else { best });
    let straddles_zero = (sigma.len() % 2 == 0).then(|| {
        let mid = sigma.len() / 2;
        let shortcut = 2.0 * sigma[mid];
        gap_index + 1 == mid || (shortcut - min_gap).abs() <= 1e-12 * shortcut.abs()
    });
    Ok(SpacingDatum {
        n: (sigma.len() - 1) as u32,
        hbar,
        t_min: min_gap / hbar,
        straddles_zero,
    })
}

fn check_datum(d: &SpacingDatum) -> Result<()> {
    if !(d.hbar > 0.0 && d.hbar < 1.0) {
        return Err(domain("ħ", d.hbar, "0 < ħ < 1"));
    }
    if !(d.t_min > 0.0) || !d.t_min.is_finite() {
        return Err(domain("t_min", d.t_min, "t_min > 0"));
    }
    Ok(())
}

/// `B₂₂ ≈ 2π / (t_min |ln ħ|)`.
pub fn recover_b22_simple(d: &SpacingDatum) -> Result<f64> {
    check_datum(d)?;
    Ok(TAU / (d.t_min * d.hbar.ln().abs()))
}

/// `B₂₂ ≈ (2π/t_min(ħ₁) − 2π/t_min(ħ₂)) / ln(ħ₂/ħ₁)`.
pub fn recover_b22_accel(d1: &SpacingDatum, d2: &SpacingDatum) -> Result<f64> {
    check_datum(d1)?;
    check_datum(d2)?;
    if d1.hbar == d2.hbar {
        return Err(domain("ħ₂", d2.hbar, "ħ₂ ≠ ħ₁"));
    }
    Ok((TAU / d1.t_min - TAU / d2.t_min) / (d2.hbar / d1.hbar).ln())
}

/// `a₂ ≈ 2π / (B₂₂ t_min) − |ln ħ| − ln 2 − γ`.
pub fn recover_a2(d: &SpacingDatum, b22: f64) -> Result<f64> {
    check_datum(d)?;
    if b22 == 0.0 || !b22.is_finite() {
        return Err(domain("B₂₂", b22, "finite and nonzero"));
    }
    Ok(TAU / (b22 * d.t_min) - d.hbar.ln().abs() - LN_2 - EULER_GAMMA)
}

/// One level `n = 2^k + 1` of the convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryRow {
    pub k: u32,
    pub n: u32,
    pub hbar: f64,
    pub t_min: f64,
    pub b22_simple: f64,
    /// Paired with `n' = 2^{k+1} + 1`.
    pub b22_accel: f64,
    pub a2: f64,
    pub a2_over_ln2: f64,
    /// `b22_accel − 2`.
    pub err_b22: f64,
    /// `a2 − 5 ln 2`.
    pub err_a2: f64,
    pub straddles_zero: bool,
}

impl RecoveryRow {
    pub fn err_b22_simple(&self) -> f64 {
        self.b22_simple - TRUE_B22
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverySeries {
    pub use_true_b22: bool,
    pub rows: Vec<RecoveryRow>,
}

impl RecoverySeries {
    /// CSV with 12 significant digits. `blind` drops the two error columns.
    pub fn to_csv(&self, blind: bool) -> String {
        let mut out = String::from("k,n,hbar,t_min,b22_simple,b22_accel,a2,a2_over_ln2");
        out.push_str(if blind { "\n" } else { ",err_b22,err_a2\n" });
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.k,
                r.n,
                sig(r.hbar, 12),
                sig(r.t_min, 12),
                sig(r.b22_simple, 12),
                sig(r.b22_accel, 12),
                sig(r.a2, 12),
                sig(r.a2_over_ln2, 12)
            );
            if !blind {
                let _ = write!(out, ",{},{}", sig(r.err_b22, 12), sig(r.err_a2, 12));
            }
            out.push('\n');
        }
        out
    }

    /// Levels whose minimal gap did not straddle 0.
    pub fn straddle_violations(&self) -> Vec<u32> {
        self.rows.iter().filter(|r| !r.straddles_zero).map(|r| r.k).collect()
    }
}

/// Spacing datum of `Σ(n)` at level `n`.
pub fn spacing_at(n: u32, exec: Exec) -> Result<SpacingDatum> {
    let params = QuantumParams::new(n);
    t_min(&sigma_n(&params, DEFAULT_TOL, exec), params.hbar())
}

/// Runs both estimators over `n = 2^k + 1`, `k_min ≤ k ≤ k_max`.
///
/// `a₂` uses `B₂₂ = 2` when `use_true_b22` is set and the accelerated
/// estimate otherwise.
pub fn convergence_study(k_min: u32, k_max: u32, use_true_b22: bool, exec: Exec) -> Result<RecoverySeries> {
    if k_min < 1 || k_min > k_max || k_max > MAX_LEVEL {
        return Err(domain("level range", f64::from(k_min), "1 ≤ k_min ≤ k_max ≤ 12"));
    }
    let levels: Vec<u32> = (k_min..=k_max + 1).collect();
    let data = exec.map(&levels, |&k| spacing_at((1 << k) + 1, exec));
    let data = data.into_iter().collect::<Result<Vec<_>>>()?;
    let rows = data
        .windows(2)
        .zip(k_min..)
        .map(|(pair, k)| {
            let (d, d2) = (&pair[0], &pair[1]);
            let b22_simple = recover_b22_simple(d)?;
            let b22_accel = recover_b22_accel(d, d2)?;
            let a2 = recover_a2(d, if use_true_b22 { TRUE_B22 } else { b22_accel })?;
            Ok(RecoveryRow {
                k,
                n: d.n,
                hbar: d.hbar,
                t_min: d.t_min,
                b22_simple,
                b22_accel,
                a2,
                a2_over_ln2: a2 / LN_2,
                err_b22: b22_accel - TRUE_B22,
                err_a2: a2 - TRUE_A2,
                straddles_zero: d.straddles_zero.unwrap_or(false),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RecoverySeries { use_true_b22, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manufactured(hbar: f64, b: f64, c: f64) -> SpacingDatum {
        SpacingDatum::synthetic(hbar, TAU / (b * (hbar.ln().abs() + c)))
    }

    #[test]
    fn n1_spacing() {
        let p = QuantumParams::new(1);
        let d = t_min(&sigma_n(&p, 1e-15, Exec::Sequential), p.hbar()).unwrap();
        assert!((d.t_min - 2.0 * 0.5f64.powf(1.5)).abs() < 1e-15);
        assert_eq!(d.straddles_zero, Some(true));
    }

    #[test]
    fn spacing_errors_and_even_n() {
        assert!(matches!(t_min(&[0.3], 0.5), Err(Error::InsufficientData(_))));
        let d = spacing_at(4, Exec::Sequential).unwrap();
        assert_eq!(d.straddles_zero, None);
        assert!(d.t_min > 0.0);
    }

    #[test]
    fn simple_estimator_inverts() {
        let hbar = 0.01;
        let d = SpacingDatum::synthetic(hbar, TAU / (2.0 * hbar.ln().abs()));
        assert!((recover_b22_simple(&d).unwrap() - 2.0).abs() < 1e-14);
        assert!(recover_b22_simple(&SpacingDatum::synthetic(1.0, 1.0)).is_err());
        assert!(recover_b22_simple(&SpacingDatum::synthetic(1.5, 1.0)).is_err());
    }

    #[test]
    fn accelerated_estimator_cancels_constant() {
        let (d1, d2) = (manufactured(0.1, 2.0, 3.0), manufactured(0.05, 2.0, 3.0));
        assert!((recover_b22_accel(&d1, &d2).unwrap() - 2.0).abs() < 1e-12);
        assert!(recover_b22_accel(&d1, &d1).is_err());
        let relabeled = SpacingDatum::synthetic(0.05, d1.t_min);
        let v = recover_b22_accel(&d1, &relabeled).unwrap();
        assert!(v.is_finite() && v.abs() < 1e-12);
    }

    #[test]
    fn a2_inverts() {
        let hbar = 1.0 / 257.0;
        let d = manufactured(hbar, 2.0, TRUE_A2 + LN_2 + EULER_GAMMA);
        assert!((recover_a2(&d, 2.0).unwrap() - TRUE_A2).abs() < 1e-12);
        assert!(recover_a2(&d, 0.0).is_err());
    }

    #[test]
    fn study_guards() {
        assert!(convergence_study(0, 3, true, Exec::Sequential).is_err());
        assert!(convergence_study(4, 3, true, Exec::Sequential).is_err());
        assert!(convergence_study(1, 13, true, Exec::Sequential).is_err());
    }

    #[test]
    fn study_rows_in_order() {
        let s = convergence_study(1, 5, false, Exec::Parallel).unwrap();
        let ks: Vec<u32> = s.rows.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![1, 2, 3, 4, 5]);
        for r in &s.rows {
            assert_eq!(r.n, (1 << r.k) + 1);
            assert!((r.hbar - 2.0 / (f64::from(r.n) + 1.0)).abs() < 1e-16);
        }
        assert!(s.straddle_violations().is_empty());
    }

    #[test]
    fn csv_headers() {
        let s = convergence_study(2, 3, true, Exec::Sequential).unwrap();
        let full = s.to_csv(false);
        assert!(full.starts_with("k,n,hbar,t_min,b22_simple,b22_accel,a2,a2_over_ln2,err_b22,err_a2\n"));
        assert_eq!(full.lines().count(), 3);
        let blind = s.to_csv(true);
        assert!(blind.starts_with("k,n,hbar,t_min,b22_simple,b22_accel,a2,a2_over_ln2\n"));
        assert!(blind.lines().nth(1).unwrap().starts_with("2,5,"));
    }
}
