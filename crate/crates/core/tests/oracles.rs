//! Production results checked against the independent reference code in
//! `semitoric-oracles`.

use semitoric::quantum::{
    eigenspace_dim, sigma_n, tridiag_eigenvalues, BandMatrix, QuantumParams, DEFAULT_TOL,
};
use semitoric::taylor::kappa_integral_closed;
use semitoric::Exec;
use semitoric_oracles::{charpoly, enumerate_eigenspace_dim, quadrature};

#[test]
fn eigensolver_matches_characteristic_polynomial_roots() {
    for n in 0..=8u32 {
        let p = QuantumParams::new(n);
        for ell0 in [u64::from(n), u64::from(n) / 2, u64::from(n) + 3] {
            let m = BandMatrix::for_index(&p, ell0);
            let ours = tridiag_eigenvalues(&m, DEFAULT_TOL);
            let oracle = charpoly::roots(&m.scaled_offdiag(), 1e-14);
            assert_eq!(ours.len(), oracle.len());
            for (a, b) in ours.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-10, "n={n} ell0={ell0}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn characteristic_polynomial_at_zero_for_odd_n() {
    // Size n+1 is even: D(0) = (−1)^{(n+1)/2} ∏_{k odd} β_k².
    for n in (1..=1025u32).step_by(2) {
        let m = BandMatrix::for_index(&QuantumParams::new(n), u64::from(n));
        let betas = m.betas();
        let d = charpoly::eval_scaled(betas, 0.0);
        let sign = if ((n + 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(d.signum(), sign, "n={n}");
        let expected: f64 = betas.iter().step_by(2).map(|b| 2.0 * b.ln()).sum();
        assert!((d.ln_abs() - expected).abs() < 1e-9 * expected.abs().max(1.0), "n={n}");
    }
}

#[test]
fn zero_is_an_eigenvalue_exactly_for_even_n() {
    for n in 1..=120u32 {
        let p = QuantumParams::new(n);
        let sigma = sigma_n(&p, DEFAULT_TOL, Exec::Sequential);
        let norm = BandMatrix::for_index(&p, u64::from(n)).norm_bound();
        let closest = sigma.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        if n % 2 == 0 {
            assert!(closest < 1e-12 * norm, "n={n}: {closest}");
        } else {
            assert!(closest > 1e-6 * norm, "n={n}: {closest}");
        }
    }
}

#[test]
fn kappa_integral_matches_quadrature() {
    for i in 0..50 {
        let u1 = 2.0 * f64::from(i + 1) / 50.0 - 0.039;
        let closed = kappa_integral_closed(u1).unwrap();
        let numeric = quadrature::fiber_time_integral(u1, 1e-13);
        assert!((closed - numeric).abs() < 1e-10, "u1={u1}: {closed} vs {numeric}");
    }
    for k in 1..=20 {
        let u1 = (-f64::from(k)).exp2();
        let closed = kappa_integral_closed(u1).unwrap();
        assert!((closed - quadrature::fiber_time_integral(u1, 1e-13)).abs() < 1e-10);
    }
}

#[test]
fn eigenspace_dimension_matches_enumeration() {
    for n in 0..30u32 {
        let p = QuantumParams::new(n);
        for m in 0..70u64 {
            let dim = eigenspace_dim(&p, p.lambda_at(m)).unwrap();
            assert_eq!(dim, enumerate_eigenspace_dim(n as usize, m as usize), "n={n} m={m}");
        }
    }
}
