//! Characteristic polynomial of the zero-diagonal Jacobi matrix via the
//! three-term recursion `D_k(X) = X D_{k-1}(X) - b_k² D_{k-2}(X)`.

/// A value stored as `mantissa * 2^exponent` so products of many large
/// off-diagonal entries do not overflow.
#[derive(Clone, Copy, Debug)]
pub struct Scaled {
    pub mantissa: f64,
    pub exponent: i64,
}

impl Scaled {
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }
}

/// Evaluates `D_N(x)` for the matrix with off-diagonals `offdiag` (already
/// including any overall scale) and zero diagonal, rescaling at each step.
pub fn eval_scaled(offdiag: &[f64], x: f64) -> Scaled {
    // D_{-1} = 0, D_0 = 1 (1x1 zero matrix has D = x, handled by the loop).
    let mut prev = 1.0_f64; // D_{k-2}
    let mut cur = x; // D_{k-1} starts as D_1 = x for the 1x1 block
    let mut exponent: i64 = 0;
    for b in offdiag {
        let next = x * cur - b * b * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 0.0 && !(1e-100..=1e100).contains(&m) {
            let e = m.log2().floor() as i64;
            let s = (-e as f64).exp2();
            cur *= s;
            prev *= s;
            exponent += e;
        }
    }
    Scaled {
        mantissa: cur,
        exponent,
    }
}

/// All roots of `D_N`, found by scanning a uniform grid for sign changes and
/// bisecting each bracket to `tol`. Suitable for small matrices whose roots
/// are simple.
pub fn roots(offdiag: &[f64], tol: f64) -> Vec<f64> {
    let size = offdiag.len() + 1;
    if offdiag.is_empty() {
        return vec![0.0];
    }
    // Gershgorin radius for a zero-diagonal matrix.
    let mut bound = 0.0_f64;
    for i in 0..size {
        let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
        let right = if i < offdiag.len() { offdiag[i].abs() } else { 0.0 };
        bound = bound.max(left + right);
    }
    let bound = bound * 1.001 + 1e-300;
    let samples = 200_000usize; // even count: x = 0 is never a grid point
    let step = 2.0 * bound / samples as f64;
    let sign = |x: f64| eval_scaled(offdiag, x).signum();
    let mut found = Vec::with_capacity(size);
    let mut a = -bound;
    let mut fa = sign(a);
    for i in 1..=samples {
        let b = -bound + i as f64 * step;
        let fb = sign(b);
        if fb == 0.0 {
            found.push(b);
        } else if fa != 0.0 && fa != fb {
            let (mut lo, mut hi) = (a, b);
            let flo = fa;
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = sign(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm == flo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            found.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    assert_eq!(found.len(), size, "root scan missed a root");
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let r = roots(&[0.5], 1e-14);
        assert!((r[0] + 0.5).abs() < 1e-13 && (r[1] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn scaled_matches_direct() {
        let b = [1.0, 2.0, 3.0];
        // D_3 for [[0,1,0,0],[1,0,2,0],[0,2,0,3],[0,0,3,0]] at x=0.7
        let x = 0.7_f64;
        let d0 = 1.0;
        let d1 = x;
        let d2 = x * d1 - 1.0 * d0;
        let d3 = x * d2 - 4.0 * d1;
        let d4 = x * d3 - 9.0 * d2;
        let s = eval_scaled(&b, x);
        assert!((s.mantissa * (s.exponent as f64).exp2() - d4).abs() < 1e-12);
    }
}
