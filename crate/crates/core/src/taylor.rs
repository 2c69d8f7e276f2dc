//! First-order Taylor series invariant `(a₁, a₂)` at the focus-focus point.
//!
//! Both coefficients are limits along the radial loop `γ₀` on `Λ₀`, which is
//! parametrized by `u ∈ (0, 2]`: the point `A₀(u)` lies on the `y = −ρ` half
//! (sheet `S₊` at `θ̃ = −π/2`) and `B₀(u)` on the `y = +ρ` half (sheet `S₋`
//! at `θ̃ = π/2`), both with `v = x = 0` and `z = 1 − u²/2`.
//!
//! * `a₂ = lim_{u→0} [ 2 ∫_u^2 du'/(u'√(1 − u'²/4)) + ln(r̂_{A₀} ρ̂_{B₀}) ]`,
//!   where `r̂, ρ̂` are radii in the linearized normal-form coordinates.
//! * `a₁ = lim_{u→0} (t̂_{A₀} − θ̂_{B₀})`, the angle term; the `κ₁` integral
//!   along `γ₀` vanishes because `γ₀` is an integral curve of `X_H`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, LN_2, PI, SQRT_2, TAU};

use crate::classical::PhasePoint;
use crate::error::{domain, Error, Result};

/// Joint rotation applied to the `x̂` and `ξ̂` planes before taking polar
/// angles. Rotating both planes by the same angle leaves the quadratic normal
/// form `(q₁, q₂)` unchanged; this choice puts `A₀` at angle `π/4`.
pub const FRAME_ROTATION: f64 = -3.0 * FRAC_PI_4;

/// Linearized normal-form coordinates `(x̂₁, x̂₂, ξ̂₁, ξ̂₂)` at the focus-focus
/// point, related to the phase-space coordinates by the linear symplectic map
///
/// ```text
/// v = (x̂₂ + ξ̂₁)/√2,   x = (x̂₂ − ξ̂₁)/√2,
/// u = (−x̂₁ + ξ̂₂)/√2,  y = (x̂₁ + ξ̂₂)/√2.
/// ```
///
/// In these coordinates `J − 1 ≈ x̂₂ξ̂₁ − x̂₁ξ̂₂` and `2H ≈ x̂₁ξ̂₁ + x̂₂ξ̂₂` to
/// second order, i.e. `B = diag(1, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizedCoords {
    pub x1: f64,
    pub x2: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl LinearizedCoords {
    /// Inverse of the linear map, from `(x, y, u, v)`.
    pub fn from_phase(x: f64, y: f64, u: f64, v: f64) -> Self {
        LinearizedCoords {
            x1: (y - u) / SQRT_2,
            x2: (v + x) / SQRT_2,
            xi1: (v - x) / SQRT_2,
            xi2: (y + u) / SQRT_2,
        }
    }

    pub fn from_point(p: &PhasePoint) -> Self {
        Self::from_phase(p.x, p.y, p.u, p.v)
    }

    /// The linear map itself: returns `(x, y, u, v)`.
    pub fn to_phase(&self) -> (f64, f64, f64, f64) {
        let x = (self.x2 - self.xi1) / SQRT_2;
        let y = (self.x1 + self.xi2) / SQRT_2;
        let u = (-self.x1 + self.xi2) / SQRT_2;
        let v = (self.x2 + self.xi1) / SQRT_2;
        (x, y, u, v)
    }

    /// `r̂² = x̂₁² + x̂₂²`.
    pub fn x_radius_squared(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2
    }

    /// `ρ̂² = ξ̂₁² + ξ̂₂²`.
    pub fn xi_radius_squared(&self) -> f64 {
        self.xi1 * self.xi1 + self.xi2 * self.xi2
    }

    /// Polar angle `t̂` of `(x̂₁, x̂₂)` in the rotated frame, in `(−π, π]`.
    pub fn x_angle(&self) -> f64 {
        wrap_pi(self.x2.atan2(self.x1) + FRAME_ROTATION)
    }

    /// Polar angle `θ̂` of `(ξ̂₁, ξ̂₂)` in the rotated frame, in `(−π, π]`.
    pub fn xi_angle(&self) -> f64 {
        wrap_pi(self.xi2.atan2(self.xi1) + FRAME_ROTATION)
    }

    /// Quadratic normal form `(q₁, q₂) = (x̂₂ξ̂₁ − x̂₁ξ̂₂, x̂₁ξ̂₁ + x̂₂ξ̂₂)`.
    pub fn normal_form(&self) -> (f64, f64) {
        (
            self.x2 * self.xi1 - self.x1 * self.xi2,
            self.x1 * self.xi1 + self.x2 * self.xi2,
        )
    }
}

fn wrap_pi(a: f64) -> f64 {
    let mut a = a % TAU;
    if a <= -PI {
        a += TAU;
    } else if a > PI {
        a -= TAU;
    }
    a
}

fn check_u(what: &'static str, u: f64) -> Result<()> {
    if u > 0.0 && u <= 2.0 {
        Ok(())
    } else {
        Err(domain(what, u, "(0, 2]"))
    }
}

/// `√(1 − u²/4)`, written to stay accurate for small `u`.
fn radical(u: f64) -> f64 {
    ((1.0 - 0.5 * u) * (1.0 + 0.5 * u)).sqrt()
}

/// Point of `γ₀` with `v = x = 0`, `z = 1 − u²/2`, `y = side · u√(1 − u²/4)`.
///
/// This is `S₊(1 − u²/2, −π/2)` for `side = −1` and `S₋(1 − u²/2, π/2)` for
/// `side = +1`, written directly in `u` so that small `u` keeps full relative
/// precision.
fn loop_point(u: f64, side: f64) -> Result<PhasePoint> {
    check_u("loop parameter u", u)?;
    PhasePoint::new(0.0, side * u * radical(u), 1.0 - 0.5 * u * u, u, 0.0)
}

/// The point `A₀(u)` of `γ₀` (`y = −ρ` half).
pub fn loop_point_a(u: f64) -> Result<PhasePoint> {
    loop_point(u, -1.0)
}

/// The point `B₀(u)` of `γ₀` (`y = +ρ` half).
pub fn loop_point_b(u: f64) -> Result<PhasePoint> {
    loop_point(u, 1.0)
}

/// `∫_{u1}^{2} du / (u √(1 − u²/4)) = ln(2/u₁) + ln(1 + √(1 − u₁²/4))`.
pub fn kappa_integral_closed(u1: f64) -> Result<f64> {
    check_u("κ integral endpoint", u1)?;
    Ok((2.0 / u1).ln() + (1.0 + radical(u1)).ln())
}

/// `ln(r̂_{A₀} ρ̂_{B₀}) = 2 ln(u/√2) + ln(2 − u²/4 + 2√(1 − u²/4))`.
pub fn log_factor(u: f64) -> Result<f64> {
    check_u("log factor u", u)?;
    Ok(2.0 * (u / SQRT_2).ln() + (2.0 - 0.25 * u * u + 2.0 * radical(u)).ln())
}

/// Sign of the radical in the closed form for `r̂²` along `γ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadicalBranch {
    /// `+2√(1 − u²/4)`: the value at `A₀`, consistent with [`log_factor`].
    Plus,
    /// `−2√(1 − u²/4)`: the value at the mirror point `y = +ρ`. Vanishes like
    /// `u⁶/128`, so its logarithm does not produce the finite limit; kept as
    /// a diagnostic.
    Minus,
}

/// `(u²/2)(2 − u²/4 ± 2√(1 − u²/4)) = (u²/2)(1 ± √(1 − u²/4))²`.
pub fn hat_radius_squared(u: f64, branch: RadicalBranch) -> Result<f64> {
    check_u("r̂² u", u)?;
    let s = radical(u);
    let factor = match branch {
        RadicalBranch::Plus => 1.0 + s,
        // 1 − s without cancellation.
        RadicalBranch::Minus => 0.25 * u * u / (1.0 + s),
    };
    Ok(0.5 * u * u * factor * factor)
}

/// The Stage-4 bracket
/// `2 ln(2/u) + 2 ln(1 + √(1 − u²/4)) + 2 ln(u/√2) + ln(2 − u²/4 + 2√(1 − u²/4))`,
/// whose `u → 0` limit is `a₂`. Deviates from the limit by about `−u²/4`.
pub fn a2_bracket(u: f64) -> Result<f64> {
    Ok(2.0 * kappa_integral_closed(u)? + log_factor(u)?)
}

/// Cap on the number of halvings in [`a2_limit_with_diagnostics`].
pub const MAX_HALVINGS: usize = 60;

/// Evaluates [`a2_bracket`] on `u = 2^{-k}` until successive values differ by
/// less than `tolerance`, then returns the Richardson-extrapolated value
/// (the error is `O(u²)`, so `(4 b_k − b_{k−1})/3`) along with the `(u, bracket)`
/// pairs visited.
pub fn a2_limit_with_diagnostics(tolerance: f64) -> Result<(f64, Vec<(f64, f64)>)> {
    if !(tolerance > 0.0) {
        return Err(domain("a₂ limit tolerance", tolerance, "(0, ∞)"));
    }
    let mut diagnostics = Vec::new();
    let mut u = 1.0;
    let mut prev = a2_bracket(u)?;
    diagnostics.push((u, prev));
    for _ in 1..MAX_HALVINGS {
        u *= 0.5;
        let cur = a2_bracket(u)?;
        diagnostics.push((u, cur));
        if (cur - prev).abs() < tolerance {
            return Ok(((4.0 * cur - prev) / 3.0, diagnostics));
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        what: "a₂ limit",
        iterations: MAX_HALVINGS,
    })
}

pub fn a2_limit(tolerance: f64) -> Result<f64> {
    a2_limit_with_diagnostics(tolerance).map(|(v, _)| v)
}

/// `t̂_{A₀}(u) − θ̂_{B₀}(u)` from the linearized coordinates of the two loop
/// points.
pub fn angle_difference(u: f64) -> Result<f64> {
    let a = LinearizedCoords::from_point(&loop_point_a(u)?);
    let b = LinearizedCoords::from_point(&loop_point_b(u)?);
    Ok(a.x_angle() - b.xi_angle())
}

/// `a₁`, the limit of [`angle_difference`] as `u → 0`, reduced to `[0, 2π)`.
///
/// The difference is evaluated on `u = 2^{-k}`, `k = 4..=24`; the values must
/// agree (the angles are constant along `γ₀` near the pinch), otherwise an
/// invariant error is returned.
pub fn a1_value() -> Result<f64> {
    let samples: Vec<f64> = (4..=24)
        .map(|k| angle_difference((-(k as f64)).exp2()))
        .collect::<Result<_>>()?;
    let last = *samples.last().expect("non-empty sample range");
    let spread = samples.iter().map(|s| (s - last).abs()).fold(0.0, f64::max);
    if spread > 1e-12 {
        return Err(Error::Invariant {
            module: "taylor_invariant",
            detail: format!("angle difference not constant along γ₀ (spread {spread:e})"),
        });
    }
    Ok(last.rem_euclid(TAU))
}

/// `(a₁, a₂)` plus the `(u, bracket)` pairs used for the `a₂` limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub a1: f64,
    pub a2: f64,
    pub diagnostics: Vec<(f64, f64)>,
}

impl InvariantResult {
    pub fn a2_over_ln2(&self) -> f64 {
        self.a2 / LN_2
    }
}

pub fn taylor_invariants(tolerance: f64) -> Result<InvariantResult> {
    let a1 = a1_value()?;
    let (a2, diagnostics) = a2_limit_with_diagnostics(tolerance)?;
    Ok(InvariantResult {
        a1,
        a2,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{momentum_map, singular_fiber, FiberParam, Sheet};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn linearized_round_trip() {
        let c = LinearizedCoords::from_phase(0.3, -0.2, 1.1, 0.4);
        let (x, y, u, v) = c.to_phase();
        assert!((x - 0.3).abs() < 1e-15 && (y + 0.2).abs() < 1e-15);
        assert!((u - 1.1).abs() < 1e-15 && (v - 0.4).abs() < 1e-15);
    }

    #[test]
    fn linearized_normal_form_matches_quadratic_part() {
        // Near the pole, J − 1 = (u²+v²)/2 − (x²+y²)/2 + O(4) and 2H = ux + vy.
        let (x, y, u, v) = (0.01, -0.02, 0.015, 0.005);
        let c = LinearizedCoords::from_phase(x, y, u, v);
        let (q1, q2) = c.normal_form();
        assert!((q1 - (0.5 * (u * u + v * v) - 0.5 * (x * x + y * y))).abs() < 1e-16);
        assert!((q2 - (u * x + v * y)).abs() < 1e-16);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_integral_closed(2.0).unwrap(), 0.0);
        let r2 = 2f64.sqrt();
        let expect = r2.ln() + (1.0 + 0.5f64.sqrt()).ln();
        assert!((kappa_integral_closed(r2).unwrap() - expect).abs() < 1e-15);
        assert!(kappa_integral_closed(0.0).is_err());
        assert!(kappa_integral_closed(2.5).is_err());
    }

    #[test]
    fn log_factor_examples() {
        assert!((log_factor(2.0).unwrap() - LN_2).abs() < 1e-15);
        let expect = 2.0 * (1.0 / SQRT_2).ln() + (1.75 + 3f64.sqrt()).ln();
        assert!((log_factor(1.0).unwrap() - expect).abs() < 1e-15);
        // small-u slope: 2 ln u + ln 2
        let u = 1e-7;
        assert!((log_factor(u).unwrap() - (2.0 * u.ln() + LN_2)).abs() < 1e-12);
        assert!(log_factor(-1.0).is_err());
    }

    #[test]
    fn bracket_examples() {
        let five_ln2 = 5.0 * LN_2;
        assert!((a2_bracket(1e-6).unwrap() - five_ln2).abs() < 1e-11);
        let expect = 2.0 * LN_2
            + 2.0 * (1.0 + 3f64.sqrt() / 2.0).ln()
            + 2.0 * (1.0 / SQRT_2).ln()
            + (1.75 + 3f64.sqrt()).ln();
        assert!((a2_bracket(1.0).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn bracket_error_is_second_order() {
        let five_ln2 = 5.0 * LN_2;
        let mut c_max = 0.0_f64;
        for i in 1..=100 {
            let u = 0.1 * i as f64 / 100.0;
            let dev = (a2_bracket(u).unwrap() - five_ln2).abs();
            c_max = c_max.max(dev / (u * u));
        }
        assert!(c_max < 10.0, "fitted constant {c_max}");
        assert!((c_max - 0.25).abs() < 0.01);
    }

    #[test]
    fn limit_tolerances() {
        let five_ln2 = 5.0 * LN_2;
        let (tight, d_tight) = a2_limit_with_diagnostics(1e-10).unwrap();
        let (loose, d_loose) = a2_limit_with_diagnostics(1e-4).unwrap();
        assert!((tight - five_ln2).abs() < 1e-10);
        assert!((loose - five_ln2).abs() < 1e-4);
        assert!(d_loose.len() < d_tight.len());
        assert!(a2_limit(0.0).is_err());
    }

    #[test]
    fn radius_branches() {
        for branch in [RadicalBranch::Plus, RadicalBranch::Minus] {
            assert!((hat_radius_squared(2.0, branch).unwrap() - 2.0).abs() < 1e-15);
        }
        let u = 1e-3;
        let plus = hat_radius_squared(u, RadicalBranch::Plus).unwrap();
        assert!((plus / (2.0 * u * u) - 1.0).abs() < 1e-6);
        let minus = hat_radius_squared(u, RadicalBranch::Minus).unwrap();
        assert!((minus / (u.powi(6) / 128.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn log_factor_is_log_of_plus_radius() {
        for i in 1..=200 {
            let u = 2.0 * i as f64 / 200.0;
            let r2 = hat_radius_squared(u, RadicalBranch::Plus).unwrap();
            assert!((log_factor(u).unwrap().exp() - r2).abs() < 1e-12 * r2.max(1.0));
        }
    }

    #[test]
    fn radii_at_loop_points() {
        let u = 0.5;
        let a = LinearizedCoords::from_point(&loop_point_a(u).unwrap());
        let b = LinearizedCoords::from_point(&loop_point_b(u).unwrap());
        assert!((a.x_radius_squared() - b.xi_radius_squared()).abs() < 1e-12);
        let plus = hat_radius_squared(u, RadicalBranch::Plus).unwrap();
        assert!((a.x_radius_squared() - plus).abs() < 1e-12);
        let minus = hat_radius_squared(u, RadicalBranch::Minus).unwrap();
        assert!((b.x_radius_squared() - minus).abs() < 1e-12);
    }

    #[test]
    fn loop_points_lie_on_singular_fiber() {
        for u in [1e-4, 0.1, 1.0, 2.0] {
            for p in [loop_point_a(u).unwrap(), loop_point_b(u).unwrap()] {
                let f = momentum_map(&p);
                assert!((f.j - 1.0).abs() < 1e-14 && f.h.abs() < 1e-14);
                assert!((p.u - u).abs() < 1e-14 && p.v.abs() < 1e-15);
            }
            let z = 1.0 - 0.5 * u * u;
            let a = singular_fiber(&FiberParam::new(z, -FRAC_PI_2, Sheet::Plus).unwrap());
            let b = singular_fiber(&FiberParam::new(z, FRAC_PI_2, Sheet::Minus).unwrap());
            assert!(a.distance(&loop_point_a(u).unwrap()) < 1e-10);
            assert!(b.distance(&loop_point_b(u).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn angles_at_loop_points() {
        let a = LinearizedCoords::from_point(&loop_point_a(0.01).unwrap());
        let b = LinearizedCoords::from_point(&loop_point_b(0.01).unwrap());
        assert!((a.x_angle() - FRAC_PI_4).abs() < 1e-6);
        assert!((b.xi_angle() + FRAC_PI_4).abs() < 1e-6);
    }

    #[test]
    fn a1_is_quarter_turn() {
        assert!((a1_value().unwrap() - FRAC_PI_2).abs() < 1e-9);
    }
}
