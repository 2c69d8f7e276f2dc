//! Classical mechanics of the coupled spin-oscillator on `S² × R²`.
//!
//! The momentum map is `F = (J, H)` with `J = (u² + v²)/2 + z` and
//! `H = (ux + vy)/2`. The symplectic form is the product of the sphere's area
//! form and `du ∧ dv`; brackets are computed with the sign convention under
//! which `J` generates the simultaneous rotation of the sphere and the plane,
//! i.e. `{f, g} = ∂_u f ∂_v g − ∂_v f ∂_u g − r · (∇f × ∇g)` with `r = (x, y, z)`.
//!
//! The focus-focus fiber is `Λ₀ = F⁻¹(1, 0)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};

/// Tolerance on `x² + y² + z² = 1` accepted by [`PhasePoint::new`].
pub const SPHERE_TOL: f64 = 1e-12;

/// Points with `|z| ≥ 1 − POLE_GUARD` are outside the `(u, v, z, θ)` chart.
pub const POLE_GUARD: f64 = 1e-9;

/// A point `((x, y, z), (u, v))` of `S² × R²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
    pub v: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64, z: f64, u: f64, v: f64) -> Result<Self> {
        let residual = x * x + y * y + z * z - 1.0;
        if !residual.is_finite() || residual.abs() > SPHERE_TOL || !u.is_finite() || !v.is_finite()
        {
            return Err(Error::OffSphere { residual });
        }
        Ok(PhasePoint { x, y, z, u, v })
    }

    /// Builds a point from height `z` and azimuth `theta` on the sphere.
    pub fn from_height_angle(z: f64, theta: f64, u: f64, v: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z) {
            return Err(domain("sphere height", z, "[-1, 1]"));
        }
        let rho = (1.0 - z * z).sqrt();
        PhasePoint::new(rho * theta.cos(), rho * theta.sin(), z, u, v)
    }

    /// The focus-focus point ("north pole" with the oscillator at rest).
    pub fn north_pole() -> Self {
        PhasePoint {
            x: 0.0,
            y: 0.0,
            z: 1.0,
            u: 0.0,
            v: 0.0,
        }
    }

    /// Rescales `(x, y, z)` back onto the unit sphere.
    fn project(x: f64, y: f64, z: f64, u: f64, v: f64) -> Self {
        let norm = (x * x + y * y + z * z).sqrt();
        PhasePoint {
            x: x / norm,
            y: y / norm,
            z: z / norm,
            u,
            v,
        }
    }

    fn as_array(&self) -> [f64; 5] {
        [self.x, self.y, self.z, self.u, self.v]
    }

    pub fn distance(&self, other: &PhasePoint) -> f64 {
        let a = self.as_array();
        let b = other.as_array();
        a.iter()
            .zip(b.iter())
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt()
    }
}

/// A value `(j, h)` of the momentum map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumValue {
    pub j: f64,
    pub h: f64,
}

impl MomentumValue {
    /// The focus-focus critical value.
    pub const FOCUS_FOCUS: MomentumValue = MomentumValue { j: 1.0, h: 0.0 };

    pub fn distance(&self, other: &MomentumValue) -> f64 {
        (self.j - other.j).hypot(self.h - other.h)
    }
}

pub fn momentum_map(p: &PhasePoint) -> MomentumValue {
    MomentumValue {
        j: 0.5 * (p.u * p.u + p.v * p.v) + p.z,
        h: 0.5 * (p.u * p.x + p.v * p.y),
    }
}

/// Gradient of a function of `(x, y, z, u, v)`, in that order.
type Gradient = [f64; 5];

fn grad_j(p: &PhasePoint) -> Gradient {
    [0.0, 0.0, 1.0, p.u, p.v]
}

fn grad_h(p: &PhasePoint) -> Gradient {
    [0.5 * p.u, 0.5 * p.v, 0.0, 0.5 * p.x, 0.5 * p.y]
}

/// `{f, g}` from exact gradients of `f` and `g`.
fn bracket(p: &PhasePoint, df: &Gradient, dg: &Gradient) -> f64 {
    let plane = df[3] * dg[4] - df[4] * dg[3];
    let cross = [
        df[1] * dg[2] - df[2] * dg[1],
        df[2] * dg[0] - df[0] * dg[2],
        df[0] * dg[1] - df[1] * dg[0],
    ];
    let sphere = -(p.x * cross[0] + p.y * cross[1] + p.z * cross[2]);
    plane + sphere
}

/// `{J, H}(p)`; zero up to roundoff everywhere.
pub fn poisson_bracket_jh(p: &PhasePoint) -> f64 {
    bracket(p, &grad_j(p), &grad_h(p))
}

/// `X_H` in Cartesian components `(ẋ, ẏ, ż, u̇, v̇)`, valid on all of `S² × R²`.
pub fn cartesian_field_h(p: &PhasePoint) -> [f64; 5] {
    let dh = grad_h(p);
    let coord = |i: usize| {
        let mut e = [0.0; 5];
        e[i] = 1.0;
        bracket(p, &e, &dh)
    };
    [coord(0), coord(1), coord(2), coord(3), coord(4)]
}

/// Tangent vector in the `(u, v, z, θ)` chart, `θ` the azimuth on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartVector {
    pub du: f64,
    pub dv: f64,
    pub dz: f64,
    pub dtheta: f64,
}

/// `X_H` in the `(u, v, z, θ)` chart:
/// `(y/2, −x/2, (xv − yu)/2, z(xu + yv) / (2(1 − z²)))`.
///
/// Rejects points within [`POLE_GUARD`] of the poles, where the chart
/// degenerates.
pub fn vector_field_h(p: &PhasePoint) -> Result<ChartVector> {
    if p.z.abs() >= 1.0 - POLE_GUARD {
        return Err(Error::ChartSingularity { z: p.z });
    }
    let one_minus_z2 = 1.0 - p.z * p.z;
    Ok(ChartVector {
        du: 0.5 * p.y,
        dv: -0.5 * p.x,
        dz: 0.5 * (-p.y * p.u + p.x * p.v),
        dtheta: p.z * (p.x * p.u + p.y * p.v) / (2.0 * one_minus_z2),
    })
}

/// Which sheet of the pinched torus `Λ₀` a fiber parameter refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }
}

/// Coordinates `(z̃, θ̃)` on one sheet of `Λ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberParam {
    z_tilde: f64,
    theta_tilde: f64,
    sheet: Sheet,
}

impl FiberParam {
    pub fn new(z_tilde: f64, theta_tilde: f64, sheet: Sheet) -> Result<Self> {
        if !(-1.0..=1.0).contains(&z_tilde) {
            return Err(domain("fiber height z̃", z_tilde, "[-1, 1]"));
        }
        if !theta_tilde.is_finite() {
            return Err(domain("fiber angle θ̃", theta_tilde, "finite reals"));
        }
        Ok(FiberParam {
            z_tilde,
            theta_tilde,
            sheet,
        })
    }

    pub fn z_tilde(&self) -> f64 {
        self.z_tilde
    }

    pub fn theta_tilde(&self) -> f64 {
        self.theta_tilde
    }

    pub fn sheet(&self) -> Sheet {
        self.sheet
    }
}

/// The parametrization `S_ε` of `Λ₀`:
/// `r = √(2(1 − z̃))`, `t = θ̃ + επ/2`, `ρ = √(1 − z̃²)`, `θ = θ̃`, `z = z̃`,
/// with `u + iv = r e^{it}` and `x + iy = ρ e^{iθ}`.
pub fn singular_fiber(param: &FiberParam) -> PhasePoint {
    let z = param.z_tilde;
    let r = (2.0 * (1.0 - z)).sqrt();
    let t = param.theta_tilde + param.sheet.sign() * FRAC_PI_2;
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let theta = param.theta_tilde;
    PhasePoint {
        x: rho * theta.cos(),
        y: rho * theta.sin(),
        z,
        u: r * t.cos(),
        v: r * t.sin(),
    }
}

/// Output of [`flow_h`]. `points[i]` is the state at time `i * step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<PhasePoint>,
    pub step: f64,
    /// Set when the trajectory reached the pole neighbourhood (or produced a
    /// non-finite state) before `duration`; `points` then stops there.
    pub truncated: bool,
}

impl Trajectory {
    /// Largest deviation of `(J, H)` from its initial value along the path.
    pub fn max_momentum_drift(&self) -> f64 {
        let Some(first) = self.points.first() else {
            return 0.0;
        };
        let f0 = momentum_map(first);
        self.points
            .iter()
            .map(|p| {
                let f = momentum_map(p);
                (f.j - f0.j).abs().max((f.h - f0.h).abs())
            })
            .fold(0.0, f64::max)
    }
}

fn rk4_step(p: &PhasePoint, h: f64) -> PhasePoint {
    let s0 = p.as_array();
    let field = |s: &[f64; 5]| {
        cartesian_field_h(&PhasePoint {
            x: s[0],
            y: s[1],
            z: s[2],
            u: s[3],
            v: s[4],
        })
    };
    let shifted = |k: &[f64; 5], c: f64| {
        let mut s = s0;
        for i in 0..5 {
            s[i] += c * k[i];
        }
        s
    };
    let k1 = field(&s0);
    let k2 = field(&shifted(&k1, 0.5 * h));
    let k3 = field(&shifted(&k2, 0.5 * h));
    let k4 = field(&shifted(&k3, h));
    let mut s = s0;
    for i in 0..5 {
        s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    PhasePoint::project(s[0], s[1], s[2], s[3], s[4])
}

/// Integrates the flow of `X_H` with the classical fourth-order Runge–Kutta
/// scheme at a fixed step.
///
/// The step actually used is `duration / round(duration / step)`. A starting
/// point where `X_H` vanishes yields a constant trajectory; otherwise the
/// start must lie inside the `(u, v, z, θ)` chart and the trajectory is cut
/// off, with `truncated` set, if it leaves it.
pub fn flow_h(p0: &PhasePoint, duration: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(domain("flow step", step, "(0, ∞)"));
    }
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(domain("flow duration", duration, "[0, ∞)"));
    }
    let steps = (duration / step).round().max(if duration > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if steps > 0 { duration / steps as f64 } else { step };

    if cartesian_field_h(p0).iter().all(|c| *c == 0.0) {
        return Ok(Trajectory {
            points: vec![*p0; steps + 1],
            step: h,
            truncated: false,
        });
    }
    if p0.z.abs() >= 1.0 - POLE_GUARD {
        return Err(Error::ChartSingularity { z: p0.z });
    }

    let mut points = Vec::with_capacity(steps + 1);
    points.push(*p0);
    let mut current = *p0;
    let mut truncated = false;
    for _ in 0..steps {
        let next = rk4_step(&current, h);
        let finite = next.as_array().iter().all(|c| c.is_finite());
        if !finite || next.z.abs() >= 1.0 - POLE_GUARD {
            truncated = true;
            break;
        }
        points.push(next);
        current = next;
    }
    Ok(Trajectory {
        points,
        step: h,
        truncated,
    })
}

/// The boundary of the momentum image, `j = (s² − 3)/(2s)`,
/// `h = ±(s² − 1)/(2 s^{3/2})`, for `s ≥ 1`. Returns (upper, lower).
pub fn boundary_curve(s: f64) -> Result<(MomentumValue, MomentumValue)> {
    if !(s >= 1.0 && s.is_finite()) {
        return Err(domain("boundary parameter s", s, "[1, ∞)"));
    }
    let j = (s * s - 3.0) / (2.0 * s);
    let h = (s * s - 1.0) / (2.0 * s.powf(1.5));
    Ok((MomentumValue { j, h }, MomentumValue { j, h: -h }))
}
