//! Weighted polygons of complexity one, the `G × T` action on them, and the
//! recovery of the polygon and height invariants from the joint spectrum.
//!
//! Coordinates are exact rationals. A polygon is either bounded (a closed
//! counter-clockwise vertex cycle) or unbounded: a counter-clockwise vertex
//! chain `v₀ … v_m` together with two rays, the region's boundary being
//! `{v₀ + t·first}`, the chain, and `{v_m + t·last}` for `t ≥ 0`.

mod develop;

pub use develop::{
    convex_hull, develop_spectrum, height_estimate, reference_distance, vertex_hausdorff,
    DevelopedColumn, DevelopedLattice, HeightEstimate, DEFAULT_J_MAX, SHEAR_RANGE,
};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{domain, Error, Result};

pub type Q = Rational64;

fn q(v: i64) -> Q {
    Q::from_integer(v)
}

fn q_to_f64(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x: q(x), y: q(y) }
    }

    pub fn from_ratio(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn to_f64(self) -> [f64; 2] {
        [q_to_f64(self.x), q_to_f64(self.y)]
    }

    fn minus(self, o: Point) -> Point {
        Point::from_ratio(self.x - o.x, self.y - o.y)
    }

    fn along(self, d: Point, t: Q) -> Point {
        Point::from_ratio(self.x + t * d.x, self.y + t * d.y)
    }

    fn neg(self) -> Point {
        Point::from_ratio(-self.x, -self.y)
    }

    fn is_zero(self) -> bool {
        self.x == q(0) && self.y == q(0)
    }
}

fn cross(a: Point, b: Point) -> Q {
    a.x * b.y - a.y * b.x
}

fn dot(a: Point, b: Point) -> Q {
    a.x * b.x + a.y * b.y
}

fn turn_angle(a: Point, b: Point) -> f64 {
    q_to_f64(cross(a, b)).atan2(q_to_f64(dot(a, b)))
}

/// Directions of the two unbounded edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rays {
    pub first: Point,
    pub last: Point,
}

/// `(Δ, ℓ_λ, ε)`: a rational convex polygon, the vertical cut `x = λ` and a
/// sign. The origin on the cut line is `(λ, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPolygon {
    vertices: Vec<Point>,
    rays: Option<Rays>,
    cut: Q,
    epsilon: i32,
}

/// Floating-point view of a polygon, for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonExport {
    pub vertices: Vec<[f64; 2]>,
    pub rays: Vec<[f64; 2]>,
    pub epsilon: i32,
    pub cut: f64,
}

fn check_epsilon(epsilon: i32) -> Result<()> {
    if epsilon == 1 || epsilon == -1 {
        Ok(())
    } else {
        Err(domain("ε", f64::from(epsilon), "{−1, +1}"))
    }
}

fn not_convex(reason: &str) -> Error {
    Error::Inadmissible {
        reason: reason.to_string(),
    }
}

fn dedup_cyclic(v: &mut Vec<Point>, cyclic: bool) {
    v.dedup();
    while cyclic && v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
}

/// Drops vertices where the boundary goes straight on.
fn drop_straight(vertices: &mut Vec<Point>, rays: Option<Rays>) {
    loop {
        let len = vertices.len();
        let dirs_at = |i: usize| -> Option<(Point, Point)> {
            let v = vertices[i];
            match rays {
                None => {
                    if len < 3 {
                        return None;
                    }
                    let prev = vertices[(i + len - 1) % len];
                    let next = vertices[(i + 1) % len];
                    Some((v.minus(prev), next.minus(v)))
                }
                Some(r) => {
                    let incoming = if i == 0 { r.first.neg() } else { v.minus(vertices[i - 1]) };
                    let outgoing = if i + 1 == len { r.last } else { vertices[i + 1].minus(v) };
                    Some((incoming, outgoing))
                }
            }
        };
        let straight = (0..len).find(|&i| {
            if rays.is_some() && len == 1 {
                return false;
            }
            dirs_at(i).is_some_and(|(a, b)| cross(a, b) == q(0) && dot(a, b) > q(0))
        });
        match straight {
            Some(i) => {
                vertices.remove(i);
            }
            None => return,
        }
    }
}

fn rotate_canonical(vertices: &mut [Point]) {
    if let Some(i) = (0..vertices.len()).min_by_key(|&i| vertices[i]) {
        vertices.rotate_left(i);
    }
}

impl WeightedPolygon {
    /// Normalizes (repeated and straight-through vertices removed, bounded
    /// cycles started at their lexicographically smallest vertex) and checks
    /// convexity and that the cut crosses the interior.
    pub fn new(mut vertices: Vec<Point>, rays: Option<Rays>, cut: Q, epsilon: i32) -> Result<Self> {
        check_epsilon(epsilon)?;
        dedup_cyclic(&mut vertices, rays.is_none());
        if let Some(r) = rays {
            if r.first.is_zero() || r.last.is_zero() {
                return Err(not_convex("zero ray direction"));
            }
        }
        drop_straight(&mut vertices, rays);
        if rays.is_none() {
            rotate_canonical(&mut vertices);
        }
        let p = WeightedPolygon {
            vertices,
            rays,
            cut,
            epsilon,
        };
        p.check_convex()?;
        p.check_cut()?;
        Ok(p)
    }

    fn directions(&self) -> Vec<Point> {
        let v = &self.vertices;
        let len = v.len();
        match self.rays {
            None => (0..len).map(|i| v[(i + 1) % len].minus(v[i])).collect(),
            Some(r) => {
                let mut d = vec![r.first.neg()];
                d.extend(v.windows(2).map(|w| w[1].minus(w[0])));
                d.push(r.last);
                d
            }
        }
    }

    fn check_convex(&self) -> Result<()> {
        let bounded = self.rays.is_none();
        if (bounded && self.vertices.len() < 3) || self.vertices.is_empty() {
            return Err(not_convex("degenerate polygon"));
        }
        let d = self.directions();
        let pairs: Vec<(Point, Point)> = if bounded {
            (0..d.len()).map(|i| (d[i], d[(i + 1) % d.len()])).collect()
        } else {
            d.windows(2).map(|w| (w[0], w[1])).collect()
        };
        let mut total = 0.0;
        for (a, b) in pairs {
            if cross(a, b) <= q(0) {
                return Err(not_convex("boundary turns right or folds back"));
            }
            total += turn_angle(a, b);
        }
        let ok = if bounded {
            (total - TAU).abs() < 1e-9
        } else {
            total <= PI + 1e-9
        };
        if ok {
            Ok(())
        } else {
            Err(not_convex("boundary winds more than once"))
        }
    }

    fn check_cut(&self) -> Result<()> {
        let xs = self.vertices.iter().map(|v| v.x);
        let mut lo = xs.clone().min().map(q_to_f64).unwrap_or(f64::INFINITY);
        let mut hi = xs.max().map(q_to_f64).unwrap_or(f64::NEG_INFINITY);
        if let Some(r) = self.rays {
            for d in [r.first, r.last] {
                if d.x > q(0) {
                    hi = f64::INFINITY;
                } else if d.x < q(0) {
                    lo = f64::NEG_INFINITY;
                }
            }
        }
        let c = q_to_f64(self.cut);
        if lo < c && c < hi {
            Ok(())
        } else {
            Err(domain("cut abscissa", c, "strictly inside the polygon's x-range"))
        }
    }

    /// Vertices in counter-clockwise order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn rays(&self) -> Option<Rays> {
        self.rays
    }

    pub fn cut(&self) -> Q {
        self.cut
    }

    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_none()
    }

    /// Whether flipping `ε` keeps the polygon convex.
    pub fn is_admissible(&self) -> bool {
        group_action(self, -1, 0).is_ok()
    }

    /// Boundary with the crossing points of the cut line inserted.
    fn split_at_cut(&self) -> Vec<Point> {
        let c = self.cut;
        let crosses = |v: Point, d: Point| (v.x < c && d.x > q(0)) || (v.x > c && d.x < q(0));
        let hit = |v: Point, d: Point| v.along(d, (c - v.x) / d.x);
        let v = &self.vertices;
        let len = v.len();
        let mut out = Vec::with_capacity(len + 4);
        if let Some(r) = self.rays {
            if crosses(v[0], r.first) {
                out.push(hit(v[0], r.first));
            }
        }
        for i in 0..len {
            out.push(v[i]);
            let next = match self.rays {
                None => Some(v[(i + 1) % len]),
                Some(_) => v.get(i + 1).copied(),
            };
            if let Some(w) = next {
                if (v[i].x - c) * (w.x - c) < q(0) {
                    out.push(hit(v[i], w.minus(v[i])));
                }
            }
        }
        if let Some(r) = self.rays {
            if crosses(v[len - 1], r.last) {
                out.push(hit(v[len - 1], r.last));
            }
        }
        out
    }

    /// `T^k` about `(λ, 0)` everywhere, composed with `T^n` on `x > λ`, and the
    /// new sign. Fails if the image is not convex.
    fn transformed(&self, k: i64, n: i64, epsilon: i32) -> Result<Self> {
        let c = self.cut;
        let (k, n) = (q(k), q(n));
        let map = |p: Point| {
            let s = if p.x > c { k + n } else { k };
            Point::from_ratio(p.x, p.y + s * (p.x - c))
        };
        let map_dir = |base: Point, d: Point| {
            let right = base.x > c || (base.x == c && d.x > q(0));
            let s = if right { k + n } else { k };
            Point::from_ratio(d.x, d.y + s * d.x)
        };
        let split = self.split_at_cut();
        let rays = self.rays.map(|r| Rays {
            first: map_dir(split[0], r.first),
            last: map_dir(split[split.len() - 1], r.last),
        });
        let vertices = split.into_iter().map(map).collect();
        WeightedPolygon::new(vertices, rays, self.cut, epsilon)
    }

    /// Lowest point of the polygon on the vertical line at `x`.
    pub fn bottom_at(&self, x: Q) -> Option<Q> {
        let v = &self.vertices;
        let mut ys = Vec::new();
        let mut segment = |a: Point, b: Point| {
            if a.x == b.x {
                if a.x == x {
                    ys.push(a.y.min(b.y));
                }
            } else if (a.x - x) * (b.x - x) <= q(0) {
                ys.push(a.along(b.minus(a), (x - a.x) / (b.x - a.x)).y);
            }
        };
        let len = v.len();
        for i in 0..len {
            match self.rays {
                None => segment(v[i], v[(i + 1) % len]),
                Some(_) if i + 1 < len => segment(v[i], v[i + 1]),
                Some(_) => {}
            }
        }
        if let Some(r) = self.rays {
            for (base, d) in [(v[0], r.first), (v[len - 1], r.last)] {
                if d.x == q(0) {
                    if base.x == x {
                        ys.push(base.y);
                    }
                } else {
                    let t = (x - base.x) / d.x;
                    if t >= q(0) {
                        ys.push(base.along(d, t).y);
                    }
                }
            }
        }
        ys.into_iter().min()
    }

    /// The part of the polygon with `x ≤ j_max`, as a bounded vertex cycle.
    pub fn clip(&self, j_max: Q) -> Result<Vec<Point>> {
        let mut ring = Vec::new();
        if let Some(r) = self.rays {
            let far = |base: Point, d: Point| -> Result<Point> {
                if d.x <= q(0) {
                    return Err(domain("clip abscissa", q_to_f64(j_max), "a polygon bounded on x ≤ j_max"));
                }
                let t = ((j_max + q(1) - base.x) / d.x).max(q(0));
                Ok(base.along(d, t))
            };
            ring.push(far(self.vertices[0], r.first)?);
            ring.extend(&self.vertices);
            ring.push(far(self.vertices[self.vertices.len() - 1], r.last)?);
        } else {
            ring.extend(&self.vertices);
        }
        let inside = |p: Point| p.x <= j_max;
        let mut out = Vec::new();
        for i in 0..ring.len() {
            let a = ring[i];
            let b = ring[(i + 1) % ring.len()];
            if inside(a) {
                out.push(a);
            }
            if inside(a) != inside(b) {
                out.push(a.along(b.minus(a), (j_max - a.x) / (b.x - a.x)));
            }
        }
        dedup_cyclic(&mut out, true);
        drop_straight(&mut out, None);
        rotate_canonical(&mut out);
        Ok(out)
    }

    pub fn export(&self) -> PolygonExport {
        PolygonExport {
            vertices: self.vertices.iter().map(|v| v.to_f64()).collect(),
            rays: self
                .rays
                .map(|r| vec![r.first.to_f64(), r.last.to_f64()])
                .unwrap_or_default(),
            epsilon: self.epsilon,
            cut: q_to_f64(self.cut),
        }
    }
}

/// `(ε′, T^k) · (Δ, ℓ_λ, ε) = (t_u(T^k Δ), ℓ_λ, ε′ε)` with `u = (ε − ε′ε)/2`.
///
/// `ε′ = 1` keeps the cut direction; `ε′ = −1` flips it.
pub fn group_action(p: &WeightedPolygon, eps_prime: i32, k: i64) -> Result<WeightedPolygon> {
    check_epsilon(eps_prime)?;
    let new_eps = eps_prime * p.epsilon;
    let u = i64::from((p.epsilon - new_eps) / 2);
    p.transformed(k, u, new_eps)
}

/// The two representatives for the coupled spin-oscillator, cut at `λ = 1`:
/// corners `(−1,0), (1,0)` for `ε = −1` and `(−1,0), (1,2)` for `ε = +1`.
pub fn reference_polygon(epsilon: i32) -> Result<WeightedPolygon> {
    check_epsilon(epsilon)?;
    let (vertices, dir) = if epsilon == -1 {
        (vec![Point::new(-1, 0), Point::new(1, 0)], Point::new(1, 1))
    } else {
        (vec![Point::new(1, 2), Point::new(-1, 0)], Point::new(1, 0))
    };
    WeightedPolygon::new(
        vertices,
        Some(Rays {
            first: dir,
            last: dir,
        }),
        q(1),
        epsilon,
    )
}

/// Image of the focus-focus point under the reference toric momentum maps.
pub fn focus_focus_image() -> Point {
    Point::new(1, 1)
}
