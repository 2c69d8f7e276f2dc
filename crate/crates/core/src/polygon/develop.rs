//! Heuristic development of the joint spectrum into the lattice `ħZ²`, and
//! the quantum height estimate.
//!
//! Every column is re-indexed bottom-aligned, `ν ↦ ħ·i`, and the columns right
//! of the cut are then sheared by an integer `k`, chosen so that the boundary
//! away from the cut half-line (the top for `ε = −1`, the bottom for `ε = +1`)
//! is as straight as possible in the least-squares sense.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{q, reference_polygon};
use crate::error::{domain, Error, Result};
use crate::fmt::sig;
use crate::quantum::{JointSpectrum, QuantumParams};

/// Shears tried during development: `−SHEAR_RANGE ..= SHEAR_RANGE`.
pub const SHEAR_RANGE: i64 = 3;

/// Default abscissa at which unbounded polygons are clipped for comparison.
pub const DEFAULT_J_MAX: i64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DevelopedColumn {
    pub lambda: f64,
    pub nus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DevelopedLattice {
    pub n: u32,
    pub hbar: f64,
    pub cut: f64,
    pub epsilon: i32,
    /// Shear applied right of the cut; the left half is never sheared.
    pub shear: i64,
    pub columns: Vec<DevelopedColumn>,
}

impl DevelopedLattice {
    pub fn points(&self) -> Vec<[f64; 2]> {
        self.columns
            .iter()
            .flat_map(|c| c.nus.iter().map(move |nu| [c.lambda, *nu]))
            .collect()
    }

    pub fn column_counts(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.nus.len()).collect()
    }

    /// CSV with header `lambda,nu_developed`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,nu_developed\n");
        for [lambda, nu] in self.points() {
            let _ = writeln!(out, "{},{}", sig(lambda, 17), sig(nu, 17));
        }
        out
    }

    /// Convex hull of the developed points with `λ ≤ j_max`.
    pub fn hull(&self, j_max: f64) -> Vec<[f64; 2]> {
        let pts: Vec<[f64; 2]> = self.points().into_iter().filter(|p| p[0] <= j_max + 1e-9).collect();
        convex_hull(&pts, 1e-9 * self.hbar * self.hbar)
    }
}

/// Residual sum of squares of the least-squares line through `pts`.
fn line_residual(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    if pts.len() < 3 {
        return 0.0;
    }
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (sxx, sxy, syy) = pts.iter().fold((0.0, 0.0, 0.0), |a, p| {
        let (dx, dy) = (p.0 - mx, p.1 - my);
        (a.0 + dx * dx, a.1 + dx * dy, a.2 + dy * dy)
    });
    if sxx == 0.0 {
        return syy;
    }
    (syy - sxy * sxy / sxx).max(0.0)
}

/// Develops `js` across the vertical cut at `cut_lambda`.
pub fn develop_spectrum(js: &JointSpectrum, cut_lambda: f64, epsilon: i32) -> Result<DevelopedLattice> {
    if epsilon != 1 && epsilon != -1 {
        return Err(domain("ε", f64::from(epsilon), "{−1, +1}"));
    }
    if js.columns.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "development needs at least 2 columns, got {}",
            js.columns.len()
        )));
    }
    let (first, last) = (js.columns[0].lambda, js.columns[js.columns.len() - 1].lambda);
    if !(first <= cut_lambda && cut_lambda <= last) {
        return Err(domain("cut abscissa", cut_lambda, "within the spectrum's λ range"));
    }
    let hbar = js.hbar;
    let offset = |lambda: f64, k: i64| k as f64 * (lambda - cut_lambda).max(0.0);
    let boundary: Vec<(f64, f64)> = js
        .columns
        .iter()
        .map(|c| {
            let y = if epsilon == -1 { hbar * (c.nus.len() - 1) as f64 } else { 0.0 };
            (c.lambda, y)
        })
        .collect();
    let mut shear = 0;
    let mut best = f64::INFINITY;
    for k in (0..=SHEAR_RANGE).flat_map(|a| if a == 0 { vec![0] } else { vec![a, -a] }) {
        let pts: Vec<(f64, f64)> = boundary.iter().map(|&(l, y)| (l, y + offset(l, k))).collect();
        let r = line_residual(&pts);
        if r < best - 1e-12 * (1.0 + best.abs().min(1e300)) {
            best = r;
            shear = k;
        }
    }
    let columns = js
        .columns
        .iter()
        .map(|c| DevelopedColumn {
            lambda: c.lambda,
            nus: (0..c.nus.len())
                .map(|i| hbar * i as f64 + offset(c.lambda, shear))
                .collect(),
        })
        .collect();
    Ok(DevelopedLattice {
        n: js.n,
        hbar,
        cut: cut_lambda,
        epsilon,
        shear,
        columns,
    })
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise convex hull (monotone chain), starting at the
/// lexicographically smallest point. Turns with `|cross| ≤ tol` count as
/// straight and are dropped.
pub fn convex_hull(points: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut h: Vec<[f64; 2]> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = h.len();
        let ordered: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &pt in ordered {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], pt) <= tol {
                h.pop();
            }
            h.push(pt);
        }
        h.pop();
    }
    h
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Hausdorff distance between two finite vertex sets.
pub fn vertex_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one_way = |s: &[[f64; 2]], t: &[[f64; 2]]| {
        s.iter()
            .map(|p| t.iter().map(|r| dist(*p, *r)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Vertex distance between the hull of the developed points and the
/// reference polygon of the same sign, both clipped at `λ ≤ j_max`.
pub fn reference_distance(lattice: &DevelopedLattice, j_max: i64) -> Result<f64> {
    let reference: Vec<[f64; 2]> = reference_polygon(lattice.epsilon)?
        .clip(q(j_max))?
        .into_iter()
        .map(|p| p.to_f64())
        .collect();
    Ok(vertex_hausdorff(&lattice.hull(j_max as f64), &reference))
}

/// Where the column dimension stops growing, and the height read off there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightEstimate {
    pub lambda: f64,
    pub dimension: usize,
    /// `(dimension − 1) ħ`: the Liouville volume of the reduced space.
    pub column_height: f64,
    /// Half the column height.
    pub h: f64,
}

/// Finds the first column `m` with `dim(m−1) < dim(m) = dim(m+1)` for
/// consecutive indices and returns the height read off there.
pub fn height_estimate(js: &JointSpectrum, params: &QuantumParams) -> Result<HeightEstimate> {
    let c = &js.columns;
    let found = (1..c.len().saturating_sub(1)).find(|&i| {
        c[i - 1].index + 1 == c[i].index
            && c[i].index + 1 == c[i + 1].index
            && c[i - 1].nus.len() < c[i].nus.len()
            && c[i].nus.len() == c[i + 1].nus.len()
    });
    let i = found.ok_or_else(|| {
        Error::InsufficientData("no plateau in the column dimensions over the given λ range".to_string())
    })?;
    let dimension = c[i].nus.len();
    let column_height = (dimension - 1) as f64 * params.hbar();
    Ok(HeightEstimate {
        lambda: c[i].lambda,
        dimension,
        column_height,
        h: 0.5 * column_height,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::quantum::joint_spectrum;

    fn spectrum(n: u32, lo: f64, hi: f64) -> JointSpectrum {
        joint_spectrum(&QuantumParams::new(n), lo, hi, 1e-12, Exec::Parallel).unwrap()
    }

    #[test]
    fn preserves_column_counts() {
        let js = spectrum(13, -1.0, 3.0);
        for eps in [-1, 1] {
            let d = develop_spectrum(&js, 1.0, eps).unwrap();
            let orig: Vec<usize> = js.columns.iter().map(|c| c.nus.len()).collect();
            assert_eq!(d.column_counts(), orig);
        }
    }

    #[test]
    fn shear_choice_per_sign() {
        let js = spectrum(13, -1.0, 3.0);
        assert_eq!(develop_spectrum(&js, 1.0, -1).unwrap().shear, 1);
        assert_eq!(develop_spectrum(&js, 1.0, 1).unwrap().shear, 0);
    }

    #[test]
    fn single_sided_is_plain_reindexing() {
        let js = spectrum(13, -1.0, 0.9);
        let cut = js.columns.last().unwrap().lambda;
        let d = develop_spectrum(&js, cut, -1).unwrap();
        assert_eq!(d.shear, 0);
        for c in &d.columns {
            for (i, nu) in c.nus.iter().enumerate() {
                assert_eq!(*nu, js.hbar * i as f64);
            }
        }
    }

    #[test]
    fn development_errors() {
        let js = spectrum(5, -1.0, -0.5);
        assert_eq!(js.columns.len(), 1);
        assert!(develop_spectrum(&js, -0.6, -1).is_err());
        let js = spectrum(5, -1.0, 3.0);
        assert!(develop_spectrum(&js, 5.0, -1).is_err());
        assert!(develop_spectrum(&js, 1.0, 0).is_err());
    }

    #[test]
    fn hull_matches_reference_shape() {
        let js = spectrum(55, -1.0, 3.0);
        let d = develop_spectrum(&js, 1.0, -1).unwrap();
        assert_eq!(d.hull(3.0).len(), 4);
        assert!(reference_distance(&d, 3).unwrap() < 2.0 * d.hbar);
    }

    #[test]
    fn hull_basics() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0], [0.5, 0.2]];
        assert_eq!(convex_hull(&pts, 1e-12), vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]);
        assert_eq!(vertex_hausdorff(&pts[..2], &pts[..2]), 0.0);
        assert_eq!(vertex_hausdorff(&[[0.0, 0.0]], &[[3.0, 4.0]]), 5.0);
    }

    #[test]
    fn height_n13() {
        let p = QuantumParams::new(13);
        let js = spectrum(13, -1.0, 3.0);
        let h = height_estimate(&js, &p).unwrap();
        assert!((h.lambda - 1.0).abs() < 1e-14);
        assert_eq!(h.dimension, 14);
        assert!((h.column_height - 13.0 / 7.0).abs() < 1e-14);
        assert!((h.h - 13.0 / 14.0).abs() < 1e-14);
    }

    #[test]
    fn no_plateau_is_an_error() {
        let p = QuantumParams::new(13);
        assert!(height_estimate(&spectrum(13, -1.0, 0.5), &p).is_err());
        assert!(height_estimate(&spectrum(13, 1.5, 3.0), &p).is_err());
    }
}
