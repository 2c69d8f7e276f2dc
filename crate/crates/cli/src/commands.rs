use std::f64::consts::{FRAC_PI_2, LN_2, TAU};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::json;

use semitoric::classical::{
    boundary_curve, flow_h, momentum_map, poisson_bracket_jh, singular_fiber, FiberParam, MomentumValue,
    PhasePoint, Sheet,
};
use semitoric::fmt::sig;
use semitoric::inverse::{convergence_study, RecoverySeries, TRUE_A2, TRUE_B22};
use semitoric::polygon::{
    develop_spectrum, group_action, height_estimate, reference_distance, reference_polygon, DEFAULT_J_MAX,
};
use semitoric::quantum::{joint_spectrum, sigma_n, BandMatrix, JointSpectrum, QuantumParams, DEFAULT_TOL};
use semitoric::taylor::taylor_invariants;
use semitoric::Exec;

use crate::config::{Format, Settings, UsageError};
use crate::svg::{Plot, Series, Style};

const SYMMETRY_TOL: f64 = 1e-10;
const A1_TOL: f64 = 1e-9;
const A2_TOL: f64 = 1e-8;
const A2_LIMIT_TOL: f64 = 1e-12;
const CLASSICAL_TOL: f64 = 1e-10;
const FLOW_TOL: f64 = 1e-8;

/// A module invariant that did not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub module: &'static str,
    pub detail: String,
}

fn violation(module: &'static str, detail: String) -> Violation {
    Violation { module, detail }
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn json_text(value: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn check_columns(js: &JointSpectrum, params: &QuantumParams, out: &mut Vec<Violation>) {
    for c in &js.columns {
        let expected = 1 + c.index.min(u64::from(params.n())) as usize;
        if c.nus.len() != expected {
            out.push(violation(
                "quantum_spectrum",
                format!("column λ = {} has {} eigenvalues, expected {expected}", c.lambda, c.nus.len()),
            ));
        }
        let norm = BandMatrix::for_index(params, c.index).norm_bound();
        let d = c.nus.len();
        let asym = (0..d).map(|k| (c.nus[k] + c.nus[d - 1 - k]).abs()).fold(0.0, f64::max);
        if asym > SYMMETRY_TOL * norm {
            out.push(violation(
                "quantum_spectrum",
                format!("column λ = {} not symmetric: |E_k + E_(d−1−k)| = {asym:e}", c.lambda),
            ));
        }
    }
}

fn boundary_series(lambda_max: f64) -> (Series, Series) {
    let s_max = lambda_max + (lambda_max * lambda_max + 3.0).sqrt();
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    if s_max > 1.0 {
        for i in 0..=400 {
            let s = 1.0 + (s_max - 1.0) * f64::from(i) / 400.0;
            if let Ok((u, l)) = boundary_curve(s) {
                upper.push((u.j, u.h));
                lower.push((l.j, l.h));
            }
        }
    }
    (
        Series::new("momentum image boundary", upper, Style::Line, "#1f77b4"),
        Series::new("", lower, Style::Line, "#1f77b4"),
    )
}

fn spectrum_svg(js: &JointSpectrum, s: &Settings) -> String {
    let (upper, lower) = boundary_series(s.lambda_max);
    let h_max = upper.points.iter().map(|p| p.1).fold(0.0, f64::max).max(0.5);
    let focus = MomentumValue::FOCUS_FOCUS;
    Plot {
        title: format!("Joint spectrum of (Ĵ, Ĥ), n = {}, ħ = {}", js.n, sig(js.hbar, 6)),
        x_label: "λ (J)".into(),
        y_label: "ν (H)".into(),
        series: vec![
            Series::new("joint eigenvalues", js.points().collect(), Style::Markers, "black"),
            upper,
            lower,
            Series::new("focus-focus value", vec![(focus.j, focus.h)], Style::Markers, "#d62728"),
        ],
        x_range: Some((s.lambda_min - 0.1, s.lambda_max + 0.1)),
        y_range: Some((-1.05 * h_max, 1.05 * h_max)),
        marker_radius: Some(if js.len() > 2000 { 1.0 } else { 2.0 }),
        ..Plot::default()
    }
    .render()
}

pub fn spectrum(s: &Settings) -> Result<Vec<Violation>> {
    let params = QuantumParams::new(s.n);
    let js = joint_spectrum(&params, s.lambda_min, s.lambda_max, s.tol_or(DEFAULT_TOL), Exec::Parallel)?;
    let mut violations = Vec::new();
    check_columns(&js, &params, &mut violations);
    let content = match s.format_or(Format::Csv) {
        Format::Csv => js.to_csv(),
        Format::Json => json_text(&serde_json::to_value(&js)?)?,
        Format::Svg => spectrum_svg(&js, s),
    };
    emit(s.output.as_deref(), &content)?;
    Ok(violations)
}

pub fn sigma(s: &Settings) -> Result<Vec<Violation>> {
    let params = QuantumParams::new(s.n);
    let tol = s.tol_or(DEFAULT_TOL);
    let values = sigma_n(&params, tol, Exec::Parallel);
    let norm = BandMatrix::for_index(&params, u64::from(s.n)).norm_bound();
    let mut violations = Vec::new();
    if values.len() != s.n as usize + 1 {
        violations.push(violation(
            "quantum_spectrum",
            format!("|Σ(n)| = {}, expected {}", values.len(), s.n + 1),
        ));
    }
    let d = values.len();
    let asym = (0..d).map(|k| (values[k] + values[d - 1 - k]).abs()).fold(0.0, f64::max);
    if asym > SYMMETRY_TOL * norm {
        violations.push(violation("quantum_spectrum", format!("Σ(n) ≠ −Σ(n): {asym:e}")));
    }
    let closest = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let zero_present = closest <= 1e3 * tol * norm;
    if zero_present != (s.n % 2 == 0) {
        violations.push(violation(
            "quantum_spectrum",
            format!("0 ∈ Σ(n) should hold exactly for even n; n = {}, min |E| = {closest:e}", s.n),
        ));
    }
    let content = match s.format_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("index,nu\n");
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{i},{}", sig(*v, 17));
            }
            out
        }
        Format::Json => json_text(&json!({ "n": s.n, "hbar": params.hbar(), "eigenvalues": values }))?,
        Format::Svg => Plot {
            title: format!("Σ(n) for n = {}", s.n),
            x_label: "index".into(),
            y_label: "eigenvalue".into(),
            series: vec![Series::new(
                "Σ(n)",
                values.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect(),
                Style::Markers,
                "black",
            )],
            ..Plot::default()
        }
        .render(),
    };
    emit(s.output.as_deref(), &content)?;
    Ok(violations)
}

pub fn invariants(s: &Settings) -> Result<Vec<Violation>> {
    let inv = taylor_invariants(s.tol_or(A2_LIMIT_TOL))?;
    let mut violations = Vec::new();
    if !s.blind {
        if (inv.a1 - FRAC_PI_2).abs() >= A1_TOL {
            violations.push(violation("taylor_invariant", format!("a1 = {} differs from π/2", inv.a1)));
        }
        if (inv.a2 - 5.0 * LN_2).abs() >= A2_TOL {
            violations.push(violation("taylor_invariant", format!("a2 = {} differs from 5 ln 2", inv.a2)));
        }
    }
    let content = match s.format_or(Format::Json) {
        Format::Json => json_text(&json!({
            "a1": inv.a1,
            "a2": inv.a2,
            "a2_over_ln2": inv.a2_over_ln2(),
            "diagnostics": inv.diagnostics,
        }))?,
        Format::Csv => format!(
            "quantity,value\na1,{}\na2,{}\na2_over_ln2,{}\n",
            sig(inv.a1, 17),
            sig(inv.a2, 17),
            sig(inv.a2_over_ln2(), 17)
        ),
        Format::Svg => Plot {
            title: "a2 bracket as u → 0".into(),
            x_label: "u".into(),
            y_label: "bracket".into(),
            log_x: true,
            series: vec![
                Series::new("bracket", inv.diagnostics.clone(), Style::Markers, "black"),
                Series::new(
                    "limit",
                    vec![(inv.diagnostics.last().map_or(1e-8, |d| d.0), inv.a2), (1.0, inv.a2)],
                    Style::Dashed,
                    "#d62728",
                ),
            ],
            ..Plot::default()
        }
        .render(),
    };
    emit(s.output.as_deref(), &content)?;
    Ok(violations)
}

fn recovery_json(series: &RecoverySeries, blind: bool) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = series
        .rows
        .iter()
        .map(|r| {
            let mut row = json!({
                "k": r.k, "n": r.n, "hbar": r.hbar, "t_min": r.t_min,
                "b22_simple": r.b22_simple, "b22_accel": r.b22_accel,
                "a2": r.a2, "a2_over_ln2": r.a2_over_ln2,
            });
            if !blind {
                row["err_b22"] = json!(r.err_b22);
                row["err_a2"] = json!(r.err_a2);
            }
            row
        })
        .collect();
    json!({ "use_true_b22": series.use_true_b22, "rows": rows })
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("recover");
    path.with_file_name(format!("{stem}_{suffix}.svg"))
}

fn recovery_plots(series: &RecoverySeries, blind: bool) -> (String, String) {
    let xs: Vec<f64> = series.rows.iter().map(|r| f64::from(r.n)).collect();
    let span = (xs.first().copied().unwrap_or(1.0), xs.last().copied().unwrap_or(1.0));
    let truth = |v: f64| Series::new("exact", vec![(span.0, v), (span.1, v)], Style::Dashed, "#888");
    let mut b22 = vec![
        Series::new(
            "simple",
            series.rows.iter().map(|r| (f64::from(r.n), r.b22_simple)).collect(),
            Style::Markers,
            "#1f77b4",
        ),
        Series::new(
            "accelerated",
            series.rows.iter().map(|r| (f64::from(r.n), r.b22_accel)).collect(),
            Style::Markers,
            "#d62728",
        ),
    ];
    let mut a2 = vec![Series::new(
        "a2 / ln 2",
        series.rows.iter().map(|r| (f64::from(r.n), r.a2_over_ln2)).collect(),
        Style::Markers,
        "#d62728",
    )];
    if !blind {
        b22.push(truth(TRUE_B22));
        a2.push(truth(TRUE_A2 / LN_2));
    }
    let plot = |title: &str, y_label: &str, series: Vec<Series>| {
        Plot {
            title: title.into(),
            x_label: "n = 2^k + 1".into(),
            y_label: y_label.into(),
            log_x: true,
            series,
            ..Plot::default()
        }
        .render()
    };
    (plot("B22 estimates", "B22", b22), plot("a2 estimate", "a2 / ln 2", a2))
}

pub fn recover(s: &Settings) -> Result<Vec<Violation>> {
    let format = s.format_or(Format::Csv);
    if format == Format::Svg {
        return Err(UsageError("recover writes csv or json; its two SVG plots accompany --output".into()).into());
    }
    let series = convergence_study(s.k_min, s.k_max, s.use_true_b22, Exec::Parallel)?;
    let mut violations = Vec::new();
    let straddle = series.straddle_violations();
    if !straddle.is_empty() {
        violations.push(violation(
            "inverse_spectral",
            format!("minimal spacing does not straddle 0 at k = {straddle:?}"),
        ));
    }
    if !s.blind {
        for r in series.rows.iter().filter(|r| r.k >= 3) {
            if r.err_b22.abs() >= r.err_b22_simple().abs() {
                violations.push(violation(
                    "inverse_spectral",
                    format!("k = {}: accelerated B22 error not below the simple estimator's", r.k),
                ));
            }
        }
    }
    let content = match format {
        Format::Json => json_text(&recovery_json(&series, s.blind))?,
        _ => series.to_csv(s.blind),
    };
    emit(s.output.as_deref(), &content)?;
    if let Some(path) = &s.output {
        let (b22, a2) = recovery_plots(&series, s.blind);
        emit(Some(&sibling(path, "b22")), &b22)?;
        emit(Some(&sibling(path, "a2")), &a2)?;
    }
    Ok(violations)
}

pub fn polygon(s: &Settings) -> Result<Vec<Violation>> {
    let reference = reference_polygon(s.epsilon)?;
    let mut violations = Vec::new();
    if !reference.is_admissible() {
        violations.push(violation("polygon_invariant", "reference polygon is not admissible".into()));
    }
    if group_action(&reference, -1, 0).ok() != reference_polygon(-s.epsilon).ok() {
        violations.push(violation(
            "polygon_invariant",
            "the two reference polygons are not related by the sign flip".into(),
        ));
    }
    let format = s.format_or(Format::Json);
    if format == Format::Json {
        emit(s.output.as_deref(), &json_text(&serde_json::to_value(reference.export())?)?)?;
        return Ok(violations);
    }
    let params = QuantumParams::new(s.n);
    let js = joint_spectrum(&params, s.lambda_min, s.lambda_max, s.tol_or(DEFAULT_TOL), Exec::Parallel)?;
    let dev = develop_spectrum(&js, 1.0, s.epsilon)?;
    let original: Vec<usize> = js.columns.iter().map(|c| c.nus.len()).collect();
    if dev.column_counts() != original {
        violations.push(violation("polygon_invariant", "development changed a column count".into()));
    }
    let j_max = s.lambda_max.min(DEFAULT_J_MAX as f64);
    let mut note = format!("shear {} right of the cut", dev.shear);
    if s.lambda_max >= DEFAULT_J_MAX as f64 {
        let _ = write!(note, ", hull-to-reference vertex distance {}", sig(reference_distance(&dev, DEFAULT_J_MAX)?, 6));
    }
    match height_estimate(&js, &params) {
        Ok(h) => {
            let _ = write!(note, ", height h = {} (column height {})", sig(h.h, 12), sig(h.column_height, 12));
        }
        Err(e) => {
            let _ = write!(note, ", no height estimate: {e}");
        }
    }
    eprintln!("{note}");
    let content = match format {
        Format::Svg => {
            let mut hull = dev.hull(j_max);
            if let Some(first) = hull.first().copied() {
                hull.push(first);
            }
            let mut refp: Vec<(f64, f64)> = reference
                .clip(semitoric::polygon::Q::from_integer(DEFAULT_J_MAX))?
                .into_iter()
                .map(|p| {
                    let [x, y] = p.to_f64();
                    (x, y)
                })
                .collect();
            if let Some(first) = refp.first().copied() {
                refp.push(first);
            }
            Plot {
                title: format!("Developed joint spectrum, n = {}, ε = {}", s.n, s.epsilon),
                x_label: "λ".into(),
                y_label: "developed ν".into(),
                series: vec![
                    Series::new("developed eigenvalues", dev.points().iter().map(|p| (p[0], p[1])).collect(), Style::Markers, "black"),
                    Series::new("convex hull", hull.iter().map(|p| (p[0], p[1])).collect(), Style::Line, "#d62728"),
                    Series::new("reference polygon", refp, Style::Dashed, "#1f77b4"),
                ],
                marker_radius: Some(if dev.points().len() > 2000 { 1.0 } else { 2.0 }),
                ..Plot::default()
            }
            .render()
        }
        _ => dev.to_csv(),
    };
    emit(s.output.as_deref(), &content)?;
    Ok(violations)
}

/// Deterministic, well-spread sample points (a Kronecker sequence).
fn sample_point(i: u32) -> PhasePoint {
    let frac = |a: f64| (f64::from(i) * a).fract();
    let z = 2.0 * frac(2f64.sqrt()) - 1.0;
    let theta = TAU * frac(3f64.sqrt());
    let u = 6.0 * frac(5f64.sqrt()) - 3.0;
    let v = 6.0 * frac(7f64.sqrt()) - 3.0;
    PhasePoint::from_height_angle(z, theta, u, v).expect("sample point on the sphere")
}

pub fn classical_verify(s: &Settings) -> Result<Vec<Violation>> {
    let tol = s.tol_or(CLASSICAL_TOL);
    let bracket = (1..=1000)
        .map(|i| poisson_bracket_jh(&sample_point(i)).abs())
        .fold(0.0, f64::max);
    let mut fiber: f64 = 0.0;
    for i in 0..100 {
        for j in 0..100 {
            let z = -1.0 + 2.0 * f64::from(i) / 99.0;
            let theta = TAU * f64::from(j) / 100.0;
            for sheet in [Sheet::Plus, Sheet::Minus] {
                let p = singular_fiber(&FiberParam::new(z, theta, sheet)?);
                fiber = fiber.max(momentum_map(&p).distance(&MomentumValue::FOCUS_FOCUS));
            }
        }
    }
    let mut drift: f64 = 0.0;
    for i in 1..=20 {
        drift = drift.max(flow_h(&sample_point(i * 37), 1.0, 1e-3)?.max_momentum_drift());
    }
    let checks = [
        ("poisson_bracket", bracket, tol),
        ("singular_fiber", fiber, tol),
        ("flow_conservation", drift, FLOW_TOL),
    ];
    let violations = checks
        .iter()
        .filter(|c| !(c.1 < c.2))
        .map(|c| violation("classical_core", format!("{} = {:e} exceeds {:e}", c.0, c.1, c.2)))
        .collect();
    let content = match s.format_or(Format::Csv) {
        Format::Json => json_text(&serde_json::Value::Array(
            checks
                .iter()
                .map(|c| json!({ "check": c.0, "value": c.1, "tolerance": c.2, "pass": c.1 < c.2 }))
                .collect(),
        ))?,
        Format::Csv => {
            let mut out = String::from("check,value,tolerance,pass\n");
            for c in &checks {
                let _ = writeln!(out, "{},{},{},{}", c.0, sig(c.1, 6), sig(c.2, 6), c.1 < c.2);
            }
            out
        }
        Format::Svg => return Err(UsageError("classical-verify writes csv or json".into()).into()),
    };
    emit(s.output.as_deref(), &content)?;
    Ok(violations)
}
