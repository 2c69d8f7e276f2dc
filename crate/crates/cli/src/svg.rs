//! Minimal deterministic SVG scatter/line plots.

use std::fmt::Write as _;

use semitoric::fmt::sig;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Markers,
    Line,
    Dashed,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    pub color: &'static str,
}

impl Series {
    pub fn new(label: &str, points: Vec<(f64, f64)>, style: Style, color: &'static str) -> Self {
        Series {
            label: label.to_string(),
            points,
            style,
            color,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    pub marker_radius: Option<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn log_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let decades: Vec<f64> = (lo.log10().ceil() as i32..=hi.log10().floor() as i32)
        .map(|e| 10f64.powi(e))
        .collect();
    if decades.len() >= 2 {
        return decades;
    }
    (lo.log2().ceil() as i32..=hi.log2().floor() as i32)
        .map(|e| 2f64.powi(e))
        .collect()
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

impl Plot {
    fn data_bounds(&self) -> ((f64, f64), (f64, f64)) {
        let pts = self.series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
        let mut xb = (f64::INFINITY, f64::NEG_INFINITY);
        let mut yb = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            if self.log_x && x <= 0.0 {
                continue;
            }
            xb = (xb.0.min(x), xb.1.max(x));
            yb = (yb.0.min(y), yb.1.max(y));
        }
        if !xb.0.is_finite() {
            xb = (0.0, 1.0);
            yb = (0.0, 1.0);
        }
        let x = self.x_range.unwrap_or(if self.log_x {
            (xb.0 / 1.3, xb.1 * 1.3)
        } else {
            padded(xb.0, xb.1)
        });
        (x, self.y_range.unwrap_or(padded(yb.0, yb.1)))
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.data_bounds();
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let fx = |x: f64| {
            let t = if self.log_x {
                (x.ln() - x0.ln()) / (x1.ln() - x0.ln())
            } else {
                (x - x0) / (x1 - x0)
            };
            LEFT + t * pw
        };
        let fy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;
        let visible = |x: f64, y: f64| {
            x.is_finite() && y.is_finite() && (!self.log_x || x > 0.0) && x >= x0 && x <= x1 && y >= y0 && y <= y1
        };

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );

        let xt = if self.log_x { log_ticks(x0, x1) } else { linear_ticks(x0, x1) };
        for t in xt {
            let px = fx(t);
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ccc"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP,
                TOP + ph,
                TOP + ph + 18.0,
                sig(t, 4)
            );
        }
        for t in linear_ticks(y0, y1) {
            let py = fy(t);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ccc"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT,
                LEFT + pw,
                LEFT - 6.0,
                py + 4.0,
                sig(t, 4)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 18.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let radius = self.marker_radius.unwrap_or(2.5);
        for series in &self.series {
            match series.style {
                Style::Markers => {
                    let _ = writeln!(s, r#"<g fill="{}">"#, series.color);
                    for &(x, y) in series.points.iter().filter(|p| visible(p.0, p.1)) {
                        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}"/>"#, fx(x), fy(y));
                    }
                    s.push_str("</g>\n");
                }
                Style::Line | Style::Dashed => {
                    let path: Vec<String> = series
                        .points
                        .iter()
                        .filter(|p| visible(p.0, p.1))
                        .map(|&(x, y)| format!("{:.2},{:.2}", fx(x), fy(y)))
                        .collect();
                    if path.len() >= 2 {
                        let dash = if series.style == Style::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
                        let _ = writeln!(
                            s,
                            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                            path.join(" "),
                            series.color
                        );
                    }
                }
            }
        }

        for (i, series) in self.series.iter().enumerate().filter(|(_, s)| !s.label.is_empty()) {
            let y = TOP + 16.0 + 16.0 * i as f64;
            let x = LEFT + pw - 170.0;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{y:.1}">{}</text>"#,
                y - 9.0,
                series.color,
                x + 16.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks() {
        assert_eq!(linear_ticks(-1.0, 3.0), vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(log_ticks(2.0, 2000.0), vec![10.0, 100.0, 1000.0]);
        assert_eq!(log_ticks(2.0, 40.0), vec![2.0, 4.0, 8.0, 16.0, 32.0]);
    }

    #[test]
    fn renders_series() {
        let plot = Plot {
            title: "a < b".into(),
            log_x: true,
            series: vec![
                Series::new("pts", vec![(3.0, 1.0), (9.0, 2.0), (-1.0, 0.0)], Style::Markers, "black"),
                Series::new("", vec![(3.0, 1.0), (9.0, 2.0)], Style::Dashed, "red"),
            ],
            ..Plot::default()
        };
        let svg = plot.render();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg, plot.render());
    }
}
