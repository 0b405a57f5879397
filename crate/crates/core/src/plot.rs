//! Self-contained SVG line plots: fixed viewbox, axes, ticks, legend.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum YScale {
    #[default]
    Linear,
    /// `y ↦ asinh(y)`, which keeps sign and compresses large magnitudes.
    Asinh,
}

impl YScale {
    fn apply(self, y: f64) -> f64 {
        match self {
            YScale::Linear => y,
            YScale::Asinh => y.asinh(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub y_scale: YScale,
    pub series: Vec<Series>,
    /// Optional fixed vertical range in transformed units.
    pub y_range: Option<(f64, f64)>,
}

impl LinePlot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Self::default()
        }
    }

    pub fn with_y_scale(mut self, scale: YScale) -> Self {
        self.y_scale = scale;
        self
    }

    pub fn with_y_range(mut self, lo: f64, hi: f64) -> Self {
        self.y_range = Some((lo, hi));
        self
    }

    pub fn add_series(&mut self, label: impl Into<String>, points: Vec<(f64, f64)>) -> &mut Self {
        self.series.push(Series {
            label: label.into(),
            points,
        });
        self
    }

    fn bounds(&self) -> Option<((f64, f64), (f64, f64))> {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for &(px, py) in self.series.iter().flat_map(|s| &s.points) {
            let ty = self.y_scale.apply(py);
            if px.is_finite() && ty.is_finite() {
                x = (x.0.min(px), x.1.max(px));
                y = (y.0.min(ty), y.1.max(ty));
            }
        }
        if let Some(r) = self.y_range {
            y = r;
        }
        if !(x.0 <= x.1 && y.0 <= y.1) {
            return None;
        }
        let pad = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        Some((pad(x), pad(y)))
    }

    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            out,
            r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );

        if let Some(((xmin, xmax), (ymin, ymax))) = self.bounds() {
            let sx = |x: f64| x0 + (x - xmin) / (xmax - xmin) * (x1 - x0);
            let sy = |y: f64| y0 - (y - ymin) / (ymax - ymin) * (y0 - y1);

            for k in 0..=TICKS {
                let f = k as f64 / TICKS as f64;
                let (xv, yv) = (xmin + f * (xmax - xmin), ymin + f * (ymax - ymin));
                let (px, py) = (sx(xv), sy(yv));
                let _ = writeln!(
                    out,
                    r##"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{y1}" stroke="#ddd"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"##,
                    y0 + 16.0,
                    tick_label(xv)
                );
                let _ = writeln!(
                    out,
                    r##"<line x1="{x0}" y1="{py:.2}" x2="{x1}" y2="{py:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
                    x0 - 6.0,
                    py + 4.0,
                    tick_label(yv)
                );
            }
            if ymin < 0.0 && ymax > 0.0 {
                let _ = writeln!(
                    out,
                    r##"<line x1="{x0}" y1="{0:.2}" x2="{x1}" y2="{0:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
                    sy(0.0)
                );
            }

            for (k, series) in self.series.iter().enumerate() {
                let color = PALETTE[k % PALETTE.len()];
                for run in finite_runs(&series.points, self.y_scale) {
                    let pts: Vec<String> = run
                        .iter()
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y.clamp(ymin, ymax))))
                        .collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                        pts.join(" ")
                    );
                }
                let ly = y1 + 16.0 + 16.0 * k as f64;
                let _ = writeln!(
                    out,
                    r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                    x1 - 150.0,
                    x1 - 130.0,
                    x1 - 125.0,
                    ly + 4.0,
                    escape(&series.label)
                );
            }
        }

        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let y_label = match self.y_scale {
            YScale::Linear => self.y_label.clone(),
            YScale::Asinh => format!("asinh({})", self.y_label),
        };
        let _ = writeln!(
            out,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            (y0 + y1) / 2.0,
            escape(&y_label)
        );
        out.push_str("</svg>\n");
        out
    }
}

/// Splits a series at non-finite points, returning transformed runs.
fn finite_runs(points: &[(f64, f64)], scale: YScale) -> Vec<Vec<(f64, f64)>> {
    let mut runs = vec![Vec::new()];
    for &(x, y) in points {
        let ty = scale.apply(y);
        if x.is_finite() && ty.is_finite() {
            runs.last_mut().expect("nonempty").push((x, ty));
        } else if !runs.last().expect("nonempty").is_empty() {
            runs.push(Vec::new());
        }
    }
    runs.retain(|r| r.len() > 1);
    runs
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
