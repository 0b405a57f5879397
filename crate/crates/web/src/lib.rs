//! Browser bindings: each operation returns an SVG chart plus a short text summary.

use wasm_bindgen::prelude::*;

use freeprice_core::analysis::{bifurcation_point, estimate_period, DEFAULT_DISCARD};
use freeprice_core::plot::{LinePlot, YScale};
use freeprice_core::solver::{simulate, SimConfig};
use freeprice_core::spectral::{crossing_r_cos, crossing_r_sin, find_crossings, spectrum_report};
use freeprice_core::waves::{build_wave, solve_rho, Admissible};
use freeprice_core::{ModelConfig, Nonlinearity};

/// Longest simulation the page will run, to keep the tab responsive.
pub const MAX_T_END: f64 = 5.0;

#[wasm_bindgen]
pub struct Panel {
    svg: String,
    summary: String,
}

#[wasm_bindgen]
impl Panel {
    #[wasm_bindgen(getter)]
    pub fn svg(&self) -> String {
        self.svg.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

fn to_js(r: Result<Panel, String>) -> Result<Panel, JsError> {
    r.map_err(|e| JsError::new(&e))
}

fn parse_phi(name: &str) -> Result<Nonlinearity, String> {
    name.parse().map_err(|e: freeprice_core::Error| e.to_string())
}

/// Crossing curves up to `a_max` and the stability picture at coupling `r`.
#[wasm_bindgen]
pub fn spectrum(r: f64, a_max: f64) -> Result<Panel, JsError> {
    to_js(spectrum_panel(r, a_max))
}

/// Traveling wave with speed `c` and amplitude `rho`.
#[wasm_bindgen]
pub fn wave(c: f64, rho: f64, phi: &str) -> Result<Panel, JsError> {
    to_js(wave_panel(c, rho, phi))
}

/// Price trajectory for a run of length `t_end` from the default perturbation.
#[wasm_bindgen]
pub fn run(r: f64, phi: &str, t_end: f64) -> Result<Panel, JsError> {
    to_js(run_panel(r, phi, t_end))
}

pub fn spectrum_panel(r: f64, a_max: f64) -> Result<Panel, String> {
    if !(a_max > 0.0 && a_max <= 60.0) {
        return Err("a_max must lie in (0, 60]".into());
    }
    let crossings = find_crossings(a_max).map_err(|e| e.to_string())?;
    let report = spectrum_report(r, a_max).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (1..=1500).map(|k| a_max * k as f64 / 1500.0).collect();

    let mut plot = LinePlot::new("Imaginary-axis crossings", "a", "R").with_y_scale(YScale::Asinh);
    plot.add_series("R = -e^a sin(a)/a", grid.iter().map(|&a| (a, crossing_r_sin(a))).collect());
    plot.add_series("R = (1 - e^a cos(a))/a", grid.iter().map(|&a| (a, crossing_r_cos(a))).collect());
    plot.add_series("chosen R", vec![(0.0, r), (a_max, r)]);

    let mut lines = vec![format!("crossings up to a = {a_max}: {}", crossings.len())];
    for c in crossings.iter().take(4) {
        lines.push(format!("  a = {:.6}  R = {:.6}  lambda = {:.4}i", c.a_value, c.r_value, c.lambda.im));
    }
    lines.push(format!("unstable oscillatory pairs at R = {r}: {}", report.unstable_pairs()));
    match report.real_unstable {
        Some(ev) => lines.push(format!("real unstable eigenvalue: {:.6}", ev.lambda)),
        None => lines.push("no real unstable eigenvalue".into()),
    }
    Ok(Panel {
        svg: plot.to_svg(),
        summary: lines.join("\n"),
    })
}

pub fn wave_panel(c: f64, rho: f64, phi: &str) -> Result<Panel, String> {
    let phi = parse_phi(phi)?;
    let wave = build_wave(c, rho, phi).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (0..=800).map(|k| -8.0 + 16.0 * k as f64 / 800.0).collect();
    let mut plot = LinePlot::new(format!("Traveling wave, {phi}"), "x", "w");
    plot.add_series(format!("c={c}, rho={rho}"), xs.iter().map(|&x| (x, wave.eval(x))).collect());

    let (lo, hi) = wave.limits();
    let mut lines = vec![
        format!("required R = {}", wave.required_r),
        format!("limits: w(-inf) = {lo}, w(+inf) = {hi}"),
    ];
    match solve_rho(wave.required_r, phi).admissible {
        Admissible::AllRho => lines.push("every amplitude travels at this R".into()),
        Admissible::Roots(v) => lines.push(format!("amplitudes admitted at this R: {v:?}")),
    }
    Ok(Panel {
        svg: plot.to_svg(),
        summary: lines.join("\n"),
    })
}

pub fn run_panel(r: f64, phi: &str, t_end: f64) -> Result<Panel, String> {
    if !(t_end > 0.0 && t_end <= MAX_T_END) {
        return Err(format!("t_end must lie in (0, {MAX_T_END}]"));
    }
    let mut config = SimConfig::with_model(ModelConfig::new(r, parse_phi(phi)?));
    config.t_end = t_end;
    config.snapshot_stride = config.steps();
    let trace = simulate(&config).map_err(|e| e.to_string())?;

    let mut plot = LinePlot::new(format!("Price, R={r}, {}", config.model.nonlinearity), "t", "p");
    let stride = (trace.times.len() / 2000).max(1);
    let points = trace.times.iter().copied().zip(trace.p_series.iter().copied());
    plot.add_series("p(t)", points.step_by(stride).collect());

    let point = bifurcation_point(r, &trace);
    let mut lines = vec![
        format!("classification: {}", point.classification),
        format!("reached t = {}", trace.t_end()),
        format!("trailing peak-to-peak of p: {:.4e}", point.amplitude),
    ];
    if let Some(est) = estimate_period(&trace, DEFAULT_DISCARD).filter(|_| trace.is_complete()) {
        lines.push(format!("period: {:.5} over {} cycles", est.period, est.cycles));
    }
    Ok(Panel {
        svg: plot.to_svg(),
        summary: lines.join("\n"),
    })
}
