use anyhow::Result;

use freeprice_core::analysis::{
    bifurcation_point, estimate_period, half_period_antisymmetry, sign_sanity, sweep_r, Classification,
};
use freeprice_core::plot::{LinePlot, YScale};
use freeprice_core::selfcheck::{all_passed, run_verify, VerifyOptions};
use freeprice_core::solver::{simulate, Grid1D, InitialCondition, SimConfig, SimTrace, Snapshot, TraceStatus};
use freeprice_core::spectral::{crossing_r_cos, crossing_r_sin, find_crossings, spectrum_report};
use freeprice_core::waves::{build_wave, default_samples, solve_rho, wave_residual, Admissible};
use freeprice_core::{ModelConfig, Nonlinearity};

use crate::output::{num, Csv, Format, Outputs};
use crate::settings::{ConfigError, ConfigResult, Settings};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

fn outputs(s: &Settings) -> ConfigResult<Outputs> {
    let format: Format = s.parse("format")?;
    let out = s.str("out");
    if out.is_empty() {
        return Err(ConfigError("`out` must not be empty".into()));
    }
    Ok(Outputs::new(out, format))
}

fn report_written(out_dir: &str, files: &[std::path::PathBuf]) {
    eprintln!("wrote {} file(s) to {out_dir}", files.len());
}

pub fn spectrum(s: &Settings) -> Result<u8> {
    let a_max = s.f64("a_max")?;
    let points: usize = s.parse("curve_points")?;
    if points < 2 {
        return Err(ConfigError("`curve_points` must be at least 2".into()).into());
    }
    let r = s.optional_f64("R")?;
    let mut out = outputs(s)?;

    let crossings = find_crossings(a_max).map_err(ConfigError::from)?;
    let mut csv = Csv::new(&["index", "a", "R", "lambda_im", "direction"]);
    for c in &crossings {
        csv.row(&[c.index as f64, c.a_value, c.r_value, c.lambda.im, f64::from(c.direction)]);
    }
    out.csv("crossings.csv", csv);

    let grid: Vec<f64> = (1..=points).map(|k| a_max * k as f64 / points as f64).collect();
    let mut curves = Csv::new(&["a", "R_sin", "R_cos"]);
    for &a in &grid {
        curves.row(&[a, crossing_r_sin(a), crossing_r_cos(a)]);
    }
    out.csv("spectrum_curves.csv", curves);

    let mut plot = LinePlot::new("Imaginary-axis crossings", "a", "R").with_y_scale(YScale::Asinh);
    plot.add_series("R = -e^a sin(a)/a", grid.iter().map(|&a| (a, crossing_r_sin(a))).collect());
    plot.add_series("R = (1 - e^a cos(a))/a", grid.iter().map(|&a| (a, crossing_r_cos(a))).collect());
    out.svg("spectrum.svg", plot.to_svg());

    match crossings.iter().find(|c| c.r_value > 0.0) {
        Some(c) => {
            println!("a0={}", c.a_value);
            println!("R0={}", c.r_value);
            println!("lambda0={}i", c.lambda.im);
            println!("abs_lambda0={}", c.lambda.norm());
        }
        None => println!("a0=none"),
    }
    if let Some(c) = crossings.iter().find(|c| c.r_value < 0.0) {
        println!("a1={}", c.a_value);
        println!("R1={}", c.r_value);
    }
    println!("crossings={}", crossings.len());
    if let Some(r) = r {
        let report = spectrum_report(r, a_max).map_err(ConfigError::from)?;
        match report.real_unstable {
            Some(ev) => println!("real_unstable_lambda={}", ev.lambda),
            None => println!("real_unstable_lambda=none"),
        }
        println!("unstable_pairs={}", report.unstable_pairs());
        println!("note={}", report.band_note);
    }
    report_written(s.str("out"), &out.commit()?);
    Ok(EXIT_OK)
}

pub fn waves(s: &Settings) -> Result<u8> {
    let c = s.f64("c")?;
    let rho = s.f64("rho")?;
    let phi: Nonlinearity = s.parse("phi")?;
    let (x_min, x_max) = (s.f64("x_min")?, s.f64("x_max")?);
    let points: usize = s.parse("points")?;
    if !(x_min < x_max) || points < 2 {
        return Err(ConfigError("need x_min < x_max and at least 2 points".into()).into());
    }
    let r = s.optional_f64("R")?;
    let mut out = outputs(s)?;

    let wave = build_wave(c, rho, phi).map_err(ConfigError::from)?;
    let xs: Vec<f64> = (0..points)
        .map(|k| x_min + (x_max - x_min) * k as f64 / (points - 1) as f64)
        .collect();
    let mut csv = Csv::new(&["x", "w"]);
    for &x in &xs {
        csv.row(&[x, wave.eval(x)]);
    }
    out.csv("wave.csv", csv);
    let mut plot = LinePlot::new(format!("Traveling wave c={c}, rho={rho}, {phi}"), "x", "w");
    plot.add_series(format!("w^({c},{rho})"), xs.iter().map(|&x| (x, wave.eval(x))).collect());
    out.svg("wave.svg", plot.to_svg());

    let residual = wave_residual(&wave, &default_samples(x_max.abs().max(x_min.abs()).max(2.0), 400))?;
    let (lim_minus, lim_plus) = wave.limits();
    println!("c={c}");
    println!("rho={rho}");
    println!("phi={phi}");
    println!("required_R={}", wave.required_r);
    println!("w_minus_inf={lim_minus}");
    println!("w_plus_inf={lim_plus}");
    println!("residual_max={:e}", residual.max());
    if let Some(r) = r {
        let map = solve_rho(r, phi);
        match &map.admissible {
            Admissible::AllRho => println!("existence=ALL_RHO"),
            Admissible::Roots(v) if v.is_empty() => println!("existence=none"),
            Admissible::Roots(v) => {
                let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                println!("existence={}", list.join(","));
            }
        }
    }
    report_written(s.str("out"), &out.commit()?);
    Ok(EXIT_OK)
}

/// Builds the solver configuration shared by `simulate` and `sweep`.
pub fn sim_config(s: &Settings, r: f64) -> ConfigResult<SimConfig> {
    let grid = Grid1D::with_spacing(s.f64("grid.x_min")?, s.f64("grid.x_max")?, s.f64("grid.h")?)?;
    let mut model = ModelConfig::new(r, s.parse("phi")?);
    model.diffusion = s.f64("diffusion")?;
    model.transaction_cost = s.f64("transaction_cost")?;
    let config = SimConfig {
        grid,
        dt: s.f64("dt")?,
        t_end: s.f64("t_end")?,
        model,
        left_bc: s.f64("left_bc")?,
        right_bc: s.f64("right_bc")?,
        initial: InitialCondition {
            perturbation: s.parse("perturbation")?,
            epsilon: s.f64("epsilon")?,
        },
        picard_iters: s.parse("picard_iters")?,
        wx_guard: s.f64("wx_guard")?,
        snapshot_stride: s.parse("snapshot_stride")?,
        advection: s.parse("advection")?,
        ..SimConfig::default()
    };
    config.validate()?;
    Ok(config)
}

fn snapshot_csv(grid: &Grid1D, snap: &Snapshot) -> Csv {
    let mut csv = Csv::new(&["x", "w"]);
    for (i, &w) in snap.w.iter().enumerate() {
        csv.row(&[grid.x(i), w]);
    }
    csv
}

fn snapshot_name(t: f64) -> String {
    format!("snapshots/snapshot_t{t:.6}.csv")
}

/// Stored snapshots closest to each requested time, without duplicates.
fn snapshots_at<'a>(trace: &'a SimTrace, times: &[f64]) -> Vec<&'a Snapshot> {
    let tol = 0.5 * trace.dt * trace.snapshot_stride as f64 + 1e-12;
    let mut picked: Vec<&Snapshot> = Vec::new();
    for &t in times {
        if let Some(snap) = trace.nearest_snapshot(t).filter(|s| (s.t - t).abs() <= tol) {
            if !picked.iter().any(|p| p.t == snap.t) {
                picked.push(snap);
            }
        }
    }
    picked
}

pub fn simulate_cmd(s: &Settings) -> Result<u8> {
    let config = sim_config(s, s.f64("R")?)?;
    let discard = s.f64("discard")?;
    if !(0.0..1.0).contains(&discard) {
        return Err(ConfigError("`discard` must lie in [0, 1)".into()).into());
    }
    let interval = s.f64("snapshot_interval")?;
    if interval < 0.0 {
        return Err(ConfigError("`snapshot_interval` must be nonnegative".into()).into());
    }
    let requested = s.f64_list("snapshot_times")?;
    let mut out = outputs(s)?;

    let trace = simulate(&config).map_err(ConfigError::from)?;

    let mut csv = Csv::new(&["t", "p", "p_prime", "flux"]);
    for k in 0..trace.times.len() {
        csv.row(&[trace.times[k], trace.p_series[k], trace.p_prime_series[k], trace.flux_series[k]]);
    }
    out.csv("trace.csv", csv);

    let mut file_times: Vec<f64> = Vec::new();
    if interval > 0.0 {
        let count = (trace.t_end() / interval + 1e-9).floor() as usize;
        file_times.extend((0..=count).map(|k| k as f64 * interval));
    }
    file_times.extend(&requested);
    for snap in snapshots_at(&trace, &file_times) {
        out.csv(snapshot_name(snap.t), snapshot_csv(&trace.grid, snap));
    }

    let mut p_plot = LinePlot::new(format!("Price, R={}, {}", config.model.trend_coupling, config.model.nonlinearity), "t", "p");
    p_plot.add_series("p(t)", trace.times.iter().copied().zip(trace.p_series.iter().copied()).collect());
    out.svg("p.svg", p_plot.to_svg());

    if !requested.is_empty() {
        let mut field = LinePlot::new("Field snapshots", "x", "w");
        for snap in snapshots_at(&trace, &requested) {
            let pts = snap.w.iter().enumerate().map(|(i, &w)| (trace.grid.x(i), w)).collect();
            field.add_series(format!("t={:.4}", snap.t), pts);
        }
        out.svg("field.svg", field.to_svg());
    }

    let point = bifurcation_point(config.model.trend_coupling, &trace);
    let status = match trace.status {
        TraceStatus::Complete => match point.classification {
            Classification::Decay => "decayed",
            Classification::Periodic => "periodic",
            Classification::Unbounded => "growing",
            Classification::Guard => "guard",
            Classification::Unresolved => "unresolved",
        },
        TraceStatus::Blowup { .. } => "blowup",
        TraceStatus::Guard { .. } => "guard",
    };
    println!("status={status}");
    match trace.status {
        TraceStatus::Blowup { t } => println!("blowup_t={t}"),
        TraceStatus::Guard { t, wx } => println!("guard_t={t} wx={wx:e}"),
        TraceStatus::Complete => {}
    }
    println!("classification={}", point.classification);
    println!("t_reached={}", trace.t_end());
    println!("amplitude={}", num(point.amplitude));
    if trace.is_complete() {
        if let Some(est) = estimate_period(&trace, discard) {
            println!("period={}", est.period);
            println!("dispersion={:e}", est.dispersion);
            println!("cycles={}", est.cycles);
            if let Ok(dev) = half_period_antisymmetry(&trace, est.period) {
                println!("half_period_antisymmetry={dev:e}");
            }
        }
    }
    let sign = sign_sanity(&trace);
    println!("sign_violation={:e}", sign.max_violation);
    if let Some((t, x)) = sign.first {
        println!("first_sign_violation t={t} x={x}");
    }
    report_written(s.str("out"), &out.commit()?);
    Ok(if trace.is_complete() { EXIT_OK } else { EXIT_NUMERICAL })
}

pub fn sweep(s: &Settings) -> Result<u8> {
    let r_values = s.f64_list("R_values")?;
    if r_values.is_empty() {
        return Err(ConfigError("`R_values` is empty".into()).into());
    }
    let base = sim_config(s, r_values[0])?;
    let mut out = outputs(s)?;
    let points = sweep_r(&base, &r_values).map_err(ConfigError::from)?;

    let mut csv = Csv::new(&["R", "classification", "amplitude", "period", "dispersion"]);
    for p in &points {
        let (period, dispersion) = match p.period {
            Some(e) => (num(e.period), num(e.dispersion)),
            None => (String::new(), String::new()),
        };
        csv.row_cells(&[num(p.r), p.classification.to_string(), num(p.amplitude), period, dispersion]);
        let period_text = p.period.map_or("none".to_string(), |e| e.period.to_string());
        println!(
            "R={} classification={} amplitude={:e} period={period_text} trend={:.4}",
            p.r, p.classification, p.amplitude, p.trend
        );
    }
    out.csv("sweep.csv", csv);
    let mut plot = LinePlot::new("Trailing amplitude of p", "R", "peak-to-peak p");
    plot.add_series("amplitude", points.iter().map(|p| (p.r, p.amplitude)).collect());
    out.svg("sweep.svg", plot.to_svg());
    report_written(s.str("out"), &out.commit()?);
    Ok(EXIT_OK)
}

pub fn verify(s: &Settings) -> Result<u8> {
    let opts = VerifyOptions {
        delta_mass: s.f64("delta_mass")?,
    };
    let results = run_verify(&opts);
    for r in &results {
        println!("{r}");
    }
    let ok = all_passed(&results);
    println!("verify={}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}
