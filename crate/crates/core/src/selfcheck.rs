//! Cross-module invariant suite run by `freeprice verify`.

use std::f64::consts::TAU;
use std::fmt;

use crate::analysis::estimate_period_series;
use crate::model::{EquilibriumProfile, ModelConfig, Nonlinearity};
use crate::solver::{simulate, Perturbation, SimConfig, Stepper};
use crate::spectral::{crossing_r_cos, crossing_r_sin, find_crossings, residual_convergence, DEFAULT_A_MAX, R_AGREEMENT};
use crate::waves::{build_wave, default_samples, wave_residual};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Mass of the discrete delta in the solver; anything but 1 is a
    /// deliberate corruption that the stationarity check must catch.
    pub delta_mass: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { delta_mass: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

fn phi_symmetry() -> CheckResult {
    let worst = Nonlinearity::ALL
        .iter()
        .flat_map(|&phi| (0..=400).map(move |k| (phi, -10.0 + 0.05 * k as f64)))
        .map(|(phi, r)| (phi.eval(-r) + phi.eval(r)).abs())
        .fold(0.0, f64::max);
    let normalized = Nonlinearity::ALL.iter().all(|phi| phi.eval(1.0) == 1.0 && phi.eval(0.0) == 0.0);
    check(
        "phi_odd_symmetry",
        worst == 0.0 && normalized,
        format!("max |phi(-r)+phi(r)| = {worst:.3e}, phi(1)=1 and phi(0)=0: {normalized}"),
    )
}

fn equilibrium_stationarity(opts: &VerifyOptions) -> CheckResult {
    let mut worst: f64 = 0.0;
    for phi in Nonlinearity::ALL {
        for r in [-2.0, 0.0, 12.0] {
            let mut cfg = SimConfig::with_model(ModelConfig::new(r, phi));
            cfg.initial.perturbation = Perturbation::None;
            cfg.delta_mass = opts.delta_mass;
            let outcome = Stepper::new(&cfg).and_then(|mut stepper| {
                let mut state = cfg.initial_state()?;
                for _ in 0..100 {
                    let next = stepper.step(&state)?;
                    let change = next.w.iter().zip(&state.w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    worst = worst.max(change);
                    state = next;
                }
                Ok(())
            });
            if let Err(e) = outcome {
                return check("equilibrium_stationarity", false, format!("phi={phi} R={r}: {e}"));
            }
        }
    }
    check(
        "equilibrium_stationarity",
        worst < 1e-12,
        format!("max node change over 100 steps = {worst:.3e} (limit 1e-12)"),
    )
}

const WAVE_SPEEDS: [f64; 4] = [-2.0, -0.5, 0.5, 2.0];
const WAVE_RHOS: [f64; 3] = [0.5, 1.0, 2.598];

fn wave_residuals() -> CheckResult {
    let samples = default_samples(6.0, 240);
    let mut worst: f64 = 0.0;
    for phi in [Nonlinearity::Sign, Nonlinearity::Tanh] {
        for c in WAVE_SPEEDS {
            for rho in WAVE_RHOS {
                match build_wave(c, rho, phi).and_then(|w| wave_residual(&w, &samples)) {
                    Ok(res) => worst = worst.max(res.max()),
                    Err(e) => return check("wave_residuals", false, format!("c={c} rho={rho} {phi}: {e}")),
                }
            }
        }
    }
    check("wave_residuals", worst < 1e-10, format!("max residual = {worst:.3e} (limit 1e-10)"))
}

fn wave_reflection() -> CheckResult {
    let mut worst: f64 = 0.0;
    for phi in [Nonlinearity::Sign, Nonlinearity::Tanh] {
        for c in [0.5, 2.0] {
            for rho in WAVE_RHOS {
                let (Ok(fwd), Ok(back)) = (build_wave(c, rho, phi), build_wave(-c, rho, phi)) else {
                    return check("wave_reflection", false, format!("c={c} rho={rho}: build failed"));
                };
                for k in 0..=200 {
                    let x = -6.0 + 0.06 * k as f64;
                    worst = worst.max((back.eval(x) + fwd.eval(-x)).abs());
                }
            }
        }
    }
    check(
        "wave_reflection",
        worst < 1e-12,
        format!("max |w(-c)(x) + w(c)(-x)| = {worst:.3e}"),
    )
}

fn wave_equilibrium_limit() -> CheckResult {
    let eq = EquilibriumProfile::default();
    let mut gaps = Vec::new();
    for c in [0.1, 0.01, 0.001] {
        let Ok(w) = build_wave(c, 1.0, Nonlinearity::Tanh) else {
            return check("wave_equilibrium_limit", false, format!("c={c}: build failed"));
        };
        let gap = (0..=1000)
            .map(|k| -5.0 + 0.01 * k as f64)
            .map(|x| (w.eval(x) - eq.eval(1.0, x)).abs())
            .fold(0.0, f64::max);
        gaps.push(gap);
    }
    let decreasing = gaps.windows(2).all(|p| p[1] < p[0]);
    check(
        "wave_equilibrium_limit",
        decreasing && gaps[2] < 1e-2,
        format!("sup gap to w1 at c = 0.1, 0.01, 0.001: {:.3e}, {:.3e}, {:.3e}", gaps[0], gaps[1], gaps[2]),
    )
}

fn operator_convergence() -> CheckResult {
    match residual_convergence(0.05) {
        Ok(rc) => {
            let ok = (3.5..=4.5).contains(&rc.odd_ratio()) && (3.5..=4.5).contains(&rc.crossing_ratio());
            check(
                "operator_residual_convergence",
                ok,
                format!(
                    "h 0.05 -> 0.025 ratios: odd {:.4}, crossing {:.4} (want [3.5, 4.5])",
                    rc.odd_ratio(),
                    rc.crossing_ratio()
                ),
            )
        }
        Err(e) => check("operator_residual_convergence", false, e.to_string()),
    }
}

fn crossing_consistency() -> CheckResult {
    let records = match find_crossings(DEFAULT_A_MAX) {
        Ok(r) => r,
        Err(e) => return check("crossing_consistency", false, e.to_string()),
    };
    let mut problems = Vec::new();
    for rec in &records {
        let (rc, rs) = (crossing_r_cos(rec.a_value), crossing_r_sin(rec.a_value));
        if (rc - rs).abs() > R_AGREEMENT * rc.abs().max(1.0) {
            problems.push(format!("R formulas disagree at a={}", rec.a_value));
        }
        if (rec.lambda.im - 2.0 * rec.a_value * rec.a_value).abs() > 1e-12 * rec.lambda.im || rec.lambda.re != 0.0 {
            problems.push(format!("lambda != 2ia^2 at a={}", rec.a_value));
        }
        if rec.direction != rec.r_value.signum() as i8 {
            problems.push(format!("direction != sign(R) at a={}", rec.a_value));
        }
    }
    let first = records.first();
    let constants = first.is_some_and(|c| {
        (c.a_value - 3.940733135692915).abs() < 1e-9 && (c.r_value - 9.359088829373068).abs() < 1e-9
    });
    if !constants {
        problems.push("first crossing does not match (a0, R0)".into());
    }
    let detail = if problems.is_empty() {
        format!("{} crossings up to a = {DEFAULT_A_MAX}; first at a0 = {:.15}", records.len(), first.map_or(f64::NAN, |c| c.a_value))
    } else {
        problems.join("; ")
    };
    check("crossing_consistency", problems.is_empty(), detail)
}

fn trace_integral() -> CheckResult {
    let mut cfg = SimConfig::default();
    cfg.model.trend_coupling = 12.0;
    cfg.t_end = 0.3;
    let trace = match simulate(&cfg) {
        Ok(t) => t,
        Err(e) => return check("trace_integral", false, e.to_string()),
    };
    let mut p = 0.0;
    let mut worst: f64 = 0.0;
    for k in 1..trace.p_series.len() {
        p += 0.5 * trace.dt * (trace.p_prime_series[k - 1] + trace.p_prime_series[k]);
        worst = worst.max((p - trace.p_series[k]).abs());
    }
    check(
        "trace_integral",
        trace.is_complete() && trace.p_series[0] == 0.0 && worst < 1e-14,
        format!("max |p - trapezoid(p')| = {worst:.3e} over {} samples", trace.p_series.len()),
    )
}

fn synthetic_period() -> CheckResult {
    let dt = 1e-4;
    let period = 0.2088;
    let times: Vec<f64> = (0..=20_000).map(|k| k as f64 * dt).collect();
    let mut worst: f64 = 0.0;
    for (phase, amp) in [(0.0, 1.0), (1.1, 1e-3), (2.7, 50.0), (4.4, 0.2), (5.9, 7.0)] {
        let v: Vec<f64> = times.iter().map(|&t| amp * (TAU * t / period + phase).sin()).collect();
        match estimate_period_series(&times, &v, 0.25) {
            Some(est) => worst = worst.max((est.period - period).abs()),
            None => return check("synthetic_period", false, format!("no period at phase {phase}")),
        }
    }
    check(
        "synthetic_period",
        worst <= 2.0 * dt,
        format!("max |T - 0.2088| = {worst:.3e} (limit 2 samples = {:.1e})", 2.0 * dt),
    )
}

/// Runs every check; the suite passes when all entries pass.
pub fn run_verify(opts: &VerifyOptions) -> Vec<CheckResult> {
    vec![
        phi_symmetry(),
        equilibrium_stationarity(opts),
        wave_residuals(),
        wave_reflection(),
        wave_equilibrium_limit(),
        operator_convergence(),
        crossing_consistency(),
        trace_integral(),
        synthetic_period(),
    ]
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}
