//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! printed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use freeprice_core::analysis::{classify, estimate_period, half_period_antisymmetry, Classification, DEFAULT_DISCARD};
use freeprice_core::selfcheck::{run_verify, VerifyOptions};
use freeprice_core::solver::{simulate, Perturbation, SimConfig, Stepper};
use freeprice_core::spectral::{find_crossings, real_unstable_eigenvalue, residual_convergence};
use freeprice_core::waves::{build_wave, default_samples, solve_rho, wave_residual, Admissible};
use freeprice_core::{ModelConfig, Nonlinearity};

const A0: f64 = 3.940733135692915;
const R0: f64 = 9.359088829373068;
const R1_FIGURE: f64 = -116.0;
const HOPF_PERIOD: f64 = 0.2088;
const FAST: Duration = Duration::from_secs(1);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail.push_str(&format!("; runtime {:.3}s", elapsed.as_secs_f64()));
    if let Some(limit) = limit {
        if elapsed >= limit {
            out.passed = false;
            out.detail.push_str(&format!(" exceeds {:.0}s", limit.as_secs_f64()));
        }
    }
    out
}

fn default_run(r: f64, phi: Nonlinearity) -> SimConfig {
    // grid [-5, 5], h = 0.05, dt = 1e-4, t_end = 2, eps = 0.01 are the defaults
    SimConfig::with_model(ModelConfig::new(r, phi))
}

fn spectral_constants() -> Outcome {
    let crossings = match find_crossings(25.0) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let Some(c) = crossings.iter().find(|c| c.r_value > 0.0) else {
        return outcome(false, "no positive crossing".into());
    };
    let (da, dr) = ((c.a_value - A0).abs(), (c.r_value - R0).abs());
    let lambda_ok = c.lambda.re == 0.0 && (c.lambda.im - 2.0 * c.a_value * c.a_value).abs() < 1e-12;
    let mag = c.lambda.norm();
    outcome(
        da < 1e-9 && dr < 1e-9 && lambda_ok && (31.0..=31.2).contains(&mag),
        format!(
            "a0={} (err {da:.1e}), R0={} (err {dr:.1e}), lambda0={}i, |lambda0|={mag:.4}",
            c.a_value, c.r_value, c.lambda.im
        ),
    )
}

fn first_negative_crossing() -> Outcome {
    let crossings = match find_crossings(25.0) {
        Ok(c) => c,
        Err(e) => return outcome(false, e.to_string()),
    };
    let Some(c) = crossings.iter().find(|c| (c.a_value - 7.07).abs() < 0.1) else {
        return outcome(false, "no crossing near a = 7.07".into());
    };
    let rel = (c.r_value - R1_FIGURE).abs() / R1_FIGURE.abs();
    outcome(
        c.r_value < 0.0 && rel < 0.02,
        format!(
            "a1={}, R1={} vs figure-read -116: {:.2}% (limit 2%)",
            c.a_value,
            c.r_value,
            100.0 * rel
        ),
    )
}

fn real_threshold() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for r in [-1.0, -0.5, 0.0, 5.0] {
        if let Some(ev) = real_unstable_eigenvalue(r) {
            ok = false;
            notes.push(format!("R={r} unexpected lambda={}", ev.lambda));
        }
    }
    notes.push("absent for R in {-1,-0.5,0,5}".into());
    for r in [-1.01, -2.0, -10.0] {
        match real_unstable_eigenvalue(r) {
            Some(ev) => {
                let residual = (ev.a.exp() - 1.0 + r * ev.a).abs();
                ok &= ev.lambda > 0.0 && residual < 1e-12;
                notes.push(format!("R={r}: lambda={:.6} residual {residual:.1e}", ev.lambda));
            }
            None => {
                ok = false;
                notes.push(format!("R={r}: missing"));
            }
        }
    }
    outcome(ok, notes.join(", "))
}

fn equilibrium_stationarity() -> Outcome {
    let mut worst: f64 = 0.0;
    for phi in Nonlinearity::ALL {
        for r in [-2.0, 0.0, 12.0] {
            let mut cfg = default_run(r, phi);
            cfg.initial.perturbation = Perturbation::None;
            let result = Stepper::new(&cfg).and_then(|mut stepper| {
                let mut state = cfg.initial_state()?;
                for _ in 0..100 {
                    let next = stepper.step(&state)?;
                    worst = next.w.iter().zip(&state.w).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
                    state = next;
                }
                Ok(())
            });
            if let Err(e) = result {
                return outcome(false, format!("phi={phi} R={r}: {e}"));
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max node change over 100 steps, 3 phi x R in {{-2,0,12}}: {worst:.2e} (limit 1e-12)"),
    )
}

fn hopf_oscillation() -> Outcome {
    let trace = match simulate(&default_run(12.0, Nonlinearity::Tanh)) {
        Ok(t) => t,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (class, _) = classify(&trace);
    let Some(est) = estimate_period(&trace, DEFAULT_DISCARD) else {
        return outcome(false, format!("classification {class}, no period detected"));
    };
    let rel = (est.period - HOPF_PERIOD).abs() / HOPF_PERIOD;
    let antisym = half_period_antisymmetry(&trace, est.period);
    let antisym_ok = matches!(antisym, Ok(d) if d < 0.05);
    outcome(
        class == Classification::Periodic && rel < 0.05 && antisym_ok,
        format!(
            "classification {class}, period {:.5} vs 0.2088 ({:.2}%, limit 5%), dispersion {:.1e}, cycles {}, half-period antisymmetry {} (limit 0.05)",
            est.period,
            100.0 * rel,
            est.dispersion,
            est.cycles,
            antisym.map_or_else(|e| e.to_string(), |d| format!("{d:.4}"))
        ),
    )
}

fn stability_below_onset() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for r in [5.0, 0.0] {
        match simulate(&default_run(r, Nonlinearity::Tanh)) {
            Ok(trace) => {
                let (class, _) = classify(&trace);
                let pp = &trace.p_prime_series;
                let quarter = pp.len() / 4;
                let early = pp[..quarter].iter().fold(0.0f64, |m, x| m.max(x.abs()));
                let late = pp[pp.len() - quarter..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
                ok &= class == Classification::Decay;
                notes.push(format!("R={r}: {class} (trailing/early max|p'| = {:.1e})", late / early));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("R={r}: {e}"));
            }
        }
    }
    outcome(ok, notes.join(", "))
}

fn linear_unboundedness() -> Outcome {
    match simulate(&default_run(12.0, Nonlinearity::Linear)) {
        Ok(trace) => {
            let (class, _) = classify(&trace);
            outcome(
                class == Classification::Unbounded,
                format!("classification {class}, status {:?}", trace.status),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn traveling_waves() -> Outcome {
    let samples = default_samples(6.0, 240);
    let mut worst = [0.0f64; 4];
    let mut count = 0;
    for phi in [Nonlinearity::Sign, Nonlinearity::Tanh] {
        for c in [-2.0, -0.5, 0.5, 2.0] {
            for rho in [0.5, 1.0, 2.598] {
                match build_wave(c, rho, phi).and_then(|w| wave_residual(&w, &samples)) {
                    Ok(res) => {
                        worst[0] = worst[0].max(res.ode);
                        worst[1] = worst[1].max(res.continuity[0].max(res.continuity[1]));
                        worst[2] = worst[2].max(res.jump[0].max(res.jump[1]));
                        worst[3] = worst[3].max(res.origin);
                        count += 1;
                    }
                    Err(e) => return outcome(false, format!("c={c} rho={rho} {phi}: {e}")),
                }
            }
        }
    }
    let residual_ok = worst.iter().all(|&w| w < 1e-10);

    let nonempty = |r: f64, phi| !solve_rho(r, phi).is_empty();
    let sign_ok = [-0.1, -1.0, -10.0].iter().all(|&r| nonempty(r, Nonlinearity::Sign));
    let tanh_ok = [-0.8, -2.0, -10.0].iter().all(|&r| nonempty(r, Nonlinearity::Tanh)) && !nonempty(-0.7, Nonlinearity::Tanh);
    let all_rho = |r: f64| solve_rho(r, Nonlinearity::Linear).admissible == Admissible::AllRho;
    let linear_ok = all_rho(-1.0) && [-10.0, -2.0, -1.01, -0.99, -0.5, 0.5, 2.0].iter().all(|&r| !all_rho(r));

    outcome(
        residual_ok && sign_ok && tanh_ok && linear_ok,
        format!(
            "{count} waves, max residuals ode {:.1e} continuity {:.1e} jump {:.1e} origin {:.1e} (limit 1e-10); existence phi1 {sign_ok}, phi3 {tanh_ok}, phi2 ALL_RHO only at R=-1 {linear_ok}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn operator_bridge() -> Outcome {
    match residual_convergence(0.05) {
        Ok(rc) => {
            let (odd, cross) = (rc.odd_ratio(), rc.crossing_ratio());
            outcome(
                (3.5..=4.5).contains(&odd) && (3.5..=4.5).contains(&cross),
                format!(
                    "h 0.05 -> 0.025: odd pair (b=2pi, lambda=-4pi^2={:.4}) ratio {odd:.4}, crossing pair ratio {cross:.4} (window [3.5, 4.5])",
                    -4.0 * PI * PI
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn property_suite() -> Outcome {
    let results = run_verify(&VerifyOptions::default());
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            format!("all {} checks pass", results.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("spectral constants", Some(FAST), spectral_constants),
        ("first negative crossing", Some(FAST), first_negative_crossing),
        ("real instability threshold", None, real_threshold),
        ("discrete equilibrium stationarity", Some(FAST), equilibrium_stationarity),
        ("Hopf oscillation at R=12", None, hopf_oscillation),
        ("stability below onset (R=5, R=0)", None, stability_below_onset),
        ("linear nonlinearity unbounded at R=12", None, linear_unboundedness),
        ("traveling-wave correctness", Some(FAST), traveling_waves),
        ("operator consistency bridge", Some(FAST), operator_bridge),
        ("property suite", None, property_suite),
    ];
    let mut failures = 0;
    for (name, limit, check) in criteria {
        let out = timed(limit, check);
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", out.detail);
        if !out.passed {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
