use freeprice_core::analysis::{classify, estimate_period, sign_sanity, sweep_r, Classification};
use freeprice_core::solver::{simulate, SimConfig};
use freeprice_core::{ModelConfig, Nonlinearity};

fn run(r: f64, phi: Nonlinearity, t_end: f64) -> freeprice_core::solver::SimTrace {
    let mut cfg = SimConfig::with_model(ModelConfig::new(r, phi));
    cfg.t_end = t_end;
    simulate(&cfg).unwrap()
}

#[test]
fn sweep_brackets_onset_with_long_runs() {
    // near onset the decay is slow (about 12% per period at R = 9), so the
    // sweep needs runs well beyond the default two time units
    let mut base = SimConfig::with_model(ModelConfig::new(0.0, Nonlinearity::Tanh));
    base.t_end = 20.0;
    base.snapshot_stride = 1000;
    let points = sweep_r(&base, &[15.0, 0.0, 12.0, 9.0, 5.0]).unwrap();
    let classes: Vec<Classification> = points.iter().map(|p| p.classification).collect();
    use Classification::*;
    assert_eq!(classes, vec![Decay, Decay, Decay, Periodic, Periodic], "{points:?}");
    for p in &points[3..] {
        let est = p.period.unwrap();
        assert!(p.amplitude > 0.0);
        assert!((est.period - 0.2).abs() < 0.01, "{est:?}");
        assert!(p.trend > 0.99 && p.trend < 1.01, "settled cycle, trend {}", p.trend);
    }
}

#[test]
fn short_sweep_is_monotone() {
    let base = SimConfig::with_model(ModelConfig::new(0.0, Nonlinearity::Tanh));
    let points = sweep_r(&base, &[0.0, 5.0, 9.0, 12.0, 15.0]).unwrap();
    let first_periodic = points.iter().position(|p| p.classification == Classification::Periodic);
    let last_decay = points.iter().rposition(|p| p.classification == Classification::Decay);
    if let (Some(p), Some(d)) = (first_periodic, last_decay) {
        assert!(d < p, "{points:?}");
    }
    assert_eq!(points[0].classification, Classification::Decay);
    assert_eq!(points[4].classification, Classification::Periodic);
}

#[test]
fn linear_sweep_point_is_unbounded() {
    let base = SimConfig::with_model(ModelConfig::new(0.0, Nonlinearity::Linear));
    let points = sweep_r(&base, &[12.0]).unwrap();
    assert_eq!(points[0].classification, Classification::Unbounded);
}

#[test]
fn decayed_run_has_no_period() {
    let trace = run(5.0, Nonlinearity::Tanh, 2.0);
    assert!(estimate_period(&trace, 0.5).is_none());
}

#[test]
fn settled_tanh_cycle_keeps_sign_structure() {
    let trace = run(12.0, Nonlinearity::Tanh, 2.0);
    assert!(sign_sanity(&trace).max_violation < 1e-3);
}

#[test]
fn strong_sign_coupling_breaks_sign_structure() {
    // only the impulsive start at very large R crosses zero near x = -1
    let trace = run(1000.0, Nonlinearity::Sign, 0.5);
    let report = sign_sanity(&trace);
    assert!(report.max_violation > 1e-3, "{report:?}");
    let (_, x) = report.first.unwrap();
    assert_eq!(x, -1.0);
}

#[test]
fn guard_trip_is_classified() {
    let mut cfg = SimConfig::with_model(ModelConfig::new(12.0, Nonlinearity::Tanh));
    cfg.wx_guard = 2.0;
    let trace = simulate(&cfg).unwrap();
    assert!(!trace.is_complete());
    assert_eq!(classify(&trace).0, Classification::Guard);
}
