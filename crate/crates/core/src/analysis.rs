//! Post-processing of simulation traces.

use std::fmt;

use crate::error::{Error, Result};
use crate::solver::{simulate, SimConfig, SimTrace, TraceStatus};

pub const DEFAULT_DISCARD: f64 = 0.5;
pub const SIGN_TOLERANCE: f64 = 1e-10;
/// Trailing/early `max |p'|` ratio under which a run counts as decayed.
pub const DECAY_RATIO: f64 = 1e-4;
/// Growth factor over `ε` that, while still increasing, flags an unbounded run.
pub const GROWTH_FACTOR: f64 = 10.0;
pub const MAX_RELATIVE_DISPERSION: f64 = 0.05;
/// `|p'|` below this is roundoff.
pub const P_PRIME_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodEstimate {
    pub period: f64,
    /// Standard deviation of successive crossing gaps.
    pub dispersion: f64,
    pub cycles: usize,
}

impl PeriodEstimate {
    pub fn relative_dispersion(&self) -> f64 {
        self.dispersion / self.period
    }
}

/// Period of a sampled signal from its upward mean crossings.
///
/// Works on the trailing `1 - discard` fraction; absent with fewer than three
/// full cycles or a peak-to-peak amplitude below `1e-8`.
pub fn estimate_period_series(times: &[f64], values: &[f64], discard: f64) -> Option<PeriodEstimate> {
    let n = times.len().min(values.len());
    if n < 3 || !(0.0..1.0).contains(&discard) {
        return None;
    }
    let start = ((n as f64) * discard).floor() as usize;
    let (t, v) = (&times[start..n], &values[start..n]);
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(hi - lo >= 1e-8) {
        return None;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let mut crossings = Vec::new();
    for k in 1..v.len() {
        let (a, b) = (v[k - 1] - mean, v[k] - mean);
        if a < 0.0 && b >= 0.0 {
            crossings.push(t[k - 1] + (t[k] - t[k - 1]) * (-a / (b - a)));
        }
    }
    let gaps: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.len() < 3 {
        return None;
    }
    let period = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let var = gaps.iter().map(|g| (g - period).powi(2)).sum::<f64>() / gaps.len() as f64;
    Some(PeriodEstimate {
        period,
        dispersion: var.sqrt(),
        cycles: gaps.len(),
    })
}

/// Period of `p(t)` in the trace.
pub fn estimate_period(trace: &SimTrace, discard: f64) -> Option<PeriodEstimate> {
    estimate_period_series(&trace.times, &trace.p_series, discard)
}

/// Max of `|w(x, t + T/2) + w(-x, t)|` over matched snapshot pairs in the
/// trailing half of the trace, relative to the largest `|w|`.
pub fn half_period_antisymmetry(trace: &SimTrace, period: f64) -> Result<f64> {
    if !(period > 0.0) {
        return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
    }
    let grid = &trace.grid;
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid("half-period check needs a grid symmetric about 0".into()));
    }
    let tol = trace.dt * trace.snapshot_stride as f64;
    let t_mid = 0.5 * trace.t_end();
    let mirror: Vec<usize> = (0..grid.len()).map(|i| grid.mirror(i).expect("symmetric grid")).collect();

    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut pairs = 0;
    for first in trace.snapshots.iter().filter(|s| s.t >= t_mid) {
        let target = first.t + 0.5 * period;
        let Some(second) = trace.nearest_snapshot(target) else { continue };
        if (second.t - target).abs() > tol {
            continue;
        }
        pairs += 1;
        for (i, &j) in mirror.iter().enumerate() {
            worst = worst.max((second.w[i] + first.w[j]).abs());
            scale = scale.max(first.w[j].abs()).max(second.w[i].abs());
        }
    }
    if pairs == 0 {
        return Err(Error::InsufficientSnapshots);
    }
    Ok(if scale > 0.0 { worst / scale } else { 0.0 })
}

/// Peak-to-peak of the last `fraction` of a series.
pub fn trailing_peak_to_peak(values: &[f64], fraction: f64) -> f64 {
    let tail = tail(values, fraction);
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if tail.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

fn tail(values: &[f64], fraction: f64) -> &[f64] {
    let keep = ((values.len() as f64) * fraction).ceil() as usize;
    &values[values.len() - keep.min(values.len())..]
}

fn head(values: &[f64], fraction: f64) -> &[f64] {
    let keep = ((values.len() as f64) * fraction).ceil() as usize;
    &values[..keep.min(values.len())]
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Decay,
    Periodic,
    Unbounded,
    Guard,
    /// None of the criteria is met within the run (typically a slow
    /// transient near onset; a longer run resolves it).
    Unresolved,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Decay => "DECAY",
            Classification::Periodic => "PERIODIC",
            Classification::Unbounded => "UNBOUNDED",
            Classification::Guard => "GUARD",
            Classification::Unresolved => "UNRESOLVED",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationPoint {
    pub r: f64,
    pub classification: Classification,
    /// Peak-to-peak of `p` over the last quarter of the run.
    pub amplitude: f64,
    pub period: Option<PeriodEstimate>,
    /// `max |p'|` over the last quarter divided by the quarter before it.
    /// Well below 1 flags an oscillation that is still decaying (near onset a
    /// short run can look periodic while it slowly dies out).
    pub trend: f64,
}

/// Labels a trace as decayed, periodic, unbounded, guarded or unresolved.
pub fn classify(trace: &SimTrace) -> (Classification, Option<PeriodEstimate>) {
    match trace.status {
        TraceStatus::Guard { .. } => return (Classification::Guard, None),
        TraceStatus::Blowup { .. } => return (Classification::Unbounded, None),
        TraceStatus::Complete => {}
    }
    let dev = &trace.deviation_series;
    let initial = trace.epsilon.abs().max(dev.first().copied().unwrap_or(0.0));
    let last = max_abs(tail(dev, 0.125));
    let before = {
        let q = tail(dev, 0.25);
        max_abs(&q[..q.len() / 2])
    };
    if last > GROWTH_FACTOR * initial && last > 1.05 * before {
        return (Classification::Unbounded, None);
    }

    let pp = &trace.p_prime_series;
    let trailing = max_abs(tail(pp, 0.25));
    // the floor covers runs that start on the equilibrium and only carry roundoff
    if trailing <= DECAY_RATIO * max_abs(head(pp, 0.25)) || trailing < P_PRIME_FLOOR {
        return (Classification::Decay, None);
    }
    match estimate_period(trace, DEFAULT_DISCARD) {
        Some(est) if est.relative_dispersion() < MAX_RELATIVE_DISPERSION => (Classification::Periodic, Some(est)),
        est => (Classification::Unresolved, est),
    }
}

/// Ratio of `max |v|` over the last quarter to the quarter before it.
pub fn amplitude_trend(values: &[f64]) -> f64 {
    let last = tail(values, 0.25);
    let half = tail(values, 0.5);
    let previous = max_abs(&half[..half.len() - last.len().min(half.len())]);
    if previous > 0.0 {
        max_abs(last) / previous
    } else {
        f64::NAN
    }
}

pub fn bifurcation_point(r: f64, trace: &SimTrace) -> BifurcationPoint {
    let (classification, period) = classify(trace);
    BifurcationPoint {
        r,
        classification,
        amplitude: trailing_peak_to_peak(&trace.p_series, 0.25),
        period,
        trend: amplitude_trend(&trace.p_prime_series),
    }
}

fn run_one(base: &SimConfig, r: f64) -> BifurcationPoint {
    let mut config = base.clone();
    config.model.trend_coupling = r;
    match simulate(&config) {
        Ok(trace) => bifurcation_point(r, &trace),
        Err(_) => BifurcationPoint {
            r,
            classification: Classification::Unresolved,
            amplitude: 0.0,
            period: None,
            trend: f64::NAN,
        },
    }
}

/// Simulates and classifies every `R`; the result is sorted by `R`.
pub fn sweep_r(base: &SimConfig, r_values: &[f64]) -> Result<Vec<BifurcationPoint>> {
    if let Some(r) = r_values.iter().find(|r| !r.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite R value {r}")));
    }
    #[cfg(feature = "parallel")]
    let mut points: Vec<BifurcationPoint> = {
        use rayon::prelude::*;
        r_values.par_iter().map(|&r| run_one(base, r)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut points: Vec<BifurcationPoint> = r_values.iter().map(|&r| run_one(base, r)).collect();
    points.sort_by(|a, b| a.r.total_cmp(&b.r));
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignReport {
    /// Largest amount by which `w > 0` on `x > 0` or `w < 0` on `x < 0`.
    pub max_violation: f64,
    /// First `(t, x)` exceeding the tolerance.
    pub first: Option<(f64, f64)>,
}

impl SignReport {
    pub fn is_clean(&self) -> bool {
        self.first.is_none()
    }
}

/// Checks that every snapshot keeps `w ≥ 0` left of the origin and `w ≤ 0`
/// right of it, up to [`SIGN_TOLERANCE`].
pub fn sign_sanity(trace: &SimTrace) -> SignReport {
    let grid = &trace.grid;
    let mut report = SignReport {
        max_violation: 0.0,
        first: None,
    };
    for snap in &trace.snapshots {
        for (i, &w) in snap.w.iter().enumerate() {
            let x = grid.x(i);
            let violation = if x < 0.0 {
                -w
            } else if x > 0.0 {
                w
            } else {
                0.0
            };
            if violation > report.max_violation {
                report.max_violation = violation;
            }
            if violation > SIGN_TOLERANCE && report.first.is_none() {
                report.first = Some((snap.t, x));
            }
        }
    }
    report
}
