//! Crank-Nicolson integrator for the moving-frame equation on a bounded
//! domain with Dirichlet ends.
//!
//! Diffusion is split Crank-Nicolson; the advection `p' w_x` and the two
//! node-supported delta sources are explicit and refined by Picard sweeps
//! (the first sweep is forward Euler, later sweeps average the explicit part
//! between `tⁿ` and the latest iterate). `w(0) = 0` is imposed as an identity
//! row, so the implicit matrix is constant and factored once.

mod grid;
mod tridiag;

pub use grid::Grid1D;
pub use tridiag::Tridiagonal;

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{EquilibriumProfile, ModelConfig};

/// Unit-mass discrete delta: `1/h` at the node `x0`, zero elsewhere.
pub fn discrete_delta(grid: &Grid1D, x0: f64) -> Result<Vec<f64>> {
    let i = grid.index_of(x0)?;
    let mut out = vec![0.0; grid.len()];
    out[i] = 1.0 / grid.h;
    Ok(out)
}

/// Shape of the initial perturbation added to `w¹`, in units of `x / a`,
/// supported on `|x| < a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perturbation {
    None,
    /// `(1 - s²)² cos(πs/2)`, re-pinned to zero at the origin.
    EvenBump,
    /// `s (1 - s²)²`.
    OddBump,
}

impl Perturbation {
    pub fn shape(self, s: f64) -> f64 {
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = (1.0 - s * s).powi(2);
        match self {
            Perturbation::None => 0.0,
            Perturbation::EvenBump => q * (std::f64::consts::FRAC_PI_2 * s).cos(),
            Perturbation::OddBump => s * q,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Perturbation::None => "none",
            Perturbation::EvenBump => "even",
            Perturbation::OddBump => "odd",
        }
    }
}

impl FromStr for Perturbation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(Perturbation::None),
            "even" => Ok(Perturbation::EvenBump),
            "odd" => Ok(Perturbation::OddBump),
            other => Err(Error::InvalidParameter(format!("unknown perturbation `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub perturbation: Perturbation,
    pub epsilon: f64,
}

impl Default for InitialCondition {
    fn default() -> Self {
        Self {
            perturbation: Perturbation::EvenBump,
            epsilon: 0.01,
        }
    }
}

/// Discretization of `p' w_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Advection {
    Central,
    Upwind,
}

impl FromStr for Advection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "central" => Ok(Advection::Central),
            "upwind" => Ok(Advection::Upwind),
            other => Err(Error::InvalidParameter(format!("unknown advection scheme `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub grid: Grid1D,
    pub dt: f64,
    pub t_end: f64,
    pub model: ModelConfig,
    pub left_bc: f64,
    pub right_bc: f64,
    pub initial: InitialCondition,
    pub picard_iters: usize,
    /// Minimum admissible `|w_x(0)|`.
    pub wx_guard: f64,
    pub snapshot_stride: usize,
    pub advection: Advection,
    /// Mass of the discrete delta; 1 except when probing the equilibrium check.
    pub delta_mass: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            grid: Grid1D::default(),
            dt: 1e-4,
            t_end: 2.0,
            model: ModelConfig::default(),
            left_bc: 1.0,
            right_bc: -1.0,
            initial: InitialCondition::default(),
            picard_iters: 2,
            wx_guard: 1e-6,
            snapshot_stride: 10,
            advection: Advection::Central,
            delta_mass: 1.0,
        }
    }
}

impl SimConfig {
    pub fn with_model(model: ModelConfig) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.picard_iters == 0 {
            return bad("picard_iters must be at least 1".into());
        }
        if !(self.wx_guard > 0.0) {
            return bad(format!("wx_guard must be positive, got {}", self.wx_guard));
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be at least 1".into());
        }
        if !(self.left_bc.is_finite() && self.right_bc.is_finite() && self.initial.epsilon.is_finite()) {
            return bad("boundary values and epsilon must be finite".into());
        }
        let a = self.model.transaction_cost;
        let im = self.grid.index_of(-a)?;
        let ip = self.grid.index_of(a)?;
        if im == 0 || ip == self.grid.n_cells {
            return Err(Error::InvalidGrid(format!("re-entry nodes ±{a} must be interior")));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Discrete `w¹` (scaled by `a`) with the configured boundary values.
    pub fn equilibrium_field(&self) -> Vec<f64> {
        let a = self.model.transaction_cost;
        let eq = EquilibriumProfile::default();
        let mut w = self.grid.sample(|x| eq.eval(a, x));
        let n = self.grid.n_cells;
        w[0] = self.left_bc;
        w[n] = self.right_bc;
        w
    }

    pub fn initial_state(&self) -> Result<SimState> {
        let a = self.model.transaction_cost;
        let mut w = self.equilibrium_field();
        let ic = self.initial;
        let n = self.grid.n_cells;
        for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
            *wi += ic.epsilon * ic.perturbation.shape(self.grid.x(i) / a);
        }
        w[self.grid.zero_index()] = 0.0;
        let p_prime = p_prime_of(&w, &self.grid, self.model.diffusion, self.wx_guard, 0.0)?;
        Ok(SimState {
            w,
            t: 0.0,
            p: 0.0,
            p_prime,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub w: Vec<f64>,
    pub t: f64,
    pub p: f64,
    pub p_prime: f64,
}

/// Central first and second differences at the origin node.
fn origin_differences(w: &[f64], grid: &Grid1D) -> (f64, f64) {
    let i0 = grid.zero_index();
    let h = grid.h;
    let d1 = (w[i0 + 1] - w[i0 - 1]) / (2.0 * h);
    let d2 = (w[i0 - 1] - 2.0 * w[i0] + w[i0 + 1]) / (h * h);
    (d1, d2)
}

fn p_prime_of(w: &[f64], grid: &Grid1D, diffusion: f64, guard: f64, t: f64) -> Result<f64> {
    let (d1, d2) = origin_differences(w, grid);
    if !(d1.abs() >= guard) {
        return Err(Error::GuardTripped { t, wx: d1 });
    }
    Ok(-diffusion * d2 / d1)
}

/// `p' = -D₂w(0) / D₁w(0)` for the normalized diffusion.
pub fn compute_p_prime(state: &SimState, grid: &Grid1D, guard: f64) -> Result<f64> {
    p_prime_of(&state.w, grid, 1.0, guard, state.t)
}

/// Transaction flux `Λ = -D w_x(0)`.
pub fn transaction_flux(w: &[f64], grid: &Grid1D, diffusion: f64) -> f64 {
    -diffusion * origin_differences(w, grid).0
}

/// Reusable time stepper holding the factored implicit matrix.
pub struct Stepper<'a> {
    config: &'a SimConfig,
    lu: Tridiagonal,
    i0: usize,
    im: usize,
    ip: usize,
    r: f64,
    rhs0: Vec<f64>,
    expl0: Vec<f64>,
    expl: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(config: &'a SimConfig) -> Result<Self> {
        config.validate()?;
        let grid = &config.grid;
        let n = grid.len();
        let h = grid.h;
        let r = config.model.diffusion * config.dt / (2.0 * h * h);
        let i0 = grid.zero_index();
        let a = config.model.transaction_cost;
        let im = grid.index_of(-a)?;
        let ip = grid.index_of(a)?;

        let mut lower = vec![-r; n];
        let mut diag = vec![1.0 + 2.0 * r; n];
        let mut upper = vec![-r; n];
        for fixed in [0, i0, n - 1] {
            lower[fixed] = 0.0;
            upper[fixed] = 0.0;
            diag[fixed] = 1.0;
        }
        lower[0] = 0.0;
        upper[n - 1] = 0.0;

        Ok(Self {
            config,
            lu: Tridiagonal::factor(&lower, &diag, &upper),
            i0,
            im,
            ip,
            r,
            rhs0: vec![0.0; n],
            expl0: vec![0.0; n],
            expl: vec![0.0; n],
        })
    }

    /// Explicit part of the right side (advection plus delta sources) into
    /// `out`; returns `p'`.
    fn explicit_part(&self, w: &[f64], t: f64, out: &mut [f64]) -> Result<f64> {
        let cfg = self.config;
        let grid = &cfg.grid;
        let h = grid.h;
        let diffusion = cfg.model.diffusion;
        let pp = p_prime_of(w, grid, diffusion, cfg.wx_guard, t)?;
        let n = w.len();
        out[0] = 0.0;
        out[n - 1] = 0.0;
        match cfg.advection {
            Advection::Central => {
                let c = pp / (2.0 * h);
                for i in 1..n - 1 {
                    out[i] = c * (w[i + 1] - w[i - 1]);
                }
            }
            Advection::Upwind => {
                // w_t = p' w_x transports with velocity -p'
                let c = pp / h;
                for i in 1..n - 1 {
                    out[i] = if pp > 0.0 {
                        c * (w[i + 1] - w[i])
                    } else {
                        c * (w[i] - w[i - 1])
                    };
                }
            }
        }
        out[self.i0] = 0.0;

        let (d1, _) = origin_differences(w, grid);
        let phi = cfg.model.nonlinearity;
        let rr = cfg.model.trend_coupling;
        let delta = cfg.delta_mass / h;
        out[self.im] += (-diffusion * d1 - rr * pp * phi.eval(w[self.im])) * delta;
        out[self.ip] += (diffusion * d1 + rr * pp * phi.eval(w[self.ip])) * delta;
        Ok(pp)
    }

    /// Advances `state` by one `dt`.
    pub fn step(&mut self, state: &SimState) -> Result<SimState> {
        let cfg = self.config;
        let w = &state.w;
        let n = w.len();
        let dt = cfg.dt;
        let t_new = state.t + dt;

        let mut expl0 = std::mem::take(&mut self.expl0);
        let mut expl = std::mem::take(&mut self.expl);
        let result = (|| {
            let pp0 = self.explicit_part(w, state.t, &mut expl0)?;
            for i in 1..n - 1 {
                self.rhs0[i] = w[i] + self.r * (w[i - 1] - 2.0 * w[i] + w[i + 1]);
            }

            let mut next = w.clone();
            for k in 0..cfg.picard_iters {
                if k > 0 {
                    self.explicit_part(&next, t_new, &mut expl)?;
                }
                for i in 1..n - 1 {
                    let e = if k == 0 { expl0[i] } else { 0.5 * (expl0[i] + expl[i]) };
                    next[i] = self.rhs0[i] + dt * e;
                }
                next[0] = cfg.left_bc;
                next[n - 1] = cfg.right_bc;
                next[self.i0] = 0.0;
                self.lu.solve_in_place(&mut next);
                if next.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { t: t_new });
                }
            }
            next[self.i0] = 0.0;
            next[0] = cfg.left_bc;
            next[n - 1] = cfg.right_bc;

            let pp1 = p_prime_of(&next, &cfg.grid, cfg.model.diffusion, cfg.wx_guard, t_new)?;
            Ok(SimState {
                w: next,
                t: t_new,
                p: state.p + 0.5 * dt * (pp0 + pp1),
                p_prime: pp1,
            })
        })();
        self.expl0 = expl0;
        self.expl = expl;
        result
    }
}

/// Semi-discrete right side `dw/dt` of the moving-frame equation at `w`:
/// diffusion, advection and the delta sources. Zero on the pinned nodes.
pub fn right_side(w: &[f64], config: &SimConfig) -> Result<Vec<f64>> {
    let stepper = Stepper::new(config)?;
    if w.len() != config.grid.len() {
        return Err(Error::InvalidParameter(format!(
            "field length {} does not match grid length {}",
            w.len(),
            config.grid.len()
        )));
    }
    let mut out = vec![0.0; w.len()];
    stepper.explicit_part(w, 0.0, &mut out)?;
    let h2 = config.grid.h * config.grid.h;
    for i in 1..w.len() - 1 {
        if i != stepper.i0 {
            out[i] += config.model.diffusion * (w[i - 1] - 2.0 * w[i] + w[i + 1]) / h2;
        }
    }
    Ok(out)
}

/// One Crank-Nicolson step. Builds a fresh [`Stepper`]; loops should keep one.
pub fn cn_step(state: &SimState, config: &SimConfig) -> Result<SimState> {
    Stepper::new(config)?.step(state)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceStatus {
    Complete,
    /// A node became non-finite at `t`.
    Blowup { t: f64 },
    /// `|w_x(0)|` dropped below the guard at `t`.
    Guard { t: f64, wx: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub w: Vec<f64>,
}

/// Time series of a run. Partial when `status` is not `Complete`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub grid: Grid1D,
    pub dt: f64,
    pub snapshot_stride: usize,
    /// Amplitude `ε` of the initial perturbation.
    pub epsilon: f64,
    pub times: Vec<f64>,
    pub p_series: Vec<f64>,
    pub p_prime_series: Vec<f64>,
    pub flux_series: Vec<f64>,
    /// `max |w - w¹|` over the grid at every sample.
    pub deviation_series: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub status: TraceStatus,
}

impl SimTrace {
    pub fn is_complete(&self) -> bool {
        self.status == TraceStatus::Complete
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Snapshot closest in time to `t`.
    pub fn nearest_snapshot(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }
}

fn max_deviation(w: &[f64], eq: &[f64]) -> f64 {
    w.iter().zip(eq).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Integrates from the configured initial condition to `t_end`.
///
/// Invalid configurations are errors; numerical failures during the run end
/// the trace early with a non-`Complete` status.
pub fn simulate(config: &SimConfig) -> Result<SimTrace> {
    let mut stepper = Stepper::new(config)?;
    let eq = config.equilibrium_field();
    let grid = &config.grid;
    let diffusion = config.model.diffusion;
    let steps = config.steps();

    let mut trace = SimTrace {
        grid: grid.clone(),
        dt: config.dt,
        snapshot_stride: config.snapshot_stride,
        epsilon: config.initial.epsilon,
        times: Vec::with_capacity(steps + 1),
        p_series: Vec::with_capacity(steps + 1),
        p_prime_series: Vec::with_capacity(steps + 1),
        flux_series: Vec::with_capacity(steps + 1),
        deviation_series: Vec::with_capacity(steps + 1),
        snapshots: Vec::new(),
        status: TraceStatus::Complete,
    };

    let mut state = match config.initial_state() {
        Ok(s) => s,
        Err(Error::GuardTripped { t, wx }) => {
            trace.status = TraceStatus::Guard { t, wx };
            return Ok(trace);
        }
        Err(e) => return Err(e),
    };

    let record = |trace: &mut SimTrace, s: &SimState, n: usize| {
        trace.times.push(n as f64 * config.dt);
        trace.p_series.push(s.p);
        trace.p_prime_series.push(s.p_prime);
        trace.flux_series.push(transaction_flux(&s.w, grid, diffusion));
        trace.deviation_series.push(max_deviation(&s.w, &eq));
        if n.is_multiple_of(config.snapshot_stride) {
            trace.snapshots.push(Snapshot {
                t: n as f64 * config.dt,
                w: s.w.clone(),
            });
        }
    };

    record(&mut trace, &state, 0);
    for n in 1..=steps {
        match stepper.step(&state) {
            Ok(mut next) => {
                next.t = n as f64 * config.dt;
                state = next;
                record(&mut trace, &state, n);
            }
            Err(Error::NonFinite { t }) => {
                trace.status = TraceStatus::Blowup { t };
                break;
            }
            Err(Error::GuardTripped { t, wx }) => {
                trace.status = TraceStatus::Guard { t, wx };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(trace)
}
