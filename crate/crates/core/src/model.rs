//! Physical parameters, nonlinearities and equilibrium profiles.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reaction nonlinearity `φ` applied to the field at the re-entry points.
///
/// All three are odd, positive on `r > 0` and normalized to `φ(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nonlinearity {
    /// `φ₁(r) = sign(r)`, with `φ₁(0) = 0`.
    Sign,
    /// `φ₂(r) = r`.
    Linear,
    /// `φ₃(r) = tanh(r) / tanh(1)`.
    Tanh,
}

impl Nonlinearity {
    pub const ALL: [Nonlinearity; 3] = [Nonlinearity::Sign, Nonlinearity::Linear, Nonlinearity::Tanh];

    #[inline]
    pub fn eval(self, r: f64) -> f64 {
        match self {
            Nonlinearity::Sign => {
                if r > 0.0 {
                    1.0
                } else if r < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Nonlinearity::Linear => r,
            Nonlinearity::Tanh => r.tanh() / 1f64.tanh(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Nonlinearity::Sign => "sign",
            Nonlinearity::Linear => "linear",
            Nonlinearity::Tanh => "tanh",
        }
    }
}

/// Free-function form of [`Nonlinearity::eval`].
pub fn phi_eval(phi: Nonlinearity, r: f64) -> f64 {
    phi.eval(r)
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Nonlinearity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sign" | "phi1" | "1" => Ok(Nonlinearity::Sign),
            "linear" | "phi2" | "2" => Ok(Nonlinearity::Linear),
            "tanh" | "phi3" | "3" => Ok(Nonlinearity::Tanh),
            other => Err(Error::InvalidParameter(format!("unknown nonlinearity `{other}`"))),
        }
    }
}

/// Model parameters. `diffusion` is the coefficient `σ²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConfig {
    pub diffusion: f64,
    pub transaction_cost: f64,
    pub trend_coupling: f64,
    pub nonlinearity: Nonlinearity,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            diffusion: 1.0,
            transaction_cost: 1.0,
            trend_coupling: 0.0,
            nonlinearity: Nonlinearity::Tanh,
        }
    }
}

impl ModelConfig {
    pub fn new(trend_coupling: f64, nonlinearity: Nonlinearity) -> Self {
        Self {
            trend_coupling,
            nonlinearity,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.diffusion > 0.0 && self.diffusion.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "diffusion must be positive, got {}",
                self.diffusion
            )));
        }
        if !(self.transaction_cost > 0.0 && self.transaction_cost.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "transaction_cost must be positive, got {}",
                self.transaction_cost
            )));
        }
        if !self.trend_coupling.is_finite() {
            return Err(Error::InvalidParameter("trend coupling R must be finite".into()));
        }
        Ok(())
    }

    /// True for the normalization `σ²/2 = 1`, `a = 1` assumed by the
    /// closed-form spectral and traveling-wave formulas.
    pub fn is_normalized(&self) -> bool {
        self.diffusion == 1.0 && self.transaction_cost == 1.0
    }
}

/// Trapezoidal equilibrium `w^ρ(x - p₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumProfile {
    pub rho: f64,
    pub price_offset: f64,
}

impl Default for EquilibriumProfile {
    fn default() -> Self {
        Self {
            rho: 1.0,
            price_offset: 0.0,
        }
    }
}

impl EquilibriumProfile {
    pub fn new(rho: f64, price_offset: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        Ok(Self { rho, price_offset })
    }

    /// `ρ` left of `p₀ - a`, linear `-ρ(x - p₀)/a` in between, `-ρ` right of `p₀ + a`.
    pub fn eval(&self, a: f64, x: f64) -> f64 {
        let s = x - self.price_offset;
        if s < -a {
            self.rho
        } else if s > a {
            -self.rho
        } else {
            -self.rho * s / a
        }
    }
}

pub fn equilibrium_eval(prof: &EquilibriumProfile, a: f64, x: f64) -> f64 {
    prof.eval(a, x)
}

/// Splits a sampled `w = f_B - f_V` into its buyer and vendor densities.
pub fn sign_parts(w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    w.iter().map(|&v| (v.max(0.0), (-v).max(0.0))).unzip()
}
