//! Closed-form traveling waves of the normalized model.
//!
//! A wave with speed `c` is stationary in the moving frame with `p' = c`:
//! `w_xx + c w_x = w_x(0) [δ₋₁ - δ₁] + R c [φ(w(-1)) δ₋₁ - φ(w(1)) δ₁]`.
//! Each of the three pieces is `k₁ + k₂ e^{-cx}`, glued by continuity at
//! `±1`, `w(0) = 0` and the two jump conditions. For `c > 0` the wave is
//! parametrized by `w(-∞) = ρ`; for `c < 0` by `w(+∞) = -ρ`, which gives the
//! reflection `w^{c,ρ}(x) = -w^{-c,ρ}(-x)`.
//!
//! Note the minus sign in the reflection: the relation without it does not
//! reproduce the explicit `φ₁` profiles for `c < 0` (for instance it would
//! send `w(+∞)` to `+ρ`).

use crate::error::{Error, Result};
use crate::model::Nonlinearity;
use crate::roots;

/// Upper end of the `ρ` scan in [`solve_rho`], widened for large `|R|`.
pub const RHO_SCAN: f64 = 100.0;
const RHO_SCAN_START: f64 = 1e-8;
const RHO_SCAN_RATIO: f64 = 1.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveProfile {
    pub c: f64,
    pub rho: f64,
    pub nonlinearity: Nonlinearity,
    /// `(a₁, a₂)` on `(-∞, -1)`.
    pub left: (f64, f64),
    /// `(b₁, b₂)` on `(-1, 1)`.
    pub middle: (f64, f64),
    /// `(d₁, d₂)` on `(1, ∞)`.
    pub right: (f64, f64),
    pub required_r: f64,
}

/// `R = -ρ / φ(ρ)`, the coupling a wave of amplitude `ρ` needs.
pub fn required_r(rho: f64, phi: Nonlinearity) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    Ok(-rho / phi.eval(rho))
}

fn forward_coefficients(c: f64, rho: f64, phi: Nonlinearity) -> ((f64, f64), (f64, f64), (f64, f64)) {
    let b1 = rho / (1.0 - c.exp());
    let ratio = phi.eval(rho * (-c).exp()) / phi.eval(rho);
    ((rho, 0.0), (b1, -b1), (-rho * ratio, -rho + c.exp() * rho * ratio))
}

pub fn build_wave(c: f64, rho: f64, phi: Nonlinearity) -> Result<WaveProfile> {
    if c == 0.0 || !c.is_finite() {
        return Err(Error::InvalidParameter(
            "wave speed must be nonzero and finite; c = 0 is the equilibrium".into(),
        ));
    }
    let required_r = required_r(rho, phi)?;
    let (left, middle, right) = if c > 0.0 {
        forward_coefficients(c, rho, phi)
    } else {
        let neg = |(k1, k2): (f64, f64)| (-k1, -k2);
        let (l, m, r) = forward_coefficients(-c, rho, phi);
        (neg(r), neg(m), neg(l))
    };
    Ok(WaveProfile {
        c,
        rho,
        nonlinearity: phi,
        left,
        middle,
        right,
        required_r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    Left,
    Middle,
    Right,
}

impl WaveProfile {
    fn coefficients(&self, piece: Piece) -> (f64, f64) {
        match piece {
            Piece::Left => self.left,
            Piece::Middle => self.middle,
            Piece::Right => self.right,
        }
    }

    fn piece_at(x: f64) -> Piece {
        if x < -1.0 {
            Piece::Left
        } else if x > 1.0 {
            Piece::Right
        } else {
            Piece::Middle
        }
    }

    fn piece_value(&self, piece: Piece, x: f64) -> f64 {
        let (k1, k2) = self.coefficients(piece);
        if k2 == 0.0 {
            k1
        } else {
            k1 + k2 * (-self.c * x).exp()
        }
    }

    fn piece_slope(&self, piece: Piece, x: f64) -> f64 {
        let (_, k2) = self.coefficients(piece);
        -self.c * k2 * (-self.c * x).exp()
    }

    fn piece_curvature(&self, piece: Piece, x: f64) -> f64 {
        let (_, k2) = self.coefficients(piece);
        self.c * self.c * k2 * (-self.c * x).exp()
    }

    /// Profile value; `±1` belong to the middle piece.
    pub fn eval(&self, x: f64) -> f64 {
        self.piece_value(Self::piece_at(x), x)
    }

    /// Limits at `-∞` and `+∞`.
    pub fn limits(&self) -> (f64, f64) {
        (self.left.0, self.right.0)
    }
}

pub fn wave_eval(profile: &WaveProfile, x: f64) -> f64 {
    profile.eval(x)
}

/// Solution set of `φ(ρ) = -ρ/R` over `ρ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Admissible {
    Roots(Vec<f64>),
    /// Every `ρ > 0` (the linear nonlinearity at `R = -1`).
    AllRho,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceMap {
    pub nonlinearity: Nonlinearity,
    pub r: f64,
    pub admissible: Admissible,
}

impl ExistenceMap {
    pub fn is_empty(&self) -> bool {
        matches!(&self.admissible, Admissible::Roots(v) if v.is_empty())
    }

    pub fn roots(&self) -> &[f64] {
        match &self.admissible {
            Admissible::Roots(v) => v,
            Admissible::AllRho => &[],
        }
    }
}

/// Roots of `φ(ρ) + ρ/R` by logarithmic bracketing scan and bisection.
pub fn scan_rho(r: f64, phi: Nonlinearity, rho_max: f64) -> Vec<f64> {
    let g = |rho: f64| phi.eval(rho) + rho / r;
    let mut out = Vec::new();
    let mut lo = RHO_SCAN_START;
    let mut g_lo = g(lo);
    while lo < rho_max {
        let hi = (lo * RHO_SCAN_RATIO).min(rho_max);
        let g_hi = g(hi);
        if g_hi == 0.0 || (g_lo != 0.0 && g_lo.signum() != g_hi.signum()) {
            let width = 1e-12 * hi.max(1.0);
            let root = roots::bisect(g, lo, hi, width);
            let dg = |rho: f64| {
                let e = 1e-7 * rho.max(1e-3);
                (g(rho + e) - g(rho - e)) / (2.0 * e)
            };
            out.push(roots::newton_polish(g, dg, root, lo, hi));
        }
        lo = hi;
        g_lo = g_hi;
    }
    out
}

/// Amplitudes `ρ` for which traveling waves exist at coupling `R`.
pub fn solve_rho(r: f64, phi: Nonlinearity) -> ExistenceMap {
    let admissible = if !(r < 0.0) || !r.is_finite() {
        Admissible::Roots(Vec::new())
    } else {
        match phi {
            Nonlinearity::Sign => Admissible::Roots(vec![-r]),
            Nonlinearity::Linear => {
                if (r + 1.0).abs() <= 1e-12 {
                    Admissible::AllRho
                } else {
                    Admissible::Roots(Vec::new())
                }
            }
            // φ ≤ 1/tanh(1) bounds any root by |R| / tanh(1)
            Nonlinearity::Tanh => Admissible::Roots(scan_rho(r, phi, RHO_SCAN.max(1.32 * r.abs()))),
        }
    };
    ExistenceMap {
        nonlinearity: phi,
        r,
        admissible,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveResidual {
    /// `max |w_xx + c w_x|` over the samples.
    pub ode: f64,
    /// Continuity gaps at `-1` and `+1`.
    pub continuity: [f64; 2],
    /// Jump-condition residuals at `-1` and `+1`.
    pub jump: [f64; 2],
    /// `|w(0)|`.
    pub origin: f64,
}

impl WaveResidual {
    pub fn max(&self) -> f64 {
        [self.ode, self.continuity[0], self.continuity[1], self.jump[0], self.jump[1], self.origin]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Checks the ODE, matching and jump conditions with analytic derivatives.
pub fn wave_residual(profile: &WaveProfile, samples: &[f64]) -> Result<WaveResidual> {
    if let Some(&x) = samples.iter().find(|&&x| x == -1.0 || x == 0.0 || x == 1.0) {
        return Err(Error::InvalidParameter(format!("sample x = {x} sits on a junction")));
    }
    let c = profile.c;
    let ode = samples
        .iter()
        .map(|&x| {
            let piece = WaveProfile::piece_at(x);
            (profile.piece_curvature(piece, x) + c * profile.piece_slope(piece, x)).abs()
        })
        .fold(0.0, f64::max);

    let (l, m, r) = (Piece::Left, Piece::Middle, Piece::Right);
    let continuity = [
        (profile.piece_value(l, -1.0) - profile.piece_value(m, -1.0)).abs(),
        (profile.piece_value(m, 1.0) - profile.piece_value(r, 1.0)).abs(),
    ];

    let phi = profile.nonlinearity;
    let rr = profile.required_r;
    let slope0 = profile.piece_slope(m, 0.0);
    let jump_left = (profile.piece_slope(m, -1.0) - profile.piece_slope(l, -1.0))
        - (slope0 + rr * c * phi.eval(profile.piece_value(m, -1.0)));
    let jump_right = (profile.piece_slope(r, 1.0) - profile.piece_slope(m, 1.0))
        - (-slope0 - rr * c * phi.eval(profile.piece_value(m, 1.0)));

    Ok(WaveResidual {
        ode,
        continuity,
        jump: [jump_left.abs(), jump_right.abs()],
        origin: profile.piece_value(m, 0.0).abs(),
    })
}

/// Junction-free sample points spread over `[-x_max, x_max]`.
pub fn default_samples(x_max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| -x_max + (2.0 * x_max) * (k as f64 + 0.5) / n as f64)
        .filter(|&x| x != -1.0 && x != 0.0 && x != 1.0)
        .collect()
}
