//! Linearization around `w¹` (normalized `σ²/2 = 1`, `a = 1`).
//!
//! Writing `λ = α²`, bounded eigenfunctions split into odd and even parts.
//! The odd part and the `Re α = 0` even part fill `(-∞, 0]`. The remaining
//! even eigenvalues solve `e^α - 1 + Rα = 0` with `Re α > 0`: a real root
//! for `R < -1`, and imaginary-axis crossings at `α = a(1 ± i)` where
//! `cos a - sin a = e^{-a}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots;
use crate::solver::Grid1D;

pub const SCAN_STEP: f64 = 0.01;
pub const BISECT_WIDTH: f64 = 1e-13;
pub const DEFAULT_A_MAX: f64 = 25.0;
/// Relative agreement required between the two crossing formulas for `R`.
pub const R_AGREEMENT: f64 = 1e-9;

pub const BAND_NOTE: &str =
    "(-inf, 0] is filled with eigenvalues lambda = -b^2 of bounded odd and even eigenfunctions";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Eigenvalue with its square root `α` taken in the closed first quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub alpha: Complex64,
    pub lambda: Complex64,
    pub parity: Parity,
}

impl SpectralPoint {
    pub fn from_alpha(alpha: Complex64, parity: Parity) -> Result<Self> {
        if alpha.re < 0.0 || alpha.im < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} outside the first quadrant"
            )));
        }
        Ok(Self {
            alpha,
            lambda: alpha * alpha,
            parity,
        })
    }
}

/// Odd band eigenfunction for `λ = -b²`.
pub fn odd_eigenfunction(b: f64, x: f64) -> f64 {
    if x > 1.0 {
        (b * x).sin() - (b * (x - 1.0)).sin()
    } else if x < -1.0 {
        (b * x).sin() - (b * (x + 1.0)).sin()
    } else {
        (b * x).sin()
    }
}

/// Even band eigenfunction for `λ = -b²`, extended evenly.
pub fn even_band_eigenfunction(b: f64, r: f64, x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        (b * x).cos() - 1.0
    } else {
        let (sb, cb) = b.sin_cos();
        (b * x).cos() * (1.0 - cb + r * b * sb) - (b * x).sin() * (sb + r * b * cb)
    }
}

/// Real positive root of `e^a - 1 + R a = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEigenvalue {
    pub a: f64,
    pub lambda: f64,
}

/// The real unstable eigenvalue `λ = a²`, present only for `R < -1`.
pub fn real_unstable_eigenvalue(r: f64) -> Option<RealEigenvalue> {
    if !(r < -1.0) || !r.is_finite() {
        return None;
    }
    let f = |a: f64| a.exp_m1() + r * a;
    let df = |a: f64| a.exp() + r;
    // f falls from f(0) = 0 to its minimum at ln(-R), then grows without bound
    let lo = (-r).ln();
    let mut hi = lo.max(1.0);
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    let a = roots::bisect(f, lo, hi, BISECT_WIDTH);
    let a = roots::newton_polish(f, df, a, lo, hi);
    Some(RealEigenvalue { a, lambda: a * a })
}

/// `cos a - sin a - e^{-a}`, zero at the imaginary-axis crossings.
pub fn crossing_residual(a: f64) -> f64 {
    a.cos() - a.sin() - (-a).exp()
}

fn crossing_residual_derivative(a: f64) -> f64 {
    -a.sin() - a.cos() + (-a).exp()
}

/// `R` at a crossing, from the real part of the characteristic equation.
pub fn crossing_r_cos(a: f64) -> f64 {
    (1.0 - a.exp() * a.cos()) / a
}

/// `R` at a crossing, from the imaginary part.
pub fn crossing_r_sin(a: f64) -> f64 {
    -a.exp() * a.sin() / a
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingRecord {
    pub index: usize,
    pub a_value: f64,
    pub r_value: f64,
    /// `2i a²`; the conjugate `-2i a²` crosses at the same `R`.
    pub lambda: Complex64,
    /// +1 when the pair moves from stable to unstable as `R` increases.
    pub direction: i8,
}

/// All crossings with `0 < a ≤ a_max`, sorted by `a`.
pub fn find_crossings(a_max: f64) -> Result<Vec<CrossingRecord>> {
    if !(a_max > 0.0) {
        return Err(Error::InvalidParameter(format!("a_max must be positive, got {a_max}")));
    }
    // a = 0 is a root of the residual itself and is skipped
    let brackets = roots::scan_brackets(crossing_residual, SCAN_STEP, a_max, SCAN_STEP);
    let polish = |(lo, hi): (f64, f64)| -> Result<(f64, f64)> {
        let a = roots::bisect(crossing_residual, lo, hi, BISECT_WIDTH);
        let a = roots::newton_polish(crossing_residual, crossing_residual_derivative, a, lo, hi);
        let r_cos = crossing_r_cos(a);
        let r_sin = crossing_r_sin(a);
        if (r_cos - r_sin).abs() > R_AGREEMENT * r_cos.abs().max(1.0) {
            return Err(Error::SpuriousCrossing { a, r_cos, r_sin });
        }
        Ok((a, r_cos))
    };

    #[cfg(feature = "parallel")]
    let mut found: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        brackets.into_par_iter().map(polish).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let mut found: Vec<(f64, f64)> = brackets.into_iter().map(polish).collect::<Result<_>>()?;

    found.sort_by(|x, y| x.0.total_cmp(&y.0));
    found
        .into_iter()
        .enumerate()
        .map(|(index, (a, r))| {
            Ok(CrossingRecord {
                index,
                a_value: a,
                r_value: r,
                lambda: Complex64::new(0.0, 2.0 * a * a),
                direction: crossing_direction(a, r)?,
            })
        })
        .collect()
}

/// Sign of `d Re λ / dR = 4a³R / |e^α + R|²` at a crossing.
pub fn crossing_direction(a: f64, r: f64) -> Result<i8> {
    if !(a > 0.0) || r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "({a}, {r}) is not a crossing: need a > 0 and R != 0"
        )));
    }
    let alpha = Complex64::new(a, a);
    let rate = 4.0 * a.powi(3) * r / (alpha.exp() + r).norm_sqr();
    Ok(if rate > 0.0 { 1 } else { -1 })
}

/// Even eigenfunction at the crossing `(a, R)` with `α = a(1 + i)`.
pub fn crossing_eigenfunction(a: f64, r: f64, x: f64) -> Complex64 {
    let alpha = Complex64::new(a, a);
    let x = x.abs();
    if x <= 1.0 {
        (alpha * x).exp() + (-alpha * x).exp() - 2.0
    } else {
        let ea = alpha.exp();
        (-alpha * x).exp() * (1.0 - ea - r * alpha * ea)
    }
}

/// Discrete `L₁ g` on `grid`, zero at the two end nodes.
///
/// Second differences, minus `χ · g_xx(0)`, plus the delta terms at `±1`:
/// `-g_x(0) [δ₋₁ - δ₁] - R g_xx(0) [δ₋₁ + δ₁]`. The indicator `χ` is the
/// central difference of `w¹` over `w¹_x(0)`: 1 inside `(-1, 1)` and `1/2`
/// on the kink nodes.
pub fn apply_linearized(g: &[Complex64], r: f64, grid: &Grid1D) -> Result<Vec<Complex64>> {
    let n = grid.len();
    if g.len() != n {
        return Err(Error::InvalidParameter(format!(
            "sample length {} does not match grid length {n}",
            g.len()
        )));
    }
    let h = grid.h;
    let i0 = grid.zero_index();
    let im = grid.index_of(-1.0)?;
    let ip = grid.index_of(1.0)?;
    let d2 = |i: usize| (g[i - 1] - g[i] * 2.0 + g[i + 1]) / (h * h);
    let gxx0 = d2(i0);
    let gx0 = (g[i0 + 1] - g[i0 - 1]) / (2.0 * h);

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        out[i] = d2(i);
        if i > im && i < ip {
            out[i] -= gxx0;
        } else if i == im || i == ip {
            out[i] -= gxx0 * 0.5;
        }
    }
    out[im] += (-gx0 - gxx0 * r) / h;
    out[ip] += (gx0 - gxx0 * r) / h;
    Ok(out)
}

/// `max |L₁g - λg|` over interior nodes, excluding the delta nodes `±1`.
pub fn operator_residual(lambda: Complex64, g: &[Complex64], r: f64, grid: &Grid1D) -> Result<f64> {
    let lg = apply_linearized(g, r, grid)?;
    let im = grid.index_of(-1.0)?;
    let ip = grid.index_of(1.0)?;
    Ok((1..grid.len() - 1)
        .filter(|&i| i != im && i != ip)
        .map(|i| (lg[i] - lambda * g[i]).norm())
        .fold(0.0, f64::max))
}

/// Real-valued convenience wrapper around [`operator_residual`].
pub fn operator_residual_real(lambda: f64, g: &[f64], r: f64, grid: &Grid1D) -> Result<f64> {
    let gc: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    operator_residual(Complex64::new(lambda, 0.0), &gc, r, grid)
}

/// Operator residuals of the two analytic eigenpairs on a grid of spacing `h`
/// and on its refinement `h/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualConvergence {
    /// Odd pair `b = 2π`, `λ = -4π²`: `(coarse, fine)`.
    pub odd: (f64, f64),
    /// First positive crossing pair, `λ = 2i a₀²`: `(coarse, fine)`.
    pub crossing: (f64, f64),
}

impl ResidualConvergence {
    pub fn odd_ratio(&self) -> f64 {
        self.odd.0 / self.odd.1
    }

    pub fn crossing_ratio(&self) -> f64 {
        self.crossing.0 / self.crossing.1
    }
}

pub fn residual_convergence(h: f64) -> Result<ResidualConvergence> {
    let first = find_crossings(5.0)?
        .into_iter()
        .find(|c| c.r_value > 0.0)
        .ok_or_else(|| Error::InvalidParameter("no positive crossing below a = 5".into()))?;
    let (a0, r0) = (first.a_value, first.r_value);
    let b = 2.0 * std::f64::consts::PI;
    let pair = |h: f64| -> Result<(f64, f64)> {
        let grid = Grid1D::with_spacing(-5.0, 5.0, h)?;
        let g = grid.sample(|x| odd_eigenfunction(b, x));
        let odd = operator_residual_real(-b * b, &g, r0, &grid)?;
        let g: Vec<Complex64> = grid.nodes().into_iter().map(|x| crossing_eigenfunction(a0, r0, x)).collect();
        let cross = operator_residual(first.lambda, &g, r0, &grid)?;
        Ok((odd, cross))
    };
    let (odd_c, cross_c) = pair(h)?;
    let (odd_f, cross_f) = pair(h / 2.0)?;
    Ok(ResidualConvergence {
        odd: (odd_c, odd_f),
        crossing: (cross_c, cross_f),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub r: f64,
    pub real_unstable: Option<RealEigenvalue>,
    pub crossings: Vec<CrossingRecord>,
    pub band_note: &'static str,
}

impl SpectrumReport {
    /// Crossings already passed when `R` is increased from `-1` to `self.r`
    /// (positive side) or decreased to it (negative side).
    pub fn unstable_pairs(&self) -> usize {
        self.crossings
            .iter()
            .filter(|c| (c.r_value > 0.0 && self.r > c.r_value) || (c.r_value < 0.0 && self.r < c.r_value))
            .count()
    }
}

pub fn spectrum_report(r: f64, a_max: f64) -> Result<SpectrumReport> {
    Ok(SpectrumReport {
        r,
        real_unstable: real_unstable_eigenvalue(r),
        crossings: find_crossings(a_max)?,
        band_note: BAND_NOTE,
    })
}
