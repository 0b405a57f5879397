//! Toolkit for the trend-dependent price-formation free-boundary model.
//!
//! In the moving frame `w(x, t) = f(x + p(t), t)` the free boundary sits at
//! `x = 0` and the field obeys
//!
//! ```text
//! w_t = D w_xx + p' w_x - D w_x(0) [δ_{-a} - δ_a] - R p' [φ(w(-a)) δ_{-a} - φ(w(a)) δ_a]
//! w(0, t) = 0,   p'(t) = -D w_xx(0, t) / w_x(0, t)
//! ```
//!
//! The crate is split by concern:
//!
//! * [`model`]: parameters, the three nonlinearities, equilibria.
//! * [`spectral`]: eigenfunctions of the linearization around `w¹`, the real
//!   instability threshold and the imaginary-axis crossings.
//! * [`waves`]: closed-form traveling waves and their existence map.
//! * [`solver`]: Crank-Nicolson finite-difference integrator.
//! * [`analysis`]: period detection, symmetry checks and `R` sweeps.
//! * [`selfcheck`]: the cross-module invariant suite behind `freeprice verify`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod model;
pub mod plot;
pub mod roots;
pub mod selfcheck;
pub mod solver;
pub mod spectral;
pub mod waves;

pub use error::{Error, Result};
pub use model::{EquilibriumProfile, ModelConfig, Nonlinearity};
