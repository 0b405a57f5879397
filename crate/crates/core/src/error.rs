use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("point x = {x} is not a grid node")]
    OffGrid { x: f64 },

    /// `|w_x(0)|` fell below the guard, so `p'` is undefined.
    #[error("|w_x(0)| = {wx:e} below guard at t = {t}")]
    GuardTripped { t: f64, wx: f64 },

    #[error("non-finite field value at t = {t}")]
    NonFinite { t: f64 },

    #[error("crossing formulas disagree at a = {a}: {r_cos} vs {r_sin}")]
    SpuriousCrossing { a: f64, r_cos: f64, r_sin: f64 },

    #[error("no matched snapshot pair for the half-period check")]
    InsufficientSnapshots,
}
