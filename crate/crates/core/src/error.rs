//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The simultaneous root iteration failed to reach the residual target.
    #[error("root finder did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: u32 },

    /// The preimage equation collapsed to degree zero.
    #[error("polynomial collapsed to degree 0; equation has no roots to solve for")]
    DegenerateEquation,

    /// A word was too long for explicit coefficient composition.
    #[error("word length {requested} exceeds the composition depth limit {limit}")]
    DepthExceeded { requested: usize, limit: usize },

    /// A tree base point sits too close to the sampled postcritical set.
    #[error("base point is {check:.3e} (chordal) from the postcritical samples, below the {margin:.1e} margin")]
    BasePointTooClose { check: f64, margin: f64 },

    /// A tree point landed on (or numerically at) a critical point.
    #[error("preimage branch passed within {dist:.3e} of a critical point")]
    CriticalBranch { dist: f64 },

    /// Bracketing for a pressure zero ran out of range.
    #[error("pressure estimate never changed sign up to t = {max_t}; estimator failure")]
    NoSignChange { max_t: f64 },

    /// A finite-difference stencil could not be placed on the curve grid.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// Too few usable dyadic scales remain for a log-log fit.
    #[error("scale range saturated: {0}")]
    ScaleRangeSaturated(String),

    /// The conformal-measure series diverges for the requested exponent.
    #[error("series not summable: s = {s} must exceed the pressure estimate {pressure:.6} by more than the margin")]
    SeriesNotSummable { s: f64, pressure: f64 },

    /// Fiber rendering requires polynomial generators.
    #[error("fiber rendering needs polynomial generators; generator {index} is not a polynomial")]
    NotPolynomial { index: usize },

    /// No generator has a repelling fixed point to seed the chaos game.
    #[error("no generator has a repelling fixed point at tolerance")]
    NoRepellingSeed,

    /// A rational map failed a structural invariant.
    #[error("invalid rational map: {0}")]
    InvalidMap(String),

    /// A semigroup specification failed a structural invariant.
    #[error("invalid semigroup spec: {0}")]
    InvalidSpec(String),

    /// An operation precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
