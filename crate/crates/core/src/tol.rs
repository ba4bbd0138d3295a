//! Named numeric tolerances used across the crate.
//!
//! Every threshold that a computation or a contract check depends on is
//! defined here rather than inline, so the provenance of each magic
//! number is auditable in one place.

/// Relative residual at which the simultaneous root iteration is accepted.
pub const EPS_ROOT: f64 = 1e-12;

/// Radius for clustering root approximations into a single root with
/// multiplicity. Wide enough to absorb the slow convergence of the
/// iteration at exact multiple roots, narrow enough to keep genuinely
/// distinct near-collisions apart at desk precision.
pub const EPS_CLUSTER: f64 = 1e-7;

/// Relative tolerance below which a leading coefficient counts as zero.
pub const EPS_LEAD: f64 = 1e-12;

/// Relative tolerance for the common-root (coprimality) check of a
/// rational map's numerator and denominator.
pub const EPS_RES: f64 = 1e-12;

/// Chordal margin a preimage-tree base point must keep from the sampled
/// postcritical set.
pub const DELTA_PCV: f64 = 1e-6;

/// Chordal margin tree points must keep from sampled critical points;
/// guarantees finite accumulated log-derivatives.
pub const DELTA_CRIT: f64 = 1e-6;

/// Tolerated violation of strict monotonicity in sampled pressure curves.
pub const TAU_MONO: f64 = 1e-3;

/// Tolerated negativity of discrete second differences (convexity) in
/// sampled pressure curves.
pub const TAU_CONV: f64 = 1e-3;

/// Maximum word length for explicit coefficient composition; beyond this
/// the coefficients blow up and the closed form is useless.
pub const MAX_COMPOSE_DEPTH: usize = 8;

/// Iteration cap for the simultaneous root finder.
pub const MAX_ROOT_ITER: u32 = 200;

/// Number of trailing level increments averaged by the pressure estimator.
pub const DEFAULT_K_AVG: usize = 3;

/// Default bisection width for Bowen and temperature roots.
pub const DEFAULT_TOL_T: f64 = 1e-3;

/// Largest parameter probed while bracketing a pressure zero; pressure
/// is strictly decreasing and unbounded below, so failing to change sign
/// by here signals an estimator failure, not a feature of the map.
pub const MAX_BRACKET_T: f64 = 64.0;

/// Default relative weight threshold for branch pruning, measured
/// against the running maximum weight of the level.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Finite-difference step (in the pressure parameter) used when a
/// Lyapunov exponent is needed at a point without surrounding grid.
pub const CHI_STEP: f64 = 1e-2;

/// Margin by which the atom-series exponent must exceed the pressure for
/// the conformal-measure series to count as summable.
pub const SUMMABILITY_MARGIN: f64 = 1e-6;

/// Separation below which two preimage clouds are reported as touching
/// in the Open Set Condition check.
pub const OSC_TOUCH: f64 = 1e-4;
