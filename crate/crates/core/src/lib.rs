//! Dynamical and fractal-geometric invariants of finitely generated
//! rational semigroups, computed through the associated skew product map.
//!
//! The pipeline is: enumerate truncated preimage trees of the skew
//! product, estimate topological pressure from derivative-weighted level
//! sums, solve the Bowen equation for the Hausdorff dimension of the
//! Julia set, and derive Lyapunov exponents, multifractal spectra, and
//! conformal-measure approximations from the same trees. A geometry
//! layer renders global and fiber Julia sets, fits box-counting
//! dimensions, verifies the Open Set Condition on sampled discs, and
//! fits exponential shrinking rates of pulled-back balls.

pub mod complex;
pub mod error;
pub mod geometry;
pub mod measures;
pub mod multifractal;
pub mod numeric;
pub(crate) mod poly;
pub mod pressure;
pub mod prng;
pub mod rational;
pub mod roots;
pub mod semigroup;
pub mod tol;
pub mod tree;

pub use complex::Cx;
pub use error::{Error, Result};
pub use rational::{PreimageSet, RationalMap};
pub use semigroup::{SemigroupSpec, Word};
pub use tree::{PreimageTree, PruneOpts};

// coefficient lists are built from this complex type; re-exported so
// downstream crates agree on the version
pub use num_complex;
