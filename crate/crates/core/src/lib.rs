//! Rank-metric codes over GF(q^m).
//!
//! - [`gfq`]: prime and extension field arithmetic.
//! - [`rank_metric`]: rank norm, rank distance, sampling of vectors by rank.
//! - [`linpoly`]: linearized polynomials and their Euclidean algorithm.
//! - [`gabidulin`]: Gabidulin codes with a bounded rank-distance decoder.
//! - [`els`]: elementary linear subspaces, complements and restrictions.
//! - [`bounds`]: exact counts and bounds on the decoder error probability.
//! - [`oracle`]: exhaustive ground truth for tiny codes.
//! - [`sim`]: Monte Carlo estimation of the decoder error probability.
//! - [`verify`]: exhaustive verification suites.

pub mod bounds;
pub mod els;
pub mod error;
pub mod gabidulin;
pub mod gfq;
pub mod linalg;
pub mod linpoly;
pub mod oracle;
pub mod rank_metric;
pub mod scalar;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use gabidulin::{DecodeOutcome, FailureReason, GabidulinCode};
pub use gfq::{ExtensionField, FieldElement, PrimeField};
pub use linpoly::LinearizedPoly;
pub use rank_metric::RankVector;
pub use scalar::Scalar;

/// Exact rational numbers, the scalar for bounds that must not round.
pub type Rational = num_rational::BigRational;

/// Rank-specific error-probability bound evaluated exactly.
pub fn pe_bound_exact(p: &bounds::BoundParams, u: usize) -> Rational {
    bounds::pe_rank_specific::<Rational>(p, u)
}

/// Rank-specific error-probability bound evaluated in `f64`.
pub fn pe_bound_f64(p: &bounds::BoundParams, u: usize) -> f64 {
    bounds::pe_rank_specific::<f64>(p, u)
}
