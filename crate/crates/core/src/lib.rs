//! Sided subdivision patterns in bipartite graphs and their geometric uses.
//!
//! The crate detects copies of `K_{s,t}'` and its hypergraph generalisation,
//! regularizes dense unbalanced bipartite graphs with checkable certificates,
//! builds random lower-bound constructions, maps point-line and
//! distinct-distance questions onto incidence graphs, and extracts explicit
//! point sets with few distinct distances.
//!
//! Geometry is exact: points, lines and distances are generic over an
//! [`ExactField`], and the aliases below fix the default big-rational choice.

pub mod bigraph;
pub mod construct;
pub mod distances;
pub mod error;
pub mod exponents;
pub mod incidence;
mod intmath;
pub mod matching;
pub mod patterns;
pub mod regularize;
pub mod scalar;
pub mod serde_rational;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::Ratio;

pub use bigraph::{Bigraph, Side};
pub use error::{Error, Result};
pub use patterns::{Embedding, SearchOptions, SubdividedPattern};
pub use scalar::ExactField;

/// Arbitrary-precision rational, the default exact scalar.
pub type Rational = Ratio<BigInt>;
/// Gaussian rational `p + q i`.
pub type GaussianRational = Complex<Rational>;

pub type Point = incidence::RPoint<Rational>;
pub type Line = incidence::RLine<Rational>;
pub type ComplexPoint = incidence::CPoint<Rational>;
pub type ComplexLine = incidence::CLine<Rational>;
pub type Flat = incidence::Flat2InR4<Rational>;
pub type PointSet = distances::PlanarPointSet<Rational>;
pub type Lifted = distances::LiftedSystem<Rational>;
