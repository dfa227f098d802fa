//! Calculus of maximally monotone symmetric linear relations and
//! generalized linear-quadratic (GLQ) functions on R^n.
//!
//! The library is organised around set-valued linear relations stored as
//! orthonormal bases of their graphs. On top of that substrate it provides
//! closed-form Moreau envelopes, proximal mappings and Fenchel conjugates of
//! GLQ functions, envelope inversion, the reconciliation of the set-valued
//! and Moore-Penrose inverses, the Attouch-Wets distance, and classification
//! of epigraphical limits of quadratic sequences.
//!
//! Modules:
//! - [`subspace`]: orthonormal-basis subspace arithmetic and pseudoinverses,
//! - [`linrel`]: linear relations on R^n via graph subspaces of R^{2n},
//! - [`glq`]: generalized linear-quadratic functions and their calculus,
//! - [`envinv`]: deciding whether a quadratic is a Moreau envelope,
//! - [`epiconv`]: epiconvergence machinery and the Attouch-Wets metric,
//! - [`apps`]: extended seminorms and the least-squares conjugate,
//! - [`oracle`]: independent brute-force oracles used by the test suite,
//! - [`schema`]: JSON-facing descriptions of relations and functions.

pub mod apps;
pub mod envinv;
pub mod epiconv;
pub mod glq;
pub mod linrel;
pub mod oracle;
pub mod schema;
pub mod subspace;
pub mod tol;

pub use glq::{ExtReal, GlqFunction, QuadraticFunction};
pub use linrel::{AffineSet, LinearRelation};
pub use subspace::Subspace;
pub use tol::Tolerances;

// The public API speaks nalgebra types; re-export the crate so downstream
// users build vectors and matrices against the same version.
pub use nalgebra;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("tolerances must be strictly positive")]
    InvalidTolerance,
    #[error("prox parameter must be strictly positive, got {0}")]
    InvalidProxParameter(f64),
    #[error("relation is not maximally monotone")]
    NotMaximallyMonotone,
    #[error("relation is not symmetric")]
    NotSymmetric,
    #[error("matrix is not symmetric positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("shifts differ; sums of generalized linear-quadratic functions are only formed for matching shifts")]
    ShiftMismatch,
    #[error("operation requires zero shifts (a = 0) on both operands")]
    NonzeroShift,
    #[error("dom A1 is not contained in dom A2; the difference q_A1 - q_A2 is not a generalized linear-quadratic function")]
    DomainNotIncluded,
    #[error("the relation difference is not monotone; no convex difference exists")]
    NonMonotoneDifference,
    #[error("second operand must be positive definite")]
    NotPositiveDefinite,
    #[error("quadratic coefficient must be nonnegative, got {0}")]
    NegativeQuadCoefficient(f64),
    #[error("probe index list must be increasing with at least {0} entries")]
    BadProbeList(usize),
    #[error("sequence terms have mixed dimensions")]
    MixedDimensions,
    #[error("grid specification is invalid: {0}")]
    BadGrid(&'static str),
    #[error("argument outside the required domain: {0}")]
    OutOfDomain(&'static str),
    #[error("cyclic check needs at least two points")]
    TooFewPoints,
    #[error("non-finite sample encountered at a finite-difference stencil point")]
    NonFiniteSample,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
