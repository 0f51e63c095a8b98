//! Error types. One enum per domain, plus a crate-wide umbrella.

use thiserror::Error;

/// Matrix-level numerical failures.
#[derive(Debug, Clone, Error)]
pub enum MatError {
    /// The input to the Hermitian eigensolver was not Hermitian within the
    /// relative tolerance.
    #[error("matrix is not Hermitian: max |M - M*| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
    /// The QL iteration failed to isolate an eigenvalue within the sweep cap.
    #[error("eigensolver did not converge within {iterations} iterations for one eigenvalue")]
    NoConvergence { iterations: usize },
    /// Shape mismatch in a matrix operation.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
}

/// Validation failures when constructing triples and algebras.
#[derive(Debug, Clone, Error)]
pub enum TripleError {
    #[error("Dirac operator is not Hermitian (deviation {deviation:.3e})")]
    DiracNotHermitian { deviation: f64 },
    #[error("grading invariant violated: {invariant} (deviation {deviation:.3e})")]
    BadGrading { invariant: String, deviation: f64 },
    #[error("algebra basis element {index} is not Hermitian")]
    BasisNotHermitian { index: usize },
    #[error("algebra basis Gram matrix is ill-conditioned (condition {condition:.3e})")]
    IllConditionedBasis { condition: f64 },
    #[error("the identity is not in the span of the algebra basis (residual {residual:.3e})")]
    IdentityNotInSpan { residual: f64 },
    #[error("a product requires a grading on every left-factor sector")]
    MissingGrading,
    #[error("the triple is already even: every sector carries a grading")]
    AlreadyEven,
    #[error("operation not supported for this triple: {reason}")]
    Unsupported { reason: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Validation failures when constructing states.
#[derive(Debug, Clone, Error)]
pub enum StateError {
    #[error("density matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace:.12}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("density matrix is not positive semidefinite (smallest eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },
    #[error("Bloch vector lies outside the unit ball (norm {norm:.12})")]
    OutOfBall { norm: f64 },
    #[error("not a probability vector: {reason}")]
    NotProbability { reason: String },
    #[error("state/algebra dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Distance-engine failures.
#[derive(Debug, Clone, Error)]
pub enum EngineError {
    /// The optimizer did not reach the requested tolerance. Carries the best
    /// certified lower bound found so far.
    #[error(
        "distance solver did not converge within {iterations} iterations \
         (best lower bound {best_lower_bound:.12e})"
    )]
    NoConvergence {
        best_lower_bound: f64,
        iterations: usize,
    },
    /// The dual route needs a representative of the state difference inside
    /// the represented algebra; none exists within tolerance.
    #[error(
        "state difference has no representative in the represented algebra \
         (residual {residual:.3e}): {context}"
    )]
    RhoNotInAlgebra { residual: f64, context: String },
    #[error("states are incompatible with this triple: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Transport failures.
#[derive(Debug, Clone, Error)]
pub enum TransportError {
    /// Mass would have to cross an infinite-distance barrier.
    #[error(
        "transport infeasible: mass imbalance {imbalance:.3e} across an \
         infinite-distance barrier (finiteness class {class:?})"
    )]
    Infeasible { class: Vec<usize>, imbalance: f64 },
    #[error("marginals are not probability vectors: {reason}")]
    BadMarginals { reason: String },
    #[error("not a metric: {reason}")]
    NotAMetric { reason: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    /// Internal solver safety valve; not expected in practice.
    #[error("transport solver failed: {reason}")]
    Numerical { reason: String },
}

/// Product-geometry (Pythagoras) failures.
#[derive(Debug, Clone, Error)]
pub enum PythagorasError {
    /// Marginal projections need unital algebras.
    #[error("the marginal-projection idempotent requires a unital algebra: {context}")]
    NonUnital { context: String },
    /// The two-sided product bound was violated beyond tolerance — this
    /// indicates a solver or construction bug and carries full diagnostics.
    #[error("product bound violated: {details}")]
    Violation { details: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Quantization-module failures.
#[derive(Debug, Clone, Error)]
pub enum BerezinError {
    #[error("quadrature invalid: {reason}")]
    BadQuadrature { reason: String },
    #[error("coherent projector at node {index} is not a rank-one projection (residual {residual:.3e})")]
    BadProjector { index: usize, residual: f64 },
    #[error("symbol/quadrature length mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// I/O and format failures.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid input: {reason}")]
    Invalid { reason: String },
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Metric(#[from] TransportError),
}

/// Umbrella error for callers that do not care about the domain.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Pythagoras(#[from] PythagorasError),
    #[error(transparent)]
    Berezin(#[from] BerezinError),
    #[error(transparent)]
    Io(#[from] IoError),
}
