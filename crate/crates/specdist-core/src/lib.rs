//! Spectral distances on finite-dimensional spectral triples.
//! (module set under construction; full docs land with the final lib.rs)

pub mod berezin;
pub mod error;
pub mod io;
pub mod matrix;
pub mod metric;
pub mod oracles;
pub mod pythagoras;
pub mod sampling;
mod simplex;
pub mod solver;
pub mod tetra;
pub mod tol;
pub mod transport;
pub mod triple;

pub use berezin::{sphere_radius, BerezinMaps, SphereQuadrature};
pub use error::{
    BerezinError, EngineError, Error, IoError, MatError, PythagorasError, StateError,
    TransportError, TripleError,
};
pub use io::{geometry_from_json, metric_from_json, state_from_json, triple_from_json, Geometry};
pub use matrix::{
    commutator, direct_sum, hermitian_eig, kron, normalized_trace_inner, operator_norm,
    trace_inner, CMatrix, EigDecomposition, C64,
};
pub use metric::FiniteMetric;
pub use pythagoras::{
    block_reduction_bound, d_times, product_metric, pythagoras_check, ContractionReport,
    MarginalIdempotent, NormEstimate, OperatorExtension, ProductLab, PythagorasReport, Verdict,
};
pub use solver::{
    commutant_directions, spectral_distance, spectral_distance_dual, DistanceEngine,
    DistanceResult, SolveOptions,
};
pub use tetra::{
    cube_vertex_map, marginal_projection, marginal_split, projection_residual, square_embedding,
    tetra_embed,
};
pub use transport::{commutative_distance, kantorovich, TransportPlan};
pub use triple::{
    bloch_triples, evenize, finite_metric_triple, full_matrix_triple, marginals,
    peres_partial_transpose, product_state, product_triple, simplex3_triple, state_from_bloch,
    state_from_simplex, two_point_state, two_point_triple, Algebra, AlgebraKind, BlochTriples,
    FiniteSpectralTriple, ProductStructure, Sector, State,
};
