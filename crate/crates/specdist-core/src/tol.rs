//! Numerical tolerances used across the crate.
//!
//! Every constant states what it guards. Relative tolerances are applied
//! against `max(1, scale)` of the quantity they check unless noted.

/// Relative deviation allowed between a matrix and its adjoint before the
/// eigensolver refuses the input (it symmetrizes anything below this).
pub const HERMITIAN_REL: f64 = 1e-12;

/// Reconstruction accuracy `||V L V* - A||` demanded of the eigensolver on
/// well-scaled input (unit tests).
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Cap on QL sweeps per eigenvalue before `NoConvergence`.
pub const EIG_MAX_SWEEPS: usize = 50;

/// C*-identity spot check `| ||a* a|| - ||a||^2 |` (unit tests).
pub const CSTAR_IDENTITY: f64 = 1e-9;

/// Grading invariants: `g = g*`, `g^2 = 1`, `[g, pi(a)] = 0`, `{g, D} = 0`.
pub const GRADING: f64 = 1e-10;

/// Largest acceptable condition number of an algebra-basis Gram matrix.
pub const BASIS_CONDITION_MAX: f64 = 1e8;

/// Residual allowed when expressing the identity in the algebra basis.
pub const IDENTITY_IN_SPAN: f64 = 1e-10;

/// State validation: trace deviation from 1.
pub const STATE_TRACE: f64 = 1e-10;

/// State validation: most negative admissible eigenvalue of a density.
pub const STATE_EIG_FLOOR: f64 = -1e-10;

/// Bloch vectors may exceed the closed unit ball by at most this much.
pub const BLOCH_BALL_SLACK: f64 = 1e-10;

/// Default relative tolerance of the distance engine.
pub const ENGINE_DEFAULT_REL: f64 = 1e-6;

/// Relative seminorm threshold below which a direction counts as commutant
/// (and a commutant direction pairing with the state difference above this
/// relative threshold flags an infinite distance).
pub const COMMUTANT_REL: f64 = 1e-9;

/// Slack allowed on the reported witness: `||[D, a]|| <= 1 + this`.
pub const WITNESS_FEASIBILITY: f64 = 1e-8;

/// Window (relative) within which eigenvalues count as "near the top" when
/// averaging supergradients.
pub const NEAR_TOP_WINDOW: f64 = 1e-8;

/// Iterations over which the best ascent value must be stable to declare a
/// restart converged.
pub const ASCENT_STABLE_ITERS: usize = 50;

/// Dual route: residual allowed when representing the state difference in
/// the represented algebra.
pub const RIESZ_RESIDUAL: f64 = 1e-10;

/// Dual route: `L <= INFINITE_L_REL * ||[D, rho]|| + INFINITE_L_ABS` is
/// reported as an infinite distance.
pub const INFINITE_L_REL: f64 = 1e-9;
pub const INFINITE_L_ABS: f64 = 1e-12;

/// Transport: marginal (pushforward) accuracy of a returned plan.
pub const TRANSPORT_MARGINAL: f64 = 1e-10;

/// Transport: largest admissible duality gap of a returned plan.
pub const TRANSPORT_GAP: f64 = 1e-9;

/// Transport: mass imbalance across a finiteness class that still counts as
/// balanced.
pub const TRANSPORT_BALANCE: f64 = 1e-12;

/// Transport: degenerate-pivot stall window before switching to Bland's rule.
pub const TRANSPORT_STALL_WINDOW: usize = 400;

/// Metric validation: slack on symmetry/triangle checks (relative).
pub const METRIC_SLACK: f64 = 1e-9;

/// Closed-form cross-checks in unit tests (relative).
pub const ORACLE_MATCH_REL: f64 = 1e-5;

/// Closed-form cross-checks in the acceptance suite (relative).
pub const ACCEPTANCE_ORACLE_REL: f64 = 1e-4;

/// Pythagoras reports: |ratio - 1| below this is verdict "equality".
pub const PYTHAGORAS_EQUALITY: f64 = 1e-4;

/// Pythagoras reports: the product-state sandwich must hold within this.
pub const PYTHAGORAS_SANDWICH: f64 = 1e-5;

/// Idempotent checks: `||P^2 - P||` tolerance.
pub const IDEMPOTENT: f64 = 1e-10;

/// Contraction checks: slack on `||[D, P(a)]|| <= ||[D, a]||`.
pub const CONTRACTION_SLACK: f64 = 1e-10;

/// Product seminorm identity `||[D1,a1]||^2 + ||[D2,a2]||^2 = ||[D,a]||^2`.
pub const SUM_OF_SQUARES_IDENTITY: f64 = 1e-9;

/// Closed-form seminorm on the two-bit product vs. the operator norm.
pub const LIPNORM_MATCH: f64 = 1e-10;

/// Quadrature: weight-sum deviation from 1 and node-norm deviation from 1.
pub const QUADRATURE_EXACT: f64 = 1e-12;

/// Quadrature: first-moment magnitude (also bounds the quantization of the
/// constant function against the identity).
pub const QUADRATURE_MOMENT: f64 = 5e-3;

/// Adjointness of symbol and quantization maps (exact identity; float slack).
pub const ADJOINTNESS: f64 = 1e-10;

/// Rank-one projector residual for coherent states.
pub const PROJECTOR_RANK1: f64 = 1e-10;

/// Square-embedding coordinate identity (cancellation-limited).
pub const SURFACE_COORDS: f64 = 1e-12;

/// Marginal-projection residual on two-bit states.
pub const MARGINAL_PROJECTION: f64 = 1e-10;

/// Exact small-scale identities (partial transpose eigenvalue, pure-state
/// purified distances).
pub const EXACT_IDENTITY: f64 = 1e-12;
