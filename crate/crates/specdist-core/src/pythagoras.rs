//! Product-geometry laboratory.
//!
//! For a product triple with factor distances `d1, d2`, this module computes
//! the product combination `sqrt(d1^2 + d2^2)`, compares it against the
//! spectral distance of the combined triple (the ratio lies in `[1, sqrt 2]`
//! for product states), and studies the marginal-fixing idempotent whose
//! contraction property characterises when the two agree. The idempotent's
//! operator-norm bound `K` in `[1, 3]` is estimated by sampling, together
//! with the analytic witness that attains 3.

use crate::error::{PythagorasError, StateError, TripleError};
use crate::matrix::{kron, operator_norm, CMatrix};
use crate::metric::FiniteMetric;
use crate::sampling;
use crate::solver::{DistanceEngine, SolveOptions};
use crate::tol;
use crate::triple::{
    finite_metric_triple, product_state, product_triple, two_point_state, two_point_triple,
    Algebra, FiniteSpectralTriple, ProductStructure, Sector, State,
};
use rand::Rng;
use std::fmt;

/// Combines two factor distances into the product-space value
/// `sqrt(d1^2 + d2^2)`, with infinity absorbing.
pub fn product_metric(d1: f64, d2: f64) -> f64 {
    if d1.is_infinite() || d2.is_infinite() {
        f64::INFINITY
    } else {
        d1.hypot(d2)
    }
}

/// Classification of one product-versus-spectral comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `|ratio - 1|` within the equality tolerance.
    Equality,
    /// Ratio strictly above 1 but within the admissible band.
    Strict,
    /// Ratio outside the admissible band: a solver or construction failure.
    Violation,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equality => "equality",
            Verdict::Strict => "strict",
            Verdict::Violation => "violation",
        })
    }
}

/// Outcome of comparing the spectral distance on a product triple with the
/// combination of the factor distances.
#[derive(Debug, Clone)]
pub struct PythagorasReport {
    /// Distance between the left marginals.
    pub d_left: f64,
    /// Distance between the right marginals.
    pub d_right: f64,
    /// `sqrt(d_left^2 + d_right^2)`.
    pub d_product: f64,
    /// Spectral distance on the combined triple.
    pub d_spectral: f64,
    /// `d_spectral / d_product` (1 when both vanish or both are infinite).
    pub ratio: f64,
    pub verdict: Verdict,
    /// Whether both inputs factored as product states; the upper bound
    /// `ratio <= sqrt 2` is only asserted in that case.
    pub product_states: bool,
    /// `|ratio - 1|` threshold for declaring equality.
    pub equality_tol: f64,
    /// Slack beyond `[1, sqrt 2]` tolerated before flagging a violation.
    pub violation_slack: f64,
}

impl PythagorasReport {
    /// Classifies factor distances against the combined spectral distance.
    pub fn from_distances(
        d_left: f64,
        d_right: f64,
        d_spectral: f64,
        product_states: bool,
    ) -> Self {
        let d_product = product_metric(d_left, d_right);
        let ratio = if d_product.is_infinite() {
            if d_spectral.is_infinite() {
                1.0
            } else {
                0.0
            }
        } else if d_product <= 1e-12 {
            if d_spectral <= 1e-9 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            d_spectral / d_product
        };
        let equality_tol = tol::PYTHAGORAS_EQUALITY;
        let violation_slack = tol::PYTHAGORAS_EQUALITY;
        let verdict = if (ratio - 1.0).abs() <= equality_tol {
            Verdict::Equality
        } else if ratio < 1.0 - violation_slack {
            Verdict::Violation
        } else if product_states && ratio > std::f64::consts::SQRT_2 + violation_slack {
            Verdict::Violation
        } else {
            Verdict::Strict
        };
        PythagorasReport {
            d_left,
            d_right,
            d_product,
            d_spectral,
            ratio,
            verdict,
            product_states,
            equality_tol,
            violation_slack,
        }
    }

    /// Turns a violation verdict into an error carrying the diagnostics.
    pub fn ensure_valid(&self) -> Result<(), PythagorasError> {
        if self.verdict == Verdict::Violation {
            Err(PythagorasError::Violation {
                details: format!(
                    "ratio {:.12e} outside [1 - {:.1e}, sqrt2 + {:.1e}] \
                     (d_left {:.12e}, d_right {:.12e}, d_product {:.12e}, \
                     d_spectral {:.12e}, product states: {})",
                    self.ratio,
                    self.violation_slack,
                    self.violation_slack,
                    self.d_left,
                    self.d_right,
                    self.d_product,
                    self.d_spectral,
                    self.product_states
                ),
            })
        } else {
            Ok(())
        }
    }
}

/// Result of sampling the contraction property of a marginal idempotent:
/// how often `L(P a) <= L(a)` failed, and by how much at worst.
#[derive(Debug, Clone, Copy)]
pub struct ContractionReport {
    pub samples: usize,
    pub violations: usize,
    /// Largest observed `L(P a) - L(a)` (negative when P always contracts).
    pub max_excess: f64,
}

/// A product triple bundled with ready-made distance engines for both
/// factors, the combined triple, and the subspace spanned by
/// `{a1 (x) 1} + {1 (x) a2}` (an independent route to the product value).
pub struct ProductLab {
    structure: ProductStructure,
    left_engine: DistanceEngine,
    right_engine: DistanceEngine,
    combined_engine: DistanceEngine,
    sum_triple: FiniteSpectralTriple,
    sum_engine: DistanceEngine,
    /// Right-factor basis index omitted from the sum-subspace basis (its
    /// identity component is carried by the left block).
    dropped_right: usize,
}

impl ProductLab {
    pub fn new(structure: ProductStructure) -> Result<Self, PythagorasError> {
        let left_engine = DistanceEngine::new(structure.left())?;
        let right_engine = DistanceEngine::new(structure.right())?;
        let combined_engine = DistanceEngine::new(structure.combined())?;
        let (sum_triple, dropped_right) = sum_subspace_triple(&structure)?;
        let sum_engine = DistanceEngine::new(&sum_triple)?;
        Ok(ProductLab {
            structure,
            left_engine,
            right_engine,
            combined_engine,
            sum_triple,
            sum_engine,
            dropped_right,
        })
    }

    pub fn from_factors(
        left: &FiniteSpectralTriple,
        right: &FiniteSpectralTriple,
    ) -> Result<Self, PythagorasError> {
        ProductLab::new(product_triple(left, right)?)
    }

    pub fn structure(&self) -> &ProductStructure {
        &self.structure
    }

    pub fn left_engine(&self) -> &DistanceEngine {
        &self.left_engine
    }

    pub fn right_engine(&self) -> &DistanceEngine {
        &self.right_engine
    }

    pub fn combined_engine(&self) -> &DistanceEngine {
        &self.combined_engine
    }

    /// Distances between the left and right marginals of two states on the
    /// combined algebra.
    pub fn marginal_distances(
        &self,
        phi: &State,
        psi: &State,
        opts: &SolveOptions,
    ) -> Result<(f64, f64), PythagorasError> {
        let (phi1, phi2) = self.structure.marginals(phi)?;
        let (psi1, psi2) = self.structure.marginals(psi)?;
        let d1 = self.left_engine.distance(&phi1, &psi1, opts)?.value;
        let d2 = self.right_engine.distance(&phi2, &psi2, opts)?.value;
        Ok((d1, d2))
    }

    /// The product combination `sqrt(d1^2 + d2^2)` of the marginal
    /// distances; a lower bound for the spectral distance of any two states,
    /// tight up to `sqrt 2` for product states.
    pub fn d_times(
        &self,
        phi: &State,
        psi: &State,
        opts: &SolveOptions,
    ) -> Result<f64, PythagorasError> {
        let (d1, d2) = self.marginal_distances(phi, psi, opts)?;
        Ok(product_metric(d1, d2))
    }

    /// The same value computed as a supremum over the subspace
    /// `{a1 (x) 1 + 1 (x) a2}` of the combined algebra — a cross-check that
    /// never touches the factor engines.
    pub fn d_times_direct(
        &self,
        phi: &State,
        psi: &State,
        opts: &SolveOptions,
    ) -> Result<f64, PythagorasError> {
        let phis = self.restrict_to_sum(phi)?;
        let psis = self.restrict_to_sum(psi)?;
        Ok(self.sum_engine.distance(&phis, &psis, opts)?.value)
    }

    /// Values of a combined-algebra state on the sum-subspace basis.
    fn restrict_to_sum(&self, phi: &State) -> Result<State, PythagorasError> {
        let (m1, m2) = self.structure.marginals(phi)?;
        let mut vals = m1.coeffs().to_vec();
        for (k, v) in m2.coeffs().iter().enumerate() {
            if k != self.dropped_right {
                vals.push(*v);
            }
        }
        Ok(State::from_coeffs(self.sum_triple.algebra(), vals)?)
    }

    /// Full comparison: marginal distances, the combined spectral distance,
    /// and the classified ratio.
    pub fn check(
        &self,
        phi: &State,
        psi: &State,
        opts: &SolveOptions,
    ) -> Result<PythagorasReport, PythagorasError> {
        let (phi1, phi2) = self.structure.marginals(phi)?;
        let (psi1, psi2) = self.structure.marginals(psi)?;
        let d_left = self.left_engine.distance(&phi1, &psi1, opts)?.value;
        let d_right = self.right_engine.distance(&phi2, &psi2, opts)?.value;
        let d_spectral = self.combined_engine.distance(phi, psi, opts)?.value;
        let product_states =
            factors_as_product(phi, &phi1, &phi2) && factors_as_product(psi, &psi1, &psi2);
        Ok(PythagorasReport::from_distances(
            d_left,
            d_right,
            d_spectral,
            product_states,
        ))
    }

    /// Coefficient vector of `a1 (x) 1 + 1 (x) a2` on the combined basis.
    pub fn embed_sum(&self, a1: &[f64], a2: &[f64]) -> Vec<f64> {
        let e1 = self.structure.left().algebra().identity_coeffs();
        let e2 = self.structure.right().algebra().identity_coeffs();
        assert_eq!(a1.len(), e1.len());
        assert_eq!(a2.len(), e2.len());
        let mut x = Vec::with_capacity(a1.len() * a2.len());
        for (a, e) in a1.iter().zip(e1) {
            for (b, f) in a2.iter().zip(e2) {
                x.push(a * f + e * b);
            }
        }
        x
    }

    /// Deviation (relative to the squared norm) of the exact additivity
    /// `L1(a1)^2 + L2(a2)^2 = L(a1 (x) 1 + 1 (x) a2)^2` that underlies the
    /// product lower bound.
    pub fn sum_of_squares_deviation(
        &self,
        a1: &[f64],
        a2: &[f64],
    ) -> Result<f64, PythagorasError> {
        let l1 = self.left_engine.seminorm(a1)?;
        let l2 = self.right_engine.seminorm(a2)?;
        let l = self.combined_engine.seminorm(&self.embed_sum(a1, a2))?;
        let lhs = l1 * l1 + l2 * l2;
        let rhs = l * l;
        Ok((lhs - rhs).abs() / rhs.max(1.0))
    }

    /// Samples random self-adjoint coefficient vectors and reports how often
    /// the idempotent increased the seminorm beyond slack. Zero violations
    /// certify (numerically) that the product and spectral distances agree
    /// for the defining pair of states.
    pub fn check_contraction(
        &self,
        idem: &MarginalIdempotent,
        samples: usize,
        seed: u64,
    ) -> Result<ContractionReport, PythagorasError> {
        let m = self.structure.combined().algebra().len();
        if idem.dim() != m {
            return Err(PythagorasError::Violation {
                details: format!(
                    "idempotent acts on {} coefficients, combined algebra has {}",
                    idem.dim(),
                    m
                ),
            });
        }
        let mut rng = sampling::rng(seed);
        let mut violations = 0usize;
        let mut max_excess = f64::NEG_INFINITY;
        for _ in 0..samples {
            let x: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lx = self.combined_engine.seminorm(&x)?;
            let lpx = self.combined_engine.seminorm(&idem.apply(&x))?;
            let excess = lpx - lx;
            max_excess = max_excess.max(excess);
            if excess > tol::CONTRACTION_SLACK * lx.max(1.0) {
                violations += 1;
            }
        }
        Ok(ContractionReport {
            samples,
            violations,
            max_excess,
        })
    }
}

/// Whether `phi` equals the product of its own marginals, within 1e-10.
fn factors_as_product(phi: &State, m1: &State, m2: &State) -> bool {
    let c = phi.coeffs();
    let a = m1.coeffs();
    let b = m2.coeffs();
    let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    c.iter().enumerate().all(|(idx, v)| {
        let (j, k) = (idx / b.len(), idx % b.len());
        (v - a[j] * b[k]).abs() <= 1e-10 * scale
    })
}

/// Triple over the subspace `{a1 (x) 1} + {1 (x) a2}` of a product algebra,
/// with the same Dirac data. One right-factor basis element is dropped so
/// the spanning set stays linearly independent (both blocks contain the
/// identity); returns its index alongside the triple.
fn sum_subspace_triple(
    p: &ProductStructure,
) -> Result<(FiniteSpectralTriple, usize), TripleError> {
    let a1 = p.left().algebra();
    let a2 = p.right().algebra();
    let e1 = a1.identity_coeffs();
    let e2 = a2.identity_coeffs();
    let dropped = e2
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())
        .map(|(k, _)| k)
        .expect("algebras are nonempty");
    let id1 = a1.element(e1);
    let id2 = a2.element(e2);
    let mut basis: Vec<CMatrix> = a1.basis().iter().map(|b| kron(b, &id2)).collect();
    for (k, c) in a2.basis().iter().enumerate() {
        if k != dropped {
            basis.push(kron(&id1, c));
        }
    }
    let algebra = Algebra::explicit(basis)?;

    let mut sectors = Vec::with_capacity(p.left().sectors().len() * p.right().sectors().len());
    for s1 in p.left().sectors() {
        let (d1, g1, rep1) = match s1 {
            Sector::Operator {
                dirac,
                grading: Some(g),
                rep,
            } => (dirac, g, rep),
            _ => return Err(TripleError::MissingGrading),
        };
        for s2 in p.right().sectors() {
            let (d2, g2, rep2) = match s2 {
                Sector::Operator {
                    dirac,
                    grading,
                    rep,
                } => (dirac, grading.as_ref(), rep),
                Sector::RealLinear { .. } => {
                    return Err(TripleError::Unsupported {
                        reason: "products of real-linear sectors are not defined".into(),
                    });
                }
            };
            let rep_id1 = combination(rep1, e1);
            let rep_id2 = combination(rep2, e2);
            let dirac = kron(d1, &CMatrix::identity(d2.rows())).add(&kron(g1, d2));
            let grading = g2.map(|g| kron(g1, g));
            let mut rep: Vec<CMatrix> = rep1.iter().map(|r| kron(r, &rep_id2)).collect();
            for (k, r) in rep2.iter().enumerate() {
                if k != dropped {
                    rep.push(kron(&rep_id1, r));
                }
            }
            sectors.push(Sector::operator(dirac, grading, rep));
        }
    }
    let triple = FiniteSpectralTriple::new(
        format!("{} + {}", p.left().label, p.right().label),
        algebra,
        sectors,
    )?;
    Ok((triple, dropped))
}

fn combination(mats: &[CMatrix], coeffs: &[f64]) -> CMatrix {
    let n = mats[0].rows();
    let mut out = CMatrix::zeros(n, n);
    for (c, m) in coeffs.iter().zip(mats) {
        out.add_scaled_real(*c, m);
    }
    out
}

// ---------------------------------------------------------------------------
// The marginal-fixing idempotent
// ---------------------------------------------------------------------------

/// The linear map on product-algebra coefficients that replaces an element
/// by its two marginal slices minus their overlap:
/// `a (x) b -> phi1(a) 1 (x) b + psi2(b) a (x) 1 - phi1(a) psi2(b) 1 (x) 1`.
/// It is idempotent with range `{a1 (x) 1} + {1 (x) a2}` of dimension
/// `m1 + m2 - 1` and kernel of dimension `(m1 - 1)(m2 - 1)`.
#[derive(Debug, Clone)]
pub struct MarginalIdempotent {
    action: Vec<Vec<f64>>,
    m1: usize,
    m2: usize,
    trace: f64,
}

impl MarginalIdempotent {
    /// Builds the map from a state on each factor. Both functionals must be
    /// unital (value 1 on the algebra identity).
    pub fn new(
        alg1: &Algebra,
        phi1: &State,
        alg2: &Algebra,
        psi2: &State,
    ) -> Result<Self, PythagorasError> {
        let m1 = alg1.len();
        let m2 = alg2.len();
        if phi1.coeffs().len() != m1 || psi2.coeffs().len() != m2 {
            return Err(PythagorasError::State(StateError::DimensionMismatch {
                context: format!(
                    "states carry {} and {} values for bases of {} and {}",
                    phi1.coeffs().len(),
                    psi2.coeffs().len(),
                    m1,
                    m2
                ),
            }));
        }
        let e1 = alg1.identity_coeffs();
        let e2 = alg2.identity_coeffs();
        let f = phi1.coeffs();
        let g = psi2.coeffs();
        let u1 = phi1.value(e1);
        if (u1 - 1.0).abs() > 1e-9 {
            return Err(PythagorasError::NonUnital {
                context: format!("left state evaluates to {u1} on the identity"),
            });
        }
        let u2 = psi2.value(e2);
        if (u2 - 1.0).abs() > 1e-9 {
            return Err(PythagorasError::NonUnital {
                context: format!("right state evaluates to {u2} on the identity"),
            });
        }

        let n = m1 * m2;
        let mut action = vec![vec![0.0f64; n]; n];
        for jp in 0..m1 {
            for kp in 0..m2 {
                let row = &mut action[jp * m2 + kp];
                for j in 0..m1 {
                    for k in 0..m2 {
                        let mut v = -f[j] * g[k] * e1[jp] * e2[kp];
                        if kp == k {
                            v += f[j] * e1[jp];
                        }
                        if jp == j {
                            v += g[k] * e2[kp];
                        }
                        row[j * m2 + k] = v;
                    }
                }
            }
        }
        let idem = MarginalIdempotent {
            action,
            m1,
            m2,
            trace: 0.0,
        };
        let dev = idem.idempotency_deviation();
        if dev > tol::IDEMPOTENT {
            return Err(PythagorasError::Violation {
                details: format!("idempotency deviation {dev:.3e} exceeds {:.1e}", tol::IDEMPOTENT),
            });
        }
        let trace: f64 = (0..n).map(|i| idem.action[i][i]).sum();
        let expected = (m1 + m2 - 1) as f64;
        if (trace - expected).abs() > 1e-9 {
            return Err(PythagorasError::Violation {
                details: format!("idempotent trace {trace:.12} differs from rank {expected}"),
            });
        }
        Ok(MarginalIdempotent { trace, ..idem })
    }

    /// Side length of the coefficient space the map acts on.
    pub fn dim(&self) -> usize {
        self.m1 * self.m2
    }

    /// Rank of the map: dimension of the preserved sum subspace.
    pub fn rank(&self) -> usize {
        self.m1 + self.m2 - 1
    }

    pub fn kernel_dim(&self) -> usize {
        self.m1 * self.m2 - self.rank()
    }

    /// Trace of the action matrix (equals the rank for an idempotent).
    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn action(&self) -> &[Vec<f64>] {
        &self.action
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        self.action
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius deviation of `P^2` from `P`, relative to the size of `P`.
    pub fn idempotency_deviation(&self) -> f64 {
        let n = self.dim();
        let mut scale = 0.0f64;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let pij = self.action[i][j];
                scale += pij * pij;
                let mut sq = 0.0;
                for k in 0..n {
                    sq += self.action[i][k] * self.action[k][j];
                }
                dev += (sq - pij) * (sq - pij);
            }
        }
        dev.sqrt() / scale.sqrt().max(1.0)
    }
}

// ---------------------------------------------------------------------------
// Extension to all operators and its norm
// ---------------------------------------------------------------------------

/// The marginal idempotent extended to every operator on the product space,
/// using density representatives of the two defining states:
/// `T -> 1 (x) tr_1[(R1 (x) 1) T] + tr_2[(1 (x) R2) T] (x) 1 - tr[(R1 (x) R2) T] 1`.
#[derive(Debug, Clone)]
pub struct OperatorExtension {
    r1: CMatrix,
    r2: CMatrix,
}

/// Sampled estimate of the operator norm of the extended idempotent.
#[derive(Debug, Clone, Copy)]
pub struct NormEstimate {
    /// Largest observed `|P(T)| / |T|`, including the analytic witness and
    /// the identity (which always achieves exactly 1).
    pub estimate: f64,
    /// Ratio achieved by the witness `(1 - 2 R1) (x) (1 - 2 R2)`.
    pub witness_ratio: f64,
    pub samples: usize,
}

impl OperatorExtension {
    pub fn new(r1: CMatrix, r2: CMatrix) -> Result<Self, PythagorasError> {
        for r in [&r1, &r2] {
            if !r.is_square() {
                return Err(PythagorasError::State(StateError::DimensionMismatch {
                    context: "density representatives must be square".into(),
                }));
            }
            let dev = r.hermitian_deviation();
            if dev > 1e-10 * r.frobenius_norm().max(1.0) {
                return Err(PythagorasError::State(StateError::NotHermitian {
                    deviation: dev,
                }));
            }
            let trace = r.trace().re;
            if (trace - 1.0).abs() > 1e-9 {
                return Err(PythagorasError::State(StateError::TraceNotOne { trace }));
            }
        }
        Ok(OperatorExtension { r1, r2 })
    }

    pub fn apply(&self, t: &CMatrix) -> Result<CMatrix, PythagorasError> {
        let d1 = self.r1.rows();
        let d2 = self.r2.rows();
        if t.rows() != d1 * d2 || t.cols() != d1 * d2 {
            return Err(PythagorasError::State(StateError::DimensionMismatch {
                context: format!(
                    "operator is {}x{}, extension acts on dimension {}",
                    t.rows(),
                    t.cols(),
                    d1 * d2
                ),
            }));
        }
        let id1 = CMatrix::identity(d1);
        let id2 = CMatrix::identity(d2);
        let slice2 =
            crate::matrix::partial_trace_left(&kron(&self.r1, &id2).matmul(t), d1, d2);
        let slice1 =
            crate::matrix::partial_trace_right(&kron(&id1, &self.r2).matmul(t), d1, d2);
        let overlap = kron(&self.r1, &self.r2).matmul(t).trace();
        let out = kron(&id1, &slice2).add(&kron(&slice1, &id2));
        Ok(out.add(&CMatrix::identity(d1 * d2).scale(-overlap)))
    }

    /// The product of the two reflections `1 - 2 R`; for pure states at the
    /// extreme points it attains the maximal norm ratio 3.
    pub fn witness(&self) -> CMatrix {
        let refl =
            |r: &CMatrix| CMatrix::identity(r.rows()).add(&r.scale_real(-2.0));
        kron(&refl(&self.r1), &refl(&self.r2))
    }

    /// Lower-bound estimate of the extension's operator norm: the best
    /// ratio over the witness, the identity, and `samples` random operators
    /// (alternating Hermitian and general).
    pub fn norm_estimate(
        &self,
        samples: usize,
        seed: u64,
    ) -> Result<NormEstimate, PythagorasError> {
        let n = self.r1.rows() * self.r2.rows();
        let ratio = |t: &CMatrix| -> Result<f64, PythagorasError> {
            let nt = operator_norm(t).map_err(PythagorasError::from)?;
            if nt <= 1e-14 {
                return Ok(0.0);
            }
            let pt = operator_norm(&self.apply(t)?).map_err(PythagorasError::from)?;
            Ok(pt / nt)
        };
        let witness_ratio = ratio(&self.witness())?;
        // the identity is fixed by the extension, so 1 is always attained
        let mut estimate = witness_ratio.max(1.0);
        let mut rng = sampling::rng(seed);
        for i in 0..samples {
            let t = if i % 2 == 0 {
                sampling::random_hermitian(n, &mut rng)
            } else {
                sampling::random_matrix(n, &mut rng)
            };
            estimate = estimate.max(ratio(&t)?);
        }
        Ok(NormEstimate {
            estimate,
            witness_ratio,
            samples,
        })
    }
}

// ---------------------------------------------------------------------------
// Block reduction for finite-metric products
// ---------------------------------------------------------------------------

/// For a product of an N-point metric geometry with an arbitrary triple,
/// bounds the distance between `point r (x) phi2` and `point s (x) psi2` by
/// the same distance computed on the single two-point geometry of length
/// `g(r,s)`. Returns `(d_full, d_block)` and verifies `d_full <= d_block`.
pub fn block_reduction_bound(
    metric: &FiniteMetric,
    t2: &FiniteSpectralTriple,
    r: usize,
    s: usize,
    phi2: &State,
    psi2: &State,
    opts: &SolveOptions,
) -> Result<(f64, f64), PythagorasError> {
    let n = metric.size();
    if r >= n || s >= n || r == s {
        return Err(PythagorasError::Triple(TripleError::DimensionMismatch {
            context: format!("point pair ({r},{s}) invalid for a {n}-point space"),
        }));
    }
    let grs = metric.distance(r, s);
    if !grs.is_finite() {
        return Err(PythagorasError::Triple(TripleError::Unsupported {
            reason: format!("block reduction needs a finite edge, g({r},{s}) is infinite"),
        }));
    }

    let left = finite_metric_triple(metric);
    let full = product_triple(&left, t2)?;
    let engine = DistanceEngine::new(full.combined())?;
    let point = |i: usize| -> Result<State, StateError> {
        let mut p = vec![0.0; n];
        p[i] = 1.0;
        State::from_simplex(left.algebra(), &p)
    };
    let phi = product_state(&point(r)?, phi2);
    let psi = product_state(&point(s)?, psi2);
    let d_full = engine.distance(&phi, &psi, opts)?.value;

    let block = two_point_triple(grs / 2.0)?;
    let bfull = product_triple(&block, t2)?;
    let bengine = DistanceEngine::new(bfull.combined())?;
    let bphi = product_state(&two_point_state(block.algebra(), 1.0)?, phi2);
    let bpsi = product_state(&two_point_state(block.algebra(), -1.0)?, psi2);
    let d_block = bengine.distance(&bphi, &bpsi, opts)?.value;

    let slack = (10.0 * opts.tol * d_block.max(1.0)).max(1e-9);
    if d_full > d_block + slack {
        return Err(PythagorasError::Violation {
            details: format!(
                "full-product distance {d_full:.12e} exceeds its two-point block bound \
                 {d_block:.12e} (edge ({r},{s}), length {grs:.6})"
            ),
        });
    }
    Ok((d_full, d_block))
}

// ---------------------------------------------------------------------------
// Closed-form helpers for the two-point x two-point geometry
// ---------------------------------------------------------------------------

/// Diagonal values (= coefficients on the product basis) of the element
/// `x0 1(x)1 + (x1/2) s(x)1 + (x2/2) 1(x)s + (x3/2) v` of the two-point x
/// two-point algebra, where `s = diag(1,-1)` and
/// `v = (phi1 + s) (x) (psi2 + s)` spans the kernel of the marginal
/// idempotent with parameters `phi1, psi2`.
pub fn two_two_point_element(x: &[f64; 4], phi1: f64, psi2: f64) -> [f64; 4] {
    let sgn = [1.0, -1.0];
    let mut out = [0.0f64; 4];
    for j in 0..2 {
        for k in 0..2 {
            let v = (phi1 + sgn[j]) * (psi2 + sgn[k]);
            out[j * 2 + k] =
                x[0] + 0.5 * x[1] * sgn[j] + 0.5 * x[2] * sgn[k] + 0.5 * x[3] * v;
        }
    }
    out
}

/// Convenience wrappers mirroring the lab methods for one-shot use.
pub fn pythagoras_check(
    structure: &ProductStructure,
    phi: &State,
    psi: &State,
    opts: &SolveOptions,
) -> Result<PythagorasReport, PythagorasError> {
    ProductLab::new(structure.clone())?.check(phi, psi, opts)
}

pub fn d_times(
    structure: &ProductStructure,
    phi: &State,
    psi: &State,
    opts: &SolveOptions,
) -> Result<f64, PythagorasError> {
    ProductLab::new(structure.clone())?.d_times(phi, psi, opts)
}
