//! Finite-dimensional spectral triples: Hermitian-basis algebras, states,
//! operator and real-linear sectors, the standard small triples (two-point
//! space, three-point simplex boundary, distance-graph triples, the three
//! 2x2 geometries, full matrix algebras), products, and gradings.

use num_complex::Complex64 as C64;

use crate::error::{StateError, TripleError};
use crate::matrix::{
    anticommutator, bloch_density, commutator, direct_sum, hermitian_eig, kron,
    normalized_trace_inner, pauli_basis, solve_real_sym_psd, trace_inner, CMatrix,
};
use crate::metric::FiniteMetric;
use crate::tol;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// Algebras
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Diagonal matrices in `M_n` (functions on `n` points).
    Diagonal,
    /// All of `M_n`.
    FullMatrix,
    /// A user-supplied Hermitian basis.
    Explicit,
}

/// A unital *-algebra of `dim x dim` matrices described by a real-linear
/// Hermitian basis `B_1..B_m`. Self-adjoint elements are exactly the real
/// combinations of the basis; states are recorded by their values on it.
#[derive(Debug, Clone)]
pub struct Algebra {
    kind: AlgebraKind,
    dim: usize,
    basis: Vec<CMatrix>,
    /// Coefficients of the identity matrix in the basis.
    identity: Vec<f64>,
    /// Trace-pairing Gram matrix `Tr(B_k B_l)` (real symmetric).
    gram: CMatrix,
}

fn gram_of(basis: &[CMatrix]) -> CMatrix {
    let m = basis.len();
    CMatrix::from_fn(m, m, |k, l| {
        C64::new(trace_inner(&basis[k], &basis[l]).re, 0.0)
    })
}

impl Algebra {
    /// Functions on `n` points: basis `E_00, ..., E_{n-1,n-1}`.
    pub fn diagonal(n: usize) -> Self {
        assert!(n >= 1);
        let basis: Vec<CMatrix> = (0..n)
            .map(|i| CMatrix::from_fn(n, n, |r, c| if r == i && c == i { ONE } else { ZERO }))
            .collect();
        let gram = gram_of(&basis);
        Algebra {
            kind: AlgebraKind::Diagonal,
            dim: n,
            basis,
            identity: vec![1.0; n],
            gram,
        }
    }

    /// The full matrix algebra `M_n` with the orthonormal Hermitian basis
    /// `E_ii`, `(E_ij + E_ji)/sqrt2`, `i(E_ij - E_ji)/sqrt2`.
    pub fn full_matrix(n: usize) -> Self {
        assert!(n >= 1);
        let mut basis: Vec<CMatrix> = (0..n)
            .map(|i| CMatrix::from_fn(n, n, |r, c| if r == i && c == i { ONE } else { ZERO }))
            .collect();
        let s = 1.0 / 2.0f64.sqrt();
        for i in 0..n {
            for j in (i + 1)..n {
                basis.push(CMatrix::from_fn(n, n, |r, c| {
                    if (r, c) == (i, j) || (r, c) == (j, i) {
                        C64::new(s, 0.0)
                    } else {
                        ZERO
                    }
                }));
                basis.push(CMatrix::from_fn(n, n, |r, c| {
                    if (r, c) == (i, j) {
                        C64::new(0.0, s)
                    } else if (r, c) == (j, i) {
                        C64::new(0.0, -s)
                    } else {
                        ZERO
                    }
                }));
            }
        }
        let mut identity = vec![0.0; basis.len()];
        for e in identity.iter_mut().take(n) {
            *e = 1.0;
        }
        let gram = gram_of(&basis);
        Algebra {
            kind: AlgebraKind::FullMatrix,
            dim: n,
            basis,
            identity,
            gram,
        }
    }

    /// An algebra from an explicit Hermitian basis. The basis must be well
    /// conditioned in the trace pairing and must span the identity.
    pub fn explicit(basis: Vec<CMatrix>) -> Result<Self, TripleError> {
        if basis.is_empty() {
            return Err(TripleError::DimensionMismatch {
                context: "empty basis".into(),
            });
        }
        let dim = basis[0].rows();
        for (k, b) in basis.iter().enumerate() {
            if b.rows() != dim || b.cols() != dim {
                return Err(TripleError::DimensionMismatch {
                    context: format!("basis element {k} is not {dim}x{dim}"),
                });
            }
            if !b.is_hermitian(tol::HERMITIAN_REL) {
                return Err(TripleError::BasisNotHermitian { index: k });
            }
        }
        let gram = gram_of(&basis);
        let eig = hermitian_eig(&gram)?;
        let lam_min = eig.values.first().copied().unwrap_or(0.0);
        let lam_max = eig.values.last().copied().unwrap_or(0.0);
        let condition = if lam_min > 0.0 {
            lam_max / lam_min
        } else {
            f64::INFINITY
        };
        if !(condition < tol::BASIS_CONDITION_MAX) {
            return Err(TripleError::IllConditionedBasis { condition });
        }
        // identity coefficients by least squares in the trace pairing
        let rhs: Vec<f64> = basis.iter().map(|b| b.trace().re).collect();
        let (identity, _) = solve_real_sym_psd(&gram, &rhs)?;
        let mut recon = CMatrix::zeros(dim, dim);
        for (c, b) in identity.iter().zip(&basis) {
            recon.add_scaled_real(*c, b);
        }
        let residual = recon.sub(&CMatrix::identity(dim)).frobenius_norm();
        if residual > tol::IDENTITY_IN_SPAN * (dim as f64).sqrt().max(1.0) {
            return Err(TripleError::IdentityNotInSpan { residual });
        }
        Ok(Algebra {
            kind: AlgebraKind::Explicit,
            dim,
            basis,
            identity,
            gram,
        })
    }

    /// Tensor product algebra; basis order is `B_j (x) C_k -> j * m2 + k`.
    pub fn product(a1: &Algebra, a2: &Algebra) -> Algebra {
        let mut basis = Vec::with_capacity(a1.len() * a2.len());
        let mut identity = Vec::with_capacity(a1.len() * a2.len());
        for (j, b) in a1.basis.iter().enumerate() {
            for (k, c) in a2.basis.iter().enumerate() {
                basis.push(kron(b, c));
                identity.push(a1.identity[j] * a2.identity[k]);
            }
        }
        let kind = if a1.kind == AlgebraKind::Diagonal && a2.kind == AlgebraKind::Diagonal {
            AlgebraKind::Diagonal
        } else {
            AlgebraKind::Explicit
        };
        let gram = gram_of(&basis);
        Algebra {
            kind,
            dim: a1.dim * a2.dim,
            basis,
            identity,
            gram,
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// Matrix size: the algebra lives inside `M_dim`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn basis_element(&self, k: usize) -> &CMatrix {
        &self.basis[k]
    }

    pub fn identity_coeffs(&self) -> &[f64] {
        &self.identity
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// The self-adjoint element with the given basis coefficients.
    pub fn element(&self, coeffs: &[f64]) -> CMatrix {
        assert_eq!(coeffs.len(), self.basis.len());
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            out.add_scaled_real(*c, b);
        }
        out
    }

    /// Values `Tr(rho B_k)` of a density matrix on the basis.
    pub fn expectations(&self, rho: &CMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| trace_inner(rho, b).re).collect()
    }
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// A state on an algebra, recorded by its values on the Hermitian basis
/// (`coeffs[k] = phi(B_k)`), optionally carrying a density matrix.
#[derive(Debug, Clone)]
pub struct State {
    coeffs: Vec<f64>,
    density: Option<CMatrix>,
}

impl State {
    pub fn from_density(alg: &Algebra, rho: CMatrix) -> Result<Self, StateError> {
        if rho.rows() != alg.dim() || rho.cols() != alg.dim() {
            return Err(StateError::DimensionMismatch {
                context: format!(
                    "density is {}x{}, algebra acts on dimension {}",
                    rho.rows(),
                    rho.cols(),
                    alg.dim()
                ),
            });
        }
        let dev = rho.hermitian_deviation();
        let scale = rho.frobenius_norm().max(1.0);
        if dev > tol::HERMITIAN_REL * scale {
            return Err(StateError::NotHermitian { deviation: dev });
        }
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > tol::STATE_TRACE {
            return Err(StateError::TraceNotOne { trace });
        }
        let eig = hermitian_eig(&rho)?;
        let min_eig = eig.values.first().copied().unwrap_or(0.0);
        if min_eig < tol::STATE_EIG_FLOOR {
            return Err(StateError::NotPositive { min_eig });
        }
        let coeffs = alg.expectations(&rho);
        Ok(State {
            coeffs,
            density: Some(rho),
        })
    }

    /// Probability-vector state on a diagonal (or any dimension-matching)
    /// algebra: the density matrix is `diag(p)`.
    pub fn from_simplex(alg: &Algebra, p: &[f64]) -> Result<Self, StateError> {
        if p.len() != alg.dim() {
            return Err(StateError::DimensionMismatch {
                context: format!(
                    "{} weights for an algebra acting on dimension {}",
                    p.len(),
                    alg.dim()
                ),
            });
        }
        if let Some(&bad) = p.iter().find(|&&x| x < -tol::STATE_TRACE || !x.is_finite()) {
            return Err(StateError::NotProbability {
                reason: format!("negative or non-finite weight {bad}"),
            });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::STATE_TRACE {
            return Err(StateError::NotProbability {
                reason: format!("weights sum to {sum}"),
            });
        }
        let rho = CMatrix::real_diag(p);
        let coeffs = alg.expectations(&rho);
        Ok(State {
            coeffs,
            density: Some(rho),
        })
    }

    /// Bloch-vector state on a 2x2 algebra; `x` must lie in the closed
    /// unit ball.
    pub fn from_bloch(alg: &Algebra, x: &[f64; 3]) -> Result<Self, StateError> {
        if alg.dim() != 2 {
            return Err(StateError::DimensionMismatch {
                context: format!("Bloch states need a 2x2 algebra, got dimension {}", alg.dim()),
            });
        }
        let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if norm > 1.0 + tol::BLOCH_BALL_SLACK {
            return Err(StateError::OutOfBall { norm });
        }
        let rho = bloch_density(x);
        let coeffs = alg.expectations(&rho);
        Ok(State {
            coeffs,
            density: Some(rho),
        })
    }

    /// A functional given directly by its values on the basis. No
    /// positivity information is attached.
    pub fn from_coeffs(alg: &Algebra, coeffs: Vec<f64>) -> Result<Self, StateError> {
        if coeffs.len() != alg.len() {
            return Err(StateError::DimensionMismatch {
                context: format!(
                    "{} values for a basis of {} elements",
                    coeffs.len(),
                    alg.len()
                ),
            });
        }
        Ok(State {
            coeffs,
            density: None,
        })
    }

    /// Values of the state on the basis elements.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn density(&self) -> Option<&CMatrix> {
        self.density.as_ref()
    }

    /// Value of the state on the element with the given basis coefficients.
    pub fn value(&self, element_coeffs: &[f64]) -> f64 {
        assert_eq!(element_coeffs.len(), self.coeffs.len());
        element_coeffs
            .iter()
            .zip(&self.coeffs)
            .map(|(c, v)| c * v)
            .sum()
    }
}

pub fn state_from_bloch(alg: &Algebra, x: &[f64; 3]) -> Result<State, StateError> {
    State::from_bloch(alg, x)
}

pub fn state_from_simplex(alg: &Algebra, p: &[f64]) -> Result<State, StateError> {
    State::from_simplex(alg, p)
}

/// State of the two-point space with expectation difference `t` between the
/// two points (`t` in `[-1, 1]`): weights `((1+t)/2, (1-t)/2)`.
pub fn two_point_state(alg: &Algebra, t: f64) -> Result<State, StateError> {
    State::from_simplex(alg, &[(1.0 + t) / 2.0, (1.0 - t) / 2.0])
}

/// Product state `phi (x) psi`: values factor over the product basis, and
/// the density (when both factors carry one) is the Kronecker product.
pub fn product_state(phi: &State, psi: &State) -> State {
    let mut coeffs = Vec::with_capacity(phi.coeffs.len() * psi.coeffs.len());
    for a in &phi.coeffs {
        for b in &psi.coeffs {
            coeffs.push(a * b);
        }
    }
    let density = match (&phi.density, &psi.density) {
        (Some(r1), Some(r2)) => Some(kron(r1, r2)),
        _ => None,
    };
    State { coeffs, density }
}

/// Marginals of a state on a product algebra. Uses the density when
/// available (partial traces), otherwise contracts the coefficient vector
/// with the identity coefficients of the opposite factor.
pub fn marginals(
    phi: &State,
    alg1: &Algebra,
    alg2: &Algebra,
) -> Result<(State, State), StateError> {
    let (m1, m2) = (alg1.len(), alg2.len());
    if phi.coeffs.len() != m1 * m2 {
        return Err(StateError::DimensionMismatch {
            context: format!(
                "state has {} values, product basis has {}",
                phi.coeffs.len(),
                m1 * m2
            ),
        });
    }
    if let Some(rho) = &phi.density {
        let (d1, d2) = (alg1.dim(), alg2.dim());
        if rho.rows() != d1 * d2 {
            return Err(StateError::DimensionMismatch {
                context: "density dimension does not factor".into(),
            });
        }
        let rho1 = crate::matrix::partial_trace_right(rho, d1, d2);
        let rho2 = crate::matrix::partial_trace_left(rho, d1, d2);
        Ok((
            State::from_density(alg1, rho1)?,
            State::from_density(alg2, rho2)?,
        ))
    } else {
        let e1 = alg1.identity_coeffs();
        let e2 = alg2.identity_coeffs();
        let mut c1 = vec![0.0; m1];
        let mut c2 = vec![0.0; m2];
        for j in 0..m1 {
            for k in 0..m2 {
                c1[j] += e2[k] * phi.coeffs[j * m2 + k];
                c2[k] += e1[j] * phi.coeffs[j * m2 + k];
            }
        }
        Ok((
            State::from_coeffs(alg1, c1)?,
            State::from_coeffs(alg2, c2)?,
        ))
    }
}

/// Partial transpose of the first tensor factor of a density matrix on
/// `C^{d1} (x) C^{d2}`; negative eigenvalues witness entanglement.
pub fn peres_partial_transpose(rho: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    crate::matrix::partial_transpose_left(rho, d1, d2)
}

// ---------------------------------------------------------------------------
// Sectors and triples
// ---------------------------------------------------------------------------

/// One block of the geometry. The metric seminorm of the triple is the
/// maximum of the per-sector contributions.
#[derive(Debug, Clone)]
pub enum Sector {
    /// An operator representation with a Dirac operator: the contribution
    /// is the operator norm of `[D, pi(a)]`. `grading` (if present) is a
    /// self-adjoint unitary commuting with the representation and
    /// anticommuting with `D`.
    Operator {
        dirac: CMatrix,
        grading: Option<CMatrix>,
        rep: Vec<CMatrix>,
    },
    /// A real-linear (generally antilinear in the vector variable) action.
    /// The realified matrix of the derivation by basis element `k` is real
    /// antisymmetric; `gens[k]` stores `i` times it, which is Hermitian, and
    /// the contribution is the spectral radius of `sum_k c_k gens[k]` (the
    /// operator norm of the real derivation).
    RealLinear { gens: Vec<CMatrix> },
}

impl Sector {
    pub fn operator(dirac: CMatrix, grading: Option<CMatrix>, rep: Vec<CMatrix>) -> Self {
        Sector::Operator {
            dirac,
            grading,
            rep,
        }
    }

    pub fn real_linear(gens: Vec<CMatrix>) -> Self {
        Sector::RealLinear { gens }
    }

    /// Hilbert space dimension of the sector (realified, for real-linear
    /// sectors).
    pub fn dim(&self) -> usize {
        match self {
            Sector::Operator { dirac, .. } => dirac.rows(),
            Sector::RealLinear { gens } => gens.first().map_or(0, |g| g.rows()),
        }
    }

    pub fn is_graded(&self) -> bool {
        matches!(
            self,
            Sector::Operator {
                grading: Some(_),
                ..
            }
        )
    }

    fn validate(&self, m: usize) -> Result<(), TripleError> {
        match self {
            Sector::Operator {
                dirac,
                grading,
                rep,
            } => {
                let dim = dirac.rows();
                if !dirac.is_square() {
                    return Err(TripleError::DimensionMismatch {
                        context: "Dirac operator is not square".into(),
                    });
                }
                let dev = dirac.hermitian_deviation();
                if dev > tol::HERMITIAN_REL * dirac.frobenius_norm().max(1.0) {
                    return Err(TripleError::DiracNotHermitian { deviation: dev });
                }
                if rep.len() != m {
                    return Err(TripleError::DimensionMismatch {
                        context: format!(
                            "sector represents {} basis elements, algebra has {m}",
                            rep.len()
                        ),
                    });
                }
                for (k, b) in rep.iter().enumerate() {
                    if b.rows() != dim || b.cols() != dim {
                        return Err(TripleError::DimensionMismatch {
                            context: format!("represented basis element {k} is not {dim}x{dim}"),
                        });
                    }
                    if !b.is_hermitian(tol::HERMITIAN_REL) {
                        return Err(TripleError::BasisNotHermitian { index: k });
                    }
                }
                if let Some(g) = grading {
                    if g.rows() != dim || g.cols() != dim {
                        return Err(TripleError::DimensionMismatch {
                            context: "grading dimension mismatch".into(),
                        });
                    }
                    let checks = [
                        ("self-adjoint", g.hermitian_deviation()),
                        (
                            "squares to one",
                            g.matmul(g).sub(&CMatrix::identity(dim)).frobenius_norm(),
                        ),
                        (
                            "anticommutes with the Dirac operator",
                            anticommutator(g, dirac).frobenius_norm()
                                / dirac.frobenius_norm().max(1.0),
                        ),
                    ];
                    for (invariant, deviation) in checks {
                        if deviation > tol::GRADING {
                            return Err(TripleError::BadGrading {
                                invariant: invariant.to_string(),
                                deviation,
                            });
                        }
                    }
                    for (k, b) in rep.iter().enumerate() {
                        let dev = commutator(g, b).frobenius_norm()
                            / b.frobenius_norm().max(1.0);
                        if dev > tol::GRADING {
                            return Err(TripleError::BadGrading {
                                invariant: format!("commutes with represented element {k}"),
                                deviation: dev,
                            });
                        }
                    }
                }
                Ok(())
            }
            Sector::RealLinear { gens } => {
                if gens.len() != m {
                    return Err(TripleError::DimensionMismatch {
                        context: format!(
                            "sector has {} generators, algebra has {m} basis elements",
                            gens.len()
                        ),
                    });
                }
                let dim = gens.first().map_or(0, |g| g.rows());
                for (k, g) in gens.iter().enumerate() {
                    if g.rows() != dim || g.cols() != dim {
                        return Err(TripleError::DimensionMismatch {
                            context: format!("generator {k} is not {dim}x{dim}"),
                        });
                    }
                    if !g.is_hermitian(tol::HERMITIAN_REL) {
                        return Err(TripleError::BasisNotHermitian { index: k });
                    }
                }
                Ok(())
            }
        }
    }
}

/// A finite-dimensional spectral triple: an algebra together with one or
/// more sectors. Distances between states are computed from the seminorm
/// `L(a) = max over sectors of the sector contribution`.
#[derive(Debug, Clone)]
pub struct FiniteSpectralTriple {
    pub label: String,
    algebra: Algebra,
    sectors: Vec<Sector>,
}

impl FiniteSpectralTriple {
    pub fn new(
        label: String,
        algebra: Algebra,
        sectors: Vec<Sector>,
    ) -> Result<Self, TripleError> {
        let triple = FiniteSpectralTriple {
            label,
            algebra,
            sectors,
        };
        triple.validate()?;
        Ok(triple)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn validate(&self) -> Result<(), TripleError> {
        if self.sectors.is_empty() {
            return Err(TripleError::DimensionMismatch {
                context: "triple has no sectors".into(),
            });
        }
        for sector in &self.sectors {
            sector.validate(self.algebra.len())?;
        }
        Ok(())
    }

    /// True when every sector is an operator sector carrying a grading.
    pub fn is_even(&self) -> bool {
        self.sectors.iter().all(Sector::is_graded)
    }

    /// The same triple with the Dirac data scaled by `t`; distances scale
    /// by `1/t`.
    pub fn scale_dirac(&self, t: f64) -> FiniteSpectralTriple {
        let sectors = self
            .sectors
            .iter()
            .map(|s| match s {
                Sector::Operator {
                    dirac,
                    grading,
                    rep,
                } => Sector::Operator {
                    dirac: dirac.scale_real(t),
                    grading: grading.clone(),
                    rep: rep.clone(),
                },
                Sector::RealLinear { gens } => Sector::RealLinear {
                    gens: gens.iter().map(|g| g.scale_real(t)).collect(),
                },
            })
            .collect();
        FiniteSpectralTriple {
            label: format!("{}[scaled {t}]", self.label),
            algebra: self.algebra.clone(),
            sectors,
        }
    }
}

// ---------------------------------------------------------------------------
// Standard triples
// ---------------------------------------------------------------------------

/// The two-point space with distance `2 * lambda` between the points:
/// algebra `C^2`, Dirac operator `offdiag(1/(2 lambda))`, grading
/// `diag(1, -1)`.
pub fn two_point_triple(lambda: f64) -> Result<FiniteSpectralTriple, TripleError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(TripleError::Unsupported {
            reason: format!("two-point parameter must be positive and finite, got {lambda}"),
        });
    }
    let algebra = Algebra::diagonal(2);
    let rep = algebra.basis().to_vec();
    let w = 1.0 / (2.0 * lambda);
    let dirac = CMatrix::from_real_rows(&[vec![0.0, w], vec![w, 0.0]]);
    let gamma = CMatrix::real_diag(&[1.0, -1.0]);
    FiniteSpectralTriple::new(
        format!("two-point(lambda={lambda})"),
        algebra,
        vec![Sector::operator(dirac, Some(gamma), rep)],
    )
}

/// The three-point triple whose states form the 2-simplex and whose
/// distance is the max-difference (Chebyshev) distance of probability
/// vectors: algebra `C^3` represented twice on `C^6`, cyclic off-diagonal
/// Dirac blocks, grading `diag(1,1,1,-1,-1,-1)`.
pub fn simplex3_triple() -> FiniteSpectralTriple {
    let algebra = Algebra::diagonal(3);
    let rep: Vec<CMatrix> = algebra
        .basis()
        .iter()
        .map(|b| direct_sum(b, b))
        .collect();
    let dplus = CMatrix::from_real_rows(&[
        vec![0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
    ]);
    let dminus = dplus.adjoint();
    let mut dirac = CMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            dirac[(i, 3 + j)] = dminus[(i, j)];
            dirac[(3 + i, j)] = dplus[(i, j)];
        }
    }
    let gamma = CMatrix::real_diag(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
    FiniteSpectralTriple::new(
        "simplex3".into(),
        algebra,
        vec![Sector::operator(dirac, Some(gamma), rep)],
    )
    .expect("simplex3 construction is valid")
}

/// A triple on the diagonal algebra whose pure-state distance reproduces a
/// given finite metric: one 2-dimensional sector per ordered pair of
/// points, with Dirac weight `1/g(i,j)` (zero when the distance is
/// infinite).
pub fn finite_metric_triple(metric: &FiniteMetric) -> FiniteSpectralTriple {
    let n = metric.size();
    let algebra = Algebra::diagonal(n);
    let mut sectors = Vec::new();
    let gamma = CMatrix::real_diag(&[1.0, -1.0]);
    for i in 0..n {
        for j in (i + 1)..n {
            let g = metric.distance(i, j);
            let w = if g.is_finite() { 1.0 / g } else { 0.0 };
            let dirac = CMatrix::from_real_rows(&[vec![0.0, w], vec![w, 0.0]]);
            let rep: Vec<CMatrix> = (0..n)
                .map(|k| {
                    CMatrix::real_diag(&[
                        if k == i { 1.0 } else { 0.0 },
                        if k == j { 1.0 } else { 0.0 },
                    ])
                })
                .collect();
            sectors.push(Sector::operator(dirac, Some(gamma.clone()), rep));
        }
    }
    FiniteSpectralTriple::new(format!("finite-metric(n={n})"), algebra, sectors)
        .expect("metric triple construction is valid")
}

/// The three standard geometries on the full 2x2 matrix algebra.
pub struct BlochTriples {
    /// Dirac operator `D(b) = b^*/2` (adjoint conjugation, halved): a
    /// real-linear geometry whose distance is the Euclidean Bloch distance.
    pub conjugation: FiniteSpectralTriple,
    /// Non-unital two-block representation `a -> a (+) 0` with an
    /// off-diagonal identity Dirac operator; distance is again Euclidean.
    pub flip: FiniteSpectralTriple,
    /// Rank-one off-diagonal Dirac block (lowest Landau-type truncation);
    /// the distance is direction-dependent.
    pub truncated_moyal: FiniteSpectralTriple,
}

/// Hermitian generators of the conjugation geometry: the realified matrix
/// `R_k` of the map `b -> -[B_k, b^*]/2` on `M_2` (normalized trace
/// pairing, realified orthonormal basis `sigma_a, i sigma_a`) is real
/// antisymmetric, and this returns the Hermitian matrices `i R_k`, whose
/// combined spectral radius gives the operator norm of `[D, a]`.
fn conjugation_generators(basis: &[CMatrix]) -> Vec<CMatrix> {
    let pauli = pauli_basis();
    let mut rbasis: Vec<CMatrix> = pauli.to_vec();
    for p in &pauli {
        rbasis.push(p.scale(C64::new(0.0, 1.0)));
    }
    basis
        .iter()
        .map(|bk| {
            let images: Vec<CMatrix> = rbasis
                .iter()
                .map(|e| commutator(bk, &e.adjoint()).scale_real(-0.5))
                .collect();
            CMatrix::from_fn(8, 8, |i, j| {
                C64::new(0.0, normalized_trace_inner(&rbasis[i], &images[j]).re)
            })
        })
        .collect()
}

pub fn bloch_triples() -> BlochTriples {
    let algebra = Algebra::full_matrix(2);

    let conjugation = FiniteSpectralTriple::new(
        "bloch-conjugation".into(),
        algebra.clone(),
        vec![Sector::real_linear(conjugation_generators(algebra.basis()))],
    )
    .expect("conjugation construction is valid");

    let z2 = CMatrix::zeros(2, 2);
    let rep_flip: Vec<CMatrix> = algebra.basis().iter().map(|b| direct_sum(b, &z2)).collect();
    let mut d_flip = CMatrix::zeros(4, 4);
    for i in 0..2 {
        d_flip[(i, 2 + i)] = ONE;
        d_flip[(2 + i, i)] = ONE;
    }
    let gamma = CMatrix::real_diag(&[1.0, 1.0, -1.0, -1.0]);
    let flip = FiniteSpectralTriple::new(
        "bloch-flip".into(),
        algebra.clone(),
        vec![Sector::operator(d_flip, Some(gamma.clone()), rep_flip)],
    )
    .expect("flip construction is valid");

    let rep_moyal: Vec<CMatrix> = algebra.basis().iter().map(|b| direct_sum(b, b)).collect();
    let mut d_moyal = CMatrix::zeros(4, 4);
    // upper-right block [[0,0],[1,0]], lower-left block [[0,1],[0,0]]
    d_moyal[(1, 2)] = ONE;
    d_moyal[(2, 1)] = ONE;
    let truncated_moyal = FiniteSpectralTriple::new(
        "bloch-truncated-moyal".into(),
        algebra,
        vec![Sector::operator(d_moyal, Some(gamma), rep_moyal)],
    )
    .expect("truncated Moyal construction is valid");

    BlochTriples {
        conjugation,
        flip,
        truncated_moyal,
    }
}

/// The full matrix algebra `M_n` represented with multiplicity `k` on
/// `C^{nk}` (`a -> a (x) 1_k`) with a caller-supplied Dirac operator.
pub fn full_matrix_triple(
    n: usize,
    k: usize,
    dirac: CMatrix,
) -> Result<FiniteSpectralTriple, TripleError> {
    if n < 1 || k < 1 || dirac.rows() != n * k || dirac.cols() != n * k {
        return Err(TripleError::DimensionMismatch {
            context: format!(
                "Dirac operator must be {}x{} for M_{n} with multiplicity {k}",
                n * k,
                n * k
            ),
        });
    }
    let algebra = Algebra::full_matrix(n);
    let idk = CMatrix::identity(k);
    let rep: Vec<CMatrix> = algebra.basis().iter().map(|b| kron(b, &idk)).collect();
    FiniteSpectralTriple::new(
        format!("full-matrix(n={n},k={k})"),
        algebra,
        vec![Sector::operator(dirac, None, rep)],
    )
}

// ---------------------------------------------------------------------------
// Products and gradings
// ---------------------------------------------------------------------------

/// A product geometry bundled with its two factors. `combined` carries
/// `D = D1 (x) 1 + gamma1 (x) D2` on every pair of factor sectors and the
/// tensor-product algebra with basis `B_j (x) C_k` (row-major in `j`).
#[derive(Debug, Clone)]
pub struct ProductStructure {
    left: FiniteSpectralTriple,
    right: FiniteSpectralTriple,
    combined: FiniteSpectralTriple,
}

impl ProductStructure {
    /// The even left factor.
    pub fn left(&self) -> &FiniteSpectralTriple {
        &self.left
    }

    /// The right factor.
    pub fn right(&self) -> &FiniteSpectralTriple {
        &self.right
    }

    /// The product triple itself.
    pub fn combined(&self) -> &FiniteSpectralTriple {
        &self.combined
    }

    /// Restrictions of a state on the combined algebra to the two factors.
    pub fn marginals(&self, phi: &State) -> Result<(State, State), StateError> {
        marginals(phi, self.left.algebra(), self.right.algebra())
    }

    /// The product state `phi (x) psi` on the combined algebra.
    pub fn product_state(&self, phi: &State, psi: &State) -> State {
        product_state(phi, psi)
    }
}

/// Product of two triples: `D = D1 (x) 1 + gamma1 (x) D2` on each pair of
/// sectors. The left factor must be even; the product carries a grading
/// exactly when both factors do.
pub fn product_triple(
    t1: &FiniteSpectralTriple,
    t2: &FiniteSpectralTriple,
) -> Result<ProductStructure, TripleError> {
    let algebra = Algebra::product(t1.algebra(), t2.algebra());
    let mut sectors = Vec::with_capacity(t1.sectors().len() * t2.sectors().len());
    for s1 in t1.sectors() {
        for s2 in t2.sectors() {
            let (d1, g1, rep1) = match s1 {
                Sector::Operator {
                    dirac,
                    grading: Some(g),
                    rep,
                } => (dirac, g, rep),
                Sector::Operator { grading: None, .. } => {
                    return Err(TripleError::MissingGrading);
                }
                Sector::RealLinear { .. } => {
                    return Err(TripleError::Unsupported {
                        reason: "products of real-linear sectors are not defined".into(),
                    });
                }
            };
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
            let id2 = CMatrix::identity(d2.rows());
            let dirac = kron(d1, &id2).add(&kron(g1, d2));
            let grading = g2.map(|g2| kron(g1, g2));
            let mut rep = Vec::with_capacity(rep1.len() * rep2.len());
            for b in rep1 {
                for c in rep2 {
                    rep.push(kron(b, c));
                }
            }
            sectors.push(Sector::Operator {
                dirac,
                grading,
                rep,
            });
        }
    }
    let combined = FiniteSpectralTriple::new(
        format!("{} x {}", t1.label, t2.label),
        algebra,
        sectors,
    )?;
    Ok(ProductStructure {
        left: t1.clone(),
        right: t2.clone(),
        combined,
    })
}

/// Doubles an ungraded triple to an even one without changing distances:
/// `D -> D (x) offdiag(1,1)`, grading `1 (x) diag(1,-1)`, representation
/// `a -> pi(a) (x) 1_2`.
pub fn evenize(t: &FiniteSpectralTriple) -> Result<FiniteSpectralTriple, TripleError> {
    if t.is_even() {
        return Err(TripleError::AlreadyEven);
    }
    let sigma1 = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let sigma3 = CMatrix::real_diag(&[1.0, -1.0]);
    let id2 = CMatrix::identity(2);
    let sectors = t
        .sectors()
        .iter()
        .map(|s| match s {
            Sector::Operator { dirac, rep, .. } => {
                let dim = dirac.rows();
                Ok(Sector::Operator {
                    dirac: kron(dirac, &sigma1),
                    grading: Some(kron(&CMatrix::identity(dim), &sigma3)),
                    rep: rep.iter().map(|b| kron(b, &id2)).collect(),
                })
            }
            Sector::RealLinear { .. } => Err(TripleError::Unsupported {
                reason: "real-linear sectors cannot be doubled into even form".into(),
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    FiniteSpectralTriple::new(
        format!("{}[even]", t.label),
        t.algebra().clone(),
        sectors,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{operator_norm, pauli_combination};
    use crate::sampling;

    #[test]
    fn diagonal_and_full_matrix_algebras_are_orthobases_with_identity() {
        for alg in [Algebra::diagonal(3), Algebra::full_matrix(3)] {
            let id = alg.element(alg.identity_coeffs());
            assert!(id.sub(&CMatrix::identity(3)).frobenius_norm() < 1e-12);
            let m = alg.len();
            for k in 0..m {
                for l in 0..m {
                    let want = if k == l { 1.0 } else { 0.0 };
                    assert!((alg.gram()[(k, l)].re - want).abs() < 1e-12);
                }
            }
        }
        assert_eq!(Algebra::full_matrix(3).len(), 9);
    }

    #[test]
    fn explicit_algebra_requires_identity_in_span() {
        let p = pauli_basis();
        // sigma3 alone does not span the identity
        let err = Algebra::explicit(vec![p[3].clone()]).unwrap_err();
        assert!(matches!(err, TripleError::IdentityNotInSpan { .. }));
        // the full Pauli basis does
        let alg = Algebra::explicit(p.to_vec()).unwrap();
        assert_eq!(alg.identity_coeffs()[0], 1.0);
        assert!(alg.identity_coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn explicit_algebra_rejects_nearly_dependent_bases() {
        let p = pauli_basis();
        let almost = p[0].add(&p[3].scale_real(1e-9));
        let err = Algebra::explicit(vec![p[0].clone(), almost, p[3].clone()]).unwrap_err();
        assert!(matches!(err, TripleError::IllConditionedBasis { .. }));
    }

    #[test]
    fn state_validation_catches_each_defect() {
        let alg = Algebra::full_matrix(2);
        let bad_trace = CMatrix::real_diag(&[0.7, 0.5]);
        assert!(matches!(
            State::from_density(&alg, bad_trace),
            Err(StateError::TraceNotOne { .. })
        ));
        let not_positive = CMatrix::real_diag(&[1.2, -0.2]);
        assert!(matches!(
            State::from_density(&alg, not_positive),
            Err(StateError::NotPositive { .. })
        ));
        let mut not_herm = CMatrix::zeros(2, 2);
        not_herm[(0, 0)] = ONE;
        not_herm[(0, 1)] = C64::new(0.3, 0.0);
        assert!(matches!(
            State::from_density(&alg, not_herm),
            Err(StateError::NotHermitian { .. })
        ));
        assert!(matches!(
            State::from_bloch(&alg, &[0.9, 0.5, 0.5]),
            Err(StateError::OutOfBall { .. })
        ));
        assert!(matches!(
            State::from_simplex(&Algebra::diagonal(2), &[0.7, 0.7]),
            Err(StateError::NotProbability { .. })
        ));
    }

    #[test]
    fn bloch_state_coefficients_match_the_density() {
        let alg = Algebra::full_matrix(2);
        let x = [0.3, -0.4, 0.5];
        let s = State::from_bloch(&alg, &x).unwrap();
        let rho = bloch_density(&x);
        for (k, b) in alg.basis().iter().enumerate() {
            assert!((s.coeffs()[k] - trace_inner(&rho, b).re).abs() < 1e-14);
        }
        // the identity element evaluates to the trace
        assert!((s.value(alg.identity_coeffs()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn standard_triples_pass_their_invariants() {
        two_point_triple(0.5).unwrap().validate().unwrap();
        simplex3_triple().validate().unwrap();
        let metric = crate::metric::FiniteMetric::new(vec![
            vec![0.0, 1.0, 1.5],
            vec![1.0, 0.0, 1.0],
            vec![1.5, 1.0, 0.0],
        ])
        .unwrap();
        finite_metric_triple(&metric).validate().unwrap();
        let b = bloch_triples();
        b.conjugation.validate().unwrap();
        b.flip.validate().unwrap();
        b.truncated_moyal.validate().unwrap();
        assert!(two_point_triple(-1.0).is_err());
    }

    #[test]
    fn two_point_commutator_norm_matches_the_parameter() {
        // ||[D, a]|| = |a_0 - a_1| / (2 lambda)
        let lambda = 0.8;
        let t = two_point_triple(lambda).unwrap();
        let a = t.algebra().element(&[1.0, 0.0]);
        if let Sector::Operator { dirac, rep, .. } = &t.sectors()[0] {
            let _ = rep;
            let c = commutator(dirac, &a);
            let norm = operator_norm(&c).unwrap();
            assert!((norm - 1.0 / (2.0 * lambda)).abs() < 1e-12);
        } else {
            panic!("expected an operator sector");
        }
    }

    #[test]
    fn simplex3_seminorm_is_the_max_pairwise_difference() {
        let t = simplex3_triple();
        let a = [0.9, -0.3, 0.2];
        if let Sector::Operator { dirac, rep, .. } = &t.sectors()[0] {
            let mut pa = CMatrix::zeros(6, 6);
            for (c, b) in a.iter().zip(rep) {
                pa.add_scaled_real(*c, b);
            }
            let norm = operator_norm(&commutator(dirac, &pa)).unwrap();
            let want = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| (a[i] - a[j]).abs())
                .fold(0.0f64, f64::max);
            assert!((norm - want).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_generators_are_hermitian_with_euclidean_norms() {
        let alg = Algebra::full_matrix(2);
        let gens = conjugation_generators(alg.basis());
        assert_eq!(gens.len(), 4);
        for g in &gens {
            assert!(g.hermitian_deviation() < 1e-13);
            // underlying realified map is real antisymmetric: i*g is real
            assert!(g.data().iter().map(|z| z.re.abs()).fold(0.0f64, f64::max) < 1e-15);
        }
        // the seminorm of a = a0 + v . sigma is the Euclidean norm of v
        for v in [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.3, -0.5, 0.8]] {
            let a = pauli_combination(0.7, &v);
            let coeffs = alg.expectations(&a);
            let mut total = CMatrix::zeros(8, 8);
            // expectations give Tr(a B_k) = expansion coefficients here,
            // since the E-basis is orthonormal in the trace pairing
            for (c, g) in coeffs.iter().zip(&gens) {
                total.add_scaled_real(*c, g);
            }
            let radius = hermitian_eig(&total).unwrap().max_abs_value();
            let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!((radius - vn).abs() < 1e-12);
        }
    }

    #[test]
    fn flip_commutator_norm_is_the_operator_norm_of_the_element() {
        let b = bloch_triples();
        let a = pauli_combination(0.3, &[0.1, -0.7, 0.4]);
        let coeffs = b.flip.algebra().expectations(&a);
        if let Sector::Operator { dirac, rep, .. } = &b.flip.sectors()[0] {
            let mut pa = CMatrix::zeros(4, 4);
            for (c, e) in coeffs.iter().zip(rep) {
                pa.add_scaled_real(*c, e);
            }
            let norm = operator_norm(&commutator(dirac, &pa)).unwrap();
            assert!((norm - operator_norm(&a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_moyal_commutator_norm_matches_the_closed_form() {
        let b = bloch_triples();
        let v = [0.2, -0.5, 0.3];
        let a = pauli_combination(0.7, &v);
        let coeffs = b.truncated_moyal.algebra().expectations(&a);
        if let Sector::Operator { dirac, rep, .. } = &b.truncated_moyal.sectors()[0] {
            let mut pa = CMatrix::zeros(4, 4);
            for (c, e) in coeffs.iter().zip(rep) {
                pa.add_scaled_real(*c, e);
            }
            let norm = operator_norm(&commutator(dirac, &pa)).unwrap();
            let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            assert!((norm - (vn + v[2].abs())).abs() < 1e-12);
        }
    }

    #[test]
    fn products_require_an_even_left_factor_and_compose_gradings() {
        let even = two_point_triple(0.5).unwrap();
        let odd = sampling::random_odd_diagonal_triple(3, "odd", &mut sampling::rng(3));
        assert!(matches!(
            product_triple(&odd, &even),
            Err(TripleError::MissingGrading)
        ));
        let p = product_triple(&even, &odd).unwrap();
        let c = p.combined();
        c.validate().unwrap();
        assert!(!c.is_even());
        assert_eq!(c.algebra().len(), 2 * 3);
        assert_eq!(c.sectors()[0].dim(), 2 * 3);
        assert_eq!(p.left().algebra().len(), 2);
        assert_eq!(p.right().algebra().len(), 3);
        let q = product_triple(&even, &even).unwrap();
        assert!(q.combined().is_even());
        q.combined().validate().unwrap();
    }

    #[test]
    fn evenizing_adds_a_grading_and_rejects_even_inputs() {
        let odd = sampling::random_odd_diagonal_triple(3, "odd", &mut sampling::rng(4));
        assert!(!odd.is_even());
        let even = evenize(&odd).unwrap();
        even.validate().unwrap();
        assert!(even.is_even());
        assert_eq!(even.sectors()[0].dim(), 6);
        assert!(matches!(evenize(&even), Err(TripleError::AlreadyEven)));
    }

    #[test]
    fn marginals_recover_the_factors_of_a_product_state() {
        let alg1 = Algebra::diagonal(2);
        let alg2 = Algebra::full_matrix(2);
        let phi = State::from_simplex(&alg1, &[0.3, 0.7]).unwrap();
        let psi = State::from_bloch(&alg2, &[0.1, 0.2, -0.3]).unwrap();
        let prod = product_state(&phi, &psi);
        let (m1, m2) = marginals(&prod, &alg1, &alg2).unwrap();
        for (a, b) in m1.coeffs().iter().zip(phi.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in m2.coeffs().iter().zip(psi.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn marginals_work_without_densities_via_identity_contraction() {
        let alg1 = Algebra::diagonal(2);
        let alg2 = Algebra::diagonal(3);
        let phi = State::from_coeffs(&alg1, vec![0.25, 0.75]).unwrap();
        let psi = State::from_coeffs(&alg2, vec![0.5, 0.2, 0.3]).unwrap();
        let mut prod = product_state(&phi, &psi);
        // forget the density
        prod = State::from_coeffs(
            &Algebra::product(&alg1, &alg2),
            prod.coeffs().to_vec(),
        )
        .unwrap();
        let (m1, m2) = marginals(&prod, &alg1, &alg2).unwrap();
        assert!((m1.coeffs()[0] - 0.25).abs() < 1e-14);
        assert!((m2.coeffs()[1] - 0.2).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_of_the_maximally_entangled_state_has_eigenvalue_minus_half() {
        // rho = |psi><psi| with psi = (|00> + |11>)/sqrt2
        let mut rho = CMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            rho[(i, j)] = C64::new(0.5, 0.0);
        }
        let pt = peres_partial_transpose(&rho, 2, 2);
        let eig = hermitian_eig(&pt).unwrap();
        assert!((eig.values[0] + 0.5).abs() < 1e-12);
    }
}
