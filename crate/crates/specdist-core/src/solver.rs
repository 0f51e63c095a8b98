//! The spectral-distance engine.
//!
//! The distance between states `phi, psi` is
//! `sup { phi(a) - psi(a) : a self-adjoint, L(a) <= 1 }` where `L` is the
//! commutator seminorm of the triple. Writing `a = sum c_k B_k` over the
//! Hermitian basis, every sector contributes a family of Hermitian
//! generators (`i [D, pi(B_k)]` for operator sectors, the stored Hermitian
//! matrices for real-linear sectors), so
//! `L(a) = max over sectors of rho_spec(sum_k c_k G_k)` and the problem
//! becomes a finite-dimensional ratio maximization
//! `sup l.c / L(c)` with `l_k = phi(B_k) - psi(B_k)`.
//!
//! The engine first finds the seminorm kernel (commutant directions). A
//! kernel direction with nonzero pairing certifies an infinite distance;
//! otherwise the problem is reduced to the orthogonal complement of the
//! kernel and solved in three stages: a supergradient ascent on the ratio
//! (with deterministic random restarts), a convex polish of the
//! equivalent program `min L(c)` over the slice `l.c = 1` using a
//! log-sum-exp smoothing of the seminorm with temperature continuation
//! (the distance is the reciprocal of the minimum), and a cutting-plane
//! refinement of the same slice program. Every near-top eigenpair of a
//! sector supplies the supporting cut `<cut, c> <= L(c)`, the cut model is
//! minimized over a trust box with a small simplex solve, and whenever the
//! box is inactive the model minimum is a certified lower bound on the
//! optimal seminorm — which both drives the iterate to the kink the
//! smoothed stage cannot resolve and certifies the reported gap.
//!
//! The dual route recovers the same value from the trace-pairing
//! representative `rho` of `phi - psi` inside the represented algebra:
//! `d = |rho|_Tr^2 / L(rho + best trace-orthogonal shift)`; it shares the
//! slice minimizer but starts from the representative and fails loudly
//! when no representative exists.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::EngineError;
use crate::matrix::{commutator, hermitian_eig, solve_real_sym_psd, trace_inner, CMatrix};
use crate::simplex;
use crate::tol;
use crate::triple::{FiniteSpectralTriple, Sector, State};

/// Options for the distance solver.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Relative accuracy target for the distance value.
    pub tol: f64,
    /// Iteration budget per optimization phase.
    pub max_iter: usize,
    /// Seed for the deterministic restart stream.
    pub seed: u64,
    /// Number of ascent restarts (the first starts from the pairing
    /// direction, the rest from seeded random directions).
    pub restarts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: tol::ENGINE_DEFAULT_REL,
            max_iter: 2000,
            seed: 42,
            restarts: 5,
        }
    }
}

/// Outcome of a distance computation.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    /// The distance; `f64::INFINITY` when a commutant direction separates
    /// the states.
    pub value: f64,
    /// Basis coefficients of the witness element `a`: for finite values it
    /// satisfies `L(a) <= 1 + 1e-8` and pairs to at least `value - gap`;
    /// for infinite values it is a unit commutant direction with nonzero
    /// pairing.
    pub optimizer: Vec<f64>,
    /// Optimality gap of `value`: certified by the cutting-plane model
    /// when that stage converges (the common case), otherwise the
    /// requested relative tolerance times the value. Exact outcomes
    /// report 0.
    pub gap: f64,
    /// Optimization iterations spent.
    pub iterations: usize,
}

// ---------------------------------------------------------------------------
// Generator families
// ---------------------------------------------------------------------------

/// Hermitian generator family of one sector, possibly re-expressed in a
/// reduced coordinate basis.
struct SectorFamily {
    gens: Vec<CMatrix>,
    dim: usize,
}

fn hermitian_generators(triple: &FiniteSpectralTriple) -> Vec<SectorFamily> {
    triple
        .sectors()
        .iter()
        .map(|s| match s {
            Sector::Operator { dirac, rep, .. } => {
                let i = C64::new(0.0, 1.0);
                let gens = rep
                    .iter()
                    .map(|b| commutator(dirac, b).scale(i))
                    .collect::<Vec<_>>();
                let dim = dirac.rows();
                SectorFamily { gens, dim }
            }
            Sector::RealLinear { gens } => SectorFamily {
                dim: gens.first().map_or(0, |g| g.rows()),
                gens: gens.clone(),
            },
        })
        .collect()
}

/// Per-point evaluation data: the true seminorm plus the full eigensystems
/// of `sum_k x_k G_k` for every sector (reused by both the subgradient and
/// the smoothed gradient).
struct EvalData {
    seminorm: f64,
    eigs: Vec<crate::matrix::EigDecomposition>,
}

fn assemble(sector: &SectorFamily, x: &[f64]) -> CMatrix {
    let mut a = CMatrix::zeros(sector.dim, sector.dim);
    for (c, g) in x.iter().zip(&sector.gens) {
        if *c != 0.0 {
            a.add_scaled_real(*c, g);
        }
    }
    a
}

fn evaluate(sectors: &[SectorFamily], x: &[f64]) -> Result<EvalData, EngineError> {
    let mut eigs = Vec::with_capacity(sectors.len());
    let mut seminorm = 0.0f64;
    for s in sectors {
        let a = assemble(s, x);
        let e = hermitian_eig(&a).map_err(EngineError::from)?;
        seminorm = seminorm.max(e.max_abs_value());
        eigs.push(e);
    }
    Ok(EvalData { seminorm, eigs })
}

/// Quick seminorm without keeping eigenvectors.
fn seminorm_only(sectors: &[SectorFamily], x: &[f64]) -> Result<f64, EngineError> {
    Ok(evaluate(sectors, x)?.seminorm)
}

/// `grad_k = Re(v* G_k v)` for a unit eigenvector `v`.
fn eig_gradient(sector: &SectorFamily, v: &[C64], out: &mut [f64], weight: f64) {
    for (k, g) in sector.gens.iter().enumerate() {
        let gv = g.mul_vec(v);
        let pairing: C64 = v.iter().zip(&gv).map(|(a, b)| a.conj() * b).sum();
        out[k] += weight * pairing.re;
    }
}

/// Averaged supergradient of the seminorm at `x`: all eigenvalues within
/// the near-top window contribute `sign(lambda) * Re(v* G_k v)` and the
/// contributions are averaged.
fn seminorm_subgradient(sectors: &[SectorFamily], data: &EvalData, r: usize) -> Vec<f64> {
    let g = data.seminorm;
    let window = tol::NEAR_TOP_WINDOW * g.max(1.0);
    let mut grad = vec![0.0f64; r];
    let mut count = 0usize;
    for (s, e) in sectors.iter().zip(&data.eigs) {
        for (i, &lam) in e.values.iter().enumerate() {
            if lam.abs() >= g - window {
                let v = e.eigenvector(i);
                let sign = if lam >= 0.0 { 1.0 } else { -1.0 };
                eig_gradient(s, &v, &mut grad, sign);
                count += 1;
            }
        }
    }
    if count > 1 {
        let inv = 1.0 / count as f64;
        for g in &mut grad {
            *g *= inv;
        }
    }
    grad
}

/// Smoothed seminorm `F_mu(x) = mu log sum_{s,i} 2 cosh(lambda_i / mu)`
/// and its gradient. Satisfies `g <= F_mu <= g + mu log(2 N)`.
fn smoothed_value_grad(
    sectors: &[SectorFamily],
    data: &EvalData,
    mu: f64,
    r: usize,
) -> (f64, Vec<f64>) {
    let shift = data.seminorm;
    let mut z = 0.0f64;
    for e in &data.eigs {
        for &lam in &e.values {
            z += ((lam - shift) / mu).exp() + ((-lam - shift) / mu).exp();
        }
    }
    let value = shift + mu * z.ln();
    let mut grad = vec![0.0f64; r];
    for (s, e) in sectors.iter().zip(&data.eigs) {
        for (i, &lam) in e.values.iter().enumerate() {
            let w = (((lam - shift) / mu).exp() - ((-lam - shift) / mu).exp()) / z;
            if w.abs() > 1e-300 {
                let v = e.eigenvector(i);
                eig_gradient(s, &v, &mut grad, w);
            }
        }
    }
    (value, grad)
}

/// Supporting cuts of the seminorm at an evaluated point: every eigenpair
/// `(lambda, v)` within a tenth of the top contributes the linear form
/// `cut_k = sign(lambda) Re(v* G_k v)`, which satisfies `<cut, y> <= L(y)`
/// for every `y` and touches at the evaluated point. Strongest cuts first,
/// truncated to a round's worth.
fn harvest_cuts(sectors: &[SectorFamily], data: &EvalData, r: usize) -> Vec<Vec<f64>> {
    let g = data.seminorm;
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::new();
    for (s, e) in sectors.iter().zip(&data.eigs) {
        for (i, &lam) in e.values.iter().enumerate() {
            if lam.abs() >= 0.9 * g && lam.abs() > 0.0 {
                let v = e.eigenvector(i);
                let mut c = vec![0.0; r];
                let sign = if lam >= 0.0 { 1.0 } else { -1.0 };
                eig_gradient(s, &v, &mut c, sign);
                scored.push((lam.abs(), c));
            }
        }
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    scored.truncate(2 * r + 8);
    scored.into_iter().map(|(_, c)| c).collect()
}

fn absorb_cuts(cuts: &mut Vec<Vec<f64>>, fresh: Vec<Vec<f64>>) {
    for c in fresh {
        let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let known = cuts.iter().any(|e| {
            e.iter()
                .zip(&c)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * scale)
        });
        if !known {
            cuts.push(c);
        }
    }
}

/// Keep the model compact: drop the cuts slackest at the reference point
/// once the set exceeds `cap`. The reference is the latest subproblem
/// minimizer, so the cuts shaping the model's active minimum survive.
/// Dropping cuts only weakens the model, so lower bounds banked earlier
/// stay valid.
fn prune_cuts(cuts: &mut Vec<Vec<f64>>, at: &[f64], level: f64, cap: usize) {
    if cuts.len() <= cap {
        return;
    }
    let mut scored: Vec<(f64, Vec<f64>)> = cuts
        .drain(..)
        .map(|c| (level - dot(&c, at), c))
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    scored.truncate(cap);
    cuts.extend(scored.into_iter().map(|(_, c)| c));
}

/// Minimize the cut model `max_j <c_j, y>` over the slice `l.y = 1`
/// intersected with the box `|y - anchor|_inf <= delta`. Returns the
/// minimizer, the model value, and whether a box face is active (in which
/// case the value bounds the model on the box only, not on the slice).
fn solve_model_lp(
    cuts: &[Vec<f64>],
    lred: &[f64],
    anchor: &[f64],
    delta: f64,
) -> Result<(Vec<f64>, f64, bool), simplex::LpError> {
    let r = lred.len();
    let j = cuts.len();
    let lo: Vec<f64> = anchor.iter().map(|a| a - delta).collect();
    // model lower bound over the box keeps the shifted epigraph
    // variable nonnegative
    let mut t_lb = f64::INFINITY;
    for c in cuts {
        let v: f64 = c
            .iter()
            .zip(&lo)
            .map(|(ck, lk)| (ck * lk).min(ck * (lk + 2.0 * delta)))
            .sum();
        t_lb = t_lb.min(v);
    }
    // the seminorm is nonnegative, so the model may be clamped at zero;
    // this keeps far regions where no cut is positive from luring the
    // subproblem toward phantom negative minima
    t_lb = t_lb.max(0.0);
    // columns: box offset w (r), box slack (r), epigraph (1), cut slack (j)
    let n = 2 * r + 1 + j;
    let mut a = Vec::with_capacity(r + 1 + j);
    let mut b = Vec::with_capacity(r + 1 + j);
    for k in 0..r {
        let mut row = vec![0.0; n];
        row[k] = 1.0;
        row[r + k] = 1.0;
        a.push(row);
        b.push(2.0 * delta);
    }
    let mut slice_row = vec![0.0; n];
    slice_row[..r].copy_from_slice(lred);
    a.push(slice_row);
    b.push(1.0 - dot(lred, &lo));
    for (idx, c) in cuts.iter().enumerate() {
        let mut row = vec![0.0; n];
        row[..r].copy_from_slice(c);
        row[2 * r] = -1.0;
        row[2 * r + 1 + idx] = 1.0;
        a.push(row);
        b.push(t_lb - dot(c, &lo));
    }
    let mut obj = vec![0.0; n];
    obj[2 * r] = 1.0;
    let sol = simplex::solve_standard(&a, &b, &obj)?;
    let y: Vec<f64> = (0..r).map(|k| lo[k] + sol.z[k]).collect();
    let t = sol.z[2 * r] + t_lb;
    let edge = 1e-8 * (1.0 + 2.0 * delta);
    let box_active =
        (0..r).any(|k| sol.z[k] <= edge || sol.z[k] >= 2.0 * delta - edge);
    Ok((y, t, box_active))
}

// ---------------------------------------------------------------------------
// Workspace: kernel detection and coordinate reduction
// ---------------------------------------------------------------------------

/// Reusable per-triple state: Hermitian generators, the confirmed seminorm
/// kernel (commutant directions), and the generators re-expressed on the
/// kernel's orthogonal complement.
pub struct DistanceEngine {
    m: usize,
    /// Confirmed commutant directions (orthonormal, original coordinates).
    kernel: Vec<Vec<f64>>,
    /// Orthonormal basis of the working complement, as columns `q[k][a]`.
    q: Vec<Vec<f64>>,
    /// Generators in working coordinates.
    reduced: Vec<SectorFamily>,
    /// Total eigenvalue count across sectors (for the smoothing bias).
    eig_count: f64,
    /// Trace Gram matrix of the represented basis, when every sector is an
    /// operator sector (used by the dual route).
    rep_gram: Option<CMatrix>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl DistanceEngine {
    pub fn new(triple: &FiniteSpectralTriple) -> Result<Self, EngineError> {
        let m = triple.algebra().len();
        let families = hermitian_generators(triple);
        let eig_count: f64 = families.iter().map(|s| s.dim as f64).sum();

        // Frobenius Gram of the generator family
        let h = CMatrix::from_fn(m, m, |k, l| {
            let mut acc = 0.0f64;
            for s in &families {
                acc += trace_inner(&s.gens[k], &s.gens[l]).re;
            }
            C64::new(acc, 0.0)
        });
        let heig = hermitian_eig(&h).map_err(EngineError::from)?;
        let lam_max = heig.values.last().copied().unwrap_or(0.0).max(0.0);

        // reference seminorm scale: unit coordinate directions
        let mut gref = 1.0f64;
        for k in 0..m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            gref = gref.max(seminorm_only(&families, &e)?);
        }

        let mut kernel: Vec<Vec<f64>> = Vec::new();
        let mut q: Vec<Vec<f64>> = Vec::new();
        if lam_max <= 1e-30 {
            // the whole algebra commutes (zero Dirac data)
            for j in 0..m {
                let mut v = vec![0.0; m];
                v[j] = 1.0;
                kernel.push(v);
            }
        } else {
            for j in 0..m {
                let v: Vec<f64> = (0..m).map(|k| heig.vectors[(k, j)].re).collect();
                let candidate = heig.values[j] <= 1e-14 * lam_max;
                let confirmed =
                    candidate && seminorm_only(&families, &v)? <= tol::COMMUTANT_REL * gref;
                if confirmed {
                    kernel.push(v);
                } else {
                    q.push(v);
                }
            }
        }

        // generators in working coordinates: G~_a = sum_k q[a][k] G_k
        let reduced: Vec<SectorFamily> = families
            .iter()
            .map(|s| {
                let gens = q
                    .iter()
                    .map(|col| {
                        let mut g = CMatrix::zeros(s.dim, s.dim);
                        for (c, gk) in col.iter().zip(&s.gens) {
                            g.add_scaled_real(*c, gk);
                        }
                        g
                    })
                    .collect();
                SectorFamily { gens, dim: s.dim }
            })
            .collect();

        // trace Gram of the represented basis (dual route), when available
        let all_operator = triple
            .sectors()
            .iter()
            .all(|s| matches!(s, Sector::Operator { .. }));
        let rep_gram = if all_operator {
            Some(CMatrix::from_fn(m, m, |k, l| {
                let mut acc = 0.0f64;
                for s in triple.sectors() {
                    if let Sector::Operator { rep, .. } = s {
                        acc += trace_inner(&rep[k], &rep[l]).re;
                    }
                }
                C64::new(acc, 0.0)
            }))
        } else {
            None
        };

        Ok(DistanceEngine {
            m,
            kernel,
            q,
            reduced,
            eig_count,
            rep_gram,
        })
    }

    /// Orthonormal basis of the commutant directions: coefficient vectors
    /// `c` with `L(sum c_k B_k) = 0`.
    pub fn commutant_directions(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    /// The metric seminorm `L(sum_k x_k B_k)` of a coefficient vector.
    pub fn seminorm(&self, x: &[f64]) -> Result<f64, EngineError> {
        if x.len() != self.m {
            return Err(EngineError::DimensionMismatch {
                context: format!(
                    "coefficient vector has {} entries, algebra basis has {}",
                    x.len(),
                    self.m
                ),
            });
        }
        // kernel components contribute nothing, so evaluating on the
        // working projection is exact
        seminorm_only(&self.reduced, &self.reduce(x))
    }

    fn pairing_vector(&self, phi: &State, psi: &State) -> Result<Vec<f64>, EngineError> {
        if phi.coeffs().len() != self.m || psi.coeffs().len() != self.m {
            return Err(EngineError::DimensionMismatch {
                context: format!(
                    "states carry {} and {} values, algebra basis has {}",
                    phi.coeffs().len(),
                    psi.coeffs().len(),
                    self.m
                ),
            });
        }
        Ok(phi
            .coeffs()
            .iter()
            .zip(psi.coeffs())
            .map(|(a, b)| a - b)
            .collect())
    }

    /// Checks the pairing against the commutant: a kernel direction with
    /// nonzero pairing certifies an infinite distance.
    fn infinite_witness(&self, ell: &[f64]) -> Option<Vec<f64>> {
        let scale = norm2(ell).max(1.0);
        for v in &self.kernel {
            if dot(v, ell).abs() > tol::COMMUTANT_REL * scale {
                return Some(v.clone());
            }
        }
        None
    }

    /// Pairing vector in working coordinates.
    fn reduce(&self, ell: &[f64]) -> Vec<f64> {
        self.q.iter().map(|col| dot(col, ell)).collect()
    }

    /// Maps working coordinates back to basis coefficients.
    fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.m];
        for (col, xa) in self.q.iter().zip(x) {
            for (ck, qk) in c.iter_mut().zip(col) {
                *ck += qk * xa;
            }
        }
        c
    }

    /// Distance by ratio ascent plus convex polish.
    pub fn distance(
        &self,
        phi: &State,
        psi: &State,
        opts: &SolveOptions,
    ) -> Result<DistanceResult, EngineError> {
        let ell = self.pairing_vector(phi, psi)?;
        if let Some(v) = self.infinite_witness(&ell) {
            return Ok(DistanceResult {
                value: f64::INFINITY,
                optimizer: v,
                gap: 0.0,
                iterations: 0,
            });
        }
        let lred = self.reduce(&ell);
        if norm2(&lred) <= 1e-12 * norm2(&ell).max(1.0) {
            return Ok(DistanceResult {
                value: 0.0,
                optimizer: vec![0.0; self.m],
                gap: 0.0,
                iterations: 0,
            });
        }

        let mut best = Incumbent::new();
        let mut iterations = 0usize;

        // Stage A: supergradient ascent on the ratio, restarted.
        let per_restart = (opts.max_iter / (2 * opts.restarts.max(1))).clamp(60, 400);
        for restart in 0..opts.restarts.max(1) {
            let x0 = if restart == 0 {
                lred.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(restart as u64));
                let mut v: Vec<f64> =
                    (0..lred.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if dot(&v, &lred) < 0.0 {
                    for c in &mut v {
                        *c = -*c;
                    }
                }
                v
            };
            iterations += self.ascend(&lred, x0, per_restart, opts.tol, &mut best)?;
        }

        // Stage B: convex polish on the slice l.x = 1.
        if best.ratio > 0.0 {
            let start: Vec<f64> = best.x.iter().map(|c| c / dot(&best.x, &lred)).collect();
            iterations += self.slice_minimize(&lred, start, opts, &mut best)?;
        }

        // Stage C: cutting-plane refinement and gap certification.
        let certified = self.cutting_plane(&lred, opts, &mut best, &mut iterations)?;

        self.finish(&lred, best, iterations, opts, certified)
    }

    /// Distance via the trace-pairing representative of `phi - psi`.
    pub fn distance_dual(
        &self,
        phi: &State,
        psi: &State,
        opts: &SolveOptions,
    ) -> Result<DistanceResult, EngineError> {
        let ell = self.pairing_vector(phi, psi)?;
        let gram = self.rep_gram.as_ref().ok_or(EngineError::RhoNotInAlgebra {
            residual: f64::INFINITY,
            context: "real-linear sectors carry no trace representative".into(),
        })?;
        let (r, residual) = solve_real_sym_psd(gram, &ell).map_err(EngineError::from)?;
        let scale = norm2(&ell).max(1.0);
        if residual > tol::RIESZ_RESIDUAL * scale {
            return Err(EngineError::RhoNotInAlgebra {
                residual,
                context: "state difference is not in the range of the trace Gram".into(),
            });
        }
        if let Some(v) = self.infinite_witness(&ell) {
            return Ok(DistanceResult {
                value: f64::INFINITY,
                optimizer: v,
                gap: 0.0,
                iterations: 0,
            });
        }
        // |rho|_Tr^2 = r.l; the distance is r.l / min L over the slice
        let mass = dot(&r, &ell);
        if mass <= 1e-24 * scale {
            return Ok(DistanceResult {
                value: 0.0,
                optimizer: vec![0.0; self.m],
                gap: 0.0,
                iterations: 0,
            });
        }
        let lred = self.reduce(&ell);
        let rred = self.reduce(&r);
        // normalize the slice to l.x = 1
        let start: Vec<f64> = rred.iter().map(|c| c / mass).collect();
        let g0 = seminorm_only(&self.reduced, &start)?;
        if g0 <= tol::INFINITE_L_REL * 1.0 + tol::INFINITE_L_ABS {
            // representative is (numerically) in the kernel: unbounded
            return Ok(DistanceResult {
                value: f64::INFINITY,
                optimizer: self.expand(&rred),
                gap: 0.0,
                iterations: 0,
            });
        }
        let mut best = Incumbent::new();
        best.offer(&lred, &start, g0);
        let mut iterations = 0usize;
        iterations += self.slice_minimize(&lred, start, opts, &mut best)?;
        let certified = self.cutting_plane(&lred, opts, &mut best, &mut iterations)?;
        self.finish(&lred, best, iterations, opts, certified)
    }

    /// Supergradient ascent of `l.x / L(x)` on the shell `L(x) = 1`.
    fn ascend(
        &self,
        lred: &[f64],
        x0: Vec<f64>,
        cap: usize,
        rel_tol: f64,
        best: &mut Incumbent,
    ) -> Result<usize, EngineError> {
        let r = lred.len();
        let mut x = x0;
        let g0 = seminorm_only(&self.reduced, &x)?;
        if !(g0 > 0.0) {
            return Ok(0);
        }
        for c in &mut x {
            *c /= g0;
        }
        let mut local_best = f64::NEG_INFINITY;
        let mut stable = 0usize;
        let mut iter = 0usize;
        while iter < cap {
            iter += 1;
            let data = evaluate(&self.reduced, &x)?;
            let g = data.seminorm;
            if !(g > 0.0) {
                break;
            }
            let ratio = dot(lred, &x) / g;
            best.offer(lred, &x, g);
            let improved = ratio > local_best + rel_tol * 0.1 * local_best.abs().max(1e-12);
            if ratio > local_best {
                local_best = ratio;
            }
            stable = if improved { 0 } else { stable + 1 };
            if stable >= tol::ASCENT_STABLE_ITERS {
                break;
            }
            let h = seminorm_subgradient(&self.reduced, &data, r);
            // ascent direction of the ratio on the shell
            let dir: Vec<f64> = lred
                .iter()
                .zip(&h)
                .map(|(l, hk)| l - ratio * hk)
                .collect();
            let dn = norm2(&dir);
            if dn <= 1e-15 * norm2(lred).max(1.0) {
                break;
            }
            // Polyak step towards a target slightly above the incumbent,
            // kept inside a decaying trust region
            let target = local_best + 0.05 * local_best.abs().max(1e-9);
            let polyak = ((target - ratio) / (dn * dn)).max(0.0);
            let decay = 0.5 / ((iter as f64).sqrt() * dn);
            let t = polyak.clamp(0.05 * decay, decay);
            let mut xn: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
            let gn = seminorm_only(&self.reduced, &xn)?;
            if !(gn > 0.0) {
                break;
            }
            for c in &mut xn {
                *c /= gn;
            }
            x = xn;
        }
        Ok(iter)
    }

    /// Convex polish: minimize the seminorm over the slice `l.x = 1` by
    /// projected gradient descent on the smoothed seminorm with
    /// temperature continuation. Every iterate is a feasible point, so the
    /// incumbent ratio only improves.
    fn slice_minimize(
        &self,
        lred: &[f64],
        start: Vec<f64>,
        opts: &SolveOptions,
        best: &mut Incumbent,
    ) -> Result<usize, EngineError> {
        let r = lred.len();
        let ln2n = (2.0 * self.eig_count).max(2.0).ln();
        let lnorm2 = dot(lred, lred);
        let mut x = start;
        let mut g_now = seminorm_only(&self.reduced, &x)?;
        best.offer(lred, &x, g_now);
        let mut mu = (0.5 * g_now / ln2n).max(1e-14);
        let mu_floor = |g_best: f64| (0.02 * opts.tol * g_best / ln2n).max(1e-16);
        let per_level = (opts.max_iter / 8).clamp(80, 600);
        let mut iterations = 0usize;

        loop {
            // minimize F_mu on the slice
            let mut t_step = mu / lnorm2.max(1e-30);
            let mut prev_x: Option<Vec<f64>> = None;
            let mut prev_grad: Option<Vec<f64>> = None;
            let mut small_steps = 0usize;
            for _ in 0..per_level {
                iterations += 1;
                let data = evaluate(&self.reduced, &x)?;
                best.offer(lred, &x, data.seminorm);
                g_now = data.seminorm;
                let (f, grad) = smoothed_value_grad(&self.reduced, &data, mu, r);
                // project the gradient onto the slice tangent
                let lg = dot(&grad, lred) / lnorm2;
                let gt: Vec<f64> = grad.iter().zip(lred).map(|(g, l)| g - lg * l).collect();
                let gn2 = dot(&gt, &gt);
                if gn2.sqrt() <= 1e-10 * g_now.max(1e-12) {
                    break;
                }
                // Barzilai-Borwein step from the previous tangent gradient
                if let (Some(px), Some(pg)) = (&prev_x, &prev_grad) {
                    let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
                    let y: Vec<f64> = gt.iter().zip(pg).map(|(a, b)| a - b).collect();
                    let sy = dot(&s, &y);
                    if sy > 1e-300 {
                        t_step = (dot(&s, &s) / sy).clamp(1e-12 * t_step.max(1e-30), 1e6);
                    }
                }
                prev_x = Some(x.clone());
                prev_grad = Some(gt.clone());
                // Armijo backtracking
                let mut t = t_step;
                let mut accepted = false;
                for _ in 0..40 {
                    let xn: Vec<f64> = x.iter().zip(&gt).map(|(a, g)| a - t * g).collect();
                    let dn = evaluate(&self.reduced, &xn)?;
                    best.offer(lred, &xn, dn.seminorm);
                    let (fn_, _) = smoothed_value_grad(&self.reduced, &dn, mu, r);
                    if fn_ <= f - 0.25 * t * gn2 {
                        let decrease = f - fn_;
                        x = xn;
                        accepted = true;
                        if decrease <= 1e-4 * mu {
                            small_steps += 1;
                        } else {
                            small_steps = 0;
                        }
                        break;
                    }
                    t *= 0.5;
                }
                if !accepted || small_steps >= 2 {
                    break;
                }
            }
            if mu <= mu_floor(best.g_at_best.max(1e-300)) || iterations >= opts.max_iter {
                break;
            }
            mu = (mu / 8.0).max(mu_floor(best.g_at_best.max(1e-300)));
        }
        Ok(iterations)
    }

    /// Stage C: cutting-plane refinement of `min L(y)` over the slice
    /// `l.y = 1`. Each round minimizes the supporting-cut model inside a
    /// trust box around the anchor, evaluates the true seminorm at the
    /// model minimizer, and harvests new cuts there. Whenever the box is
    /// inactive at the model minimum, that minimum is a global lower
    /// bound on the optimal seminorm; the method returns the certified
    /// distance gap once the incumbent pinches against it.
    fn cutting_plane(
        &self,
        lred: &[f64],
        opts: &SolveOptions,
        best: &mut Incumbent,
        iterations: &mut usize,
    ) -> Result<Option<f64>, EngineError> {
        if !(best.ratio > 0.0) {
            return Ok(None);
        }
        let r = lred.len();
        let pairing = dot(&best.x, lred);
        if !(pairing > 0.0) {
            return Ok(None);
        }
        let mut anchor: Vec<f64> = best.x.iter().map(|c| c / pairing).collect();
        let data = evaluate(&self.reduced, &anchor)?;
        *iterations += 1;
        best.offer(lred, &anchor, data.seminorm);
        let mut g_anchor = data.seminorm;
        let mut cuts: Vec<Vec<f64>> = Vec::new();
        absorb_cuts(&mut cuts, harvest_cuts(&self.reduced, &data, r));

        let span = anchor.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut delta = 0.5 * (1.0 + span);
        let delta_cap = 1e7 * (1.0 + span);
        let mut lower = 0.0f64;
        let mut stagnant = 0usize;
        let mut gap_marker = f64::INFINITY;
        for round in 0..(20 + 6 * r) {
            let Ok((y, t_model, box_active)) = solve_model_lp(&cuts, lred, &anchor, delta)
            else {
                break;
            };
            let data = evaluate(&self.reduced, &y)?;
            *iterations += 1;
            best.offer(lred, &y, data.seminorm);
            absorb_cuts(&mut cuts, harvest_cuts(&self.reduced, &data, r));
            prune_cuts(&mut cuts, &y, data.seminorm, 24 * r + 60);

            // smallest seminorm seen on the slice (ratios are scale-free)
            let g_best = 1.0 / best.ratio;
            let mut progressed = false;
            if !box_active && t_model > lower + 1e-14 * g_best {
                lower = t_model;
                progressed = true;
            }
            if lower > 0.0 && g_best - lower <= opts.tol * lower {
                // the distance lies in [best ratio, 1 / lower]
                return Ok(Some((1.0 / lower - best.ratio).max(0.0)));
            }
            if data.seminorm < g_anchor * (1.0 - 1e-12) {
                anchor = y;
                g_anchor = data.seminorm;
                progressed = true;
            }
            if box_active {
                delta *= 2.0;
                if delta > delta_cap {
                    break;
                }
                progressed = true;
            }
            stagnant = if progressed { 0 } else { stagnant + 1 };
            if stagnant >= 8 {
                break;
            }
            // on smoothly curved boundaries the model gap inches along
            // instead of collapsing; stop chasing the certificate unless
            // a four-round window at least halves it
            if round % 4 == 3 {
                let model_gap = if lower > 0.0 {
                    1.0 / best.ratio - lower
                } else {
                    f64::INFINITY
                };
                if model_gap > 0.5 * gap_marker {
                    break;
                }
                gap_marker = model_gap;
            }
        }
        Ok(None)
    }

    fn finish(
        &self,
        lred: &[f64],
        best: Incumbent,
        iterations: usize,
        opts: &SolveOptions,
        certified: Option<f64>,
    ) -> Result<DistanceResult, EngineError> {
        if !(best.ratio > 0.0) {
            // the pairing is nonpositive along every direction tried; the
            // distance of distinct states is positive, so this only happens
            // for (numerically) equal states
            return Ok(DistanceResult {
                value: 0.0,
                optimizer: vec![0.0; self.m],
                gap: 0.0,
                iterations,
            });
        }
        // exact rescale of the stored witness to unit seminorm
        let g = seminorm_only(&self.reduced, &best.x)?;
        if !(g > 0.0) {
            return Err(EngineError::NoConvergence {
                best_lower_bound: best.ratio,
                iterations,
            });
        }
        let xunit: Vec<f64> = best.x.iter().map(|c| c / g).collect();
        let value = dot(lred, &xunit);
        let gap = certified.unwrap_or(value * opts.tol).max(0.0);
        Ok(DistanceResult {
            value,
            optimizer: self.expand(&xunit),
            gap,
            iterations,
        })
    }
}

/// Best certified lower bound seen so far, with the point achieving it.
struct Incumbent {
    ratio: f64,
    x: Vec<f64>,
    g_at_best: f64,
}

impl Incumbent {
    fn new() -> Self {
        Incumbent {
            ratio: f64::NEG_INFINITY,
            x: Vec::new(),
            g_at_best: 0.0,
        }
    }

    fn offer(&mut self, lred: &[f64], x: &[f64], g: f64) {
        if g > 0.0 {
            let ratio = dot(lred, x) / g;
            if ratio > self.ratio {
                self.ratio = ratio;
                self.x = x.to_vec();
                self.g_at_best = g;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Free-function API
// ---------------------------------------------------------------------------

/// Orthonormal coefficient vectors spanning the commutant (zero-seminorm
/// directions) of the triple's algebra.
pub fn commutant_directions(
    triple: &FiniteSpectralTriple,
) -> Result<Vec<Vec<f64>>, EngineError> {
    Ok(DistanceEngine::new(triple)?.commutant_directions().to_vec())
}

/// Spectral distance between two states.
pub fn spectral_distance(
    triple: &FiniteSpectralTriple,
    phi: &State,
    psi: &State,
    opts: &SolveOptions,
) -> Result<DistanceResult, EngineError> {
    DistanceEngine::new(triple)?.distance(phi, psi, opts)
}

/// Spectral distance through the trace-pairing representative; fails with
/// `RhoNotInAlgebra` when the state difference has no representative in
/// the represented algebra.
pub fn spectral_distance_dual(
    triple: &FiniteSpectralTriple,
    phi: &State,
    psi: &State,
    opts: &SolveOptions,
) -> Result<DistanceResult, EngineError> {
    DistanceEngine::new(triple)?.distance_dual(phi, psi, opts)
}
