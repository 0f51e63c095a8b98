//! Dense complex matrices and the Hermitian eigensolver.
//!
//! Everything downstream (operator norms, commutator seminorms, Gram
//! systems) reduces to Hermitian eigendecompositions, implemented here as
//! complex Householder tridiagonalization with phase absorption followed by
//! an implicit-shift QL iteration.

use num_complex::Complex64;

use crate::error::MatError;
use crate::tol;

/// Shorthand for the scalar type used everywhere.
pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense, row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from explicit rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows passed to CMatrix::from_rows"
        );
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        CMatrix::from_rows(&complex)
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = CMatrix::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let complex: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        CMatrix::diag(&complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(C64::new(s, 0.0))
    }

    /// `self += s * other` with a real coefficient (hot path).
    pub fn add_scaled_real(&mut self, s: f64, other: &CMatrix) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            a.re += s * b.re;
            a.im += s * b.im;
        }
    }

    pub fn set_zero(&mut self) {
        self.data.fill(ZERO);
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == ZERO {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = a.conj();
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise deviation from the adjoint.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, rel: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= rel * self.max_abs_entry().max(1.0)
    }

    /// `(M + M*)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        assert!(self.is_square());
        CMatrix::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product, row-major convention: index `(i1*d2 + i2)`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let aij = a[(i1, j1)];
            if aij == ZERO {
                continue;
            }
            for i2 in 0..b.rows() {
                for j2 in 0..b.cols() {
                    out[(i1 * b.rows() + i2, j1 * b.cols() + j2)] = aij * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Block-diagonal sum `a (+) b`.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] = a[(i, j)];
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out[(a.rows() + i, a.cols() + j)] = b[(i, j)];
        }
    }
    out
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.matmul(b).sub(&b.matmul(a))
}

/// `{a, b} = ab + ba`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.matmul(b).add(&b.matmul(a))
}

/// Trace pairing `Tr(a* b)`.
pub fn trace_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    a.data
        .iter()
        .zip(&b.data)
        .fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

/// Dimension-normalized trace pairing `Tr(a* b) / n` (the Hilbert-Schmidt
/// convention used by the 2x2 geometry and the quantization maps).
pub fn normalized_trace_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    trace_inner(a, b) / C64::new(a.rows() as f64, 0.0)
}

/// Partial trace over the first factor of `C^{d1} (x) C^{d2}`.
pub fn partial_trace_left(t: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    assert_eq!(t.rows(), d1 * d2);
    assert!(t.is_square());
    CMatrix::from_fn(d2, d2, |i2, j2| {
        (0..d1).fold(ZERO, |acc, i1| acc + t[(i1 * d2 + i2, i1 * d2 + j2)])
    })
}

/// Partial trace over the second factor of `C^{d1} (x) C^{d2}`.
pub fn partial_trace_right(t: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    assert_eq!(t.rows(), d1 * d2);
    assert!(t.is_square());
    CMatrix::from_fn(d1, d1, |i1, j1| {
        (0..d2).fold(ZERO, |acc, i2| acc + t[(i1 * d2 + i2, j1 * d2 + i2)])
    })
}

/// Transpose of the first tensor factor.
pub fn partial_transpose_left(t: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    assert_eq!(t.rows(), d1 * d2);
    assert!(t.is_square());
    CMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i1, i2) = (r / d2, r % d2);
        let (j1, j2) = (c / d2, c % d2);
        t[(j1 * d2 + i2, i1 * d2 + j2)]
    })
}

/// Transpose of the second tensor factor.
pub fn partial_transpose_right(t: &CMatrix, d1: usize, d2: usize) -> CMatrix {
    assert_eq!(t.rows(), d1 * d2);
    assert!(t.is_square());
    CMatrix::from_fn(d1 * d2, d1 * d2, |r, c| {
        let (i1, i2) = (r / d2, r % d2);
        let (j1, j2) = (c / d2, c % d2);
        t[(i1 * d2 + j2, j1 * d2 + i2)]
    })
}

/// Result of a Hermitian eigendecomposition: ascending eigenvalues and a
/// unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigDecomposition {
    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn eigenvector(&self, j: usize) -> Vec<C64> {
        self.vectors.col(j)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects inputs whose deviation from self-adjointness exceeds the relative
/// tolerance, symmetrizes the rest, tridiagonalizes with complex Householder
/// reflectors (off-diagonal phases absorbed into the accumulated unitary) and
/// runs implicit-shift QL with a per-eigenvalue sweep cap.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigDecomposition, MatError> {
    if !m.is_square() {
        return Err(MatError::DimensionMismatch {
            context: format!("hermitian_eig needs a square matrix, got {}x{}", m.rows(), m.cols()),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(EigDecomposition {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let scale = m.max_abs_entry().max(1.0);
    let deviation = m.hermitian_deviation();
    if deviation > tol::HERMITIAN_REL * scale {
        return Err(MatError::NotHermitian {
            deviation,
            tolerance: tol::HERMITIAN_REL * scale,
        });
    }

    let mut w = m.hermitian_part();
    let mut q = CMatrix::identity(n);

    // Householder tridiagonalization. After step k, column k holds
    // (.., d_k, alpha_k, 0, ..) with alpha_k possibly complex.
    for k in 0..n.saturating_sub(2) {
        let xnorm2: f64 = (k + 1..n).map(|i| w[(i, k)].norm_sqr()).sum();
        if xnorm2 == 0.0 {
            continue;
        }
        let xnorm = xnorm2.sqrt();
        let x0 = w[(k + 1, k)];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * xnorm
        } else {
            C64::new(-xnorm, 0.0)
        };
        let nb = n - k - 1;
        let mut v = vec![ZERO; nb];
        v[0] = x0 - alpha;
        for i in 1..nb {
            v[i] = w[(k + 1 + i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // p = tau * B v on the trailing block B = W[k+1.., k+1..].
        let mut p = vec![ZERO; nb];
        for i in 0..nb {
            let row = w.row(k + 1 + i);
            let mut acc = ZERO;
            for j in 0..nb {
                acc += row[k + 1 + j] * v[j];
            }
            p[i] = acc * tau;
        }
        let vp: C64 = v.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
        let kappa = 0.5 * tau * vp.re;
        let w_vec: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kappa).collect();

        // B -= v w* + w v*
        for i in 0..nb {
            for j in 0..nb {
                let delta = v[i] * w_vec[j].conj() + w_vec[i] * v[j].conj();
                w[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        // Eliminated column/row written explicitly.
        w[(k + 1, k)] = alpha;
        w[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            w[(i, k)] = ZERO;
            w[(k, i)] = ZERO;
        }
        // Accumulate Q <- Q * H on columns k+1..n.
        for r in 0..n {
            let mut qv = ZERO;
            for j in 0..nb {
                qv += q[(r, k + 1 + j)] * v[j];
            }
            let t = qv * tau;
            for j in 0..nb {
                let correction = t * v[j].conj();
                q[(r, k + 1 + j)] -= correction;
            }
        }
    }

    // Extract the tridiagonal and absorb off-diagonal phases into Q so the
    // QL iteration runs on a real symmetric tridiagonal.
    let mut d: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    let mut e = vec![0.0f64; n];
    let mut phase = ONE;
    let mut phases = vec![ONE; n];
    for k in 0..n - 1 {
        let sub = w[(k + 1, k)];
        let mag = sub.norm();
        e[k] = mag;
        if mag > 0.0 {
            phase *= sub / mag;
        }
        phases[k + 1] = phase;
    }
    for j in 1..n {
        if phases[j] != ONE {
            for r in 0..n {
                let scaled = q[(r, j)] * phases[j];
                q[(r, j)] = scaled;
            }
        }
    }

    // Implicit-shift QL (classic tql2 scheme) rotating the complex columns.
    // Convention here: e[i] couples d[i] and d[i+1]; e[n-1] = 0.
    let eps = 2.0f64.powi(-52);
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut mm = l;
        while mm < n {
            if e[mm].abs() <= eps * tst1 {
                break;
            }
            mm += 1;
        }
        if mm > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > tol::EIG_MAX_SWEEPS {
                    return Err(MatError::NoConvergence {
                        iterations: tol::EIG_MAX_SWEEPS,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[mm];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..mm).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);
                    for k in 0..n {
                        let hk = q[(k, i + 1)];
                        q[(k, i + 1)] = q[(k, i)] * s + hk * c;
                        q[(k, i)] = q[(k, i)] * c - hk * s;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Ascending selection sort, carrying the eigenvector columns.
    for i in 0..n.saturating_sub(1) {
        let mut kmin = i;
        for j in i + 1..n {
            if d[j] < d[kmin] {
                kmin = j;
            }
        }
        if kmin != i {
            d.swap(i, kmin);
            for r in 0..n {
                let t = q[(r, i)];
                q[(r, i)] = q[(r, kmin)];
                q[(r, kmin)] = t;
            }
        }
    }

    Ok(EigDecomposition {
        values: d,
        vectors: q,
    })
}

/// Operator (spectral) norm `sqrt(lambda_max(M* M))`. Works for rectangular
/// inputs; Hermitian inputs take the direct eigenvalue route.
pub fn operator_norm(m: &CMatrix) -> Result<f64, MatError> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    if m.is_square() && m.is_hermitian(tol::HERMITIAN_REL) {
        return Ok(hermitian_eig(m)?.max_abs_value());
    }
    let gram = m.adjoint().matmul(m);
    let eig = hermitian_eig(&gram)?;
    Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Solves `G x = b` for a real symmetric positive semidefinite `G` given as
/// a complex matrix, via spectral pseudo-inversion (eigenvalues below
/// `1e-12 * lambda_max` are treated as zero). Returns `(x, residual)` with
/// `residual = ||G x - b||_2`.
pub fn solve_real_sym_psd(g: &CMatrix, b: &[f64]) -> Result<(Vec<f64>, f64), MatError> {
    assert!(g.is_square());
    assert_eq!(g.rows(), b.len());
    let n = b.len();
    let eig = hermitian_eig(g)?;
    let lam_max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 1e-12 * lam_max.max(1e-300);
    let mut x = vec![0.0f64; n];
    for j in 0..n {
        let lam = eig.values[j];
        if lam <= cutoff {
            continue;
        }
        // coefficient <v_j, b> (vectors are real up to numerical phases when
        // G is real; take the real part of the pairing)
        let mut vb = ZERO;
        for i in 0..n {
            vb += eig.vectors[(i, j)].conj() * C64::new(b[i], 0.0);
        }
        let coeff = vb / C64::new(lam, 0.0);
        for i in 0..n {
            x[i] += (eig.vectors[(i, j)] * coeff).re;
        }
    }
    let mut residual = 0.0f64;
    for i in 0..n {
        let mut gix = 0.0f64;
        for j in 0..n {
            gix += g[(i, j)].re * x[j];
        }
        residual += (gix - b[i]).powi(2);
    }
    Ok((x, residual.sqrt()))
}

/// The three Pauli matrices plus the identity, in the order `1, s1, s2, s3`.
pub fn pauli_basis() -> [CMatrix; 4] {
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::identity(2),
        CMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        CMatrix::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]),
        CMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
    ]
}

/// `a0 + x . sigma` for real coefficients.
pub fn pauli_combination(a0: f64, x: &[f64; 3]) -> CMatrix {
    let p = pauli_basis();
    let mut out = p[0].scale_real(a0);
    for k in 0..3 {
        out.add_scaled_real(x[k], &p[k + 1]);
    }
    out
}

/// Density matrix of the Bloch vector `x` (`||x|| <= 1`): `(1 + x.sigma)/2`.
pub fn bloch_density(x: &[f64; 3]) -> CMatrix {
    pauli_combination(1.0, x).scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_complex(rng: &mut impl Rng) -> C64 {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| random_complex(rng))
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        random_matrix(n, rng).hermitian_part()
    }

    #[test]
    fn eig_of_real_diagonal_sorts_ascending() {
        let m = CMatrix::real_diag(&[3.0, 1.0, 2.0]);
        let eig = hermitian_eig(&m).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        assert!((eig.values[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_of_pauli_x_and_y() {
        let p = pauli_basis();
        for m in [&p[1], &p[2]] {
            let eig = hermitian_eig(m).unwrap();
            assert!((eig.values[0] + 1.0).abs() < 1e-14);
            assert!((eig.values[1] - 1.0).abs() < 1e-14);
            // eigenvector property
            for j in 0..2 {
                let v = eig.eigenvector(j);
                let mv = m.mul_vec(&v);
                for i in 0..2 {
                    assert!((mv[i] - v[i] * eig.values[j]).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[1usize, 2, 3, 6, 12, 40] {
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eig(&m).unwrap();
            let lam = CMatrix::real_diag(&eig.values);
            let rec = eig.vectors.matmul(&lam).matmul(&eig.vectors.adjoint());
            let err = rec.sub(&m).frobenius_norm();
            assert!(err < tol::EIG_RECONSTRUCTION, "n={n}: reconstruction {err:.3e}");
            let unit = eig
                .vectors
                .adjoint()
                .matmul(&eig.vectors)
                .sub(&CMatrix::identity(n))
                .frobenius_norm();
            assert!(unit < 1e-11, "n={n}: orthonormality {unit:.3e}");
        }
    }

    #[test]
    fn eig_handles_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // identity plus a rank-one Hermitian bump: eigenvalues {1 (x3), 1+t}
        let n = 4;
        let v: Vec<C64> = (0..n).map(|_| random_complex(&mut rng)).collect();
        let mut m = CMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += v[i] * v[j].conj() * 0.5;
            }
        }
        let eig = hermitian_eig(&m).unwrap();
        let lam = CMatrix::real_diag(&eig.values);
        let rec = eig.vectors.matmul(&lam).matmul(&eig.vectors.adjoint());
        assert!(rec.sub(&m).frobenius_norm() < 1e-12);
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((eig.values[3] - (1.0 + 0.5 * vnorm2)).abs() < 1e-12);
        for j in 0..3 {
            assert!((eig.values[j] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        match hermitian_eig(&m) {
            Err(MatError::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn operator_norm_matches_known_values() {
        let m = CMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]);
        assert!((operator_norm(&m).unwrap() - 2.0).abs() < 1e-12);
        let d = CMatrix::real_diag(&[-3.0, 1.0, 2.0]);
        assert!((operator_norm(&d).unwrap() - 3.0).abs() < 1e-12);
        // zero matrix
        assert_eq!(operator_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn cstar_identity_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = random_matrix(5, &mut rng);
            let na = operator_norm(&a).unwrap();
            let naa = operator_norm(&a.adjoint().matmul(&a)).unwrap();
            assert!(
                (naa - na * na).abs() <= tol::CSTAR_IDENTITY * (1.0 + na * na),
                "C* identity violated: {naa} vs {}",
                na * na
            );
        }
    }

    #[test]
    fn kron_mixed_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(3, &mut rng);
        let c = random_matrix(2, &mut rng);
        let d = random_matrix(3, &mut rng);
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-12);
    }

    #[test]
    fn trace_inner_is_conjugate_symmetric_and_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let a = random_matrix(4, &mut rng);
        let b = random_matrix(4, &mut rng);
        let ab = trace_inner(&a, &b);
        let ba = trace_inner(&b, &a);
        assert!((ab - ba.conj()).norm() < 1e-13);
        assert!(trace_inner(&a, &a).re > 0.0);
        assert!(trace_inner(&a, &a).im.abs() < 1e-13);
    }

    #[test]
    fn bloch_densities_pair_through_the_trace() {
        let x = [0.3, -0.4, 0.5];
        let y = [-0.1, 0.2, 0.7];
        let inner = trace_inner(&bloch_density(&x), &bloch_density(&y)).re;
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((inner - 0.5 * (1.0 + dot)).abs() < 1e-14);
    }

    #[test]
    fn partial_traces_factor_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(3, &mut rng);
        let t = kron(&a, &b);
        let tra = partial_trace_left(&t, 2, 3);
        let trb = partial_trace_right(&t, 2, 3);
        assert!(tra.sub(&b.scale(a.trace())).frobenius_norm() < 1e-12);
        assert!(trb.sub(&a.scale(b.trace())).frobenius_norm() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution_and_matches_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(2, &mut rng);
        let t = kron(&a, &b);
        let pt = partial_transpose_left(&t, 2, 2);
        assert!(pt.sub(&kron(&a.transpose(), &b)).frobenius_norm() < 1e-12);
        let back = partial_transpose_left(&pt, 2, 2);
        assert!(back.sub(&t).frobenius_norm() < 1e-12);
        let pt2 = partial_transpose_right(&t, 2, 2);
        assert!(pt2.sub(&kron(&a, &b.transpose())).frobenius_norm() < 1e-12);
    }

    #[test]
    fn real_sym_solve_recovers_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 6;
        // SPD matrix: A A^T + I
        let a = CMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), 0.0));
        let g = a.matmul(&a.transpose()).add(&CMatrix::identity(n));
        let x_true: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| g[(i, j)].re * x_true[j]).sum())
            .collect();
        let (x, residual) = solve_real_sym_psd(&g, &b).unwrap();
        assert!(residual < 1e-10);
        for i in 0..n {
            assert!((x[i] - x_true[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn direct_sum_blocks() {
        let a = CMatrix::identity(2).scale_real(2.0);
        let b = CMatrix::identity(1).scale_real(-1.0);
        let s = direct_sum(&a, &b);
        assert_eq!(s.rows(), 3);
        assert!((s[(0, 0)].re - 2.0).abs() < 1e-15);
        assert!((s[(2, 2)].re + 1.0).abs() < 1e-15);
        assert_eq!(s[(0, 2)], C64::new(0.0, 0.0));
    }

    #[test]
    fn commutator_antisymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let a = random_matrix(3, &mut rng);
        let b = random_matrix(3, &mut rng);
        let lhs = commutator(&a, &b);
        let rhs = commutator(&b, &a).scale_real(-1.0);
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-12);
    }
}
