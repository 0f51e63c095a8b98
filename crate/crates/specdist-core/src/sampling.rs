//! Seeded random generators for matrices, states, metrics and triples,
//! used by tests and verification suites. All sampling is deterministic
//! given the seed.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::matrix::CMatrix;
use crate::metric::FiniteMetric;
use crate::triple::{Algebra, FiniteSpectralTriple, Sector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = random_matrix(n, rng);
    a.hermitian_part()
}

/// A density matrix sampled as G G† / Tr(G G†); full rank almost surely.
pub fn random_density(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = random_matrix(n, rng);
    let p = g.matmul(&g.adjoint());
    let t = p.trace().re;
    p.scale_real(1.0 / t)
}

/// Uniform coefficient vector in `[-1, 1]^n`.
pub fn random_coeffs(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // normalized exponential samples are uniform on the simplex
    let mut p: Vec<f64> = (0..n)
        .map(|_| -f64::ln(1.0 - rng.gen_range(0.0..1.0)))
        .collect();
    let s: f64 = p.iter().sum();
    for x in &mut p {
        *x /= s;
    }
    p
}

pub fn random_bloch_sphere(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let x: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [x[0] / n, x[1] / n, x[2] / n];
        }
    }
}

pub fn random_bloch_ball(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let x = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= 1.0 {
            return x;
        }
    }
}

pub fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| random_complex(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Rank-one density |v><v| for a random unit vector.
pub fn random_pure_density(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let v = random_unit_vector(n, rng);
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

/// Shortest-path closure of a complete graph with edge weights in
/// [0.5, 2.0]: always a genuine (finite) metric.
pub fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> FiniteMetric {
    let mut g = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.gen_range(0.5..2.0);
            g[i][j] = w;
            g[j][i] = w;
        }
    }
    floyd_warshall(&mut g);
    FiniteMetric::new(g).expect("shortest-path closure is a metric")
}

/// A metric with `parts` mutually disconnected blocks (infinite distance
/// across blocks); every block is a random finite metric.
pub fn random_disconnected_metric(n: usize, parts: usize, rng: &mut ChaCha8Rng) -> FiniteMetric {
    assert!(parts >= 1 && parts <= n, "need 1 <= parts <= n");
    let mut sizes = vec![n / parts; parts];
    for s in sizes.iter_mut().take(n % parts) {
        *s += 1;
    }
    let mut g = vec![vec![f64::INFINITY; n]; n];
    let mut offset = 0;
    for size in sizes {
        let block = random_metric(size, rng);
        for i in 0..size {
            for j in 0..size {
                g[offset + i][offset + j] = block.distance(i, j);
            }
        }
        offset += size;
    }
    FiniteMetric::new(g).expect("block-diagonal closure is a metric")
}

fn floyd_warshall(g: &mut [Vec<f64>]) {
    let n = g.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = g[i][k] + g[k][j];
                if via < g[i][j] {
                    g[i][j] = via;
                }
            }
        }
    }
}

/// A graded triple on the diagonal algebra C^n: the grading is a random
/// +-1 diagonal sign pattern and the Dirac operator is a random Hermitian
/// matrix anticommuting with it.
pub fn random_even_diagonal_triple(
    n: usize,
    label: &str,
    rng: &mut ChaCha8Rng,
) -> FiniteSpectralTriple {
    let signs: Vec<f64> = {
        // at least one +1 and one -1 so the grading is nontrivial
        let mut s: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        s[0] = 1.0;
        s[n - 1] = -1.0;
        s
    };
    let gamma = CMatrix::real_diag(&signs);
    let d0 = random_hermitian(n, rng);
    // project out the part commuting with the grading: D = (D0 - g D0 g)/2
    let gdg = gamma.matmul(&d0).matmul(&gamma);
    let dirac = d0.sub(&gdg).scale_real(0.5);
    let algebra = Algebra::diagonal(n);
    let rep = algebra.basis().to_vec();
    FiniteSpectralTriple::new(
        label.to_string(),
        algebra,
        vec![Sector::operator(dirac, Some(gamma), rep)],
    )
    .expect("constructed sector is valid")
}

/// An ungraded triple on the diagonal algebra C^n with a random Hermitian
/// Dirac operator.
pub fn random_odd_diagonal_triple(
    n: usize,
    label: &str,
    rng: &mut ChaCha8Rng,
) -> FiniteSpectralTriple {
    let algebra = Algebra::diagonal(n);
    let rep = algebra.basis().to_vec();
    let dirac = random_hermitian(n, rng);
    FiniteSpectralTriple::new(
        label.to_string(),
        algebra,
        vec![Sector::operator(dirac, None, rep)],
    )
    .expect("constructed sector is valid")
}
