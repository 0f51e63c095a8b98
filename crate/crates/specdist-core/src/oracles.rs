//! Closed-form distance values for the standard triples, used to verify
//! the numerical engine. Each formula is independent of the solver: it is
//! evaluated directly from the defining parameters.

use num_complex::Complex64 as C64;

use crate::metric::FiniteMetric;

/// Distance between two-point states with expectation differences
/// `t1, t2` in `[-1, 1]` on the two-point triple with parameter `lambda`
/// (point separation `2 lambda`): the weights differ by `|t1 - t2|/2` and
/// Lipschitz elements satisfy `|a_0 - a_1| <= 2 lambda`.
pub fn two_point_distance(lambda: f64, t1: f64, t2: f64) -> f64 {
    lambda * (t1 - t2).abs()
}

/// Distance between probability vectors on the three-point triple with
/// cyclic Dirac blocks: the seminorm is the maximal coordinate difference,
/// and the distance is the Chebyshev distance of the weights.
pub fn simplex3_distance(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    (0..3).map(|i| (p[i] - q[i]).abs()).fold(0.0, f64::max)
}

/// Distance between pure states (points) of the triple generated by a
/// finite metric: the metric itself.
pub fn finite_metric_pure_distance(metric: &FiniteMetric, i: usize, j: usize) -> f64 {
    metric.distance(i, j)
}

fn euclidean3(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt()
}

/// Distance between Bloch states of the conjugation geometry
/// (`D(b) = b^*/2`): the Euclidean distance of Bloch vectors.
pub fn bloch_conjugation_distance(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    euclidean3(x, y)
}

/// Distance between Bloch states of the two-block flip geometry: the
/// seminorm is the operator norm of the element, and the distance is again
/// the Euclidean distance of Bloch vectors.
pub fn bloch_flip_distance(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    euclidean3(x, y)
}

/// Distance between Bloch states of the rank-one (truncated Moyal-type)
/// geometry. The seminorm of `a0 + v . sigma` is `|v| + |v_3|`, so the
/// distance is direction dependent: with `theta` the polar angle of
/// `x - y` (measured from the third axis),
/// `d = |x - y| * sin(theta)` for `pi/4 <= theta <= 3 pi/4` and
/// `d = |x - y| / (2 |cos(theta)|)` otherwise.
pub fn bloch_truncated_moyal_distance(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    let planar = d[0].hypot(d[1]);
    let norm = planar.hypot(d[2]);
    if norm == 0.0 {
        return 0.0;
    }
    let theta = planar.atan2(d[2]);
    let c = if (std::f64::consts::FRAC_PI_4..=3.0 * std::f64::consts::FRAC_PI_4)
        .contains(&theta)
    {
        theta.sin()
    } else {
        1.0 / (2.0 * theta.cos().abs())
    };
    c * norm
}

/// Distance between purifications of two pure states given by unit
/// vectors: `sqrt(1 - |<v, w>|^2)`.
pub fn purified_distance_pure(v: &[C64], w: &[C64]) -> f64 {
    assert_eq!(v.len(), w.len());
    let inner: C64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
    (1.0 - inner.norm_sqr()).max(0.0).sqrt()
}

/// Distance between purifications of two qubit density matrices with Bloch
/// vectors `x, y`:
/// `sqrt((1 - <x,y> - sqrt((1-|x|^2)(1-|y|^2))) / 2)`.
pub fn purified_distance_qubit(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    let dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let nx2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let ny2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let cross = ((1.0 - nx2).max(0.0) * (1.0 - ny2).max(0.0)).sqrt();
    (0.5 * (1.0 - dot - cross)).max(0.0).sqrt()
}

/// Lipschitz seminorm on the product of two two-point spaces with
/// separation one (`lambda = 1/2`), for the element
/// `a = x0 1 + (x1/2) g (x) 1 + (x2/2) 1 (x) g + (x3/2) v` where `v` is
/// the product-state witness direction attached to marginal expectations
/// `phi1, psi2` in `[-1, 1]`:
/// `sqrt(2) |x3| + hypot(x1 + x3 psi2, x2 + x3 phi1)`.
pub fn two_two_point_lipnorm(x: &[f64; 4], phi1: f64, psi2: f64) -> f64 {
    2.0f64.sqrt() * x[3].abs() + (x[1] + x[3] * psi2).hypot(x[2] + x[3] * phi1)
}

/// Distance between product states on a product of two two-point triples
/// with parameters `lambda` and `mu`: the marginal distances combine in
/// quadrature.
pub fn two_two_point_product_distance(
    lambda: f64,
    mu: f64,
    (t1, t2): (f64, f64),
    (s1, s2): (f64, f64),
) -> f64 {
    (lambda * (t1 - s1)).hypot(mu * (t2 - s2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_and_simplex_values() {
        assert!((two_point_distance(0.5, 1.0, -1.0) - 1.0).abs() < 1e-15);
        assert!((two_point_distance(2.0, 0.25, -0.25) - 1.0).abs() < 1e-15);
        let p = [0.5, 0.3, 0.2];
        let q = [0.1, 0.4, 0.5];
        assert!((simplex3_distance(&p, &q) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn moyal_distance_limits() {
        // third-axis displacement costs half
        let d = bloch_truncated_moyal_distance(&[0.0, 0.0, 0.4], &[0.0, 0.0, -0.4]);
        assert!((d - 0.4).abs() < 1e-14);
        // planar displacement costs its full length
        let d = bloch_truncated_moyal_distance(&[0.3, 0.4, 0.0], &[-0.3, -0.4, 0.0]);
        assert!((d - 1.0).abs() < 1e-14);
        // the two formulas agree on the crossover cone
        let s = 0.2;
        let d = bloch_truncated_moyal_distance(&[s, 0.0, s], &[0.0, 0.0, 0.0]);
        let norm = s * 2.0f64.sqrt();
        assert!((d - norm * (0.5f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn purified_distances_agree_on_pure_qubits() {
        // for unit Bloch vectors the qubit formula is half the chord length
        let x: [f64; 3] = [0.6, 0.8, 0.0];
        let y: [f64; 3] = [0.0, 0.0, 1.0];
        let want = 0.5
            * ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
        assert!((purified_distance_qubit(&x, &y) - want).abs() < 1e-14);
    }

    #[test]
    fn pure_state_purified_distance_from_overlap() {
        let v = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let w = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        assert!((purified_distance_pure(&v, &w) - 1.0).abs() < 1e-15);
        let u = [
            C64::new(1.0 / 2.0f64.sqrt(), 0.0),
            C64::new(1.0 / 2.0f64.sqrt(), 0.0),
        ];
        assert!((purified_distance_pure(&v, &u) - (0.5f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn product_distance_combines_marginals_in_quadrature() {
        let d = two_two_point_product_distance(0.5, 0.5, (1.0, 0.0), (0.0, 1.0));
        assert!((d - 0.5 * 2.0f64.sqrt()).abs() < 1e-15);
    }
}
