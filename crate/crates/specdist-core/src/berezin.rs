//! Coherent-state symbol and quantization maps for the two-dimensional
//! (spin one-half) representation, plus the transport cost-distance between
//! density matrices built from their node-sampled symbols.
//!
//! A near-uniform quadrature on the unit sphere carries one rotated copy of
//! the base projector per node; `symbol` samples `a -> tr(rho_x a)` on the
//! nodes, `quantize` integrates a sampled function back into a matrix, and
//! the two maps are exact adjoints of one another with respect to the
//! quadrature and normalized Hilbert-Schmidt pairings — at every resolution,
//! not just asymptotically.

use crate::error::BerezinError;
use crate::matrix::{hermitian_eig, trace_inner, CMatrix, C64};
use crate::metric::FiniteMetric;
use crate::tol;
use crate::transport::kantorovich;
use std::sync::OnceLock;

/// Radius of the sphere whose total area is 1, so that geodesic cost and
/// the normalized uniform measure share a scale.
pub fn sphere_radius() -> f64 {
    1.0 / (4.0 * std::f64::consts::PI).sqrt()
}

/// Angle between two unit vectors, accurate near both 0 and pi.
fn angle(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    let dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let cx = x[1] * y[2] - x[2] * y[1];
    let cy = x[2] * y[0] - x[0] * y[2];
    let cz = x[0] * y[1] - x[1] * y[0];
    (cx * cx + cy * cy + cz * cz).sqrt().atan2(dot)
}

/// Equal-weight spiral quadrature on the unit sphere together with the
/// rotation that carries the north pole to each node.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    rotations: Vec<CMatrix>,
}

impl SphereQuadrature {
    /// Golden-angle spiral with `n` equally weighted nodes.
    pub fn fibonacci(n: usize) -> Result<Self, BerezinError> {
        if n == 0 {
            return Err(BerezinError::BadQuadrature {
                reason: "a quadrature needs at least one node".into(),
            });
        }
        let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
        let mut nodes = Vec::with_capacity(n);
        let mut rotations = Vec::with_capacity(n);
        for i in 0..n {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let planar = (1.0 - z * z).max(0.0).sqrt();
            let azimuth = golden * i as f64;
            let node = [planar * azimuth.cos(), planar * azimuth.sin(), z];
            rotations.push(rotation_from_pole(&node));
            nodes.push(node);
        }
        let quad = SphereQuadrature {
            nodes,
            weights: vec![1.0 / n as f64; n],
            rotations,
        };
        quad.validate()?;
        Ok(quad)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Special-unitary matrices taking the north pole to each node along
    /// the connecting great circle.
    pub fn rotations(&self) -> &[CMatrix] {
        &self.rotations
    }

    /// Residual of the first-moment integrals `sum_i w_i x_i` (which vanish
    /// for the exact uniform measure).
    pub fn moment_residual(&self) -> f64 {
        let mut m = [0.0f64; 3];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            for (mc, xc) in m.iter_mut().zip(x) {
                *mc += w * xc;
            }
        }
        (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt()
    }

    fn validate(&self) -> Result<(), BerezinError> {
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > tol::QUADRATURE_EXACT {
            return Err(BerezinError::BadQuadrature {
                reason: format!("weights sum to {total}"),
            });
        }
        if self.weights.iter().any(|&w| w <= 0.0) {
            return Err(BerezinError::BadQuadrature {
                reason: "weights must be positive".into(),
            });
        }
        for (i, x) in self.nodes.iter().enumerate() {
            let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            if (norm - 1.0).abs() > tol::QUADRATURE_EXACT {
                return Err(BerezinError::BadQuadrature {
                    reason: format!("node {i} has norm {norm}"),
                });
            }
        }
        Ok(())
    }
}

/// Special-unitary rotation by the polar angle of `x` about the axis
/// orthogonal to the pole-`x` plane, mapping `(0,0,1)` to `x`.
fn rotation_from_pole(x: &[f64; 3]) -> CMatrix {
    let planar = x[0].hypot(x[1]);
    if planar <= 1e-15 {
        return if x[2] >= 0.0 {
            CMatrix::identity(2)
        } else {
            // half-turn about the x-axis
            CMatrix::from_rows(&[
                vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
                vec![C64::new(0.0, -1.0), C64::new(0.0, 0.0)],
            ])
        };
    }
    let theta = planar.atan2(x[2]);
    let (axis_x, axis_y) = (-x[1] / planar, x[0] / planar);
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    // cos(t/2) 1 - i sin(t/2) (axis . sigma) with a z-free axis
    CMatrix::from_rows(&[
        vec![C64::new(c, 0.0), C64::new(-axis_y * s, -axis_x * s)],
        vec![C64::new(axis_y * s, -axis_x * s), C64::new(c, 0.0)],
    ])
}

/// Symbol and quantization maps for 2x2 matrices over a sphere quadrature.
#[derive(Debug)]
pub struct BerezinMaps {
    quadrature: SphereQuadrature,
    projectors: Vec<CMatrix>,
    metric: OnceLock<Result<FiniteMetric, BerezinError>>,
}

impl BerezinMaps {
    /// Rotates the projector onto the upper spin state to every node and
    /// verifies each copy is a rank-one projection. Each rotated projector
    /// equals the density matrix with Bloch vector at its node.
    pub fn qubit(quadrature: SphereQuadrature) -> Result<Self, BerezinError> {
        let base = CMatrix::real_diag(&[1.0, 0.0]);
        let mut projectors = Vec::with_capacity(quadrature.len());
        for (index, u) in quadrature.rotations().iter().enumerate() {
            let p = u.matmul(&base).matmul(&u.adjoint());
            let residual = p
                .matmul(&p)
                .add(&p.scale_real(-1.0))
                .frobenius_norm()
                .max((p.trace() - C64::new(1.0, 0.0)).norm())
                .max(p.hermitian_deviation());
            if residual > tol::PROJECTOR_RANK1 {
                return Err(BerezinError::BadProjector { index, residual });
            }
            projectors.push(p);
        }
        Ok(BerezinMaps {
            quadrature,
            projectors,
            metric: OnceLock::new(),
        })
    }

    /// Dimension of the represented matrix algebra.
    pub fn rep_dim(&self) -> usize {
        2
    }

    pub fn quadrature(&self) -> &SphereQuadrature {
        &self.quadrature
    }

    /// Coherent projectors, one per node.
    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    /// Node samples of the symbol `x -> tr(rho_x a)`.
    pub fn symbol(&self, a: &CMatrix) -> Result<Vec<C64>, BerezinError> {
        self.check_dim(a)?;
        Ok(self
            .projectors
            .iter()
            .map(|p| trace_inner(p, a))
            .collect())
    }

    /// Quadrature integral `N sum_i w_i f(x_i) rho_{x_i}` turning node
    /// samples back into a matrix.
    pub fn quantize(&self, f: &[C64]) -> Result<CMatrix, BerezinError> {
        if f.len() != self.quadrature.len() {
            return Err(BerezinError::DimensionMismatch {
                context: format!(
                    "{} samples for a quadrature with {} nodes",
                    f.len(),
                    self.quadrature.len()
                ),
            });
        }
        let n = self.rep_dim() as f64;
        let mut out = CMatrix::zeros(2, 2);
        for ((p, w), v) in self.projectors.iter().zip(self.quadrature.weights()).zip(f) {
            out = out.add(&p.scale(C64::new(n * w, 0.0) * v));
        }
        Ok(out)
    }

    /// `|<symbol(a), f>_quadrature - <a, quantize(f)>_HS|`; the two pairings
    /// agree identically, so this is numerical noise at any resolution.
    pub fn adjointness_residual(&self, a: &CMatrix, f: &[C64]) -> Result<f64, BerezinError> {
        let sym = self.symbol(a)?;
        let lhs: C64 = sym
            .iter()
            .zip(f)
            .zip(self.quadrature.weights())
            .map(|((s, v), w)| s.conj() * v * w)
            .sum();
        let q = self.quantize(f)?;
        let rhs = trace_inner(a, &q) / C64::new(self.rep_dim() as f64, 0.0);
        Ok((lhs - rhs).norm())
    }

    /// Geodesic cost matrix between the nodes, on the area-one sphere.
    pub fn cost_metric(&self) -> Result<&FiniteMetric, BerezinError> {
        self.metric
            .get_or_init(|| {
                let nodes = self.quadrature.nodes();
                let n = nodes.len();
                let r = sphere_radius();
                let mut g = vec![vec![0.0f64; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let d = r * angle(&nodes[i], &nodes[j]);
                        g[i][j] = d;
                        g[j][i] = d;
                    }
                }
                FiniteMetric::new(g).map_err(|e| BerezinError::BadQuadrature {
                    reason: format!("node costs do not form a metric: {e}"),
                })
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Probability weights `w_i N symbol(rho)(x_i)` of a density matrix,
    /// clamped and renormalized (the raw sum is 1 up to quadrature error).
    pub fn node_distribution(&self, rho: &CMatrix) -> Result<Vec<f64>, BerezinError> {
        self.check_density(rho)?;
        let n = self.rep_dim() as f64;
        let mut p: Vec<f64> = self
            .projectors
            .iter()
            .zip(self.quadrature.weights())
            .map(|(pr, w)| (w * n * trace_inner(pr, rho).re).max(0.0))
            .collect();
        let total: f64 = p.iter().sum();
        if total <= 0.5 {
            return Err(BerezinError::BadQuadrature {
                reason: format!("sampled density mass {total} is far from 1"),
            });
        }
        for v in &mut p {
            *v /= total;
        }
        Ok(p)
    }

    /// Transport distance between the node distributions of two density
    /// matrices under the geodesic cost.
    pub fn cost_distance(&self, rho: &CMatrix, tau: &CMatrix) -> Result<f64, BerezinError> {
        let metric = self.cost_metric()?;
        let p = self.node_distribution(rho)?;
        let q = self.node_distribution(tau)?;
        Ok(kantorovich(metric, &p, &q)?.value)
    }

    /// Quadrature mean of the geodesic distance from the north pole.
    pub fn mean_geodesic_distance(&self) -> f64 {
        let pole = [0.0, 0.0, 1.0];
        let r = sphere_radius();
        self.quadrature
            .nodes()
            .iter()
            .zip(self.quadrature.weights())
            .map(|(x, w)| w * r * angle(&pole, x))
            .sum()
    }

    /// Normalized Hilbert-Schmidt norm `sqrt(tr(a* a) / N)`.
    pub fn hs_norm(&self, a: &CMatrix) -> f64 {
        (trace_inner(a, a).re / self.rep_dim() as f64).sqrt()
    }

    /// The analytic ceiling `N^(3/2) * mean geodesic * |rho - tau|_HS` for
    /// the cost distance.
    pub fn cost_distance_bound(&self, rho: &CMatrix, tau: &CMatrix) -> f64 {
        let n = self.rep_dim() as f64;
        n.powf(1.5) * self.mean_geodesic_distance() * self.hs_norm(&rho.add(&tau.scale_real(-1.0)))
    }

    fn check_dim(&self, a: &CMatrix) -> Result<(), BerezinError> {
        if a.rows() != 2 || a.cols() != 2 {
            return Err(BerezinError::DimensionMismatch {
                context: format!("expected a 2x2 matrix, got {}x{}", a.rows(), a.cols()),
            });
        }
        Ok(())
    }

    fn check_density(&self, rho: &CMatrix) -> Result<(), BerezinError> {
        self.check_dim(rho)?;
        let dev = rho.hermitian_deviation();
        if dev > 1e-10 * rho.frobenius_norm().max(1.0) {
            return Err(BerezinError::BadQuadrature {
                reason: format!("density deviates from self-adjoint by {dev:.3e}"),
            });
        }
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > 1e-9 {
            return Err(BerezinError::BadQuadrature {
                reason: format!("density has trace {trace}"),
            });
        }
        let min = hermitian_eig(rho)
            .map(|e| e.values.first().copied().unwrap_or(0.0))
            .unwrap_or(f64::NEG_INFINITY);
        if min < tol::STATE_EIG_FLOOR {
            return Err(BerezinError::BadQuadrature {
                reason: format!("density has negative eigenvalue {min:.3e}"),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{bloch_density, operator_norm, pauli_basis};
    use crate::sampling;

    #[test]
    fn quadrature_weights_and_nodes_are_exact_and_balanced() {
        let quad = SphereQuadrature::fibonacci(800).unwrap();
        assert_eq!(quad.len(), 800);
        let total: f64 = quad.weights().iter().sum();
        assert!((total - 1.0).abs() <= tol::QUADRATURE_EXACT);
        for x in quad.nodes() {
            let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            assert!((norm - 1.0).abs() <= tol::QUADRATURE_EXACT);
        }
        assert!(quad.moment_residual() <= tol::QUADRATURE_MOMENT);
        assert!(SphereQuadrature::fibonacci(0).is_err());
    }

    #[test]
    fn rotated_projectors_sit_at_their_nodes() {
        let quad = SphereQuadrature::fibonacci(64).unwrap();
        let maps = BerezinMaps::qubit(quad).unwrap();
        for (p, x) in maps.projectors().iter().zip(maps.quadrature().nodes()) {
            let expected = bloch_density(x);
            let diff = p.add(&expected.scale_real(-1.0)).frobenius_norm();
            assert!(diff <= 1e-12, "projector misses its node by {diff:.3e}");
        }
    }

    #[test]
    fn symbol_is_unital_positive_and_norm_nonincreasing() {
        let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(128).unwrap()).unwrap();
        let one = CMatrix::identity(2);
        for v in maps.symbol(&one).unwrap() {
            assert!((v - C64::new(1.0, 0.0)).norm() <= 1e-12);
        }
        // third Pauli matrix samples the node heights
        let sigma3 = &pauli_basis()[3];
        for (v, x) in maps.symbol(sigma3).unwrap().iter().zip(maps.quadrature().nodes()) {
            assert!((v.re - x[2]).abs() <= 1e-12);
            assert!(v.im.abs() <= 1e-14);
        }
        let mut rng = sampling::rng(3);
        for _ in 0..5 {
            let rho = sampling::random_density(2, &mut rng);
            for v in maps.symbol(&rho).unwrap() {
                assert!(v.re >= -1e-10 && v.re <= 1.0 + 1e-10);
            }
            let a = sampling::random_hermitian(2, &mut rng);
            let bound = operator_norm(&a).unwrap() + 1e-10;
            for v in maps.symbol(&a).unwrap() {
                assert!(v.re.abs() <= bound);
            }
        }
    }

    #[test]
    fn quantization_reproduces_identity_and_axis_at_default_resolution() {
        let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(800).unwrap()).unwrap();
        let n = maps.quadrature().len();
        let ones = vec![C64::new(1.0, 0.0); n];
        let q1 = maps.quantize(&ones).unwrap();
        let residual = q1.add(&CMatrix::identity(2).scale_real(-1.0)).frobenius_norm();
        assert!(residual <= 5e-3, "Q(1) off the identity by {residual:.3e}");

        let zeros = vec![C64::new(0.0, 0.0); n];
        assert!(maps.quantize(&zeros).unwrap().frobenius_norm() == 0.0);

        // quantizing the height symbol returns a multiple of the height matrix
        let sigma3 = &pauli_basis()[3];
        let qs = maps.quantize(&maps.symbol(sigma3).unwrap()).unwrap();
        let c = trace_inner(sigma3, &qs).re / 2.0;
        let residual = qs.add(&sigma3.scale_real(-c)).frobenius_norm();
        assert!(residual <= 5e-3, "Q(symbol) off the axis by {residual:.3e}");
        assert!(c > 0.0);
    }

    #[test]
    fn quantize_of_real_samples_is_hermitian_and_positive() {
        let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(96).unwrap()).unwrap();
        let mut rng = sampling::rng(4);
        let f: Vec<C64> = (0..96)
            .map(|_| C64::new(rand::Rng::gen_range(&mut rng, 0.0..2.0), 0.0))
            .collect();
        let q = maps.quantize(&f).unwrap();
        assert!(q.hermitian_deviation() <= 1e-12);
        let min = hermitian_eig(&q).unwrap().values[0];
        assert!(min >= -1e-10);
    }

    #[test]
    fn symbol_and_quantize_are_adjoint_at_any_resolution() {
        let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(48).unwrap()).unwrap();
        let n = maps.quadrature().len();
        let one = CMatrix::identity(2);
        let ones = vec![C64::new(1.0, 0.0); n];
        assert!(maps.adjointness_residual(&one, &ones).unwrap() <= 1e-12);

        let mut rng = sampling::rng(5);
        for _ in 0..5 {
            let a = sampling::random_matrix(2, &mut rng);
            let f: Vec<C64> = (0..n).map(|_| sampling::random_complex(&mut rng)).collect();
            let res = maps.adjointness_residual(&a, &f).unwrap();
            assert!(res <= tol::ADJOINTNESS, "residual {res:.3e}");
        }
    }

    #[test]
    fn cost_distance_vanishes_on_equal_states_and_obeys_the_hs_bound() {
        let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(160).unwrap()).unwrap();
        let mut rng = sampling::rng(6);
        let rho = sampling::random_density(2, &mut rng);
        assert!(maps.cost_distance(&rho, &rho).unwrap() <= 1e-12);
        for _ in 0..4 {
            let a = sampling::random_density(2, &mut rng);
            let b = sampling::random_density(2, &mut rng);
            let w = maps.cost_distance(&a, &b).unwrap();
            let bound = maps.cost_distance_bound(&a, &b);
            assert!(
                w <= bound + 1e-12,
                "transport value {w:.6e} exceeds its ceiling {bound:.6e}"
            );
        }
    }
}
