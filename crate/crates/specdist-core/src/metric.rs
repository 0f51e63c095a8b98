//! Finite metric spaces, with `+inf` allowed between disconnected parts.

use crate::error::TransportError;
use crate::tol;

/// A metric on `size` points. Entries may be `f64::INFINITY`; validation
/// enforces symmetry, a zero diagonal, strictly positive off-diagonal
/// entries and the triangle inequality (with the usual conventions for
/// infinite values).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    size: usize,
    g: Vec<Vec<f64>>,
}

impl FiniteMetric {
    pub fn new(g: Vec<Vec<f64>>) -> Result<Self, TransportError> {
        let n = g.len();
        if g.iter().any(|row| row.len() != n) {
            return Err(TransportError::NotAMetric {
                reason: "distance matrix is not square".into(),
            });
        }
        let mut scale = 0.0f64;
        for row in &g {
            for &x in row {
                if x.is_nan() {
                    return Err(TransportError::NotAMetric {
                        reason: "NaN entry".into(),
                    });
                }
                if x.is_finite() {
                    scale = scale.max(x.abs());
                }
            }
        }
        let slack = tol::METRIC_SLACK * scale.max(1.0);
        for i in 0..n {
            if g[i][i].abs() > slack {
                return Err(TransportError::NotAMetric {
                    reason: format!("nonzero diagonal at {i}: {}", g[i][i]),
                });
            }
            for j in 0..n {
                if i != j {
                    if g[i][j] < 0.0 || (g[i][j] <= slack && g[i][j].is_finite()) {
                        return Err(TransportError::NotAMetric {
                            reason: format!("non-positive distance at ({i},{j}): {}", g[i][j]),
                        });
                    }
                    let asym = if g[i][j].is_finite() && g[j][i].is_finite() {
                        (g[i][j] - g[j][i]).abs()
                    } else if g[i][j].is_finite() != g[j][i].is_finite() {
                        f64::INFINITY
                    } else {
                        0.0
                    };
                    if asym > slack {
                        return Err(TransportError::NotAMetric {
                            reason: format!("asymmetric at ({i},{j})"),
                        });
                    }
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if !g[i][k].is_finite() {
                    continue;
                }
                for j in 0..n {
                    let via = g[i][k] + g[k][j];
                    if via.is_finite() && g[i][j] > via + slack {
                        return Err(TransportError::NotAMetric {
                            reason: format!(
                                "triangle inequality violated: g({i},{j}) = {} > {} = g({i},{k}) + g({k},{j})",
                                g[i][j], via
                            ),
                        });
                    }
                }
            }
        }
        Ok(FiniteMetric { size: n, g })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.g[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.g
    }

    pub fn is_finite(&self) -> bool {
        self.g.iter().all(|row| row.iter().all(|x| x.is_finite()))
    }

    pub fn max_finite(&self) -> f64 {
        self.g
            .iter()
            .flatten()
            .filter(|x| x.is_finite())
            .fold(0.0f64, |a, &b| a.max(b))
    }

    /// Partitions the points into finiteness classes. For a valid metric,
    /// finiteness of the distance is an equivalence relation (the triangle
    /// inequality makes it transitive), so classes are cliques and any pair
    /// across classes is at infinite distance.
    pub fn finiteness_classes(&self) -> Vec<Vec<usize>> {
        let n = self.size;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut class = vec![start];
            seen[start] = true;
            for j in 0..n {
                if !seen[j] && self.g[start][j].is_finite() {
                    seen[j] = true;
                    class.push(j);
                }
            }
            classes.push(class);
        }
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_a_simple_metric_and_reads_it_back() {
        let m = FiniteMetric::new(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ])
        .unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(m.distance(0, 2), 2.0);
        assert!(m.is_finite());
        assert_eq!(m.finiteness_classes(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rejects_triangle_violations() {
        let err = FiniteMetric::new(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert!(matches!(err, TransportError::NotAMetric { .. }));
    }

    #[test]
    fn rejects_asymmetry_and_bad_diagonal() {
        assert!(FiniteMetric::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(FiniteMetric::new(vec![vec![0.5, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(FiniteMetric::new(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
    }

    #[test]
    fn infinite_blocks_form_classes() {
        let inf = f64::INFINITY;
        let m = FiniteMetric::new(vec![
            vec![0.0, 1.0, inf, inf],
            vec![1.0, 0.0, inf, inf],
            vec![inf, inf, 0.0, 2.0],
            vec![inf, inf, 2.0, 0.0],
        ])
        .unwrap();
        assert!(!m.is_finite());
        assert_eq!(m.finiteness_classes(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn infinity_must_respect_the_triangle_inequality_too() {
        // finite g(0,1) and g(1,2) with infinite g(0,2) is not a metric
        let inf = f64::INFINITY;
        let err = FiniteMetric::new(vec![
            vec![0.0, 1.0, inf],
            vec![1.0, 0.0, 1.0],
            vec![inf, 1.0, 0.0],
        ])
        .unwrap_err();
        assert!(matches!(err, TransportError::NotAMetric { .. }));
    }
}
