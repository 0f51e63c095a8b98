//! Optimal transport on finite metric spaces: a dense transportation
//! simplex with exact basis bookkeeping.
//!
//! Infinite distances are handled structurally: for a valid metric,
//! finiteness of the distance is an equivalence relation, so the space
//! splits into classes with all-finite distances inside and infinite
//! distance across. Zero-mass points are stripped first (they must not
//! bridge classes), each class must carry equal supply and demand (else
//! the problem is infeasible), and each class is solved as a standard
//! all-finite transportation problem.

use crate::error::TransportError;
use crate::metric::FiniteMetric;
use crate::tol;

/// An optimal coupling between two probability vectors on a finite metric
/// space.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    /// Row-stochastic conditional plan: `plan[i][j]` is the fraction of
    /// the mass at `i` sent to `j` (rows with zero mass are uniform).
    pub plan: Vec<Vec<f64>>,
    /// Optimal transport cost.
    pub value: f64,
    /// Dual potential on sources; feasible: `dual_a[i] + dual_b[j] <= g(i,j)`.
    pub dual_a: Vec<f64>,
    /// Dual potential on targets.
    pub dual_b: Vec<f64>,
}

fn validate_marginal(p: &[f64], n: usize, name: &str) -> Result<(), TransportError> {
    if p.len() != n {
        return Err(TransportError::DimensionMismatch {
            context: format!("{name} has {} entries for {} points", p.len(), n),
        });
    }
    if let Some(&bad) = p.iter().find(|&&x| x < -tol::TRANSPORT_MARGINAL || !x.is_finite()) {
        return Err(TransportError::BadMarginals {
            reason: format!("{name} has negative or non-finite weight {bad}"),
        });
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol::TRANSPORT_MARGINAL {
        return Err(TransportError::BadMarginals {
            reason: format!("{name} sums to {sum}"),
        });
    }
    Ok(())
}

/// Optimal transport between `p` and `q` with the metric as cost. Errors
/// with `Infeasible` exactly when mass would have to cross an
/// infinite-distance barrier.
pub fn kantorovich(
    metric: &FiniteMetric,
    p: &[f64],
    q: &[f64],
) -> Result<TransportPlan, TransportError> {
    let n = metric.size();
    validate_marginal(p, n, "source marginal")?;
    validate_marginal(q, n, "target marginal")?;

    let mut x = vec![vec![0.0f64; n]; n];
    let mut u = vec![0.0f64; n];
    let mut v = vec![0.0f64; n];
    let mut value = 0.0f64;

    for class in metric.finiteness_classes() {
        let rows: Vec<usize> = class.iter().copied().filter(|&i| p[i] > 0.0).collect();
        let cols: Vec<usize> = class.iter().copied().filter(|&j| q[j] > 0.0).collect();
        let supply: f64 = rows.iter().map(|&i| p[i]).sum();
        let demand: f64 = cols.iter().map(|&j| q[j]).sum();
        let imbalance = (supply - demand).abs();
        if imbalance > tol::TRANSPORT_BALANCE {
            return Err(TransportError::Infeasible { class, imbalance });
        }
        if rows.is_empty() || cols.is_empty() {
            // no mass in this class; duals stay zero (feasible: g >= 0)
            continue;
        }
        let a: Vec<f64> = rows.iter().map(|&i| p[i]).collect();
        let b: Vec<f64> = cols.iter().map(|&j| q[j]).collect();
        let cost: Vec<Vec<f64>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| metric.distance(i, j)).collect())
            .collect();
        let sol = solve_class(&cost, &a, &b)?;
        for (li, &i) in rows.iter().enumerate() {
            u[i] = sol.u[li];
            for (lj, &j) in cols.iter().enumerate() {
                x[i][j] = sol.x[li][lj];
                value += sol.x[li][lj] * cost[li][lj];
            }
        }
        for (lj, &j) in cols.iter().enumerate() {
            v[j] = sol.v[lj];
        }
        // extend the duals to the stripped points of this class: rows by
        // minimal slack against the class column potentials, then columns
        // against the now-complete row potentials
        let in_rows = |i: usize| rows.contains(&i);
        let in_cols = |j: usize| cols.contains(&j);
        for &i in &class {
            if !in_rows(i) {
                u[i] = cols
                    .iter()
                    .map(|&j| metric.distance(i, j) - v[j])
                    .fold(f64::INFINITY, f64::min);
            }
        }
        for &j in &class {
            if !in_cols(j) {
                v[j] = class
                    .iter()
                    .map(|&i| metric.distance(i, j) - u[i])
                    .fold(f64::INFINITY, f64::min);
            }
        }
    }

    // certify: dual feasibility, complementary value agreement, marginals
    let scale = metric.max_finite().max(1.0);
    let mut dual_value = 0.0f64;
    for i in 0..n {
        dual_value += p[i] * u[i] + q[i] * v[i];
        for j in 0..n {
            let g = metric.distance(i, j);
            if g.is_finite() && u[i] + v[j] > g + tol::TRANSPORT_GAP * scale {
                return Err(TransportError::Numerical {
                    reason: format!("dual infeasible at ({i},{j})"),
                });
            }
        }
    }
    if (dual_value - value).abs() > tol::TRANSPORT_GAP * scale {
        return Err(TransportError::Numerical {
            reason: format!("duality gap {} above tolerance", (dual_value - value).abs()),
        });
    }
    for j in 0..n {
        let col: f64 = (0..n).map(|i| x[i][j]).sum();
        if (col - q[j]).abs() > tol::TRANSPORT_MARGINAL {
            return Err(TransportError::Numerical {
                reason: format!("pushforward misses target at {j}"),
            });
        }
    }

    // conditional (row-stochastic) plan; zero-mass rows become uniform
    let uniform = 1.0 / n as f64;
    let plan: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            if p[i] > 0.0 {
                (0..n).map(|j| x[i][j] / p[i]).collect()
            } else {
                vec![uniform; n]
            }
        })
        .collect();

    Ok(TransportPlan {
        plan,
        value,
        dual_a: u,
        dual_b: v,
    })
}

/// Distance between two probability measures on a finite metric space (the
/// commutative case of the spectral distance): the optimal transport cost,
/// infinite when mass is unbalanced across an infinite-distance barrier.
pub fn commutative_distance(
    metric: &FiniteMetric,
    p: &[f64],
    q: &[f64],
) -> Result<f64, TransportError> {
    match kantorovich(metric, p, q) {
        Ok(plan) => Ok(plan.value),
        Err(TransportError::Infeasible { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Dense transportation simplex (all costs finite, balanced, positive masses)
// ---------------------------------------------------------------------------

struct ClassSolution {
    x: Vec<Vec<f64>>,
    u: Vec<f64>,
    v: Vec<f64>,
}

struct Basis {
    n: usize,
    m: usize,
    /// Basic arcs (always `n + m - 1` of them, forming a spanning tree).
    arcs: Vec<(usize, usize)>,
    flows: Vec<f64>,
    in_basis: Vec<bool>,
}

impl Basis {
    fn contains(&self, i: usize, j: usize) -> bool {
        self.in_basis[i * self.m + j]
    }

    /// Tree adjacency over nodes `0..n` (rows) and `n..n+m` (columns).
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n + self.m];
        for (idx, &(i, j)) in self.arcs.iter().enumerate() {
            adj[i].push((self.n + j, idx));
            adj[self.n + j].push((i, idx));
        }
        adj
    }

    /// Dual potentials from the tree: `u[0] = 0`, `u_i + v_j = c_ij` on
    /// basic arcs.
    fn duals(&self, cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
        let (n, m) = (self.n, self.m);
        let adj = self.adjacency();
        let mut u = vec![0.0f64; n];
        let mut v = vec![0.0f64; m];
        let mut seen = vec![false; n + m];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(node) = stack.pop() {
            for &(next, arc) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    let (i, j) = self.arcs[arc];
                    if next >= n {
                        v[j] = cost[i][j] - u[i];
                    } else {
                        u[i] = cost[i][j] - v[j];
                    }
                    stack.push(next);
                }
            }
        }
        (u, v)
    }

    /// Unique tree path from row node `i` to column node `n + j` as a list
    /// of basic arc indices (in order along the path).
    fn path(&self, i: usize, j: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let total = self.n + self.m;
        let target = self.n + j;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; total];
        let mut seen = vec![false; total];
        let mut queue = std::collections::VecDeque::new();
        seen[i] = true;
        queue.push_back(i);
        while let Some(node) = queue.pop_front() {
            if node == target {
                break;
            }
            for &(next, arc) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, arc));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = target;
        while let Some((prev, arc)) = parent[node] {
            path.push(arc);
            node = prev;
        }
        path.reverse();
        path
    }
}

/// Northwest-corner initial basis: exactly `n + m - 1` arcs forming a
/// staircase spanning tree (degenerate zero flows included).
fn northwest_corner(a: &[f64], b: &[f64]) -> Basis {
    let (n, m) = (a.len(), b.len());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let mut arcs = Vec::with_capacity(n + m - 1);
    let mut flows = Vec::with_capacity(n + m - 1);
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        let t = a[i].min(b[j]);
        arcs.push((i, j));
        flows.push(t);
        a[i] -= t;
        b[j] -= t;
        if i == n - 1 && j == m - 1 {
            break;
        }
        if a[i] <= 0.0 && i < n - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    let mut in_basis = vec![false; n * m];
    for &(i, j) in &arcs {
        in_basis[i * m + j] = true;
    }
    Basis {
        n,
        m,
        arcs,
        flows,
        in_basis,
    }
}

fn solve_class(
    cost: &[Vec<f64>],
    a: &[f64],
    b: &[f64],
) -> Result<ClassSolution, TransportError> {
    let (n, m) = (a.len(), b.len());
    let scale = cost
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &c| acc.max(c.abs()))
        .max(1.0);
    let price_eps = 1e-12 * scale;
    let mut basis = northwest_corner(a, b);
    let mut blands_rule = false;
    let mut stall = 0usize;
    let pivot_cap = 2000 * (n + m) * (n + m) + 10_000;

    for _pivot in 0..pivot_cap {
        let (u, v) = basis.duals(cost);
        // pricing: most negative reduced cost (Dantzig) or first negative
        // in lexicographic order (Bland, after prolonged stalling)
        let mut entering: Option<(usize, usize)> = None;
        let mut best = -price_eps;
        'scan: for i in 0..n {
            for j in 0..m {
                if basis.contains(i, j) {
                    continue;
                }
                let r = cost[i][j] - u[i] - v[j];
                if r < best {
                    best = r;
                    entering = Some((i, j));
                    if blands_rule {
                        break 'scan;
                    }
                }
            }
        }
        let Some((ei, ej)) = entering else {
            // optimal: reconstruct exact flows from the original marginals
            let flows = exact_flows(&basis, a, b);
            let mut x = vec![vec![0.0f64; m]; n];
            for (idx, &(i, j)) in basis.arcs.iter().enumerate() {
                x[i][j] = flows[idx];
            }
            return Ok(ClassSolution { x, u, v });
        };

        // cycle: entering arc plus the tree path from its column back to
        // its row; arcs at even positions along the path lose flow
        let path = basis.path(ei, ej);
        let mut theta = f64::INFINITY;
        let mut leaving: Option<usize> = None;
        for (pos, &arc) in path.iter().enumerate() {
            if pos % 2 == 0 {
                let f = basis.flows[arc];
                let replace = match leaving {
                    None => true,
                    Some(l) => f < theta || (f == theta && basis.arcs[arc] < basis.arcs[l]),
                };
                if replace {
                    theta = f;
                    leaving = Some(arc);
                }
            }
        }
        let leaving = leaving.ok_or_else(|| TransportError::Numerical {
            reason: "pivot cycle has no leaving arc".into(),
        })?;
        if theta <= 0.0 {
            stall += 1;
            if stall >= tol::TRANSPORT_STALL_WINDOW {
                blands_rule = true;
            }
        } else {
            stall = 0;
        }
        for (pos, &arc) in path.iter().enumerate() {
            if pos % 2 == 0 {
                basis.flows[arc] -= theta;
            } else {
                basis.flows[arc] += theta;
            }
        }
        let (li, lj) = basis.arcs[leaving];
        basis.in_basis[li * m + lj] = false;
        basis.arcs[leaving] = (ei, ej);
        basis.flows[leaving] = theta;
        basis.in_basis[ei * m + ej] = true;
    }
    Err(TransportError::Numerical {
        reason: "transportation simplex exceeded its pivot budget".into(),
    })
}

/// Exact basic flows by leaf elimination against the original marginals:
/// every tree leaf determines the flow on its unique incident arc.
fn exact_flows(basis: &Basis, a: &[f64], b: &[f64]) -> Vec<f64> {
    let (n, m) = (basis.n, basis.m);
    let mut remaining_a = a.to_vec();
    let mut remaining_b = b.to_vec();
    let mut degree = vec![0usize; n + m];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (idx, &(i, j)) in basis.arcs.iter().enumerate() {
        degree[i] += 1;
        degree[n + j] += 1;
        incident[i].push(idx);
        incident[n + j].push(idx);
    }
    let mut removed = vec![false; basis.arcs.len()];
    let mut flows = vec![0.0f64; basis.arcs.len()];
    let mut leaves: Vec<usize> = (0..n + m).filter(|&v| degree[v] == 1).collect();
    while let Some(node) = leaves.pop() {
        let Some(&arc) = incident[node].iter().find(|&&idx| !removed[idx]) else {
            continue;
        };
        let (i, j) = basis.arcs[arc];
        let flow = if node < n {
            remaining_a[node]
        } else {
            remaining_b[node - n]
        };
        flows[arc] = flow;
        remaining_a[i] -= flow;
        remaining_b[j] -= flow;
        removed[arc] = true;
        for &v in &[i, n + j] {
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.push(v);
            }
        }
    }
    flows
}
