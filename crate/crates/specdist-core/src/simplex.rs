//! Dense two-phase tableau simplex for small linear programs in standard
//! form: minimize `c.z` subject to `A z = b`, `z >= 0`. Bland's rule keeps
//! the method cycle-free; the programs solved here stay below a few
//! hundred rows and columns, where a dense tableau is the right trade.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpError {
    Infeasible,
    Unbounded,
    Stalled,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub z: Vec<f64>,
    pub value: f64,
}

const PIVOT_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 20_000;

struct Tableau {
    /// `rows x (cols + 1)`; the trailing column is the right-hand side.
    body: Vec<Vec<f64>>,
    /// Objective row with the same layout (reduced costs, then the
    /// negated objective value).
    obj: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.body[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.body[row][col];
        for v in &mut self.body[row] {
            *v /= piv;
        }
        let pivot_row = self.body[row].clone();
        for (i, r) in self.body.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    for (v, p) in r.iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
        }
        self.basis[row] = col;
    }

    /// Bland-rule simplex over the column range `0..limit`. Returns the
    /// number of pivots or `Unbounded`/`Stalled`.
    fn run(&mut self, limit: usize, rc_tol: f64) -> Result<usize, LpError> {
        let mut pivots = 0usize;
        loop {
            let entering = (0..limit)
                .find(|&j| self.obj[j] < -rc_tol && !self.basis.contains(&j));
            let Some(col) = entering else {
                return Ok(pivots);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.body.len() {
                let a = self.body[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i) / a;
                    let better = match leaving {
                        None => true,
                        Some((best_i, best)) => {
                            ratio < best - 1e-12
                                || (ratio <= best + 1e-12
                                    && self.basis[i] < self.basis[best_i])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(LpError::Unbounded);
            };
            self.pivot(row, col);
            pivots += 1;
            if pivots > MAX_PIVOTS {
                return Err(LpError::Stalled);
            }
        }
    }
}

/// Solve `minimize c.z  subject to  A z = b, z >= 0`.
pub(crate) fn solve_standard(
    a: &[Vec<f64>],
    b: &[f64],
    c: &[f64],
) -> Result<LpSolution, LpError> {
    let m = a.len();
    let n = c.len();
    let cols = n + m; // originals then one artificial per row
    let mut body = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        debug_assert_eq!(row.len(), n);
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut r = vec![0.0; cols + 1];
        for (j, &v) in row.iter().enumerate() {
            r[j] = flip * v;
        }
        r[n + i] = 1.0;
        r[cols] = flip * b[i];
        body.push(r);
    }
    let basis: Vec<usize> = (0..m).map(|i| n + i).collect();

    // Phase 1: minimize the sum of artificials. The objective row starts
    // as that cost vector with the basic (artificial) columns zeroed out,
    // which amounts to subtracting every constraint row.
    let mut obj = vec![0.0; cols + 1];
    for j in n..cols {
        obj[j] = 1.0;
    }
    let mut tab = Tableau {
        body,
        obj,
        basis,
        cols,
    };
    for i in 0..m {
        let row = tab.body[i].clone();
        for (v, p) in tab.obj.iter_mut().zip(&row) {
            *v -= p;
        }
    }
    let b_scale: f64 = b.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    tab.run(cols, 1e-10 * b_scale)?;
    let infeasibility = -tab.obj[cols];
    if infeasibility > 1e-8 * b_scale {
        return Err(LpError::Infeasible);
    }
    // drive leftover artificials out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(col) = (0..n).find(|&j| tab.body[i][j].abs() > 1e-9) {
                tab.pivot(i, col);
            }
        }
    }

    // Phase 2: original objective, artificial columns barred.
    let c_scale: f64 = c.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut obj = vec![0.0; cols + 1];
    obj[..n].copy_from_slice(c);
    tab.obj = obj;
    for i in 0..m {
        let k = tab.basis[i];
        let cost = if k < n { c[k] } else { 0.0 };
        if cost != 0.0 {
            let row = tab.body[i].clone();
            for (v, p) in tab.obj.iter_mut().zip(&row) {
                *v -= cost * p;
            }
        }
    }
    tab.run(n, 1e-10 * c_scale)?;

    let mut z = vec![0.0; n];
    for (i, &k) in tab.basis.iter().enumerate() {
        if k < n {
            z[k] = tab.rhs(i).max(0.0);
        }
    }
    let value = c.iter().zip(&z).map(|(ci, zi)| ci * zi).sum();
    Ok(LpSolution { z, value })
}
