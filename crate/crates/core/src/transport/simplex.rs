//! The transportation simplex: northwest-corner start, MODI potentials on
//! the spanning-tree basis, cycle pivoting.

use std::collections::VecDeque;

use super::{squared_distance, DiscreteMeasure};
use crate::error::{Error, Result};

/// Largest support size on either side.
pub const MAX_SUPPORT: usize = 256;
pub const MARGINAL_TOL: f64 = 1e-10;
pub const DUAL_FEASIBILITY_TOL: f64 = 1e-9;
/// Relative primal–dual gap, scaled by `1 + cost`.
pub const GAP_TOL: f64 = 1e-8;

/// Degenerate pivots in a row before pricing switches to Bland's rule.
const STALL_LIMIT: usize = 32;

/// A coupling, stored row-major with one row per source point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    rows: usize,
    cols: usize,
    matrix: Vec<f64>,
    cost: f64,
}

impl TransportPlan {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.cols + j]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.matrix.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for row in self.matrix.chunks(self.cols) {
            for (sj, x) in s.iter_mut().zip(row) {
                *sj += x;
            }
        }
        s
    }

    /// Largest deviation of either marginal from the prescribed weights.
    pub fn marginal_error(&self, a: &[f64], b: &[f64]) -> f64 {
        let r = self.row_sums().iter().zip(a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let c = self.col_sums().iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        r.max(c)
    }

    pub fn min_entry(&self) -> f64 {
        self.matrix.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `psi` per source point, `phi` per target point, with
/// `psi[i] + phi[j] <= c(i, j)` at optimality.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPotentials {
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
}

impl DualPotentials {
    pub fn value(&self, a: &[f64], b: &[f64]) -> f64 {
        dot(&self.psi, a) + dot(&self.phi, b)
    }

    /// max over cells of `psi[i] + phi[j] - c(i, j)`.
    pub fn max_violation(&self, cost: &[f64]) -> f64 {
        let n = self.phi.len();
        let mut worst = f64::NEG_INFINITY;
        for (i, &u) in self.psi.iter().enumerate() {
            for (j, &v) in self.phi.iter().enumerate() {
                worst = worst.max(u + v - cost[i * n + j]);
            }
        }
        worst
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    /// Optimal cost; for `w2` this is W₂².
    pub cost: f64,
    pub plan: TransportPlan,
    pub potentials: DualPotentials,
    pub pivots: usize,
    pub marginal_error: f64,
    pub dual_violation: f64,
    pub gap: f64,
}

impl TransportSolution {
    pub fn distance(&self) -> f64 {
        self.cost.max(0.0).sqrt()
    }

    pub fn certified(&self) -> bool {
        self.marginal_error <= MARGINAL_TOL
            && self.dual_violation <= DUAL_FEASIBILITY_TOL
            && self.gap <= GAP_TOL * (1.0 + self.cost.abs())
            && self.plan.min_entry() >= 0.0
    }
}

/// Quadratic optimal transport between two discrete measures.
pub fn w2(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportSolution> {
    if mu.dimension() != nu.dimension() {
        return Err(Error::Mismatch(format!(
            "dimension {} vs {}",
            mu.dimension(),
            nu.dimension()
        )));
    }
    let mut cost = Vec::with_capacity(mu.len() * nu.len());
    for x in mu.support() {
        for y in nu.support() {
            cost.push(squared_distance(x, y));
        }
    }
    transport(mu.weights(), nu.weights(), &cost)
}

struct Basis {
    m: usize,
    n: usize,
    cells: Vec<(usize, usize)>,
    flow: Vec<f64>,
    // cell index per matrix entry, usize::MAX if nonbasic
    slot: Vec<usize>,
}

impl Basis {
    fn northwest(a: &[f64], b: &[f64]) -> Self {
        let (m, n) = (a.len(), b.len());
        let mut basis = Basis {
            m,
            n,
            cells: Vec::with_capacity(m + n - 1),
            flow: Vec::with_capacity(m + n - 1),
            slot: vec![usize::MAX; m * n],
        };
        let (mut i, mut j) = (0, 0);
        let (mut ra, mut rb) = (a[0], b[0]);
        loop {
            let x = ra.min(rb);
            basis.push(i, j, x);
            ra -= x;
            rb -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            let next_row = if i == m - 1 {
                false
            } else if j == n - 1 {
                true
            } else {
                ra <= rb
            };
            if next_row {
                i += 1;
                ra = a[i];
            } else {
                j += 1;
                rb = b[j];
            }
        }
        basis
    }

    fn push(&mut self, i: usize, j: usize, x: f64) {
        self.slot[i * self.n + j] = self.cells.len();
        self.cells.push((i, j));
        self.flow.push(x);
    }

    // Nodes 0..m are rows, m..m+n columns; each adjacency entry is a cell index.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for (k, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push(k);
            adj[self.m + j].push(k);
        }
        adj
    }

    fn other_end(&self, k: usize, node: usize) -> usize {
        let (i, j) = self.cells[k];
        if node == i {
            self.m + j
        } else {
            i
        }
    }

    fn potentials(&self, adj: &[Vec<usize>], cost: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut val = vec![f64::NAN; self.m + self.n];
        val[0] = 0.0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for &k in &adj[node] {
                let next = self.other_end(k, node);
                if val[next].is_nan() {
                    let (i, j) = self.cells[k];
                    val[next] = cost[i * self.n + j] - val[node];
                    queue.push_back(next);
                }
            }
        }
        let v = val.split_off(self.m);
        (val, v)
    }

    // Cells on the tree path from row `i` to column `j`, starting at `j`.
    fn path(&self, adj: &[Vec<usize>], i: usize, j: usize) -> Vec<usize> {
        let mut via = vec![usize::MAX; self.m + self.n];
        let mut seen = vec![false; self.m + self.n];
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        let target = self.m + j;
        while let Some(node) = queue.pop_front() {
            if node == target {
                break;
            }
            for &k in &adj[node] {
                let next = self.other_end(k, node);
                if !seen[next] {
                    seen[next] = true;
                    via[next] = k;
                    queue.push_back(next);
                }
            }
        }
        let mut out = Vec::new();
        let mut node = target;
        while node != i {
            let k = via[node];
            out.push(k);
            node = self.other_end(k, node);
        }
        out
    }
}

/// Solves min Σ πᵢⱼ cᵢⱼ over couplings of `a` and `b`; `cost` is row-major.
pub fn transport(a: &[f64], b: &[f64], cost: &[f64]) -> Result<TransportSolution> {
    let (m, n) = (a.len(), b.len());
    if m == 0 || n == 0 {
        return Err(Error::domain("empty support"));
    }
    for (what, len) in [("source support", m), ("target support", n)] {
        if len > MAX_SUPPORT {
            return Err(Error::Size {
                what,
                requested: len as u128,
                limit: MAX_SUPPORT as u128,
            });
        }
    }
    if cost.len() != m * n {
        return Err(Error::Mismatch(format!("cost has {} entries, expected {}", cost.len(), m * n)));
    }
    if cost.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("costs must be finite"));
    }
    if a.iter().chain(b).any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::domain("weights must be finite and nonnegative"));
    }
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if (sa - sb).abs() > MARGINAL_TOL {
        return Err(Error::Mismatch(format!("total masses differ: {sa} vs {sb}")));
    }

    let scale = 1.0 + cost.iter().fold(0.0f64, |s, c| s.max(c.abs()));
    let entering_tol = 1e-13 * scale;
    let max_pivots = 50 * m * n + 1000;

    let mut basis = Basis::northwest(a, b);
    let mut pivots = 0;
    let mut stall = 0;
    let (psi, phi) = loop {
        let adj = basis.adjacency();
        let (u, v) = basis.potentials(&adj, cost);
        let bland = stall >= STALL_LIMIT;
        let mut enter: Option<(usize, usize)> = None;
        let mut best = -entering_tol;
        'scan: for i in 0..m {
            let row = &cost[i * n..(i + 1) * n];
            for j in 0..n {
                let r = row[j] - u[i] - v[j];
                if r < best && basis.slot[i * n + j] == usize::MAX {
                    enter = Some((i, j));
                    if bland {
                        break 'scan;
                    }
                    best = r;
                }
            }
        }
        let Some((ei, ej)) = enter else {
            break (u, v);
        };
        if pivots >= max_pivots {
            return Err(Error::precondition(format!(
                "transportation simplex did not converge in {max_pivots} pivots"
            )));
        }
        pivots += 1;

        let path = basis.path(&adj, ei, ej);
        // Signs alternate around the cycle, starting with a decrease next to column `ej`.
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for &k in path.iter().step_by(2) {
            let (i, j) = basis.cells[k];
            let key = i * n + j;
            let f = basis.flow[k];
            let lkey = if leave == usize::MAX {
                usize::MAX
            } else {
                let (li, lj) = basis.cells[leave];
                li * n + lj
            };
            if f < theta || (f == theta && key < lkey) {
                theta = f;
                leave = k;
            }
        }
        for (step, &k) in path.iter().enumerate() {
            if step % 2 == 0 {
                basis.flow[k] -= theta;
            } else {
                basis.flow[k] += theta;
            }
        }
        stall = if theta > 0.0 { 0 } else { stall + 1 };
        let (li, lj) = basis.cells[leave];
        basis.slot[li * n + lj] = usize::MAX;
        basis.cells[leave] = (ei, ej);
        basis.flow[leave] = theta;
        basis.slot[ei * n + ej] = leave;
    };

    let mut matrix = vec![0.0; m * n];
    for (&(i, j), &f) in basis.cells.iter().zip(&basis.flow) {
        matrix[i * n + j] = if f < 0.0 && f >= -1e-14 { 0.0 } else { f };
    }
    let primal = dot(&matrix, cost);
    let plan = TransportPlan {
        rows: m,
        cols: n,
        matrix,
        cost: primal,
    };
    let potentials = DualPotentials { psi, phi };
    let gap = (potentials.value(a, b) - primal).abs();
    Ok(TransportSolution {
        cost: primal,
        marginal_error: plan.marginal_error(a, b),
        dual_violation: potentials.max_violation(cost).max(0.0),
        gap,
        plan,
        potentials,
        pivots,
    })
}
