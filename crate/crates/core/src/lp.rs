//! `min Σ t  s.t.  M t = b,  t ≥ 0` by two-phase primal simplex.
//!
//! The tableau uses Bland's rule for both entering and leaving variables,
//! so it cannot cycle. After phase II the basic solution is recomputed from
//! the original data with an LU solve plus one refinement step, which keeps
//! the equality residual at roundoff level rather than at the level of the
//! accumulated tableau error.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::blocks::SignMatrix;
use crate::error::{DaqcError, Result};

/// Feasibility tolerance, relative to `max(1, ‖b‖_∞)`.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOL: f64 = 1e-10;
pub const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
}

impl LinearProgram {
    pub fn new(matrix: DMatrix<f64>, rhs: DVector<f64>) -> Result<Self> {
        if matrix.nrows() != rhs.len() {
            return Err(DaqcError::DimensionMismatch {
                expected: matrix.nrows(),
                found: rhs.len(),
            });
        }
        Ok(Self { matrix, rhs })
    }

    pub fn from_rows(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(DaqcError::DimensionMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        let matrix = DMatrix::from_fn(rows.len(), n_cols, |r, c| rows[r][c]);
        Self::new(matrix, DVector::from_column_slice(rhs))
    }

    pub fn from_sign_matrix(signs: &SignMatrix, rhs: &[f64]) -> Result<Self> {
        let matrix = DMatrix::from_fn(signs.n_rows(), signs.n_cols(), |r, c| f64::from(signs.entry(r, c)));
        Self::new(matrix, DVector::from_column_slice(rhs))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// `‖M t − b‖_∞`.
    pub fn residual(&self, times: &[f64]) -> f64 {
        let t = DVector::from_column_slice(times);
        (&self.matrix * t - &self.rhs).amax()
    }

    fn rhs_scale(&self) -> f64 {
        self.rhs.amax().max(1.0)
    }

    fn validate(&self) -> Result<()> {
        if self.n_rows() == 0 {
            return Err(DaqcError::Validation("linear program has no rows".into()));
        }
        if self.matrix.iter().chain(self.rhs.iter()).any(|v| !v.is_finite()) {
            return Err(DaqcError::NonFinite("linear program entries".into()));
        }
        Ok(())
    }
}

/// Plain-text dump: one matrix row per line, then the right-hand side.
impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} x {}", self.n_rows(), self.n_cols())?;
        for r in 0..self.n_rows() {
            let row: Vec<String> = self.matrix.row(r).iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        let rhs: Vec<String> = self.rhs.iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(f, "rhs {}", rhs.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub times: Vec<f64>,
    pub objective_value: f64,
    pub status: LpStatus,
}

impl LpSolution {
    fn infeasible(n_cols: usize) -> Self {
        Self {
            times: vec![0.0; n_cols],
            objective_value: f64::INFINITY,
            status: LpStatus::Infeasible,
        }
    }

    fn optimal(times: Vec<f64>) -> Self {
        let objective_value = times.iter().sum();
        Self {
            times,
            objective_value,
            status: LpStatus::Optimal,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    width: usize,
    /// Row-major constraint rows, `rows × width`.
    body: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    /// Reduced costs.
    cost: Vec<f64>,
    /// Minus the current objective value.
    cost_rhs: f64,
    pivots: usize,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.rhs.len()
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.body[r * self.width + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(DaqcError::SolverStall { pivots: MAX_PIVOTS });
        }
        let w = self.width;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.body[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        self.rhs[pr] *= inv;
        self.body[pr * w + pc] = 1.0;

        let pivot_row: Vec<f64> = self.body[pr * w..(pr + 1) * w].to_vec();
        let pivot_rhs = self.rhs[pr];
        for r in 0..self.rows() {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc);
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.body[r * w..(r + 1) * w];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            row[pc] = 0.0;
            self.rhs[r] -= factor * pivot_rhs;
        }
        let factor = self.cost[pc];
        if factor != 0.0 {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            self.cost[pc] = 0.0;
            self.cost_rhs -= factor * pivot_rhs;
        }
        self.basis[pr] = pc;
        Ok(())
    }

    /// Runs Bland-rule iterations over columns `0..allowed` until optimal.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        loop {
            let Some(enter) = (0..allowed).find(|&c| self.cost[c] < -PIVOT_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows() {
                let a = self.at(r, enter);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs[r].max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * best_ratio.abs().max(1.0);
                        if ratio < best_ratio && !tie || tie && self.basis[r] < self.basis[best] {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Err(DaqcError::InternalConsistency(
                    "simplex found an unbounded direction for a nonnegative objective".into(),
                ));
            };
            self.pivot(row, enter)?;
        }
    }
}

/// Solves the program to a vertex optimum.
///
/// `tol` scales the phase-I infeasibility threshold and the final residual
/// check, both relative to `max(1, ‖b‖_∞)`.
pub fn solve(lp: &LinearProgram, tol: f64) -> Result<LpSolution> {
    lp.validate()?;
    if !(tol > 0.0) {
        return Err(DaqcError::Validation(format!("tolerance must be positive, got {tol}")));
    }
    let (m, n) = (lp.n_rows(), lp.n_cols());
    let width = n + m;
    let scale = lp.rhs_scale();

    // Phase I: one artificial per row, rows flipped so the rhs is nonnegative.
    let mut body = vec![0.0; m * width];
    let mut rhs = vec![0.0; m];
    for r in 0..m {
        let flip = if lp.rhs[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..n {
            body[r * width + c] = flip * lp.matrix[(r, c)];
        }
        body[r * width + n + r] = 1.0;
        rhs[r] = flip * lp.rhs[r];
    }
    let mut cost = vec![0.0; width];
    for r in 0..m {
        for c in 0..n {
            cost[c] -= body[r * width + c];
        }
    }
    let cost_rhs = -rhs.iter().sum::<f64>();
    let mut tab = Tableau {
        width,
        body,
        rhs,
        basis: (n..n + m).collect(),
        cost,
        cost_rhs,
        pivots: 0,
    };
    tab.optimize(n)?;
    let phase_one = -tab.cost_rhs;
    if phase_one > tol * scale {
        return Ok(LpSolution::infeasible(n));
    }

    // Drive remaining artificials out; rows where that fails are redundant.
    let mut redundant = Vec::new();
    for r in 0..m {
        if tab.basis[r] < n {
            continue;
        }
        let best = (0..n)
            .map(|c| (c, tab.at(r, c).abs()))
            .filter(|(_, a)| *a > PIVOT_TOL)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((c, _)) => tab.pivot(r, c)?,
            None => redundant.push(r),
        }
    }
    let kept: Vec<usize> = (0..m).filter(|r| !redundant.contains(r)).collect();
    let mut phase_two = Tableau {
        width,
        body: kept.iter().flat_map(|&r| tab.body[r * width..(r + 1) * width].to_vec()).collect(),
        rhs: kept.iter().map(|&r| tab.rhs[r]).collect(),
        basis: kept.iter().map(|&r| tab.basis[r]).collect(),
        cost: vec![0.0; width],
        cost_rhs: 0.0,
        pivots: tab.pivots,
    };

    // Phase II: unit cost on every original column.
    for c in 0..n {
        phase_two.cost[c] = 1.0;
    }
    for r in 0..phase_two.rows() {
        for c in 0..width {
            phase_two.cost[c] -= phase_two.at(r, c);
        }
        phase_two.cost_rhs -= phase_two.rhs[r];
    }
    for c in n..width {
        phase_two.cost[c] = 0.0;
    }
    phase_two.optimize(n)?;

    let mut times = vec![0.0; n];
    for (r, &b) in phase_two.basis.iter().enumerate() {
        times[b] = phase_two.rhs[r];
    }
    if let Some(polished) = polish(lp, &kept, &phase_two.basis) {
        if polished.iter().all(|v| *v >= -tol * scale) {
            times = vec![0.0; n];
            for (&b, v) in phase_two.basis.iter().zip(polished) {
                times[b] = v;
            }
        }
    }
    for t in &mut times {
        if *t < 0.0 {
            *t = 0.0;
        }
    }
    let residual = lp.residual(&times);
    if residual > tol * scale {
        return Err(DaqcError::InternalConsistency(format!(
            "simplex optimum violates M t = b by {residual:e}\n{lp}"
        )));
    }
    Ok(LpSolution::optimal(times))
}

/// Re-solves the final basis against the original data.
fn polish(lp: &LinearProgram, rows: &[usize], basis: &[usize]) -> Option<Vec<f64>> {
    let k = rows.len();
    let b_mat = DMatrix::from_fn(k, k, |r, c| lp.matrix[(rows[r], basis[c])]);
    let b_vec = DVector::from_fn(k, |r, _| lp.rhs[rows[r]]);
    let lu = b_mat.clone().lu();
    let mut x = lu.solve(&b_vec)?;
    let correction = lu.solve(&(&b_vec - &b_mat * &x))?;
    x += correction;
    x.iter().all(|v| v.is_finite()).then(|| x.iter().copied().collect())
}

const ORACLE_MAX_COLS: usize = 12;
const ORACLE_MAX_ROWS: usize = 6;
const ORACLE_RANK_TOL: f64 = 1e-9;

/// Exhaustive vertex enumeration. Test oracle for [`solve`].
///
/// Every basic feasible solution is supported on `rank(M)` linearly
/// independent columns; this tries every such column subset.
pub fn brute_force_optimum(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let (m, n) = (lp.n_rows(), lp.n_cols());
    if n > ORACLE_MAX_COLS || m > ORACLE_MAX_ROWS {
        return Err(DaqcError::OracleRefused(format!(
            "{m} x {n} exceeds the {ORACLE_MAX_ROWS} x {ORACLE_MAX_COLS} limit"
        )));
    }
    let scale = lp.rhs_scale();
    let rank = numerical_rank(&lp.matrix);
    if rank == 0 {
        return Ok(if lp.rhs.amax() <= FEASIBILITY_TOL * scale {
            LpSolution::optimal(vec![0.0; n])
        } else {
            LpSolution::infeasible(n)
        });
    }

    let mut best: Option<Vec<f64>> = None;
    let mut subset: Vec<usize> = (0..rank).collect();
    loop {
        let sub = DMatrix::from_fn(m, rank, |r, c| lp.matrix[(r, subset[c])]);
        if numerical_rank(&sub) == rank {
            let svd = sub.clone().svd(true, true);
            if let Ok(x) = svd.solve(&lp.rhs, ORACLE_RANK_TOL) {
                let residual = (&sub * &x - &lp.rhs).amax();
                if residual <= FEASIBILITY_TOL * scale && x.iter().all(|v| *v >= -FEASIBILITY_TOL * scale) {
                    let mut times = vec![0.0; n];
                    for (c, v) in subset.iter().zip(x.iter()) {
                        times[*c] = v.max(0.0);
                    }
                    let objective: f64 = times.iter().sum();
                    if best.as_ref().is_none_or(|b| objective < b.iter().sum::<f64>()) {
                        best = Some(times);
                    }
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    Ok(best.map_or_else(|| LpSolution::infeasible(n), LpSolution::optimal))
}

fn numerical_rank(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let largest = sv.iter().fold(0.0_f64, |m, v| m.max(*v));
    sv.iter().filter(|v| **v > ORACLE_RANK_TOL * largest.max(1.0)).count()
}

/// Advances a sorted k-subset of `0..n` in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for pos in (0..k).rev() {
        if subset[pos] < n - k + pos {
            subset[pos] += 1;
            for later in pos + 1..k {
                subset[later] = subset[later - 1] + 1;
            }
            return true;
        }
    }
    false
}
