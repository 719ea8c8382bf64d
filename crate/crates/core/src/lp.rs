//! Dense two-phase simplex for small linear programs.
//!
//! Problems have the form
//!
//! ```text
//! minimize    c·x
//! subject to  A_ub·x <= b_ub
//!             A_eq·x  = b_eq
//!             x >= 0
//! ```
//!
//! Pivoting follows Bland's rule (lowest eligible index enters, lowest basic
//! index leaves among ratio ties), so results are deterministic and the method
//! cannot cycle. A hard pivot cap still turns numerical pathologies into an
//! error instead of a hang.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Pivot elements smaller than this are treated as zero.
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub a_ub: Vec<Vec<f64>>,
    pub b_ub: Vec<f64>,
    pub a_eq: Vec<Vec<f64>>,
    pub b_eq: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row·x <= rhs`.
    pub fn leq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    /// Adds `row·x >= rhs`, stored as `-row·x <= -rhs`.
    pub fn geq(self, row: Vec<f64>, rhs: f64) -> Self {
        let neg = row.into_iter().map(|v| -v).collect();
        self.leq(neg, -rhs)
    }

    /// Adds `row·x = rhs`.
    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if n == 0 {
            return Err(Error::input("linear program has no variables"));
        }
        if self.a_ub.len() != self.b_ub.len() {
            return Err(Error::input(format!(
                "{} inequality rows but {} right-hand sides",
                self.a_ub.len(),
                self.b_ub.len()
            )));
        }
        if self.a_eq.len() != self.b_eq.len() {
            return Err(Error::input(format!(
                "{} equality rows but {} right-hand sides",
                self.a_eq.len(),
                self.b_eq.len()
            )));
        }
        for (kind, rows) in [("inequality", &self.a_ub), ("equality", &self.a_eq)] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::input(format!(
                        "{kind} row {i} has {} columns, expected {n}",
                        row.len()
                    )));
                }
            }
        }
        let all_finite = self
            .objective
            .iter()
            .chain(self.a_ub.iter().flatten())
            .chain(&self.b_ub)
            .chain(self.a_eq.iter().flatten())
            .chain(&self.b_eq)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::input("linear program contains non-finite entries"));
        }
        Ok(())
    }

    /// Largest scaled constraint violation of `x`, including negativity.
    ///
    /// Each row's violation is divided by `max(1, |b_i|, max_j |a_ij|)` so the
    /// measure is comparable across badly scaled rows.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>();
        let scale = |row: &[f64], b: f64| {
            row.iter()
                .fold(b.abs().max(1.0), |acc, a| acc.max(a.abs()))
        };
        let ub = self
            .a_ub
            .iter()
            .zip(&self.b_ub)
            .map(|(row, &b)| ((dot(row) - b) / scale(row, b)).max(0.0));
        let eq = self
            .a_eq
            .iter()
            .zip(&self.b_eq)
            .map(|(row, &b)| ((dot(row) - b) / scale(row, b)).abs());
        let neg = x.iter().map(|&v| (-v).max(0.0));
        ub.chain(eq).chain(neg).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal point; meaningful only when `status` is `Optimal`.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Scaled maximum constraint violation of `x` (see [`LinearProgram::max_violation`]).
    pub residual: f64,
    /// Simplex pivots performed over both phases.
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau {
    /// `rows[i]` holds the constraint coefficients followed by the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
    max_pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.rows[r][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(Error::Solver(format!(
                "pivot limit {} exceeded",
                self.max_pivots
            )));
        }
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Minimizes `cost·x` over the current tableau, allowing only columns
    /// `j < allowed` to enter.
    fn optimize(&mut self, cost: &[f64], allowed: usize, tol: f64) -> Result<Outcome> {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .rows
                        .iter()
                        .zip(&self.basis)
                        .map(|(row, &b)| cost[b] * row[j])
                        .sum::<f64>();
                reduced < -tol
            });
            let Some(c) = entering else {
                return Ok(Outcome::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][c];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        let tie = (ratio - lratio).abs() <= PIVOT_EPS * lratio.abs().max(1.0);
                        if ratio < lratio && !tie
                            || tie && self.basis[r] < self.basis[lr]
                        {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
            match leave {
                None => return Ok(Outcome::Unbounded),
                Some((r, _)) => self.pivot(r, c)?,
            }
        }
    }
}

/// Solves `lp` with feasibility/optimality tolerance `tol`.
pub fn solve(lp: &LinearProgram, tol: f64) -> Result<LpSolution> {
    lp.validate()?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input(format!("tolerance must be positive, got {tol}")));
    }

    let n = lp.num_vars();
    let m_ub = lp.a_ub.len();
    let m = m_ub + lp.a_eq.len();

    // Column layout: [original n | slacks m_ub | artificials m].
    let art0 = n + m_ub;
    let ncols = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut needs_phase1 = false;

    let source = lp
        .a_ub
        .iter()
        .zip(&lp.b_ub)
        .chain(lp.a_eq.iter().zip(&lp.b_eq));
    for (i, (coeffs, &b)) in source.enumerate() {
        let mut row = vec![0.0; ncols + 1];
        row[..n].copy_from_slice(coeffs);
        if i < m_ub {
            row[n + i] = 1.0;
        }
        row[ncols] = b;
        let scale = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let factor = if scale > 0.0 { sign / scale } else { sign };
        for v in row.iter_mut() {
            *v *= factor;
        }
        if i < m_ub && sign > 0.0 {
            basis.push(n + i);
        } else {
            row[art0 + i] = 1.0;
            basis.push(art0 + i);
            needs_phase1 = true;
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        basis,
        ncols,
        pivots: 0,
        max_pivots: 50 * (ncols + m) + 1000,
    };

    if needs_phase1 {
        let mut phase1_cost = vec![0.0; ncols];
        for c in phase1_cost.iter_mut().skip(art0) {
            *c = 1.0;
        }
        t.optimize(&phase1_cost, ncols, tol)?;
        let infeasibility: f64 = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art0)
            .map(|(r, _)| t.rhs(r).abs())
            .sum();
        if infeasibility > tol {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: vec![0.0; n],
                objective: f64::NAN,
                residual: f64::NAN,
                pivots: t.pivots,
            });
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art0 {
                match (0..art0).find(|&j| t.rows[r][j].abs() > 1e-9) {
                    Some(c) => t.pivot(r, c)?,
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![0.0; ncols];
    cost[..n].copy_from_slice(&lp.objective);
    if let Outcome::Unbounded = t.optimize(&cost, art0, tol)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: vec![0.0; n],
            objective: f64::NEG_INFINITY,
            residual: f64::NAN,
            pivots: t.pivots,
        });
    }

    let mut x = vec![0.0; n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs(r);
        }
    }
    for v in x.iter_mut() {
        if *v < 0.0 && *v > -tol {
            *v = 0.0;
        }
    }
    let residual = lp.max_violation(&x);
    if residual > tol {
        return Err(Error::Solver(format!(
            "optimal basis violates constraints by {residual:e} (tolerance {tol:e})"
        )));
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        residual,
        pivots: t.pivots,
    })
}
