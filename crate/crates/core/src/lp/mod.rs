//! A small linear and mixed-integer programming toolkit.
//!
//! Problems are stored column-bounded and row-bounded:
//! `min c'x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi`,
//! with infinite bounds allowed on either side.

mod bnb;
mod mps;
mod simplex;

pub use bnb::{solve_milp, MilpOptions, MilpSolution, MilpStatus};
pub use mps::{format_number, parse_mps, write_mps};
pub use simplex::{solve_lp, SimplexOptions};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    /// `(column, coefficient)`, no zero entries, no duplicate columns.
    pub coeffs: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub cost: f64,
    pub integer: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LpProblem {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl LpProblem {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn add_col(&mut self, name: impl Into<String>, lo: f64, hi: f64, cost: f64, integer: bool) -> usize {
        self.columns.push(Column { name: name.into(), lo, hi, cost, integer });
        self.columns.len() - 1
    }

    /// Adds `lo <= sum coeffs <= hi`. Zero coefficients are dropped and
    /// repeated columns are summed.
    pub fn add_row(&mut self, name: impl Into<String>, lo: f64, hi: f64, coeffs: &[(usize, f64)]) -> usize {
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs.to_vec();
        sorted.sort_by_key(|&(j, _)| j);
        for (j, a) in sorted {
            match merged.last_mut() {
                Some((lj, la)) if *lj == j => *la += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.rows.push(Row { name: name.into(), lo, hi, coeffs: merged });
        self.rows.len() - 1
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.columns.iter().zip(x).map(|(c, v)| c.cost * v).sum()
    }

    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.rows[row].coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Largest bound or row violation of `x`. Row violations are measured
    /// after dividing the row by its largest coefficient magnitude.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (c, &v) in self.columns.iter().zip(x) {
            worst = worst.max(c.lo - v).max(v - c.hi);
        }
        for (i, row) in self.rows.iter().enumerate() {
            let act = self.row_activity(i, x);
            let norm = row.coeffs.iter().fold(1.0_f64, |m, &(_, a)| m.max(a.abs()));
            worst = worst.max((row.lo - act) / norm).max((act - row.hi) / norm);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    TimeLimit,
    /// The final solution violates the original constraints beyond tolerance.
    Numerical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_row_merges_and_drops_zeros() {
        let mut p = LpProblem::new("t");
        let a = p.add_col("a", 0.0, 1.0, 0.0, false);
        let b = p.add_col("b", 0.0, 1.0, 0.0, false);
        p.add_row("r", 0.0, 1.0, &[(b, 1.0), (a, 2.0), (b, -1.0), (a, 1.0)]);
        assert_eq!(p.rows[0].coeffs, vec![(a, 3.0)]);
    }
}
