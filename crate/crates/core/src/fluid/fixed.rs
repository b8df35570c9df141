//! The fluid model with every fuel flag fixed, rewritten without big-M terms.
//!
//! Once `z` is known, each dynamics row is either vacuous (flag on) or loses
//! its big-M term (flag off), the burn-out rows become bounds on `I`, and
//! the fuel balance lets `F` be eliminated: the flag-forcing rows turn into
//! two-sided bounds on cumulative intensity.
//!
//! Teams are interchangeable once assignments are relaxed, so the per-team
//! columns `A_t(x, i)` are merged into one `A_t(x) in [0, teams]` with
//! `sum_x A_t(x) <= teams`. Any merged solution splits evenly back into a
//! feasible per-team one with the same objective.

use super::{FluidModel, FuelGate};
use crate::lp::LpProblem;

#[derive(Debug, Clone)]
pub struct FixedFlagLp {
    pub problem: LpProblem,
    /// Objective contribution of the fixed initial intensities.
    pub offset: f64,
    /// Reduced column of `I_t(x)` for `t >= 1`, indexed `[t][x]`.
    pub intensity: Vec<Vec<usize>>,
    /// Reduced column of the merged assignment `A_t(x)`, indexed `[t][x]`.
    pub assignment: Vec<Vec<usize>>,
    flags: Vec<Vec<bool>>,
}

/// Build the reduced LP for `flags[t][x] = z_t(x)`, with assignments
/// relaxed and merged across teams.
///
/// Returns `None` when the flags contradict the initial state, for example
/// a flag raised at `t = 0` on a cell with fuel above the threshold.
pub fn fixed_flag_lp(model: &FluidModel, flags: &[Vec<bool>]) -> Option<FixedFlagLp> {
    let l = model.layout;
    let c = &model.calibration;
    let (n, big_t, teams) = (l.cells, l.horizon, l.teams);
    assert_eq!(flags.len(), big_t + 1, "one flag vector per period");
    let z = |t: usize, x: usize| if flags[t][x] { 1.0 } else { 0.0 };
    let full = &model.problem;
    let mut p = LpProblem::new(full.name.clone());
    let mut int_col = vec![vec![usize::MAX; n]; big_t + 1];
    for t in 1..=big_t {
        for x in 0..n {
            let col = &full.columns[l.intensity(t, x)];
            let hi = c.f0[x] * (1.0 - z(t - 1, x));
            int_col[t][x] = p.add_col(col.name.clone(), 0.0, hi, col.cost, false);
        }
    }
    let mut assign_col = vec![vec![usize::MAX; n]; big_t + 1];
    if teams > 0 {
        for t in 0..=big_t {
            for x in 0..n {
                let cost = full.columns[l.assign(t, x, 0)].cost * teams as f64;
                assign_col[t][x] = p.add_col(format!("A{t:02}{x:03}"), 0.0, teams as f64, cost, false);
            }
        }
    }
    let offset: f64 = (0..n).map(|x| full.columns[l.intensity(0, x)].cost * c.i0[x]).sum();

    for t in 1..=big_t {
        for x in 0..n {
            let gate = match model.options.fuel_gate {
                FuelGate::Current => t,
                FuelGate::Lagged => t - 1,
            };
            if flags[gate][x] {
                continue;
            }
            let mut row = vec![(int_col[t][x], 1.0)];
            let mut lo = 0.0;
            if t == 1 {
                lo += c.i0[x] + c.zeta[x].iter().map(|&(y, zeta)| zeta * c.i0[y]).sum::<f64>();
            } else {
                row.push((int_col[t - 1][x], -1.0));
                for &(y, zeta) in &c.zeta[x] {
                    row.push((int_col[t - 1][y], -zeta));
                }
            }
            if teams > 0 {
                row.push((assign_col[t - 1][x], c.ibar[t][x] * c.zeta_tilde[x]));
            }
            p.add_row(format!("B{t:02}{x:03}"), lo, f64::INFINITY, &row);
        }
    }
    let d = c.delta;
    for t in 0..=big_t {
        for x in 0..n {
            let lo = (c.f0[x] - d) * z(t, x);
            let hi = c.f0[x] - d * (1.0 - z(t, x));
            let constant = if t == 0 { 0.0 } else { c.i0[x] };
            let row: Vec<(usize, f64)> = (1..t).map(|tp| (int_col[tp][x], 1.0)).collect();
            if row.is_empty() {
                let tol = 1e-9 * c.f0[x].max(1.0);
                if constant < lo - tol || constant > hi + tol {
                    return None;
                }
                continue;
            }
            p.add_row(format!("C{t:02}{x:03}"), lo - constant, hi - constant, &row);
        }
    }
    if teams > 0 {
        for (t, cols) in assign_col.iter().enumerate() {
            let row: Vec<(usize, f64)> = cols.iter().map(|&j| (j, 1.0)).collect();
            p.add_row(format!("G{t:02}"), f64::NEG_INFINITY, teams as f64, &row);
        }
    }
    Some(FixedFlagLp { problem: p, offset, intensity: int_col, assignment: assign_col, flags: flags.to_vec() })
}

impl FixedFlagLp {
    /// Lift a reduced solution back to a full-model column vector, splitting
    /// each merged assignment evenly across teams.
    pub fn expand(&self, model: &FluidModel, x: &[f64]) -> Vec<f64> {
        let l = model.layout;
        let c = &model.calibration;
        let mut out = vec![0.0; model.problem.n_cols()];
        for cell in 0..l.cells {
            out[l.intensity(0, cell)] = c.i0[cell];
            for t in 1..=l.horizon {
                out[l.intensity(t, cell)] = x[self.intensity[t][cell]];
            }
            if l.teams > 0 {
                for t in 0..=l.horizon {
                    let share = x[self.assignment[t][cell]] / l.teams as f64;
                    for i in 0..l.teams {
                        out[l.assign(t, cell, i)] = share;
                    }
                }
            }
            let mut burnt = 0.0;
            for t in 0..=l.horizon {
                out[l.fuel(t, cell)] = c.f0[cell] - burnt;
                out[l.z(t, cell)] = if self.flags[t][cell] { 1.0 } else { 0.0 };
                burnt += out[l.intensity(t, cell)];
            }
        }
        out
    }
}
