//! Revised bounded primal simplex.
//!
//! Every row gets a logical variable `s_i` with `a_i x + s_i = 0` and
//! `-row_hi <= s_i <= -row_lo`, so the starting basis is the identity. The
//! basis inverse is kept in product form (an eta file) and rebuilt from
//! scratch every `refactor_every` pivots. Phase 1 minimises the sum of
//! infeasibilities of the basic variables; phase 2 the true objective.
//! The ratio test is Harris' two-pass test with bound flipping. Pricing is
//! devex; after a run of degenerate pivots the entering variable is chosen
//! by Bland's rule instead, until progress resumes. The ratio test stays
//! Harris' in both modes, since Bland's smallest-index leaving rule
//! accepts tiny pivots.

use std::time::Duration;

use super::{LpProblem, LpSolution, LpStatus};
use crate::time::Deadline;

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Defaults to `20 * (rows + columns) + 1000`.
    pub max_iterations: Option<usize>,
    pub refactor_every: usize,
    pub bland_after: usize,
    pub scale: bool,
    pub time_limit: Option<Duration>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-6,
            optimality_tol: 1e-7,
            max_iterations: None,
            refactor_every: 100,
            bland_after: 500,
            scale: true,
            time_limit: None,
        }
    }
}

const NONBASIC: usize = usize::MAX;
const PIVOT_TOL: f64 = 1e-9;
const LU_THRESHOLD: f64 = 0.1;
/// Devex weights are reset to 1 once any of them grows past this.
const DEVEX_RESET: f64 = 1e6;

struct Eta {
    row: usize,
    pivot: f64,
    entries: Vec<(usize, f64)>,
}

struct Simplex<'o> {
    m: usize,
    n: usize,
    col_start: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    head: Vec<usize>,
    pos: Vec<usize>,
    etas: Vec<Eta>,
    /// Length of the eta file right after the last refactorisation.
    factor_len: usize,
    opts: &'o SimplexOptions,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    TimeLimit,
    Numerical,
}

/// Power-of-two geometric scaling factors `(row, column)`.
fn scale_factors(p: &LpProblem, cols: &[Vec<(usize, f64)>]) -> (Vec<f64>, Vec<f64>) {
    let mut r = vec![1.0; p.n_rows()];
    let mut c = vec![1.0; p.n_cols()];
    let pow2 = |f: f64| if f.is_finite() && f > 0.0 { f.log2().round().exp2() } else { 1.0 };
    for _ in 0..6 {
        for (i, row) in p.rows.iter().enumerate() {
            let (mut mx, mut mn) = (0.0_f64, f64::INFINITY);
            for &(j, a) in &row.coeffs {
                let v = (a * c[j]).abs();
                mx = mx.max(v);
                mn = mn.min(v);
            }
            if mx > 0.0 {
                r[i] = pow2(1.0 / (mx * mn).sqrt());
            }
        }
        for (j, col) in cols.iter().enumerate() {
            let (mut mx, mut mn) = (0.0_f64, f64::INFINITY);
            for &(i, a) in col {
                let v = (a * r[i]).abs();
                mx = mx.max(v);
                mn = mn.min(v);
            }
            if mx > 0.0 {
                c[j] = pow2(1.0 / (mx * mn).sqrt());
            }
        }
    }
    (r, c)
}

impl<'o> Simplex<'o> {
    fn new(p: &LpProblem, opts: &'o SimplexOptions, scale: bool) -> (Self, Vec<f64>) {
        let (m, n) = (p.n_rows(), p.n_cols());
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in p.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                cols[j].push((i, a));
            }
        }
        let (rs, cs) = if scale { scale_factors(p, &cols) } else { (vec![1.0; m], vec![1.0; n]) };
        let mut col_start = Vec::with_capacity(n + 1);
        let mut col_row = Vec::new();
        let mut col_val = Vec::new();
        col_start.push(0);
        for (j, col) in cols.iter().enumerate() {
            for &(i, a) in col {
                col_row.push(i);
                col_val.push(a * rs[i] * cs[j]);
            }
            col_start.push(col_row.len());
        }
        let nt = n + m;
        let mut lo = Vec::with_capacity(nt);
        let mut hi = Vec::with_capacity(nt);
        let mut cost = Vec::with_capacity(nt);
        for (j, c) in p.columns.iter().enumerate() {
            lo.push(c.lo / cs[j]);
            hi.push(c.hi / cs[j]);
            cost.push(c.cost * cs[j]);
        }
        for (i, row) in p.rows.iter().enumerate() {
            lo.push(-row.hi * rs[i]);
            hi.push(-row.lo * rs[i]);
            cost.push(0.0);
        }
        let mut x = vec![0.0; nt];
        for j in 0..n {
            x[j] = Self::rest_value(lo[j], hi[j], 0.0);
        }
        let head: Vec<usize> = (n..nt).collect();
        let mut pos = vec![NONBASIC; nt];
        for (p_, &j) in head.iter().enumerate() {
            pos[j] = p_;
        }
        let s = Self {
            m,
            n,
            col_start,
            col_row,
            col_val,
            lo,
            hi,
            cost,
            x,
            head,
            pos,
            etas: Vec::new(),
            factor_len: 0,
            opts,
            iterations: 0,
        };
        (s, cs)
    }

    /// Where a nonbasic variable rests: the bound nearest `hint`, or `hint`
    /// itself (clamped to 0) when free.
    fn rest_value(lo: f64, hi: f64, hint: f64) -> f64 {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                if (hint - lo).abs() <= (hi - hint).abs() {
                    lo
                } else {
                    hi
                }
            }
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        }
    }

    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for k in self.col_start[j]..self.col_start[j + 1] {
                f(self.col_row[k], self.col_val[k]);
            }
        } else {
            f(j - self.n, 1.0);
        }
    }

    fn ftran(&self, v: &mut [f64]) {
        for eta in &self.etas {
            let vr = v[eta.row];
            if vr == 0.0 {
                continue;
            }
            let xr = vr / eta.pivot;
            v[eta.row] = xr;
            for &(i, w) in &eta.entries {
                v[i] -= w * xr;
            }
        }
    }

    fn btran(&self, y: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let mut s = y[eta.row];
            for &(i, w) in &eta.entries {
                s -= w * y[i];
            }
            y[eta.row] = s / eta.pivot;
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.m];
        self.for_col(j, |i, a| v[i] = a);
        v
    }

    fn push_eta(&mut self, w: &[f64], row: usize) {
        let entries = w
            .iter()
            .enumerate()
            .filter(|&(i, &wi)| i != row && wi != 0.0)
            .map(|(i, &wi)| (i, wi))
            .collect();
        self.etas.push(Eta { row, pivot: w[row], entries });
    }

    /// Rebuild the eta file from a sparse LU factorisation of the current
    /// basis.
    ///
    /// Pivots are chosen by Markowitz count among entries within a factor
    /// `LU_THRESHOLD` of their column maximum. `L` is stored as column etas
    /// in pivot order and `U` as column etas in reverse pivot order, so
    /// `ftran`/`btran` need no special casing. Columns that turn out to be
    /// dependent are dropped to a bound and replaced by logicals.
    fn reinvert(&mut self) {
        self.etas.clear();
        let (m, n) = (self.m, self.n);
        let basis = self.head.clone();
        let k = basis.len();
        let mut cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(k);
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut row_count = vec![0usize; m];
        for (c, &j) in basis.iter().enumerate() {
            let mut col = Vec::new();
            self.for_col(j, |i, a| {
                if a != 0.0 {
                    col.push((i, a));
                    rows[i].push(c);
                    row_count[i] += 1;
                }
            });
            cols.push(col);
        }
        let mut col_done = vec![false; k];
        let mut row_done = vec![false; m];
        let mut ucols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        let mut order: Vec<(usize, usize, f64)> = Vec::with_capacity(k);
        let mut new_head = vec![NONBASIC; m];
        let mut slot = vec![usize::MAX; m];
        let mut seen = vec![usize::MAX; k];

        loop {
            // Markowitz search with threshold pivoting.
            let mut best: Option<(usize, usize, usize, f64)> = None;
            'search: for c in 0..k {
                if col_done[c] || cols[c].is_empty() {
                    continue;
                }
                let cc = cols[c].len() - 1;
                if let Some((cost, ..)) = best {
                    if cost == 0 && cc > 0 {
                        continue;
                    }
                }
                let mx = cols[c].iter().fold(0.0_f64, |a, &(_, v)| a.max(v.abs()));
                if mx <= PIVOT_TOL {
                    continue;
                }
                for &(i, v) in &cols[c] {
                    let a = v.abs();
                    if a < LU_THRESHOLD * mx || a <= PIVOT_TOL {
                        continue;
                    }
                    let cost = (row_count[i] - 1) * cc;
                    let better = match best {
                        None => true,
                        Some((bc, _, _, ba)) => cost < bc || (cost == bc && a > ba),
                    };
                    if better {
                        best = Some((cost, c, i, a));
                        if cost == 0 && a >= 1e-3 * mx.max(1.0) {
                            break 'search;
                        }
                    }
                }
            }
            let Some((_, c, r, _)) = best else { break };

            let pos = cols[c].iter().position(|&(i, _)| i == r).expect("pivot entry");
            let (_, piv) = cols[c].swap_remove(pos);
            let lcol: Vec<(usize, f64)> = cols[c].drain(..).map(|(i, v)| (i, v / piv)).collect();
            col_done[c] = true;
            row_done[r] = true;
            for &(i, _) in &lcol {
                row_count[i] -= 1;
            }
            order.push((c, r, piv));
            new_head[r] = basis[c];

            let row_r = std::mem::take(&mut rows[r]);
            for c2 in row_r {
                if col_done[c2] || seen[c2] == order.len() {
                    continue;
                }
                seen[c2] = order.len();
                let Some(p2) = cols[c2].iter().position(|&(i, _)| i == r) else { continue };
                let (_, a_r) = cols[c2].swap_remove(p2);
                ucols[c2].push((r, a_r));
                if lcol.is_empty() {
                    continue;
                }
                for (q, &(i, _)) in cols[c2].iter().enumerate() {
                    slot[i] = q;
                }
                for &(i, l) in &lcol {
                    let q = slot[i];
                    if q < cols[c2].len() && cols[c2][q].0 == i {
                        cols[c2][q].1 -= l * a_r;
                    } else {
                        cols[c2].push((i, -l * a_r));
                        rows[i].push(c2);
                        row_count[i] += 1;
                    }
                }
                for &(i, _) in cols[c2].iter() {
                    slot[i] = usize::MAX;
                }
                let before = cols[c2].len();
                cols[c2].retain(|&(i, v)| {
                    let keep = v.abs() > 1e-14;
                    if !keep {
                        row_count[i] -= 1;
                    }
                    keep
                });
                debug_assert!(cols[c2].len() <= before);
            }
            if !lcol.is_empty() {
                self.etas.push(Eta { row: r, pivot: 1.0, entries: lcol });
            }
        }

        for &(c, r, piv) in order.iter().rev() {
            let entries = std::mem::take(&mut ucols[c]);
            if piv != 1.0 || !entries.is_empty() {
                self.etas.push(Eta { row: r, pivot: piv, entries });
            }
        }
        for (c, &j) in basis.iter().enumerate() {
            self.pos[j] = NONBASIC;
            if !col_done[c] {
                self.x[j] = Self::rest_value(self.lo[j], self.hi[j], self.x[j]);
            }
        }
        for p in 0..m {
            if !row_done[p] {
                new_head[p] = n + p;
            }
        }
        for (p, &j) in new_head.iter().enumerate() {
            self.pos[j] = p;
        }
        self.head = new_head;
        self.factor_len = self.etas.len();
        self.recompute_basics();
    }

    fn recompute_basics(&mut self) {
        let mut rhs = vec![0.0; self.m];
        for j in 0..self.n + self.m {
            if self.pos[j] == NONBASIC && self.x[j] != 0.0 {
                let xj = self.x[j];
                self.for_col(j, |i, a| rhs[i] -= a * xj);
            }
        }
        self.ftran(&mut rhs);
        for (p, &j) in self.head.iter().enumerate() {
            self.x[j] = rhs[p];
        }
    }

    /// Devex reference weights, updated from the pivot row before the basis
    /// changes.
    fn update_devex(&self, devex: &mut [f64], rho: &mut [f64], enter: usize, leave: usize, alpha_q: f64) {
        rho.fill(0.0);
        rho[leave] = 1.0;
        self.btran(rho);
        let wq = devex[enter];
        for j in 0..self.n + self.m {
            if self.pos[j] != NONBASIC || j == enter || self.lo[j] == self.hi[j] {
                continue;
            }
            let mut alpha = 0.0;
            self.for_col(j, |i, a| alpha += rho[i] * a);
            if alpha != 0.0 {
                let r = alpha / alpha_q;
                devex[j] = devex[j].max(r * r * wq);
            }
        }
        devex[self.head[leave]] = (wq / (alpha_q * alpha_q)).max(1.0);
        if devex.iter().any(|&w| !(w <= DEVEX_RESET)) {
            devex.fill(1.0);
        }
    }

    fn run(&mut self, deadline: &Deadline) -> Outcome {
        let tol = self.opts.feasibility_tol;
        let dtol = self.opts.optimality_tol;
        let max_iter = self.opts.max_iterations.unwrap_or(20 * (self.m + self.n) + 1000);
        let nt = self.n + self.m;
        let mut degenerate_run = 0usize;
        let mut fresh = false;
        let mut cb = vec![0.0; self.m];
        let mut y = vec![0.0; self.m];
        let mut rho = vec![0.0; self.m];
        let mut devex = vec![1.0; nt];
        let mut was_phase1 = true;
        loop {
            if self.iterations >= max_iter {
                return Outcome::IterationLimit;
            }
            if self.iterations % 32 == 0 && deadline.expired() {
                return Outcome::TimeLimit;
            }
            if self.etas.len() - self.factor_len >= self.opts.refactor_every {
                self.reinvert();
                fresh = true;
            }
            let mut phase1 = false;
            for (p, &j) in self.head.iter().enumerate() {
                cb[p] = if self.x[j] < self.lo[j] - tol {
                    phase1 = true;
                    -1.0
                } else if self.x[j] > self.hi[j] + tol {
                    phase1 = true;
                    1.0
                } else {
                    0.0
                };
            }
            if !phase1 {
                for (p, &j) in self.head.iter().enumerate() {
                    cb[p] = self.cost[j];
                }
            }
            if was_phase1 && !phase1 {
                devex.fill(1.0);
            }
            was_phase1 = phase1;
            y.copy_from_slice(&cb);
            self.btran(&mut y);

            let bland = degenerate_run >= self.opts.bland_after;
            let mut enter = NONBASIC;
            let mut enter_dir = 0.0;
            let mut best = 0.0;
            let mut enter_d = 0.0;
            for j in 0..nt {
                if self.pos[j] != NONBASIC || self.lo[j] == self.hi[j] {
                    continue;
                }
                let mut d = if phase1 { 0.0 } else { self.cost[j] };
                self.for_col(j, |i, a| d -= y[i] * a);
                let dir = if d < -dtol && self.x[j] < self.hi[j] {
                    1.0
                } else if d > dtol && self.x[j] > self.lo[j] {
                    -1.0
                } else {
                    continue;
                };
                if bland {
                    enter = j;
                    enter_dir = dir;
                    enter_d = d.abs();
                    break;
                }
                let score = d * d / devex[j];
                if score > best {
                    best = score;
                    enter_d = d.abs();
                    enter = j;
                    enter_dir = dir;
                }
            }

            if enter == NONBASIC {
                if !fresh {
                    self.reinvert();
                    fresh = true;
                    continue;
                }
                if phase1 {
                    return Outcome::Infeasible;
                }
                return Outcome::Optimal;
            }

            let mut w = self.column(enter);
            self.ftran(&mut w);

            // Harris pass 1: largest step keeping every basic variable within
            // its (tolerance-relaxed) effective bounds.
            let bounds = |s: &Self, j: usize| -> (f64, f64) {
                if phase1 {
                    if s.x[j] < s.lo[j] - tol {
                        return (f64::NEG_INFINITY, s.lo[j]);
                    }
                    if s.x[j] > s.hi[j] + tol {
                        return (s.hi[j], f64::INFINITY);
                    }
                }
                (s.lo[j], s.hi[j])
            };
            let mut theta_max = f64::INFINITY;
            for (p, &wp) in w.iter().enumerate() {
                if wp.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -enter_dir * wp;
                let j = self.head[p];
                let (l, u) = bounds(self, j);
                let relaxed = if rate > 0.0 {
                    (u + tol - self.x[j]) / rate
                } else {
                    (l - tol - self.x[j]) / rate
                };
                if relaxed < theta_max {
                    theta_max = relaxed;
                }
            }
            // Pass 2: among ratios within the relaxed step, the largest pivot.
            let mut leave = NONBASIC;
            let mut leave_val = 0.0;
            let mut theta = f64::INFINITY;
            let mut best_piv = 0.0;
            for (p, &wp) in w.iter().enumerate() {
                if wp.abs() <= PIVOT_TOL {
                    continue;
                }
                let rate = -enter_dir * wp;
                let j = self.head[p];
                let (l, u) = bounds(self, j);
                let target = if rate > 0.0 { u } else { l };
                if !target.is_finite() {
                    continue;
                }
                let ratio = ((target - self.x[j]) / rate).max(0.0);
                if ratio <= theta_max && wp.abs() > best_piv {
                    theta = ratio;
                    best_piv = wp.abs();
                    leave = p;
                    leave_val = target;
                }
            }

            let span = self.hi[enter] - self.lo[enter];
            let flip = span.is_finite() && (leave == NONBASIC || span <= theta);
            if flip {
                theta = span;
                leave = NONBASIC;
            } else if leave == NONBASIC {
                if phase1 {
                    return Outcome::Numerical;
                }
                return Outcome::Unbounded;
            }

            self.iterations += 1;
            fresh = false;
            if theta * enter_d.max(dtol) <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            if theta != 0.0 {
                for (p, &wp) in w.iter().enumerate() {
                    if wp != 0.0 {
                        let j = self.head[p];
                        self.x[j] -= enter_dir * theta * wp;
                    }
                }
            }
            if flip {
                self.x[enter] = if enter_dir > 0.0 { self.hi[enter] } else { self.lo[enter] };
                continue;
            }
            self.x[enter] += enter_dir * theta;
            let out = self.head[leave];
            self.x[out] = leave_val;
            self.pos[out] = NONBASIC;
            self.head[leave] = enter;
            self.pos[enter] = leave;
            self.update_devex(&mut devex, &mut rho, enter, leave, w[leave]);
            self.push_eta(&w, leave);
        }
    }
}

fn solve_once(problem: &LpProblem, opts: &SimplexOptions, scale: bool, deadline: &Deadline) -> LpSolution {
    let (mut s, cs) = Simplex::new(problem, opts, scale);
    let outcome = s.run(deadline);
    let x: Vec<f64> = (0..s.n).map(|j| s.x[j] * cs[j]).collect();
    let status = match outcome {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Infeasible => LpStatus::Infeasible,
        Outcome::Unbounded => LpStatus::Unbounded,
        Outcome::IterationLimit => LpStatus::IterationLimit,
        Outcome::TimeLimit => LpStatus::TimeLimit,
        Outcome::Numerical => LpStatus::Numerical,
    };
    LpSolution { status, objective: problem.objective(&x), x, iterations: s.iterations }
}

/// Solve `problem` to optimality, or report why not.
///
/// An optimal answer is re-checked against the unscaled problem; if it
/// violates any bound or row by more than the feasibility tolerance the
/// solve is repeated without scaling, and reported as `Numerical` if the
/// violation persists.
pub fn solve_lp(problem: &LpProblem, opts: &SimplexOptions) -> LpSolution {
    let deadline = Deadline::after(opts.time_limit);
    if problem.n_rows() == 0 && problem.n_cols() == 0 {
        return LpSolution { status: LpStatus::Optimal, x: Vec::new(), objective: 0.0, iterations: 0 };
    }
    let mut sol = solve_once(problem, opts, opts.scale, &deadline);
    if sol.status == LpStatus::Optimal && problem.max_violation(&sol.x) > opts.feasibility_tol {
        if opts.scale {
            log::debug!("scaled solve violates constraints; retrying unscaled");
            let iters = sol.iterations;
            sol = solve_once(problem, opts, false, &deadline);
            sol.iterations += iters;
        }
        if sol.status == LpStatus::Optimal && problem.max_violation(&sol.x) > opts.feasibility_tol {
            sol.status = LpStatus::Numerical;
        }
    }
    sol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SimplexOptions {
        SimplexOptions::default()
    }

    #[test]
    fn one_variable_upper_bound() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, f64::INFINITY, -1.0, false);
        p.add_row("c", f64::NEG_INFINITY, 3.0, &[(x, 1.0)]);
        let s = solve_lp(&p, &opts());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] - 3.0).abs() < 1e-9);
        assert!((s.objective + 3.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, f64::INFINITY, 0.0, false);
        p.add_row("a", 2.0, f64::INFINITY, &[(x, 1.0)]);
        p.add_row("b", f64::NEG_INFINITY, 1.0, &[(x, 1.0)]);
        assert_eq!(solve_lp(&p, &opts()).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, f64::INFINITY, -1.0, false);
        let y = p.add_col("y", 0.0, f64::INFINITY, 0.0, false);
        p.add_row("a", f64::NEG_INFINITY, 1.0, &[(x, 1.0), (y, -1.0)]);
        assert_eq!(solve_lp(&p, &opts()).status, LpStatus::Unbounded);
    }

    #[test]
    fn textbook_two_by_two() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  => (2, 6), 36
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, f64::INFINITY, -3.0, false);
        let y = p.add_col("y", 0.0, f64::INFINITY, -5.0, false);
        p.add_row("a", f64::NEG_INFINITY, 4.0, &[(x, 1.0)]);
        p.add_row("b", f64::NEG_INFINITY, 12.0, &[(y, 2.0)]);
        p.add_row("c", f64::NEG_INFINITY, 18.0, &[(x, 3.0), (y, 2.0)]);
        let s = solve_lp(&p, &opts());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_free_variable() {
        // min x + y with x - y = 1, y free, x in [0, 5]: x = 0, y = -1
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, 5.0, 1.0, false);
        let y = p.add_col("y", f64::NEG_INFINITY, f64::INFINITY, 1.0, false);
        p.add_row("e", 1.0, 1.0, &[(x, 1.0), (y, -1.0)]);
        p.add_row("g", -3.0, f64::INFINITY, &[(y, 1.0)]);
        let s = solve_lp(&p, &opts());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 1.0).abs() < 1e-9, "{s:?}");
        assert!((s.x[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn ranged_row() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", f64::NEG_INFINITY, f64::INFINITY, 1.0, false);
        p.add_row("r", -2.0, 7.0, &[(x, 2.0)]);
        let s = solve_lp(&p, &opts());
        assert!((s.x[0] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, f64::INFINITY, -1.0, false);
        let y = p.add_col("y", 0.0, f64::INFINITY, -1.0, false);
        p.add_row("a", f64::NEG_INFINITY, 3.0, &[(x, 1.0), (y, 2.0)]);
        p.add_row("b", f64::NEG_INFINITY, 3.0, &[(x, 2.0), (y, 1.0)]);
        let o = SimplexOptions { max_iterations: Some(1), ..opts() };
        assert_eq!(solve_lp(&p, &o).status, LpStatus::IterationLimit);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under naive Dantzig pricing.
        let mut p = LpProblem::new("beale");
        let x: Vec<usize> = [-0.75, 150.0, -0.02, 6.0]
            .iter()
            .enumerate()
            .map(|(i, &c)| p.add_col(format!("x{i}"), 0.0, f64::INFINITY, c, false))
            .collect();
        p.add_row("a", f64::NEG_INFINITY, 0.0, &[(x[0], 0.25), (x[1], -60.0), (x[2], -0.04), (x[3], 9.0)]);
        p.add_row("b", f64::NEG_INFINITY, 0.0, &[(x[0], 0.5), (x[1], -90.0), (x[2], -0.02), (x[3], 3.0)]);
        p.add_row("c", f64::NEG_INFINITY, 1.0, &[(x[2], 1.0)]);
        let s = solve_lp(&p, &opts());
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-9);
    }
}
