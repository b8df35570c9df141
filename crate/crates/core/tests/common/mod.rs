//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use fireplan::lp::{solve_lp, LpProblem, LpStatus, SimplexOptions};
use fireplan::{Action, FireMdp, FireState, GridSpec, Neighborhood, RewardModel, SpreadModel};
use nalgebra::{DMatrix, DVector};
use petgraph::algo::dijkstra;
use petgraph::graph::{DiGraph, NodeIndex};

pub fn grid(w: usize, h: usize) -> GridSpec {
    GridSpec::new(w, h, Neighborhood::FourConnected).unwrap()
}

pub fn mdp(g: GridSpec, p: f64, q: f64, rewards: Vec<f64>, teams: usize) -> FireMdp {
    FireMdp::new(g, SpreadModel::uniform(&g, p, q).unwrap(), RewardModel::new(rewards).unwrap(), teams).unwrap()
}

pub fn state(burning: &[u8], fuel: &[u32]) -> FireState {
    FireState::new(burning.iter().map(|&b| b != 0).collect(), fuel.to_vec()).unwrap()
}

/// Every multiset of `teams` burning cells, in canonical form.
pub fn burning_actions(s: &FireState, teams: usize) -> Vec<Action> {
    let cells = s.burning_cells();
    if cells.is_empty() {
        return vec![Action::Idle];
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(teams);
    fn rec(cells: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Action>) {
        if left == 0 {
            out.push(Action::Assign(cur.clone()));
            return;
        }
        for i in start..cells.len() {
            cur.push(cells[i]);
            rec(cells, i, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&cells, 0, teams, &mut cur, &mut out);
    out
}

/// Finite-horizon expectimax over actions that target burning cells.
pub struct Expectimax<'a> {
    mdp: &'a FireMdp,
    memo: HashMap<(FireState, usize), f64>,
}

impl<'a> Expectimax<'a> {
    pub fn new(mdp: &'a FireMdp) -> Self {
        Self { mdp, memo: HashMap::new() }
    }

    pub fn q(&mut self, s: &FireState, a: &Action, depth: usize) -> f64 {
        let mut v = 0.0;
        for t in self.mdp.enumerate_transitions(s, a, 20).unwrap() {
            v += t.probability * (t.reward + self.value(&t.state, depth - 1));
        }
        v
    }

    pub fn value(&mut self, s: &FireState, depth: usize) -> f64 {
        if depth == 0 || s.is_terminal() {
            return 0.0;
        }
        if let Some(&v) = self.memo.get(&(s.clone(), depth)) {
            return v;
        }
        let v = burning_actions(s, self.mdp.teams())
            .iter()
            .map(|a| self.q(s, a, depth))
            .fold(f64::NEG_INFINITY, f64::max);
        self.memo.insert((s.clone(), depth), v);
        v
    }

    /// Root actions with their values, best first.
    pub fn ranked(&mut self, s: &FireState, depth: usize) -> Vec<(Action, f64)> {
        let mut qs: Vec<(Action, f64)> =
            burning_actions(s, self.mdp.teams()).into_iter().map(|a| (a.clone(), self.q(s, &a, depth))).collect();
        qs.sort_by(|a, b| b.1.total_cmp(&a.1));
        qs
    }
}

/// Single-source shortest paths over the spread graph, one source at a time.
pub fn dijkstra_distances(spread: &SpreadModel) -> Vec<Vec<f64>> {
    let n = spread.len();
    let mut g: DiGraph<(), f64> = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for x in 0..n {
        for &(y, p) in spread.sources(x) {
            g.add_edge(nodes[x], nodes[y], p);
        }
    }
    (0..n)
        .map(|x| {
            let d = dijkstra(&g, nodes[x], None, |e| *e.weight());
            (0..n).map(|y| d.get(&nodes[y]).copied().unwrap_or(f64::INFINITY)).collect()
        })
        .collect()
}

/// Optimum of a bounded LP by enumerating every basic solution. `None` if
/// infeasible. Every column must have finite bounds.
pub fn vertex_optimum(p: &LpProblem, tol: f64) -> Option<f64> {
    let n = p.columns.len();
    // hyperplanes a.x = b
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (j, c) in p.columns.iter().enumerate() {
        assert!(c.lo.is_finite() && c.hi.is_finite(), "oracle needs bounded columns");
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e.clone(), c.lo));
        if c.hi != c.lo {
            planes.push((e, c.hi));
        }
    }
    for r in &p.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coeffs {
            a[j] = v;
        }
        if r.lo.is_finite() {
            planes.push((a.clone(), r.lo));
        }
        if r.hi.is_finite() && r.hi != r.lo {
            planes.push((a, r.hi));
        }
    }
    let feasible = |x: &[f64]| {
        p.columns.iter().zip(x).all(|(c, &v)| v >= c.lo - tol && v <= c.hi + tol)
            && (0..p.rows.len()).all(|i| {
                let act = p.row_activity(i, x);
                act >= p.rows[i].lo - tol && act <= p.rows[i].hi + tol
            })
    };
    let mut best: Option<f64> = None;
    let mut pick = Vec::with_capacity(n);
    combos(planes.len(), n, 0, &mut pick, &mut |idx| {
        let a = DMatrix::from_fn(n, n, |i, j| planes[idx[i]].0[j]);
        let b = DVector::from_fn(n, |i, _| planes[idx[i]].1);
        if let Some(x) = a.lu().solve(&b) {
            let x: Vec<f64> = x.iter().copied().collect();
            if x.iter().all(|v| v.is_finite()) && feasible(&x) {
                let obj = p.objective(&x);
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
    });
    best
}

fn combos(m: usize, k: usize, start: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..m {
        pick.push(i);
        combos(m, k, i + 1, pick, f);
        pick.pop();
    }
}

/// Optimum of a 0/1 program by walking every assignment of its integer
/// columns; no objective bound is used.
///
/// Binaries that only occur in all-binary rows ("free" columns) do not touch
/// the continuous part, so they are enumerated directly against those rows
/// at each leaf. Subtrees whose continuous relaxation is infeasible hold no
/// feasible assignment and are skipped; a relaxation point that already
/// satisfies a new fixing is reused as the feasibility witness.
pub struct Exhaustive {
    pub leaves: usize,
    pub lp_solves: usize,
}

struct Walk<'a> {
    p: LpProblem,
    linked: Vec<usize>,
    free: Vec<usize>,
    pure_rows: Vec<usize>,
    fixed: Vec<Option<f64>>,
    stats: &'a mut Exhaustive,
    best: Option<f64>,
}

impl Exhaustive {
    pub fn solve(p: &LpProblem) -> (Option<f64>, Exhaustive) {
        let ints: Vec<usize> = (0..p.columns.len()).filter(|&j| p.columns[j].integer).collect();
        for &j in &ints {
            assert!(p.columns[j].lo == 0.0 && p.columns[j].hi == 1.0, "oracle handles binaries only");
        }
        let pure = |r: &fireplan::lp::Row| r.coeffs.iter().all(|&(j, _)| p.columns[j].integer);
        let pure_rows: Vec<usize> = (0..p.rows.len()).filter(|&i| pure(&p.rows[i])).collect();
        let in_mixed = |j: usize| p.rows.iter().any(|r| !pure(r) && r.coeffs.iter().any(|&(c, _)| c == j));
        let (linked, free): (Vec<usize>, Vec<usize>) = ints.iter().partition(|&&j| in_mixed(j));
        let mut stats = Exhaustive { leaves: 0, lp_solves: 0 };
        let mut w = Walk { p: p.clone(), linked, free, pure_rows, fixed: vec![None; p.columns.len()], stats: &mut stats, best: None };
        w.node(0, None);
        let best = w.best;
        (best, stats)
    }
}

impl Walk<'_> {
    /// Whether the all-binary rows can still hold given the fixings.
    fn pure_ok(&self) -> bool {
        self.pure_rows.iter().all(|&i| {
            let r = &self.p.rows[i];
            let (mut lo, mut hi) = (0.0, 0.0);
            for &(j, a) in &r.coeffs {
                match self.fixed[j] {
                    Some(v) => {
                        lo += a * v;
                        hi += a * v;
                    }
                    None => {
                        lo += a.min(0.0);
                        hi += a.max(0.0);
                    }
                }
            }
            hi >= r.lo - 1e-9 && lo <= r.hi + 1e-9
        })
    }

    fn fix(&mut self, j: usize, v: Option<f64>) {
        self.fixed[j] = v;
        let (lo, hi) = v.map_or((0.0, 1.0), |v| (v, v));
        self.p.columns[j].lo = lo;
        self.p.columns[j].hi = hi;
    }

    fn relax(&mut self) -> Option<(f64, Vec<f64>)> {
        self.stats.lp_solves += 1;
        let sol = solve_lp(&self.p, &SimplexOptions::default());
        match sol.status {
            LpStatus::Infeasible => None,
            LpStatus::Optimal => Some((sol.objective, sol.x)),
            other => panic!("oracle LP failed with {other:?}"),
        }
    }

    /// `witness` is a relaxation point known to satisfy the current fixings.
    fn node(&mut self, depth: usize, witness: Option<Vec<f64>>) {
        if !self.pure_ok() {
            return;
        }
        if depth == self.linked.len() {
            let Some((obj, x)) = self.relax() else { return };
            // the relaxation optimum already carries the cost of the free
            // columns at their LP values; take those out and enumerate
            let free_lp: f64 = self.free.iter().map(|&j| self.p.columns[j].cost * x[j]).sum();
            if let Some(extra) = self.best_free(0) {
                self.stats.leaves += 1;
                let total = obj - free_lp + extra;
                self.best = Some(self.best.map_or(total, |b| b.min(total)));
            }
            return;
        }
        let witness = match witness {
            Some(w) => w,
            None => match self.relax() {
                Some((_, x)) => x,
                None => return,
            },
        };
        let j = self.linked[depth];
        for v in [0.0, 1.0] {
            self.fix(j, Some(v));
            let reuse = (witness[j] - v).abs() <= 1e-12;
            self.node(depth + 1, reuse.then(|| witness.clone()));
        }
        self.fix(j, None);
    }

    /// Cheapest assignment of the free columns, `None` if none fits.
    fn best_free(&mut self, k: usize) -> Option<f64> {
        if !self.pure_ok() {
            return None;
        }
        if k == self.free.len() {
            return Some(0.0);
        }
        let j = self.free[k];
        let mut best: Option<f64> = None;
        for v in [0.0, 1.0] {
            self.fixed[j] = Some(v);
            if let Some(rest) = self.best_free(k + 1) {
                let c = self.p.columns[j].cost * v + rest;
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
        self.fixed[j] = None;
        best
    }
}

/// Plain fluid intensity recursion without suppression: a cell whose fluid
/// fuel is down to `delta` stops burning, every other cell follows
/// `I_t(x) = I_{t-1}(x) + sum_y zeta(y, x) I_{t-1}(y)`.
pub fn forward_intensity(
    i0: &[f64],
    f0: &[f64],
    zeta: &[Vec<(usize, f64)>],
    delta: f64,
    horizon: usize,
) -> Vec<Vec<f64>> {
    let n = i0.len();
    let mut out = vec![i0.to_vec()];
    let mut fuel = f0.to_vec();
    for t in 1..=horizon {
        let prev = &out[t - 1];
        for x in 0..n {
            fuel[x] -= prev[x];
        }
        let next = (0..n)
            .map(|x| {
                if fuel[x] <= delta + 1e-9 {
                    0.0
                } else {
                    prev[x] + zeta[x].iter().map(|&(y, z)| z * prev[y]).sum::<f64>()
                }
            })
            .collect();
        out.push(next);
    }
    out
}
