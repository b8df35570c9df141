//! Best-first branch-and-bound over the integer columns of an [`LpProblem`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Duration;

use serde::Serialize;

use super::{solve_lp, LpProblem, LpStatus, SimplexOptions};
use crate::time::Deadline;

#[derive(Debug, Clone)]
pub struct MilpOptions {
    pub lp: SimplexOptions,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    pub integrality_tol: f64,
    /// Branching class per column; lower classes are branched on first.
    /// Columns without an entry are class 0.
    pub branch_class: Vec<u8>,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            lp: SimplexOptions::default(),
            time_limit: None,
            node_limit: None,
            integrality_tol: 1e-6,
            branch_class: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MilpStatus {
    Optimal,
    /// Stopped early with an incumbent; see `gap`.
    TimeLimit,
    /// Stopped early without any integer-feasible point.
    NoIncumbent,
    Infeasible,
    Unbounded,
    /// An LP solve failed (iteration limit or numerical trouble).
    Failed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution {
    pub status: MilpStatus,
    /// The incumbent, or the root relaxation when there is none.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Best proven lower bound.
    pub bound: f64,
    /// `(objective - bound) / max(1, |objective|)`; infinite without incumbent.
    pub gap: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
}

struct Node {
    bound: f64,
    seq: usize,
    fixes: Vec<(usize, f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap: the smallest bound, then the oldest node, wins.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then(other.seq.cmp(&self.seq))
    }
}

fn with_fixes(base: &LpProblem, fixes: &[(usize, f64, f64)]) -> LpProblem {
    let mut p = base.clone();
    for &(j, lo, hi) in fixes {
        p.columns[j].lo = lo;
        p.columns[j].hi = hi;
    }
    p
}

/// Most fractional integer column in the lowest branching class.
fn branch_column(problem: &LpProblem, x: &[f64], opts: &MilpOptions) -> Option<usize> {
    let mut best: Option<(u8, f64, usize)> = None;
    for (j, c) in problem.columns.iter().enumerate() {
        if !c.integer {
            continue;
        }
        let frac = x[j] - x[j].floor();
        let dist = frac.min(1.0 - frac);
        if dist <= opts.integrality_tol {
            continue;
        }
        let class = opts.branch_class.get(j).copied().unwrap_or(0);
        let better = match best {
            None => true,
            Some((bc, bd, _)) => class < bc || (class == bc && dist > bd + 1e-12),
        };
        if better {
            best = Some((class, dist, j));
        }
    }
    best.map(|(_, _, j)| j)
}

pub fn solve_milp(problem: &LpProblem, opts: &MilpOptions) -> MilpSolution {
    let deadline = Deadline::after(opts.time_limit);
    let mut lp_iterations = 0;
    let mut nodes = 0;

    let root = solve_lp(problem, &opts.lp);
    lp_iterations += root.iterations;
    nodes += 1;
    let fail = |status, x: Vec<f64>, objective: f64, iters| MilpSolution {
        status,
        x,
        objective,
        bound: objective,
        gap: f64::INFINITY,
        nodes: 1,
        lp_iterations: iters,
    };
    match root.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return fail(MilpStatus::Infeasible, root.x, f64::INFINITY, lp_iterations),
        LpStatus::Unbounded => return fail(MilpStatus::Unbounded, root.x, f64::NEG_INFINITY, lp_iterations),
        _ => return fail(MilpStatus::Failed, root.x, root.objective, lp_iterations),
    }
    let root_bound = root.objective;
    let root_x = root.x.clone();
    if branch_column(problem, &root.x, opts).is_none() {
        return MilpSolution {
            status: MilpStatus::Optimal,
            x: root.x,
            objective: root.objective,
            bound: root_bound,
            gap: 0.0,
            nodes,
            lp_iterations,
        };
    }

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    heap.push(Node { bound: root_bound, seq, fixes: Vec::new() });
    let mut first = Some(root);
    let mut stopped = false;
    let mut lp_failed = false;

    while let Some(node) = heap.pop() {
        if let Some((inc, _)) = &incumbent {
            if node.bound >= inc - 1e-9 * inc.abs().max(1.0) {
                continue;
            }
        }
        let over_nodes = opts.node_limit.is_some_and(|l| nodes >= l);
        if deadline.expired() || over_nodes {
            heap.push(node);
            stopped = true;
            break;
        }
        let sol = match first.take() {
            Some(root) => root,
            None => {
                let mut lp_opts = opts.lp.clone();
                lp_opts.time_limit = deadline.remaining();
                let s = solve_lp(&with_fixes(problem, &node.fixes), &lp_opts);
                nodes += 1;
                lp_iterations += s.iterations;
                s
            }
        };
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => continue,
            LpStatus::TimeLimit => {
                heap.push(node);
                stopped = true;
                break;
            }
            _ => {
                lp_failed = true;
                continue;
            }
        }
        if let Some((inc, _)) = &incumbent {
            if sol.objective >= inc - 1e-9 * inc.abs().max(1.0) {
                continue;
            }
        }
        match branch_column(problem, &sol.x, opts) {
            None => incumbent = Some((sol.objective, sol.x)),
            Some(j) => {
                let v = sol.x[j];
                let (lo, hi) = node
                    .fixes
                    .iter()
                    .rev()
                    .find(|f| f.0 == j)
                    .map_or((problem.columns[j].lo, problem.columns[j].hi), |f| (f.1, f.2));
                let mut down = node.fixes.clone();
                down.push((j, lo, v.floor()));
                let mut up = node.fixes;
                up.push((j, v.ceil(), hi));
                seq += 1;
                heap.push(Node { bound: sol.objective, seq, fixes: down });
                seq += 1;
                heap.push(Node { bound: sol.objective, seq, fixes: up });
            }
        }
    }

    let open_bound = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    match incumbent {
        Some((obj, x)) => {
            let bound = if stopped { open_bound.min(obj) } else { obj };
            let gap = (obj - bound) / obj.abs().max(1.0);
            let status = if stopped { MilpStatus::TimeLimit } else { MilpStatus::Optimal };
            MilpSolution { status, x, objective: obj, bound, gap, nodes, lp_iterations }
        }
        None => {
            let status = if stopped {
                MilpStatus::NoIncumbent
            } else if lp_failed {
                MilpStatus::Failed
            } else {
                MilpStatus::Infeasible
            };
            let bound = if stopped { open_bound } else { f64::INFINITY };
            MilpSolution {
                status,
                x: root_x,
                objective: f64::INFINITY,
                bound,
                gap: f64::INFINITY,
                nodes,
                lp_iterations,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knapsack() -> LpProblem {
        // max 5a + 4b + 3c  s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8
        let mut p = LpProblem::new("k");
        let a = p.add_col("a", 0.0, 1.0, -5.0, true);
        let b = p.add_col("b", 0.0, 1.0, -4.0, true);
        let c = p.add_col("c", 0.0, 1.0, -3.0, true);
        p.add_row("r1", f64::NEG_INFINITY, 5.0, &[(a, 2.0), (b, 3.0), (c, 1.0)]);
        p.add_row("r2", f64::NEG_INFINITY, 11.0, &[(a, 4.0), (b, 1.0), (c, 2.0)]);
        p.add_row("r3", f64::NEG_INFINITY, 8.0, &[(a, 3.0), (b, 4.0), (c, 2.0)]);
        p
    }

    #[test]
    fn integral_root_returns_immediately() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, 1.0, -1.0, true);
        p.add_row("r", f64::NEG_INFINITY, 1.0, &[(x, 1.0)]);
        let s = solve_milp(&p, &MilpOptions::default());
        assert_eq!(s.status, MilpStatus::Optimal);
        assert_eq!(s.gap, 0.0);
        assert_eq!(s.nodes, 1);
    }

    #[test]
    fn small_binary_problem() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, 1.0, -1.0, true);
        let y = p.add_col("y", 0.0, 1.0, -1.0, true);
        p.add_row("r", f64::NEG_INFINITY, 1.5, &[(x, 1.0), (y, 1.0)]);
        let s = solve_milp(&p, &MilpOptions::default());
        assert_eq!(s.status, MilpStatus::Optimal);
        assert!((s.objective + 1.0).abs() < 1e-9);
    }

    #[test]
    fn knapsack_matches_enumeration() {
        let p = knapsack();
        let s = solve_milp(&p, &MilpOptions::default());
        let mut best = f64::INFINITY;
        for mask in 0..8u32 {
            let x: Vec<f64> = (0..3).map(|i| f64::from(mask >> i & 1)).collect();
            if p.max_violation(&x) <= 0.0 {
                best = best.min(p.objective(&x));
            }
        }
        assert_eq!(s.status, MilpStatus::Optimal);
        assert!((s.objective - best).abs() < 1e-9);
    }

    #[test]
    fn zero_time_limit_reports_root_bound() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, 1.0, -1.0, true);
        let y = p.add_col("y", 0.0, 1.0, -1.0, true);
        p.add_row("r", f64::NEG_INFINITY, 1.5, &[(x, 1.0), (y, 1.0)]);
        let s = solve_milp(&p, &MilpOptions { time_limit: Some(Duration::ZERO), ..MilpOptions::default() });
        assert_eq!(s.status, MilpStatus::NoIncumbent);
        assert!((s.bound + 1.5).abs() < 1e-9);
    }

    #[test]
    fn infeasible_integer_problem() {
        let mut p = LpProblem::new("t");
        let x = p.add_col("x", 0.0, 1.0, 0.0, true);
        p.add_row("r", 0.4, 0.6, &[(x, 1.0)]);
        assert_eq!(solve_milp(&p, &MilpOptions::default()).status, MilpStatus::Infeasible);
    }
}
