//! Monte Carlo tree search with double progressive widening.
//!
//! The action set of a state grows while `|A(s)| < k N(s)^alpha`; the
//! successor set of a state-action pair grows while
//! `|V(s, a)| < k' N(s, a)^alpha'`, after which stored successors are
//! resampled in proportion to their visit counts. New actions come either
//! from the default policy or from the genetic operators in [`genetic`].

mod genetic;
mod tree;

use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use genetic::{mutate, recombine, tournament_select};
pub use tree::{ActionNode, ChildNode, SearchTree, StateNode};

use crate::error::{Error, Result};
use crate::heuristics::{all_pairs_distances, fw_sample_policy, fw_weights, random_policy, WeightMap};
use crate::mdp::{Action, FireMdp, FireState};
use crate::time::Deadline;

/// How long a planning call may search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Budget {
    Iterations(u64),
    /// Wall-clock seconds; checked between iterations.
    Seconds(f64),
}

impl Default for Budget {
    fn default() -> Self {
        Budget::Seconds(60.0)
    }
}

/// Default policy used for rollouts and for fresh actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RolloutPolicy {
    Random,
    #[default]
    Fw,
}

/// Initial statistics for new tree entries.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Priors {
    #[serde(default)]
    pub state_visits: u64,
    #[serde(default)]
    pub action_visits: u64,
    #[serde(default)]
    pub action_value: f64,
    #[serde(default)]
    pub child_visits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MctsConfig {
    /// Exploration bonus.
    #[serde(default = "d_c")]
    pub c: f64,
    /// Action widening coefficient and exponent.
    #[serde(default = "d_k")]
    pub k: f64,
    #[serde(default = "d_alpha")]
    pub alpha: f64,
    /// State widening coefficient and exponent.
    #[serde(default = "d_k")]
    pub k_state: f64,
    #[serde(default = "d_alpha_state")]
    pub alpha_state: f64,
    /// Search and rollout depth in steps.
    #[serde(default = "d_depth")]
    pub depth: usize,
    #[serde(default = "d_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub budget: Budget,
    /// Probability of mutating a tried action.
    #[serde(default = "d_u")]
    pub mutate_prob: f64,
    /// Probability of recombining two tried actions.
    #[serde(default = "d_u")]
    pub recombine_prob: f64,
    #[serde(default)]
    pub rollout: RolloutPolicy,
    #[serde(default = "d_true")]
    pub use_genetic: bool,
    #[serde(default)]
    pub reuse_tree: bool,
    #[serde(default)]
    pub priors: Priors,
    /// Record per-iteration root statistics.
    #[serde(default)]
    pub trace: bool,
}

fn d_c() -> f64 {
    50.0
}
fn d_k() -> f64 {
    40.0
}
fn d_alpha() -> f64 {
    0.5
}
fn d_alpha_state() -> f64 {
    0.2
}
fn d_depth() -> usize {
    10
}
fn d_gamma() -> f64 {
    1.0
}
fn d_u() -> f64 {
    0.3
}
fn d_true() -> bool {
    true
}

impl Default for MctsConfig {
    fn default() -> Self {
        Self {
            c: d_c(),
            k: d_k(),
            alpha: d_alpha(),
            k_state: d_k(),
            alpha_state: d_alpha_state(),
            depth: d_depth(),
            gamma: d_gamma(),
            budget: Budget::default(),
            mutate_prob: d_u(),
            recombine_prob: d_u(),
            rollout: RolloutPolicy::default(),
            use_genetic: true,
            reuse_tree: false,
            priors: Priors::default(),
            trace: false,
        }
    }
}

impl MctsConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::config("mcts.c", "must be finite and non-negative"));
        }
        if !(self.k > 0.0 && self.k_state > 0.0) {
            return Err(Error::config("mcts.k", "widening coefficients must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0 && self.alpha_state > 0.0 && self.alpha_state <= 1.0) {
            return Err(Error::config("mcts.alpha", "widening exponents must lie in (0, 1]"));
        }
        if !unit(self.gamma) {
            return Err(Error::config("mcts.gamma", "must lie in [0, 1]"));
        }
        if !unit(self.mutate_prob) || !unit(self.recombine_prob) || self.mutate_prob + self.recombine_prob > 1.0 {
            return Err(Error::config("mcts.mutate_prob", "probabilities must lie in [0, 1] and sum to at most 1"));
        }
        match self.budget {
            Budget::Seconds(s) if !(s >= 0.0 && s.is_finite()) => {
                Err(Error::config("mcts.budget", "seconds must be finite and non-negative"))
            }
            _ => Ok(()),
        }
    }
}

/// Root statistics after one search iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: u64,
    pub root_visits: u64,
    pub root_actions: usize,
    pub best_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanOutcome {
    pub action: Action,
    /// No search statistics were available and the default policy chose.
    pub fallback: bool,
    pub iterations: u64,
    pub trace: Vec<TraceRow>,
}

/// A search driver bound to one MDP. Keeps its tree between calls when
/// `reuse_tree` is set.
#[derive(Debug, Clone)]
pub struct Mcts {
    mdp: FireMdp,
    weights: WeightMap,
    config: MctsConfig,
    tree: SearchTree,
}

impl Mcts {
    pub fn new(mdp: &FireMdp, config: MctsConfig) -> Result<Self> {
        config.validate()?;
        let weights = fw_weights(&all_pairs_distances(mdp.spread()), mdp.rewards());
        Ok(Self { mdp: mdp.clone(), weights, config, tree: SearchTree::new() })
    }

    pub fn with_weights(mdp: &FireMdp, weights: WeightMap, config: MctsConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { mdp: mdp.clone(), weights, config, tree: SearchTree::new() })
    }

    pub fn config(&self) -> &MctsConfig {
        &self.config
    }

    pub fn tree(&self) -> &SearchTree {
        &self.tree
    }

    /// Search from `root` until the budget runs out and return the tried
    /// action with the largest `Q`.
    pub fn plan<R: Rng + ?Sized>(&mut self, root: &FireState, rng: &mut R) -> PlanOutcome {
        if self.config.reuse_tree {
            self.tree.retain_reachable(root);
        } else {
            self.tree = SearchTree::new();
        }
        let mut trace = Vec::new();
        if root.is_terminal() {
            return PlanOutcome { action: Action::Idle, fallback: false, iterations: 0, trace };
        }
        if let Some(only) = self.only_action(root) {
            return PlanOutcome { action: only, fallback: false, iterations: 0, trace };
        }
        let (limit, deadline) = match self.config.budget {
            Budget::Iterations(n) => (Some(n), Deadline::none()),
            Budget::Seconds(s) => (None, Deadline::after(Some(Duration::from_secs_f64(s)))),
        };
        let mut iterations = 0;
        loop {
            if limit.is_some_and(|n| iterations >= n) || (limit.is_none() && deadline.expired()) {
                break;
            }
            self.simulate(root, self.config.depth, rng);
            iterations += 1;
            if self.config.trace {
                let node = self.tree.get(root);
                trace.push(TraceRow {
                    iteration: iterations,
                    root_visits: node.map_or(0, |n| n.visits),
                    root_actions: node.map_or(0, |n| n.actions.len()),
                    best_q: node.and_then(StateNode::best).map_or(f64::NAN, |a| a.q),
                });
            }
        }
        match self.tree.get(root).and_then(StateNode::best) {
            Some(best) => PlanOutcome { action: best.action.clone(), fallback: false, iterations, trace },
            None => {
                log::warn!("search budget produced no root statistics; using the default policy");
                let action = self.default_action(root, rng);
                PlanOutcome { action, fallback: true, iterations, trace }
            }
        }
    }

    /// The unique legal action when every team must go to the same place.
    fn only_action(&self, s: &FireState) -> Option<Action> {
        let burning = s.burning_cells();
        match (burning.len(), self.mdp.teams()) {
            (_, 0) => Some(Action::Assign(Vec::new())),
            (1, t) => Some(Action::Assign(vec![burning[0]; t])),
            _ => None,
        }
    }

    /// A draw from the default policy `pi_0`.
    fn default_action<R: Rng + ?Sized>(&self, s: &FireState, rng: &mut R) -> Action {
        match self.config.rollout {
            RolloutPolicy::Fw => fw_sample_policy(s, &self.weights, self.mdp.teams(), rng),
            RolloutPolicy::Random => random_policy(s, self.mdp.teams(), rng),
        }
    }

    /// One pass of the search from `s` with `depth` steps left.
    pub fn simulate<R: Rng + ?Sized>(&mut self, s: &FireState, depth: usize, rng: &mut R) -> f64 {
        if depth == 0 || s.is_terminal() {
            return 0.0;
        }
        let Some(id) = self.tree.id(s) else {
            self.tree.insert(s.clone(), self.config.priors.state_visits);
            return self.rollout(s, depth, rng);
        };
        let cfg = &self.config;
        let node = self.tree.node_mut(id);
        node.visits += 1;
        if (node.actions.len() as f64) < cfg.k * (node.visits as f64).powf(cfg.alpha) {
            let a = self.getnext(id, s, rng).canonical();
            let node = self.tree.node_mut(id);
            if node.find(&a).is_none() {
                let p = self.config.priors;
                node.actions.push(ActionNode { action: a, visits: p.action_visits, q: p.action_value, children: Vec::new() });
            }
        }
        let cfg = &self.config;
        let node = self.tree.node(id);
        let ai = select_ucb(node, cfg.c);
        let an = &node.actions[ai];
        let action = an.action.clone();
        let widen = an.children.is_empty() || (an.children.len() as f64) < cfg.k_state * (an.visits as f64).powf(cfg.alpha_state);
        let (next, r) = if widen {
            let (next, r) = self.mdp.step(s, &action, rng);
            let child_prior = self.config.priors.child_visits;
            let an = &mut self.tree.node_mut(id).actions[ai];
            match an.children.iter_mut().find(|c| c.state == next) {
                Some(c) => c.visits += 1,
                None => an.children.push(ChildNode { state: next.clone(), reward: r, visits: child_prior }),
            }
            (next, r)
        } else {
            let an = &mut self.tree.node_mut(id).actions[ai];
            let ci = sample_child(&an.children, rng);
            let c = &mut an.children[ci];
            c.visits += 1;
            (c.state.clone(), c.reward)
        };
        let q = r + self.config.gamma * self.simulate(&next, depth - 1, rng);
        let an = &mut self.tree.node_mut(id).actions[ai];
        an.visits += 1;
        an.q += (q - an.q) / an.visits as f64;
        q
    }

    /// Follow the default policy for `depth` steps and return the
    /// discounted reward.
    pub fn rollout<R: Rng + ?Sized>(&self, s: &FireState, depth: usize, rng: &mut R) -> f64 {
        let mut total = 0.0;
        let mut discount = 1.0;
        let mut state = s.clone();
        for _ in 0..depth {
            if state.is_terminal() {
                break;
            }
            let a = self.default_action(&state, rng);
            let (next, r) = self.mdp.step(&state, &a, rng);
            total += discount * r;
            discount *= self.config.gamma;
            state = next;
        }
        total
    }

    /// Propose a new action for the node `id` at state `s`. Duplicates of
    /// tried actions are redrawn up to ten times.
    fn getnext<R: Rng + ?Sized>(&self, id: usize, s: &FireState, rng: &mut R) -> Action {
        let node = self.tree.node(id);
        let mut a = self.propose(node, s, rng);
        for _ in 0..10 {
            if node.find(&a.clone().canonical()).is_none() {
                break;
            }
            a = self.propose(node, s, rng);
        }
        a
    }

    fn propose<R: Rng + ?Sized>(&self, node: &StateNode, s: &FireState, rng: &mut R) -> Action {
        match pick_branch(&self.config, node.actions.len(), rng) {
            Branch::Mutate => {
                let parent = tournament_select(&node.actions, rng).clone();
                mutate(&parent, s, rng)
            }
            Branch::Recombine => {
                let a = tournament_select(&node.actions, rng).clone();
                let b = tournament_select(&node.actions, rng).clone();
                recombine(&a, &b, rng)
            }
            Branch::Fresh => self.default_action(s, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Mutate,
    Recombine,
    Fresh,
}

/// Which generator proposes the next action, given `tried` actions so far.
/// Mutation needs one tried action and recombination two; otherwise the
/// default policy draws.
fn pick_branch<R: Rng + ?Sized>(cfg: &MctsConfig, tried: usize, rng: &mut R) -> Branch {
    if !cfg.use_genetic {
        return Branch::Fresh;
    }
    let u: f64 = rng.gen();
    if u < cfg.mutate_prob {
        if tried == 0 {
            Branch::Fresh
        } else {
            Branch::Mutate
        }
    } else if u < cfg.mutate_prob + cfg.recombine_prob {
        if tried < 2 {
            Branch::Fresh
        } else {
            Branch::Recombine
        }
    } else {
        Branch::Fresh
    }
}

/// `argmax_a Q(s, a) + c sqrt(ln N(s) / N(s, a))`; an action with
/// `N(s, a) = 0` has an infinite bonus. First index wins ties.
fn select_ucb(node: &StateNode, c: f64) -> usize {
    let ln_n = (node.visits.max(1) as f64).ln();
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, a) in node.actions.iter().enumerate() {
        let v = if a.visits == 0 { f64::INFINITY } else { a.q + c * (ln_n / a.visits as f64).sqrt() };
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

/// Index of a stored successor drawn in proportion to its visit count,
/// uniformly when every count is zero.
fn sample_child<R: Rng + ?Sized>(children: &[ChildNode], rng: &mut R) -> usize {
    let total: u64 = children.iter().map(|c| c.visits).sum();
    if total == 0 {
        return rng.gen_range(0..children.len());
    }
    let mut u = rng.gen_range(0..total);
    for (i, c) in children.iter().enumerate() {
        if u < c.visits {
            return i;
        }
        u -= c.visits;
    }
    children.len() - 1
}
