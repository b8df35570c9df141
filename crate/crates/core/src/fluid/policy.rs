use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{build_model, calibrate, fixed_flag_lp, reference_trajectory, FluidModel, ModelOptions};
use crate::heuristics::{all_pairs_distances, fw_policy, fw_weights, WeightMap};
use crate::lp::{solve_lp, solve_milp, LpStatus, MilpOptions, MilpStatus, SimplexOptions};
use crate::mdp::{Action, FireMdp, FireState};
use crate::error::{Error, Result};
use crate::time::Deadline;

/// How the fuel flags are treated when scoring cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZMode {
    /// `Binary` when there are at most `binary_cap` flags, else `Fixed`.
    #[default]
    Auto,
    /// Keep the flags binary and branch on them; assignments stay relaxed.
    Binary,
    /// Fix the flags from a no-suppression reference trajectory and solve a
    /// single LP.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreOutcome {
    pub action: Action,
    /// `v(x) = sum_i A_0(x, i)` from the relaxation (empty on fallback).
    pub scores: Vec<f64>,
    /// The heuristic action was used instead of the relaxation.
    pub fallback: bool,
    /// `Binary` or `Fixed`, whichever produced the scores.
    pub z_mode: ZMode,
    pub objective: f64,
    pub lp_iterations: usize,
}

/// Solve the relaxation with continuous assignments and send the teams to
/// the burning cells with the largest first-period assignment mass.
///
/// Falls back to the FW action when the relaxation fails or puts no mass on
/// any burning cell.
pub fn relax_and_score(
    model: &FluidModel,
    state: &FireState,
    weights: &WeightMap,
    time_limit: Option<Duration>,
    z_mode: ZMode,
    binary_cap: usize,
) -> ScoreOutcome {
    let teams = model.layout.teams;
    let fallback = |z_mode, iters| ScoreOutcome {
        action: fw_policy(state, weights, teams),
        scores: Vec::new(),
        fallback: true,
        z_mode,
        objective: f64::NAN,
        lp_iterations: iters,
    };
    if state.is_terminal() {
        return ScoreOutcome {
            action: Action::Idle,
            scores: Vec::new(),
            fallback: false,
            z_mode,
            objective: 0.0,
            lp_iterations: 0,
        };
    }
    let deadline = Deadline::after(time_limit);
    let l = model.layout;
    let n_flags = (l.horizon + 1) * l.cells;
    let use_binary = match z_mode {
        ZMode::Binary => true,
        ZMode::Fixed => false,
        ZMode::Auto => n_flags <= binary_cap,
    };
    let mut iters = 0;
    let mut solution: Option<(Vec<f64>, f64, ZMode)> = None;
    if use_binary {
        let mut relaxed = model.problem.clone();
        for (j, col) in relaxed.columns.iter_mut().enumerate() {
            if l.is_assign(j) {
                col.integer = false;
            }
        }
        let opts = MilpOptions {
            lp: SimplexOptions::default(),
            time_limit: deadline.remaining(),
            ..MilpOptions::default()
        };
        let s = solve_milp(&relaxed, &opts);
        iters += s.lp_iterations;
        if matches!(s.status, MilpStatus::Optimal | MilpStatus::TimeLimit) {
            solution = Some((s.x, s.objective, ZMode::Binary));
        } else {
            log::debug!("binary fuel flags gave {:?}; fixing them instead", s.status);
        }
    }
    if solution.is_none() {
        let reference = reference_trajectory(&model.calibration);
        match fixed_flag_lp(model, &reference.spent) {
            Some(reduced) => {
                let opts = SimplexOptions { time_limit: deadline.remaining(), ..SimplexOptions::default() };
                let s = solve_lp(&reduced.problem, &opts);
                iters += s.iterations;
                if s.status == LpStatus::Optimal {
                    solution = Some((reduced.expand(model, &s.x), s.objective + reduced.offset, ZMode::Fixed));
                } else {
                    log::warn!("fluid relaxation ended with {:?}; using the FW action", s.status);
                }
            }
            None => log::warn!("reference fuel flags contradict the initial state; using the FW action"),
        }
    }
    let Some((x, objective, used)) = solution else {
        return fallback(z_mode, iters);
    };
    let scores: Vec<f64> = (0..l.cells).map(|c| (0..teams).map(|i| x[l.assign(0, c, i)]).sum()).collect();
    let mut ranked: Vec<usize> = state.burning_cells().into_iter().filter(|&c| scores[c] > 1e-9).collect();
    ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    if teams > 0 && ranked.is_empty() {
        log::debug!("relaxation assigns no mass to a burning cell; using the FW action");
        let mut out = fallback(used, iters);
        out.scores = scores;
        return out;
    }
    let action = Action::Assign((0..teams).map(|i| if i < ranked.len() { ranked[i] } else { ranked[0] }).collect());
    ScoreOutcome { action, scores, fallback: false, z_mode: used, objective, lp_iterations: iters }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoConfig {
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Seconds per decision; `None` is unlimited.
    #[serde(default = "default_time_limit")]
    pub time_limit: Option<f64>,
    #[serde(default)]
    pub z_mode: ZMode,
    #[serde(default = "default_binary_cap")]
    pub binary_cap: usize,
    #[serde(default)]
    pub model: ModelOptions,
}

fn default_horizon() -> usize {
    10
}
fn default_delta() -> f64 {
    0.1
}
fn default_time_limit() -> Option<f64> {
    Some(60.0)
}
fn default_binary_cap() -> usize {
    48
}

impl Default for MoConfig {
    fn default() -> Self {
        Self {
            horizon: default_horizon(),
            delta: default_delta(),
            time_limit: default_time_limit(),
            z_mode: ZMode::default(),
            binary_cap: default_binary_cap(),
            model: ModelOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoDecision {
    pub action: Action,
    pub fallback: bool,
    pub outcome: Option<ScoreOutcome>,
}

/// Receding-horizon controller: calibrate, build, relax and score at every
/// decision epoch.
#[derive(Debug, Clone)]
pub struct MoPolicy {
    mdp: FireMdp,
    weights: WeightMap,
    config: MoConfig,
}

impl MoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("mo.horizon", "must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::config("mo.delta", "must be positive and finite"));
        }
        if self.time_limit.is_some_and(|t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::config("mo.time_limit", "must be non-negative and finite"));
        }
        Ok(())
    }
}

impl MoPolicy {
    pub fn new(mdp: &FireMdp, config: MoConfig) -> Result<Self> {
        let weights = fw_weights(&all_pairs_distances(mdp.spread()), mdp.rewards());
        Self::with_weights(mdp, weights, config)
    }

    pub fn with_weights(mdp: &FireMdp, weights: WeightMap, config: MoConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { mdp: mdp.clone(), weights, config })
    }

    pub fn config(&self) -> &MoConfig {
        &self.config
    }

    pub fn model_for(&self, state: &FireState) -> FluidModel {
        let calib = calibrate(&self.mdp, state, self.config.horizon, self.config.delta);
        build_model(&calib, self.mdp.rewards().as_slice(), self.mdp.teams(), self.config.model)
    }

    pub fn decide(&self, state: &FireState) -> MoDecision {
        if state.is_terminal() {
            return MoDecision { action: Action::Idle, fallback: false, outcome: None };
        }
        let limit = self.config.time_limit.map(Duration::from_secs_f64);
        let model = self.model_for(state);
        let out = relax_and_score(&model, state, &self.weights, limit, self.config.z_mode, self.config.binary_cap);
        MoDecision { action: out.action.clone(), fallback: out.fallback, outcome: Some(out) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, Neighborhood};
    use crate::mdp::{RewardModel, SpreadModel};

    #[test]
    fn idle_without_fire() {
        let g = GridSpec::square(2).unwrap();
        let mdp = FireMdp::new(g, SpreadModel::uniform(&g, 0.06, 0.8).unwrap(), RewardModel::uniform(4, -1.0).unwrap(), 1)
            .unwrap();
        let p = MoPolicy::new(&mdp, MoConfig::default()).unwrap();
        assert_eq!(p.decide(&FireState::unburnt(4, 3)).action, Action::Idle);
    }

    #[test]
    fn single_burning_cell_gets_every_team() {
        let g = GridSpec::new(3, 1, Neighborhood::FourConnected).unwrap();
        let mdp = FireMdp::new(g, SpreadModel::uniform(&g, 0.3, 0.8).unwrap(), RewardModel::uniform(3, -1.0).unwrap(), 2)
            .unwrap();
        let s = FireState::new(vec![false, true, false], vec![4; 3]).unwrap();
        let p = MoPolicy::new(&mdp, MoConfig { horizon: 3, ..MoConfig::default() }).unwrap();
        let d = p.decide(&s);
        assert!(!d.fallback, "{d:?}");
        assert_eq!(d.action, Action::Assign(vec![1, 1]));
    }
}
