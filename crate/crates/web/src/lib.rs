//! Browser bindings: step a Grid 1 fire under a chosen controller, show the
//! FW weight map, and evaluate the action branching factor.
//!
//! Planners run with iteration budgets only, since the browser target has
//! no monotonic clock.

use fireplan::harness::{branching_factor as branching, Experiment, Scenario};
use fireplan::mcts::Budget;
use fireplan::policy::{controller, PolicyKind};
use fireplan::FireState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct FireDemo {
    exp: Experiment,
    state: FireState,
    rng: ChaCha8Rng,
    total: f64,
    steps: u32,
    last_action: Vec<u32>,
}

#[wasm_bindgen]
impl FireDemo {
    /// A Grid 1 fire of side `k` grown from `seed`, fought by `teams` teams.
    #[wasm_bindgen(constructor)]
    pub fn new(k: usize, teams: usize, seed: u64) -> Result<FireDemo, JsError> {
        let mut s = Scenario::grid1(k, teams);
        s.seed = seed;
        s.mcts.budget = Budget::Iterations(300);
        s.mcts.depth = 6;
        s.mo.time_limit = None;
        s.mo.horizon = 6;
        let exp = Experiment::new(s).map_err(js_err)?;
        let state = exp.initial_state(seed).map_err(js_err)?;
        Ok(FireDemo { exp, state, rng: ChaCha8Rng::seed_from_u64(seed), total: 0.0, steps: 0, last_action: Vec::new() })
    }

    pub fn width(&self) -> usize {
        self.exp.mdp().grid().width()
    }

    pub fn burning(&self) -> Vec<u8> {
        self.state.burning().iter().map(|&b| u8::from(b)).collect()
    }

    pub fn fuel(&self) -> Vec<u32> {
        self.state.fuel().to_vec()
    }

    /// Cells targeted by the last decision, one entry per team.
    pub fn last_action(&self) -> Vec<u32> {
        self.last_action.clone()
    }

    pub fn total_reward(&self) -> f64 {
        self.total
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn done(&self) -> bool {
        self.state.is_terminal()
    }

    /// Advance one step with `policy` (random, fw, mcts or mo).
    pub fn step(&mut self, policy: &str) -> Result<(), JsError> {
        if self.state.is_terminal() {
            return Ok(());
        }
        let kind: PolicyKind = policy.parse().map_err(js_err)?;
        let s = self.exp.scenario();
        let mut ctl = controller(kind, self.exp.mdp(), self.exp.weights(), &s.mcts, &s.mo).map_err(js_err)?;
        let d = ctl.decide(&self.state, &mut self.rng);
        let (next, r) = self.exp.mdp().step(&self.state, &d.action, &mut self.rng);
        self.last_action = d.action.targets().iter().map(|&c| c as u32).collect();
        self.state = next;
        self.total += r;
        self.steps += 1;
        Ok(())
    }
}

/// FW weight `W(x)` of every cell of a `k x k` Grid 1 map, row-major from
/// the lower-left corner. Suppression priority is `-W(x)`.
#[wasm_bindgen]
pub fn fw_weight_map(k: usize) -> Result<Vec<f64>, JsError> {
    let exp = Experiment::new(Scenario::grid1(k, 1)).map_err(js_err)?;
    Ok(exp.weights().weights().to_vec())
}

/// `[exact, stirling]` action branching factor.
#[wasm_bindgen]
pub fn branching_factor(n_burning: f64, teams: usize) -> Result<Vec<f64>, JsError> {
    if teams == 0 {
        return Err(JsError::new("teams must be at least 1"));
    }
    let b = branching(n_burning, teams);
    Ok(vec![b.exact, b.stirling])
}
