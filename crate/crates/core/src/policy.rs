//! A common interface over the four controllers.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluid::{MoConfig, MoPolicy};
use crate::heuristics::{fw_policy, random_policy, WeightMap};
use crate::mcts::{Mcts, MctsConfig};
use crate::mdp::{Action, FireMdp, FireState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    Random,
    Fw,
    Mcts,
    Mo,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [PolicyKind::Random, PolicyKind::Fw, PolicyKind::Mcts, PolicyKind::Mo];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Random => "random",
            PolicyKind::Fw => "fw",
            PolicyKind::Mcts => "mcts",
            PolicyKind::Mo => "mo",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::config("policies", format!("unknown policy {s:?}; expected random, fw, mcts or mo")))
    }
}

/// One decision of a controller.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub action: Action,
    /// The controller could not use its primary method and fell back to a
    /// heuristic.
    pub fallback: bool,
}

pub trait Controller {
    fn kind(&self) -> PolicyKind;
    fn decide(&mut self, state: &FireState, rng: &mut dyn RngCore) -> Decision;
}

struct RandomController {
    teams: usize,
}

impl Controller for RandomController {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Random
    }

    fn decide(&mut self, state: &FireState, rng: &mut dyn RngCore) -> Decision {
        Decision { action: random_policy(state, self.teams, rng), fallback: false }
    }
}

struct FwController {
    weights: WeightMap,
    teams: usize,
}

impl Controller for FwController {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Fw
    }

    fn decide(&mut self, state: &FireState, _rng: &mut dyn RngCore) -> Decision {
        Decision { action: fw_policy(state, &self.weights, self.teams), fallback: false }
    }
}

impl Controller for Mcts {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Mcts
    }

    fn decide(&mut self, state: &FireState, rng: &mut dyn RngCore) -> Decision {
        let out = self.plan(state, rng);
        Decision { action: out.action, fallback: out.fallback }
    }
}

impl Controller for MoPolicy {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Mo
    }

    fn decide(&mut self, state: &FireState, _rng: &mut dyn RngCore) -> Decision {
        let d = MoPolicy::decide(self, state);
        Decision { action: d.action, fallback: d.fallback }
    }
}

/// Build a controller; `weights` is the FW weight map of `mdp`.
pub fn controller(
    kind: PolicyKind,
    mdp: &FireMdp,
    weights: &WeightMap,
    mcts: &MctsConfig,
    mo: &MoConfig,
) -> Result<Box<dyn Controller + Send>> {
    Ok(match kind {
        PolicyKind::Random => Box::new(RandomController { teams: mdp.teams() }),
        PolicyKind::Fw => Box::new(FwController { weights: weights.clone(), teams: mdp.teams() }),
        PolicyKind::Mcts => Box::new(Mcts::with_weights(mdp, weights.clone(), mcts.clone())?),
        PolicyKind::Mo => Box::new(MoPolicy::with_weights(mdp, weights.clone(), mo.clone())?),
    })
}
