use std::path::Path;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::generate::{gen_grid1_initial, gen_grid2_initial, grid1_fuel, grid1_rewards, grid2_rewards};
use crate::error::{Error, Result};
use crate::fluid::MoConfig;
use crate::grid::{GridSpec, Neighborhood};
use crate::mcts::MctsConfig;
use crate::mdp::{FireMdp, FireState, RewardModel, SpreadModel};
use crate::policy::PolicyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Fire grown from the lower-left corner; reward grows toward the
    /// upper right.
    Grid1,
    /// Fire grown from the centre; reward decays exponentially with the
    /// column.
    Grid2,
    /// Explicit rewards, fuel and burning map.
    Custom,
}

/// A scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub family: Family,
    /// Grid width; also the height unless `height` is given (custom only).
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    pub teams: usize,
    #[serde(default)]
    pub neighborhood: Neighborhood,
    #[serde(default, alias = "P_default", skip_serializing_if = "Option::is_none")]
    pub p_default: Option<f64>,
    #[serde(default, alias = "Q_default", skip_serializing_if = "Option::is_none")]
    pub q_default: Option<f64>,
    /// Reward decay rate (grid2 only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuel: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burning: Option<Vec<bool>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<Vec<PolicyKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_cap: Option<usize>,
    #[serde(default)]
    pub mcts: MctsConfig,
    #[serde(default)]
    pub mo: MoConfig,
}

fn default_reps() -> usize {
    256
}

impl Scenario {
    /// A Grid 1 scenario with the default parameters.
    pub fn grid1(k: usize, teams: usize) -> Self {
        Self::bare(Family::Grid1, k, teams)
    }

    /// A Grid 2 scenario with the default parameters.
    pub fn grid2(k: usize, teams: usize, lambda: f64) -> Self {
        Self { lambda: Some(lambda), ..Self::bare(Family::Grid2, k, teams) }
    }

    fn bare(family: Family, k: usize, teams: usize) -> Self {
        Self {
            family,
            k,
            height: None,
            teams,
            neighborhood: Neighborhood::default(),
            p_default: None,
            q_default: None,
            lambda: None,
            rewards: None,
            fuel: None,
            burning: None,
            seed: 0,
            reps: default_reps(),
            policies: None,
            step_cap: None,
            mcts: MctsConfig::default(),
            mo: MoConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    pub fn height(&self) -> usize {
        self.height.unwrap_or(self.k)
    }

    pub fn p(&self) -> f64 {
        self.p_default.unwrap_or(match self.family {
            Family::Grid1 => 0.06,
            Family::Grid2 => 0.02,
            Family::Custom => 0.06,
        })
    }

    pub fn q(&self) -> f64 {
        self.q_default.unwrap_or(0.8)
    }

    pub fn validate(&self) -> Result<()> {
        let custom = self.family == Family::Custom;
        let grid = !custom;
        if grid && self.k < 2 {
            return Err(Error::config("k", "generated grids need k >= 2"));
        }
        if grid && self.height.is_some() {
            return Err(Error::config("height", "only custom scenarios may set a height"));
        }
        GridSpec::new(self.k, self.height(), self.neighborhood)?;
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.p()) {
            return Err(Error::config("p_default", "must lie in [0, 1]"));
        }
        if grid && self.p() <= 0.0 {
            return Err(Error::config("p_default", "generated grids need a positive spread probability"));
        }
        if !unit(self.q()) {
            return Err(Error::config("q_default", "must lie in [0, 1]"));
        }
        match (self.family, self.lambda) {
            (Family::Grid2, None) => return Err(Error::config("lambda", "grid2 requires lambda")),
            (Family::Grid2, Some(l)) if !(l > 0.0 && l.is_finite()) => {
                return Err(Error::config("lambda", "must be positive and finite"))
            }
            (Family::Grid1 | Family::Custom, Some(_)) => {
                return Err(Error::config("lambda", "only grid2 scenarios take lambda"))
            }
            _ => {}
        }
        let cells = self.k * self.height();
        for (field, len) in [
            ("rewards", self.rewards.as_ref().map(Vec::len)),
            ("fuel", self.fuel.as_ref().map(Vec::len)),
            ("burning", self.burning.as_ref().map(Vec::len)),
        ] {
            match (custom, len) {
                (true, None) => return Err(Error::config(field, "custom scenarios must list it")),
                (true, Some(n)) if n != cells => {
                    return Err(Error::config(field, format!("expected {cells} entries, found {n}")))
                }
                (false, Some(_)) => return Err(Error::config(field, "only custom scenarios take explicit arrays")),
                _ => {}
            }
        }
        if let Some(r) = &self.rewards {
            if r.iter().any(|&v| !(v <= 0.0 && v.is_finite())) {
                return Err(Error::config("rewards", "every reward must be finite and non-positive"));
            }
        }
        if self.reps == 0 {
            return Err(Error::config("reps", "must be at least 1"));
        }
        if self.step_cap == Some(0) {
            return Err(Error::config("step_cap", "must be at least 1"));
        }
        self.mcts.validate()?;
        self.mo.validate()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.k, self.height(), self.neighborhood)
    }

    pub fn mdp(&self) -> Result<FireMdp> {
        let grid = self.grid()?;
        let spread = SpreadModel::uniform(&grid, self.p(), self.q())?;
        let rewards = match self.family {
            Family::Grid1 => grid1_rewards(&grid),
            Family::Grid2 => grid2_rewards(&grid, self.lambda.unwrap_or(0.0))?,
            Family::Custom => RewardModel::new(self.rewards.clone().unwrap_or_default())?,
        };
        FireMdp::new(grid, spread, rewards, self.teams)
    }

    /// The starting state, grown with `rng` for the generated families.
    pub fn initial_state(&self, mdp: &FireMdp, rng: &mut dyn RngCore) -> Result<FireState> {
        match self.family {
            Family::Grid1 => gen_grid1_initial(mdp, rng),
            Family::Grid2 => gen_grid2_initial(mdp, rng),
            Family::Custom => FireState::new(self.burning.clone().unwrap_or_default(), self.fuel.clone().unwrap_or_default()),
        }
    }

    /// Episode length guard: ten times the Grid 1 generation horizon
    /// `floor(k / (2P))`. Custom scenarios also allow ten times the largest
    /// fuel level plus one.
    pub fn step_cap(&self) -> usize {
        if let Some(cap) = self.step_cap {
            return cap;
        }
        let horizon = if self.p() > 0.0 { grid1_fuel(self.k, self.p()) as usize } else { 0 };
        match self.family {
            Family::Custom => {
                let fuel = self.fuel.as_ref().and_then(|f| f.iter().max()).copied().unwrap_or(0) as usize;
                10 * horizon.max(fuel + 1)
            }
            _ => 10 * horizon,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid2_needs_lambda() {
        let err = Scenario::from_json(r#"{"family": "grid2", "k": 9, "teams": 2}"#).unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");
    }

    #[test]
    fn unknown_field_is_named() {
        let err = Scenario::from_json(r#"{"family": "grid1", "k": 8, "teams": 2, "wind": 3}"#).unwrap_err();
        assert!(err.to_string().contains("wind"), "{err}");
    }

    #[test]
    fn custom_arrays_must_match() {
        let text = r#"{"family": "custom", "k": 3, "height": 1, "teams": 1,
            "rewards": [-1, -1, -10], "fuel": [2, 2], "burning": [true, false, false]}"#;
        let err = Scenario::from_json(text).unwrap_err();
        assert!(err.to_string().contains("fuel"), "{err}");
    }

    #[test]
    fn defaults_per_family() {
        let s = Scenario::grid1(8, 4);
        assert_eq!(s.p(), 0.06);
        assert_eq!(s.q(), 0.8);
        assert_eq!(s.step_cap(), 660);
        assert_eq!(Scenario::grid2(9, 2, 0.2).p(), 0.02);
    }

    #[test]
    fn json_round_trip() {
        let s = Scenario::grid2(9, 3, 0.25);
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }
}
