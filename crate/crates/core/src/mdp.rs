//! The wildfire suppression MDP.
//!
//! Each cell carries a burning flag and an integer fuel level. A non-burning
//! cell with fuel ignites with probability `1 - prod_y (1 - P(x,y) B(y))`; a
//! burning cell is extinguished with probability `1 - prod_i (1 - Q(x) [a_i = x])`,
//! or with certainty once its fuel is gone. Burning cells consume one unit of
//! fuel per step. All cells update synchronously from the pre-step state.
//!
//! The step reward is `sum_x B(x) R(x)` over the cells burning *before* the
//! transition, so a cell suppressed at step `t` stops costing from `t + 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Default cap on the number of stochastic cells for exact enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Ignition probabilities `P(x, y)` and suppression success `Q(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadModel {
    /// For each cell `x`, the cells `y` with `P(x, y) > 0` and that probability.
    sources: Vec<Vec<(usize, f64)>>,
    suppression: Vec<f64>,
}

fn check_probability(field: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::config(field, format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

impl SpreadModel {
    /// Same ignition probability across every adjacent pair and the same
    /// suppression probability on every cell.
    pub fn uniform(grid: &GridSpec, p: f64, q: f64) -> Result<Self> {
        check_probability("P_default", p)?;
        check_probability("Q_default", q)?;
        let sources = (0..grid.len())
            .map(|x| {
                if p > 0.0 {
                    grid.neighbors(x).into_iter().map(|y| (y, p)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Ok(Self { sources, suppression: vec![q; grid.len()] })
    }

    /// Arbitrary (e.g. wind-skewed) spread. `sources[x]` lists `(y, P(x, y))`;
    /// every `y` must be adjacent to `x`. Zero entries are dropped.
    pub fn from_parts(grid: &GridSpec, sources: Vec<Vec<(usize, f64)>>, suppression: Vec<f64>) -> Result<Self> {
        if sources.len() != grid.len() || suppression.len() != grid.len() {
            return Err(Error::Model(format!(
                "spread model sized for {} / {} cells, grid has {}",
                sources.len(),
                suppression.len(),
                grid.len()
            )));
        }
        let mut cleaned = Vec::with_capacity(sources.len());
        for (x, list) in sources.into_iter().enumerate() {
            let adjacent = grid.neighbors(x);
            let mut kept = Vec::with_capacity(list.len());
            for (y, p) in list {
                check_probability("P", p)?;
                if !adjacent.contains(&y) {
                    return Err(Error::Model(format!("P({x}, {y}) > 0 but {y} is not adjacent to {x}")));
                }
                if p > 0.0 {
                    kept.push((y, p));
                }
            }
            kept.sort_by_key(|&(y, _)| y);
            kept.dedup_by_key(|&mut (y, _)| y);
            cleaned.push(kept);
        }
        for &q in &suppression {
            check_probability("Q", q)?;
        }
        Ok(Self { sources: cleaned, suppression })
    }

    pub fn len(&self) -> usize {
        self.suppression.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suppression.is_empty()
    }

    /// `(y, P(x, y))` for every `y` that can ignite `x`.
    pub fn sources(&self, x: usize) -> &[(usize, f64)] {
        &self.sources[x]
    }

    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.sources[x].iter().find(|&&(s, _)| s == y).map_or(0.0, |&(_, p)| p)
    }

    pub fn q(&self, x: usize) -> f64 {
        self.suppression[x]
    }

    /// The common ignition probability if every nonzero `P(x, y)` is equal.
    pub fn uniform_p(&self) -> Option<f64> {
        let mut it = self.sources.iter().flatten().map(|&(_, p)| p);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }
}

/// Per-cell reward received while a cell burns. Never positive.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardModel(Vec<f64>);

impl RewardModel {
    pub fn new(rewards: Vec<f64>) -> Result<Self> {
        if let Some((x, r)) = rewards.iter().enumerate().find(|(_, r)| !(r.is_finite() && **r <= 0.0)) {
            return Err(Error::config("rewards", format!("cell {x} has reward {r}; rewards must be finite and <= 0")));
        }
        Ok(Self(rewards))
    }

    pub fn uniform(cells: usize, r: f64) -> Result<Self> {
        Self::new(vec![r; cells])
    }

    pub fn get(&self, x: usize) -> f64 {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Burning flags and remaining fuel for every cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FireState {
    burning: Vec<bool>,
    fuel: Vec<u32>,
}

impl FireState {
    pub fn new(burning: Vec<bool>, fuel: Vec<u32>) -> Result<Self> {
        if burning.len() != fuel.len() {
            return Err(Error::Model(format!(
                "burning map has {} cells but fuel map has {}",
                burning.len(),
                fuel.len()
            )));
        }
        Ok(Self { burning, fuel })
    }

    /// Nothing burning, the same fuel everywhere.
    pub fn unburnt(cells: usize, fuel: u32) -> Self {
        Self { burning: vec![false; cells], fuel: vec![fuel; cells] }
    }

    pub fn len(&self) -> usize {
        self.fuel.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fuel.is_empty()
    }

    pub fn burning(&self) -> &[bool] {
        &self.burning
    }

    pub fn fuel(&self) -> &[u32] {
        &self.fuel
    }

    pub fn is_burning(&self, x: usize) -> bool {
        self.burning[x]
    }

    pub fn fuel_at(&self, x: usize) -> u32 {
        self.fuel[x]
    }

    pub fn set_burning(&mut self, x: usize, on: bool) {
        self.burning[x] = on;
    }

    pub fn set_fuel(&mut self, x: usize, fuel: u32) {
        self.fuel[x] = fuel;
    }

    pub fn burning_cells(&self) -> Vec<usize> {
        self.burning.iter().enumerate().filter(|(_, &b)| b).map(|(x, _)| x).collect()
    }

    pub fn n_burning(&self) -> usize {
        self.burning.iter().filter(|&&b| b).count()
    }

    /// No cell is burning; nothing can ever ignite again.
    pub fn is_terminal(&self) -> bool {
        !self.burning.iter().any(|&b| b)
    }
}

/// One target cell per suppression team, or `Idle` when there is nothing to
/// fight. Several teams may share a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Idle,
    Assign(Vec<usize>),
}

impl Action {
    pub fn targets(&self) -> &[usize] {
        match self {
            Action::Idle => &[],
            Action::Assign(cells) => cells,
        }
    }

    pub fn teams_on(&self, x: usize) -> usize {
        self.targets().iter().filter(|&&c| c == x).count()
    }

    /// Teams are interchangeable; sorting the targets gives one
    /// representative per multiset of assignments.
    pub fn canonical(self) -> Self {
        match self {
            Action::Idle => Action::Idle,
            Action::Assign(mut cells) => {
                cells.sort_unstable();
                Action::Assign(cells)
            }
        }
    }

    pub fn validate(&self, grid: &GridSpec, teams: usize) -> Result<()> {
        match self {
            Action::Idle => Ok(()),
            Action::Assign(cells) => {
                if cells.len() != teams {
                    return Err(Error::Model(format!("action assigns {} teams, expected {teams}", cells.len())));
                }
                match cells.iter().find(|&&c| !grid.contains(c)) {
                    Some(c) => Err(Error::Model(format!("action targets cell {c} outside the grid"))),
                    None => Ok(()),
                }
            }
        }
    }
}

/// `rho_1`: probability that `x` ignites this step.
pub fn ignition_prob(state: &FireState, spread: &SpreadModel, x: usize) -> f64 {
    if state.fuel_at(x) == 0 {
        return 0.0;
    }
    let survive: f64 = spread
        .sources(x)
        .iter()
        .filter(|&&(y, _)| state.is_burning(y))
        .map(|&(_, p)| 1.0 - p)
        .product();
    1.0 - survive
}

/// `rho_2`: probability that a burning `x` is extinguished this step.
pub fn extinguish_prob(state: &FireState, spread: &SpreadModel, action: &Action, x: usize) -> f64 {
    if state.fuel_at(x) == 0 {
        return 1.0;
    }
    let teams = action.teams_on(x) as i32;
    1.0 - (1.0 - spread.q(x)).powi(teams)
}

/// One possible successor of a `(state, action)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: FireState,
    pub probability: f64,
    pub reward: f64,
}

/// The generative model: grid, dynamics parameters, rewards and team count.
#[derive(Debug, Clone)]
pub struct FireMdp {
    grid: GridSpec,
    spread: SpreadModel,
    rewards: RewardModel,
    teams: usize,
}

impl FireMdp {
    pub fn new(grid: GridSpec, spread: SpreadModel, rewards: RewardModel, teams: usize) -> Result<Self> {
        if spread.len() != grid.len() {
            return Err(Error::Model(format!("spread model has {} cells, grid has {}", spread.len(), grid.len())));
        }
        if rewards.len() != grid.len() {
            return Err(Error::config(
                "rewards",
                format!("expected {} entries, found {}", grid.len(), rewards.len()),
            ));
        }
        Ok(Self { grid, spread, rewards, teams })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spread(&self) -> &SpreadModel {
        &self.spread
    }

    pub fn rewards(&self) -> &RewardModel {
        &self.rewards
    }

    pub fn teams(&self) -> usize {
        self.teams
    }

    /// A copy of this MDP with a different number of teams.
    pub fn with_teams(&self, teams: usize) -> Self {
        Self { teams, ..self.clone() }
    }

    pub fn ignition_prob(&self, state: &FireState, x: usize) -> f64 {
        ignition_prob(state, &self.spread, x)
    }

    pub fn extinguish_prob(&self, state: &FireState, action: &Action, x: usize) -> f64 {
        extinguish_prob(state, &self.spread, action, x)
    }

    /// Probability that cell `x` changes its burning flag this step.
    fn flip_prob(&self, state: &FireState, action: &Action, x: usize) -> f64 {
        if state.is_burning(x) {
            self.extinguish_prob(state, action, x)
        } else {
            self.ignition_prob(state, x)
        }
    }

    /// `sum_x B(x) R(x)` for the given burning set.
    pub fn reward(&self, state: &FireState) -> f64 {
        state
            .burning()
            .iter()
            .zip(self.rewards.as_slice())
            .filter(|(&b, _)| b)
            .map(|(_, &r)| r)
            .sum()
    }

    fn next_fuel(state: &FireState) -> Vec<u32> {
        state
            .fuel()
            .iter()
            .zip(state.burning())
            .map(|(&f, &b)| if b && f > 0 { f - 1 } else { f })
            .collect()
    }

    /// Sample `(s', r) ~ G(s, a)`.
    ///
    /// Only cells whose flip probability lies strictly inside (0, 1) consume
    /// a uniform draw, in ascending cell order.
    pub fn step<R: Rng + ?Sized>(&self, state: &FireState, action: &Action, rng: &mut R) -> (FireState, f64) {
        debug_assert!(action.validate(&self.grid, self.teams).is_ok(), "invalid action {action:?}");
        let reward = self.reward(state);
        let burning = (0..state.len())
            .map(|x| {
                let rho = self.flip_prob(state, action, x);
                let flip = if rho <= 0.0 {
                    false
                } else if rho >= 1.0 {
                    true
                } else {
                    rng.gen::<f64>() < rho
                };
                state.is_burning(x) != flip
            })
            .collect();
        (FireState { burning, fuel: Self::next_fuel(state) }, reward)
    }

    /// The exact successor distribution. Fails if more than `cap` cells are
    /// stochastic, since the outcome count is `2^stochastic`.
    pub fn enumerate_transitions(&self, state: &FireState, action: &Action, cap: usize) -> Result<Vec<Transition>> {
        let rhos: Vec<f64> = (0..state.len()).map(|x| self.flip_prob(state, action, x)).collect();
        let stochastic: Vec<usize> = (0..state.len()).filter(|&x| rhos[x] > 0.0 && rhos[x] < 1.0).collect();
        if stochastic.len() > cap || stochastic.len() >= usize::BITS as usize {
            return Err(Error::TooLargeToEnumerate { stochastic: stochastic.len(), cap });
        }
        let reward = self.reward(state);
        let fuel = Self::next_fuel(state);
        let base: Vec<bool> = (0..state.len()).map(|x| state.is_burning(x) != (rhos[x] >= 1.0)).collect();
        let outcomes = 1usize << stochastic.len();
        let mut out = Vec::with_capacity(outcomes);
        for mask in 0..outcomes {
            let mut burning = base.clone();
            let mut probability = 1.0;
            for (bit, &x) in stochastic.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    burning[x] = !state.is_burning(x);
                    probability *= rhos[x];
                } else {
                    probability *= 1.0 - rhos[x];
                }
            }
            out.push(Transition { state: FireState { burning, fuel: fuel.clone() }, probability, reward });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize, p: f64, q: f64) -> FireMdp {
        let grid = GridSpec::new(n, 1, crate::grid::Neighborhood::FourConnected).unwrap();
        FireMdp::new(grid, SpreadModel::uniform(&grid, p, q).unwrap(), RewardModel::uniform(n, -1.0).unwrap(), 1)
            .unwrap()
    }

    #[test]
    fn ignition_examples() {
        let mdp = line(3, 0.06, 0.8);
        let mut s = FireState::new(vec![true, false, false], vec![5, 5, 5]).unwrap();
        assert!((mdp.ignition_prob(&s, 1) - 0.06).abs() < 1e-15);
        s.set_burning(2, true);
        // 1 - 0.94^2
        assert!((mdp.ignition_prob(&s, 1) - 0.1164).abs() < 1e-12);
        s.set_fuel(1, 0);
        assert_eq!(mdp.ignition_prob(&s, 1), 0.0);
    }

    #[test]
    fn extinguish_examples() {
        let mdp = line(2, 0.06, 0.8);
        let s = FireState::new(vec![true, true], vec![0, 4]).unwrap();
        let a = Action::Assign(vec![1]);
        assert_eq!(mdp.extinguish_prob(&s, &a, 0), 1.0);
        assert_eq!(mdp.extinguish_prob(&s, &Action::Assign(vec![0]), 1), 0.0);
        let two = mdp.with_teams(2);
        let a2 = Action::Assign(vec![1, 1]);
        assert!((two.extinguish_prob(&s, &a2, 1) - 0.96).abs() < 1e-12);
    }

    #[test]
    fn fuel_decrements_only_while_burning() {
        let mdp = line(2, 0.0, 0.0);
        let s = FireState::new(vec![true, false], vec![3, 5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (next, r) = mdp.step(&s, &Action::Assign(vec![1]), &mut rng);
        assert_eq!(next.fuel(), &[2, 5]);
        assert_eq!(r, -1.0);
    }

    #[test]
    fn all_burning_reward() {
        let grid = GridSpec::square(2).unwrap();
        let mdp = FireMdp::new(
            grid,
            SpreadModel::uniform(&grid, 0.06, 0.8).unwrap(),
            RewardModel::uniform(4, -1.0).unwrap(),
            0,
        )
        .unwrap();
        let s = FireState::new(vec![true; 4], vec![3; 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (_, r) = mdp.step(&s, &Action::Assign(vec![]), &mut rng);
        assert_eq!(r, -4.0);
    }

    #[test]
    fn burnt_out_cell_extinguishes_next_step() {
        let mdp = line(1, 0.06, 0.8);
        let s = FireState::new(vec![true], vec![0]).unwrap();
        assert!(!s.is_terminal());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (next, _) = mdp.step(&s, &Action::Assign(vec![0]), &mut rng);
        assert!(next.is_terminal());
    }

    #[test]
    fn enumeration_of_deterministic_state() {
        let mdp = line(2, 0.0, 0.8);
        let s = FireState::new(vec![true, false], vec![2, 2]).unwrap();
        let t = mdp.enumerate_transitions(&s, &Action::Assign(vec![1]), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].probability, 1.0);
    }

    #[test]
    fn enumeration_single_bernoulli() {
        let mdp = line(2, 0.06, 0.8);
        let s = FireState::new(vec![true, false], vec![0, 2]).unwrap();
        let t = mdp.enumerate_transitions(&s, &Action::Assign(vec![0]), DEFAULT_ENUMERATION_CAP).unwrap();
        let mut probs: Vec<f64> = t.iter().map(|t| t.probability).collect();
        probs.sort_by(f64::total_cmp);
        assert_eq!(probs.len(), 2);
        assert!((probs[0] - 0.06).abs() < 1e-15 && (probs[1] - 0.94).abs() < 1e-15);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let grid = GridSpec::square(5).unwrap();
        let mdp = FireMdp::new(
            grid,
            SpreadModel::uniform(&grid, 0.5, 0.8).unwrap(),
            RewardModel::uniform(25, -1.0).unwrap(),
            0,
        )
        .unwrap();
        let burning = (0..25).map(|x| x % 2 == 0).collect();
        let s = FireState::new(burning, vec![3; 25]).unwrap();
        let err = mdp.enumerate_transitions(&s, &Action::Assign(vec![]), 4).unwrap_err();
        assert!(matches!(err, Error::TooLargeToEnumerate { cap: 4, .. }));
    }

    #[test]
    fn positive_reward_rejected() {
        assert!(RewardModel::new(vec![-1.0, 0.5]).is_err());
        assert!(RewardModel::new(vec![-1.0, 0.0]).is_ok());
    }

    #[test]
    fn spread_rejects_non_adjacent_sources() {
        let grid = GridSpec::square(3).unwrap();
        let mut sources = vec![Vec::new(); 9];
        sources[0] = vec![(8, 0.1)];
        assert!(SpreadModel::from_parts(&grid, sources, vec![0.5; 9]).is_err());
    }

    #[test]
    fn action_validation() {
        let grid = GridSpec::square(2).unwrap();
        assert!(Action::Assign(vec![0, 3]).validate(&grid, 2).is_ok());
        assert!(Action::Assign(vec![0]).validate(&grid, 2).is_err());
        assert!(Action::Assign(vec![4, 0]).validate(&grid, 2).is_err());
        assert_eq!(Action::Assign(vec![3, 0, 3]).canonical(), Action::Assign(vec![0, 3, 3]));
    }
}
