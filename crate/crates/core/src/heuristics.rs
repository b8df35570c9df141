//! Baseline policies: uniform random suppression and the Floyd-Warshall
//! weighted heuristic, plus the all-pairs distance table they share.

use rand::seq::index;
use rand::Rng;

use crate::mdp::{Action, FireState, RewardModel, SpreadModel};

/// All-pairs shortest path lengths where stepping from `x` to an adjacent
/// `y` costs `P(x, y)`. Unreachable pairs are `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    n: usize,
    d: Vec<f64>,
}

impl DistanceTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.n + y]
    }
}

/// Floyd-Warshall over the spread graph.
pub fn all_pairs_distances(spread: &SpreadModel) -> DistanceTable {
    let n = spread.len();
    let mut d = vec![f64::INFINITY; n * n];
    for x in 0..n {
        d[x * n + x] = 0.0;
        for &(y, p) in spread.sources(x) {
            let e = &mut d[x * n + y];
            *e = e.min(p);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    DistanceTable { n, d }
}

/// Heuristic weights `W(x) = sum_{y != x} R(y) / D(x, y)` and the derived
/// suppression priority `-W(x)`: cells close to costly cells come first.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMap {
    weights: Vec<f64>,
}

impl WeightMap {
    pub fn from_weights(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.weights[x]
    }

    pub fn priority(&self, x: usize) -> f64 {
        -self.weights[x]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Burning cells, highest priority first, ties by lowest index.
    pub fn ranked_burning(&self, state: &FireState) -> Vec<usize> {
        let mut cells = state.burning_cells();
        cells.sort_by(|&a, &b| self.priority(b).total_cmp(&self.priority(a)).then(a.cmp(&b)));
        cells
    }
}

pub fn fw_weights(distances: &DistanceTable, rewards: &RewardModel) -> WeightMap {
    let n = distances.len();
    let weights = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| y != x)
                .map(|y| {
                    let d = distances.get(x, y);
                    let r = rewards.get(y);
                    if d.is_finite() && d > 0.0 && r != 0.0 {
                        r / d
                    } else {
                        0.0
                    }
                })
                .sum()
        })
        .collect();
    WeightMap { weights }
}

/// Teams go to the highest-priority burning cells, one per cell, wrapping
/// around the list when teams outnumber burning cells.
pub fn fw_policy(state: &FireState, weights: &WeightMap, teams: usize) -> Action {
    let ranked = weights.ranked_burning(state);
    if ranked.is_empty() {
        return Action::Idle;
    }
    Action::Assign((0..teams).map(|i| ranked[i % ranked.len()]).collect())
}

/// Sample burning cells with probability proportional to `1 / rank`, where
/// rank is the competition rank of the cell's priority (tied cells share a
/// rank). Draws are without replacement until every burning cell has been
/// used, then with replacement.
pub fn fw_sample_policy<R: Rng + ?Sized>(state: &FireState, weights: &WeightMap, teams: usize, rng: &mut R) -> Action {
    let ranked = weights.ranked_burning(state);
    if ranked.is_empty() {
        return Action::Idle;
    }
    let mut score = Vec::with_capacity(ranked.len());
    let mut rank = 1;
    for (pos, &x) in ranked.iter().enumerate() {
        if pos > 0 && weights.priority(ranked[pos - 1]) != weights.priority(x) {
            rank = pos + 1;
        }
        score.push(1.0 / rank as f64);
    }
    let total: f64 = score.iter().sum();
    let mut remaining = score.clone();
    let mut left = total;
    let mut out = Vec::with_capacity(teams);
    for _ in 0..teams {
        if out.len() % ranked.len() == 0 && !out.is_empty() {
            remaining.clone_from(&score);
            left = total;
        }
        let pick = if out.len() < ranked.len() {
            let i = weighted_pick(&remaining, left, rng);
            left -= remaining[i];
            remaining[i] = 0.0;
            i
        } else {
            weighted_pick(&score, total, rng)
        };
        out.push(ranked[pick]);
    }
    Action::Assign(out)
}

fn weighted_pick<R: Rng + ?Sized>(w: &[f64], total: f64, rng: &mut R) -> usize {
    let mut u = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &wi) in w.iter().enumerate() {
        if wi <= 0.0 {
            continue;
        }
        last = i;
        if u < wi {
            return i;
        }
        u -= wi;
    }
    last
}

/// The straw-man baseline: distinct burning cells chosen uniformly; teams in
/// excess of the burning count land uniformly on burning cells.
pub fn random_policy<R: Rng + ?Sized>(state: &FireState, teams: usize, rng: &mut R) -> Action {
    let burning = state.burning_cells();
    if burning.is_empty() {
        return Action::Idle;
    }
    let distinct = teams.min(burning.len());
    let mut out: Vec<usize> = index::sample(rng, burning.len(), distinct).into_iter().map(|i| burning[i]).collect();
    while out.len() < teams {
        out.push(burning[rng.gen_range(0..burning.len())]);
    }
    Action::Assign(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, Neighborhood};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize, p: f64) -> SpreadModel {
        let g = GridSpec::new(n, 1, Neighborhood::FourConnected).unwrap();
        SpreadModel::uniform(&g, p, 0.8).unwrap()
    }

    #[test]
    fn path_distances() {
        let d = all_pairs_distances(&line(2, 0.06));
        assert_eq!(d.get(0, 1), 0.06);
        let d = all_pairs_distances(&line(3, 0.06));
        assert!((d.get(0, 2) - 0.12).abs() < 1e-15);
        let d = all_pairs_distances(&line(3, 0.0));
        assert_eq!(d.get(0, 2), f64::INFINITY);
        assert_eq!(d.get(1, 1), 0.0);
    }

    #[test]
    fn single_reward_weight() {
        let d = all_pairs_distances(&line(2, 0.06));
        let r = RewardModel::new(vec![0.0, -10.0]).unwrap();
        let w = fw_weights(&d, &r);
        assert!((w.weight(0) + 166.666_666_666_666_7).abs() < 1e-9);
        assert_eq!(w.weight(1), 0.0);
        let zero = fw_weights(&d, &RewardModel::uniform(2, 0.0).unwrap());
        assert_eq!(zero.weights(), &[0.0, 0.0]);
    }

    #[test]
    fn fw_policy_picks_top_cells() {
        let w = WeightMap::from_weights(vec![-1.0, -5.0, -3.0, -9.0]);
        let s = FireState::new(vec![true, true, true, false], vec![1; 4]).unwrap();
        assert_eq!(fw_policy(&s, &w, 2), Action::Assign(vec![1, 2]));
        let one = FireState::new(vec![false, false, true, false], vec![1; 4]).unwrap();
        assert_eq!(fw_policy(&one, &w, 3), Action::Assign(vec![2, 2, 2]));
        assert_eq!(fw_policy(&FireState::unburnt(4, 1), &w, 3), Action::Idle);
    }

    #[test]
    fn fw_sample_single_and_idle() {
        let w = WeightMap::from_weights(vec![-1.0, -2.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = FireState::new(vec![false, true], vec![1, 1]).unwrap();
        for _ in 0..20 {
            assert_eq!(fw_sample_policy(&s, &w, 2, &mut rng), Action::Assign(vec![1, 1]));
        }
        assert_eq!(fw_sample_policy(&FireState::unburnt(2, 1), &w, 2, &mut rng), Action::Idle);
    }

    #[test]
    fn fw_sample_uses_each_cell_before_repeating() {
        let w = WeightMap::from_weights(vec![-1.0, -2.0, -3.0]);
        let s = FireState::new(vec![true; 3], vec![1; 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let a = fw_sample_policy(&s, &w, 3, &mut rng).canonical();
            assert_eq!(a, Action::Assign(vec![0, 1, 2]));
        }
    }

    #[test]
    fn random_policy_covers_when_teams_match() {
        let s = FireState::new(vec![true, false, true, true], vec![1; 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            assert_eq!(random_policy(&s, 3, &mut rng).canonical(), Action::Assign(vec![0, 2, 3]));
        }
        assert_eq!(random_policy(&FireState::unburnt(4, 1), 3, &mut rng), Action::Idle);
    }
}
