mod common;

use fireplan::{Action, FireMdp, FireState, GridSpec, Neighborhood, RewardModel, SpreadModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{grid, mdp, state};

#[derive(Debug, Clone)]
struct Case {
    mdp: FireMdp,
    state: FireState,
    action: Action,
    seed: u64,
}

fn case(max_side: usize, zero_spread: bool, no_teams: bool) -> impl Strategy<Value = Case> {
    (1..=max_side, 1..=max_side, any::<bool>(), 0.0..=1.0f64, 0.0..=1.0f64, 0..=3usize, any::<u64>())
        .prop_flat_map(move |(w, h, eight, p, q, teams, seed)| {
            let n = w * h;
            let teams = if no_teams { 0 } else { teams };
            (
                Just((w, h, eight, if zero_spread { 0.0 } else { p }, q, teams, seed)),
                prop::collection::vec(-10.0..=0.0f64, n),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(0..4u32, n),
                prop::collection::vec(0..n, teams),
            )
        })
        .prop_map(|((w, h, eight, p, q, teams, seed), rewards, burning, fuel, targets)| {
            let hood = if eight { Neighborhood::EightConnected } else { Neighborhood::FourConnected };
            let g = GridSpec::new(w, h, hood).unwrap();
            let m = FireMdp::new(g, SpreadModel::uniform(&g, p, q).unwrap(), RewardModel::new(rewards).unwrap(), teams)
                .unwrap();
            let action = if teams == 0 { Action::Assign(vec![]) } else { Action::Assign(targets) };
            Case { mdp: m, state: FireState::new(burning, fuel).unwrap(), action, seed }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fuel_never_increases(c in case(4, false, false)) {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let mut s = c.state.clone();
        for _ in 0..8 {
            let (next, _) = c.mdp.step(&s, &c.action, &mut rng);
            prop_assert!(next.fuel().iter().zip(s.fuel()).all(|(a, b)| a <= b));
            s = next;
        }
    }

    #[test]
    fn spent_cells_go_out_and_stay_out(c in case(4, false, false)) {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let spent: Vec<usize> = (0..c.state.len()).filter(|&x| c.state.fuel_at(x) == 0).collect();
        let (mut s, _) = c.mdp.step(&c.state, &c.action, &mut rng);
        for _ in 0..6 {
            for &x in &spent {
                prop_assert!(!s.is_burning(x));
            }
            s = c.mdp.step(&s, &c.action, &mut rng).0;
        }
    }

    #[test]
    fn reward_is_burning_cost(c in case(4, false, false)) {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let expect: f64 = (0..c.state.len())
            .filter(|&x| c.state.is_burning(x))
            .map(|x| c.mdp.rewards().get(x))
            .sum();
        let (_, r) = c.mdp.step(&c.state, &c.action, &mut rng);
        prop_assert_eq!(r, expect);
        prop_assert_eq!(c.mdp.reward(&c.state), expect);
    }

    #[test]
    fn no_spread_never_grows(c in case(4, true, true)) {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let mut s = c.state.clone();
        for _ in 0..6 {
            let next = c.mdp.step(&s, &c.action, &mut rng).0;
            prop_assert!((0..s.len()).all(|x| !next.is_burning(x) || s.is_burning(x)));
            s = next;
        }
    }

    #[test]
    fn enumerated_law_is_a_distribution(c in case(3, false, false)) {
        let law = c.mdp.enumerate_transitions(&c.state, &c.action, 20).unwrap();
        let total: f64 = law.iter().map(|t| t.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let sampled = c.mdp.step(&c.state, &c.action, &mut ChaCha8Rng::seed_from_u64(c.seed)).0;
        prop_assert!(law.iter().any(|t| t.state == sampled && t.probability > 0.0));
    }

    #[test]
    fn neighbors_stay_inside(w in 1..8usize, h in 1..8usize, eight in any::<bool>()) {
        let hood = if eight { Neighborhood::EightConnected } else { Neighborhood::FourConnected };
        let g = GridSpec::new(w, h, hood).unwrap();
        for x in 0..g.len() {
            for y in g.neighbors(x) {
                prop_assert!(g.contains(y) && y != x);
                prop_assert!(g.neighbors(y).contains(&x));
            }
        }
    }
}

#[test]
fn single_ignition_has_two_outcomes() {
    let m = mdp(grid(2, 1), 0.06, 0.8, vec![-1.0, -1.0], 0);
    let s = state(&[1, 0], &[0, 3]);
    let law = m.enumerate_transitions(&s, &Action::Assign(vec![]), 20).unwrap();
    let mut p: Vec<f64> = law.iter().map(|t| t.probability).collect();
    p.sort_by(f64::total_cmp);
    assert_eq!(p.len(), 2);
    assert!((p[0] - 0.06).abs() < 1e-12 && (p[1] - 0.94).abs() < 1e-12);
}

#[test]
fn all_burning_two_by_two_with_one_team() {
    // only the targeted cell can change, so two outcomes
    let m = mdp(grid(2, 2), 0.06, 0.8, vec![-1.0; 4], 1);
    let s = state(&[1, 1, 1, 1], &[3, 3, 3, 3]);
    let law = m.enumerate_transitions(&s, &Action::Assign(vec![2]), 20).unwrap();
    assert_eq!(law.len(), 2);
    let total: f64 = law.iter().map(|t| t.probability).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(law.iter().all(|t| t.reward == -4.0));
}

#[test]
fn state_json_uses_the_scenario_layout() {
    let s = state(&[1, 0, 0], &[2, 0, 5]);
    let back: FireState = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
}
