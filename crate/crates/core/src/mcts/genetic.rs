//! Genetic action generation: tournament selection, mutation and uniform
//! crossover over the actions already tried at a state.

use rand::Rng;

use super::tree::ActionNode;
use crate::mdp::{Action, FireState};

/// Binary tournament: draw two tried actions uniformly with replacement and
/// keep the one with the larger `Q`; the first draw wins ties.
pub fn tournament_select<'a, R: Rng + ?Sized>(actions: &'a [ActionNode], rng: &mut R) -> &'a Action {
    assert!(!actions.is_empty(), "tournament over an empty action set");
    let a = &actions[rng.gen_range(0..actions.len())];
    let b = &actions[rng.gen_range(0..actions.len())];
    if b.q > a.q {
        &b.action
    } else {
        &a.action
    }
}

/// Move each team, independently with probability `1 / teams`, to a
/// different burning cell chosen uniformly. The selection is redrawn until
/// at least one team moves. Teams with no alternative cell stay put; if no
/// team has one, `action` is returned unchanged.
pub fn mutate<R: Rng + ?Sized>(action: &Action, state: &FireState, rng: &mut R) -> Action {
    let targets = action.targets();
    let burning = state.burning_cells();
    let movable: Vec<usize> = (0..targets.len())
        .filter(|&i| burning.iter().any(|&c| c != targets[i]))
        .collect();
    if movable.is_empty() {
        return action.clone();
    }
    let rate = 1.0 / targets.len() as f64;
    let selected = loop {
        let pick: Vec<usize> = (0..targets.len()).filter(|_| rng.gen_bool(rate)).collect();
        if pick.iter().any(|i| movable.contains(i)) {
            break pick;
        }
    };
    let mut out = targets.to_vec();
    for i in selected {
        let alternatives: Vec<usize> = burning.iter().copied().filter(|&c| c != targets[i]).collect();
        if !alternatives.is_empty() {
            out[i] = alternatives[rng.gen_range(0..alternatives.len())];
        }
    }
    Action::Assign(out)
}

/// Uniform crossover: team `i` takes its cell from either parent with
/// probability one half.
pub fn recombine<R: Rng + ?Sized>(a: &Action, b: &Action, rng: &mut R) -> Action {
    let (ta, tb) = (a.targets(), b.targets());
    assert_eq!(ta.len(), tb.len(), "parents assign different team counts");
    if matches!(a, Action::Idle) {
        return Action::Idle;
    }
    Action::Assign(ta.iter().zip(tb).map(|(&x, &y)| if rng.gen_bool(0.5) { x } else { y }).collect())
}
