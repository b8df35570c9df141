//! Reward maps and initial-fire generators for the two benchmark families.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::mdp::{Action, FireMdp, FireState, RewardModel};

// Guards the floors against products like 8 / 0.12 landing a hair below an
// integer.
const FLOOR_EPS: f64 = 1e-9;

fn floor_u32(x: f64) -> u32 {
    (x + FLOOR_EPS).floor().max(0.0) as u32
}

/// Grid 1: `-(1 + col + row)` counted from the lower-left cell, with the
/// upper-right corner fixed at -10.
pub fn grid1_rewards(grid: &GridSpec) -> RewardModel {
    let mut r: Vec<f64> = (0..grid.len())
        .map(|x| {
            let (col, row) = grid.coords(x);
            -(1.0 + col as f64 + row as f64)
        })
        .collect();
    let corner = grid.cell(grid.width() - 1, grid.height() - 1);
    r[corner] = -10.0;
    RewardModel::new(r).expect("grid1 rewards are finite")
}

/// Grid 2: `-C exp(-lambda i)` for column `i = 1..=k`, where `C` makes each
/// row sum to -1.
pub fn grid2_rewards(grid: &GridSpec, lambda: f64) -> Result<RewardModel> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::config("lambda", "must be positive and finite"));
    }
    let k = grid.width();
    let col_weight: Vec<f64> = (1..=k).map(|i| (-lambda * i as f64).exp()).collect();
    let total: f64 = col_weight.iter().sum();
    let r = (0..grid.len()).map(|x| -col_weight[grid.coords(x).0] / total).collect();
    RewardModel::new(r)
}

/// Pre-scale fuel and propagation horizon of Grid 1: `floor(k / (2P))`.
pub fn grid1_fuel(k: usize, p: f64) -> u32 {
    floor_u32(k as f64 / (2.0 * p))
}

/// Pre-scale fuel and propagation horizon of Grid 2: `floor(k / (4P))`.
pub fn grid2_fuel(k: usize, p: f64) -> u32 {
    floor_u32(k as f64 / (4.0 * p))
}

/// The Grid 2 ignition cell `(ceil(k/2), ceil(k/2))`, one-based.
pub fn grid2_center(grid: &GridSpec) -> usize {
    let c = grid.width().div_ceil(2) - 1;
    let r = grid.height().div_ceil(2) - 1;
    grid.cell(c, r)
}

/// A generated fire together with the cells that ever caught fire during
/// generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GrownFire {
    pub state: FireState,
    pub ever_burned: Vec<bool>,
    /// Fuel of a cell that never caught fire, after scaling.
    pub untouched_fuel: u32,
}

/// Ignite `origin` on a grid full of `fuel`, let the fire spread
/// uncontrolled for `fuel` steps, then scale every fuel level by
/// `k^(-1/4)` rounding down. Cells left burning with no fuel are reported
/// as burnt out.
pub fn grow_fire(mdp: &FireMdp, origin: usize, fuel: u32, rng: &mut dyn RngCore) -> GrownFire {
    let cells = mdp.grid().len();
    let free = mdp.with_teams(0);
    let idle = Action::Assign(Vec::new());
    let mut state = FireState::unburnt(cells, fuel);
    state.set_burning(origin, true);
    let mut ever_burned = state.burning().to_vec();
    for _ in 0..fuel {
        if state.is_terminal() {
            break;
        }
        state = free.step(&state, &idle, rng).0;
        for (seen, &b) in ever_burned.iter_mut().zip(state.burning()) {
            *seen |= b;
        }
    }
    let scale = (mdp.grid().width() as f64).powf(-0.25);
    let scaled: Vec<u32> = state.fuel().iter().map(|&f| floor_u32(f as f64 * scale)).collect();
    // A cell that used its last unit of fuel on the final step is burnt out.
    let burning = state.burning().iter().zip(state.fuel()).map(|(&b, &f)| b && f > 0).collect();
    GrownFire {
        state: FireState::new(burning, scaled).expect("same length"),
        ever_burned,
        untouched_fuel: floor_u32(fuel as f64 * scale),
    }
}

fn uniform_p(mdp: &FireMdp) -> Result<f64> {
    match mdp.spread().uniform_p() {
        Some(p) if p > 0.0 => Ok(p),
        _ => Err(Error::config("p_default", "generators need a uniform positive spread probability")),
    }
}

pub fn grow_grid1(mdp: &FireMdp, rng: &mut dyn RngCore) -> Result<GrownFire> {
    let fuel = grid1_fuel(mdp.grid().width(), uniform_p(mdp)?);
    Ok(grow_fire(mdp, 0, fuel, rng))
}

pub fn grow_grid2(mdp: &FireMdp, rng: &mut dyn RngCore) -> Result<GrownFire> {
    let fuel = grid2_fuel(mdp.grid().width(), uniform_p(mdp)?);
    Ok(grow_fire(mdp, grid2_center(mdp.grid()), fuel, rng))
}

/// Grid 1 initial fire grown from the lower-left corner.
pub fn gen_grid1_initial(mdp: &FireMdp, rng: &mut dyn RngCore) -> Result<FireState> {
    grow_grid1(mdp, rng).map(|g| g.state)
}

/// Grid 2 initial fire grown from the centre.
pub fn gen_grid2_initial(mdp: &FireMdp, rng: &mut dyn RngCore) -> Result<FireState> {
    grow_grid2(mdp, rng).map(|g| g.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::SpreadModel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid1_corners() {
        let g = GridSpec::square(8).unwrap();
        let r = grid1_rewards(&g);
        assert_eq!(r.get(0), -1.0);
        assert_eq!(r.get(g.cell(7, 7)), -10.0);
        // (2,3) one-based
        assert_eq!(r.get(g.cell(1, 2)), -4.0);
    }

    #[test]
    fn grid2_rows_sum_to_minus_one() {
        let g = GridSpec::square(20).unwrap();
        let r = grid2_rewards(&g, 0.2).unwrap();
        let row: f64 = (0..20).map(|c| r.get(g.cell(c, 4))).sum();
        assert!((row + 1.0).abs() < 1e-12);
        assert!((r.get(0) / r.get(19) - 3.8f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn fuel_levels() {
        assert_eq!(grid1_fuel(8, 0.06), 66);
        assert_eq!(grid2_fuel(9, 0.02), 112);
        let g = GridSpec::square(17).unwrap();
        assert_eq!(grid2_center(&g), g.cell(8, 8));
        let g = GridSpec::square(9).unwrap();
        assert_eq!(grid2_center(&g), g.cell(4, 4));
    }

    #[test]
    fn corner_burns_out() {
        let g = GridSpec::square(8).unwrap();
        let mdp = FireMdp::new(g, SpreadModel::uniform(&g, 0.06, 0.8).unwrap(), grid1_rewards(&g), 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fire = grow_grid1(&mdp, &mut rng).unwrap();
        assert!(!fire.state.is_burning(0));
        assert_eq!(fire.state.fuel_at(0), 0);
        assert_eq!(fire.untouched_fuel, 39);
        assert!(fire.ever_burned[0]);
    }
}
