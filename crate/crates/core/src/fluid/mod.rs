//! Deterministic fluid approximation of the fire MDP.
//!
//! Binary burning flags become a continuous intensity `I_t(x)` that burns
//! fluid fuel `F_t(x)`; `z_t(x)` flags cells whose fuel has dropped to the
//! threshold `delta`, and `A_t(x, i)` assigns team `i` to cell `x` at time
//! `t`. The mixed-integer model is solved (or relaxed) over a short horizon
//! and only the first assignment is executed.

mod fixed;
mod policy;

pub use fixed::{fixed_flag_lp, FixedFlagLp};
pub use policy::{relax_and_score, MoConfig, MoDecision, MoPolicy, ScoreOutcome, ZMode};

use serde::{Deserialize, Serialize};

use crate::lp::{write_mps, LpProblem};
use crate::mdp::{FireMdp, FireState};

/// Intensity bounds are capped here to keep big-M coefficients finite.
pub const IBAR_CAP: f64 = 1e12;

/// Calibrated constants for one planning epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub horizon: usize,
    pub delta: f64,
    /// `ibar[t][x]` for `t = 0..=horizon`.
    pub ibar: Vec<Vec<f64>>,
    pub f0: Vec<f64>,
    pub i0: Vec<f64>,
    /// `zeta[x]` lists `(y, zeta(y, x))`: how much of `I(y)` flows into `I(x)`.
    pub zeta: Vec<Vec<(usize, f64)>>,
    /// Per-cell suppression rate, the same for every team and period.
    pub zeta_tilde: Vec<f64>,
    /// Whether any intensity bound hit [`IBAR_CAP`].
    pub capped: bool,
}

/// Derive fluid parameters from the MDP and the current state.
///
/// `Ibar` follows the no-suppression, infinite-fuel recursion with every
/// transmission rate set to 1; the fluid fuel of a cell is `delta` plus the
/// bounds it could burn over its remaining MDP fuel life.
pub fn calibrate(mdp: &FireMdp, state: &FireState, horizon: usize, delta: f64) -> Calibration {
    assert!(horizon >= 1, "horizon must be at least 1");
    assert!(delta > 0.0, "delta must be positive");
    let spread = mdp.spread();
    let n = state.len();
    let i0: Vec<f64> = (0..n).map(|x| if state.is_burning(x) { 1.0 } else { 0.0 }).collect();
    let mut ibar = vec![i0.clone()];
    let mut capped = false;
    for t in 1..=horizon {
        let prev = &ibar[t - 1];
        let next: Vec<f64> = (0..n)
            .map(|x| {
                let v = prev[x] + spread.sources(x).iter().map(|&(y, _)| prev[y]).sum::<f64>();
                if v > IBAR_CAP {
                    capped = true;
                    IBAR_CAP
                } else {
                    v
                }
            })
            .collect();
        ibar.push(next);
    }
    if capped {
        log::warn!("intensity bounds capped at {IBAR_CAP:e}");
    }
    let f0 = (0..n)
        .map(|x| {
            let last = horizon.min(state.fuel_at(x) as usize);
            delta + (0..=last).map(|t| ibar[t][x]).sum::<f64>()
        })
        .collect();
    Calibration {
        horizon,
        delta,
        ibar,
        f0,
        i0,
        zeta: (0..n).map(|x| spread.sources(x).to_vec()).collect(),
        zeta_tilde: (0..n).map(|x| spread.q(x)).collect(),
        capped,
    }
}

/// Direction of the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveSense {
    /// Minimise `sum |R(x)| I_t(x)`: burning is penalised.
    #[default]
    Cost,
    /// Minimise `sum R(x) I_t(x)` with `R <= 0` taken literally, which
    /// rewards intensity.
    AsPrinted,
}

/// Which fuel flag switches off the intensity dynamics of a cell at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuelGate {
    /// `z_t(x)`: the dynamics stop as soon as the fuel at `t` is spent.
    #[default]
    Current,
    /// `z_{t-1}(x)`: one period later. Infeasible whenever a burning cell
    /// runs out of fuel more than one period before the horizon.
    Lagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModelOptions {
    #[serde(default)]
    pub sense: ObjectiveSense,
    #[serde(default)]
    pub fuel_gate: FuelGate,
}

/// Column positions of the model variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub cells: usize,
    pub horizon: usize,
    pub teams: usize,
}

impl Layout {
    fn per_period(&self) -> usize {
        self.horizon + 1
    }

    pub fn intensity(&self, t: usize, x: usize) -> usize {
        t * self.cells + x
    }

    pub fn fuel(&self, t: usize, x: usize) -> usize {
        self.per_period() * self.cells + t * self.cells + x
    }

    pub fn z(&self, t: usize, x: usize) -> usize {
        2 * self.per_period() * self.cells + t * self.cells + x
    }

    pub fn assign(&self, t: usize, x: usize, i: usize) -> usize {
        3 * self.per_period() * self.cells + (t * self.cells + x) * self.teams + i
    }

    pub fn n_cols(&self) -> usize {
        self.per_period() * self.cells * (3 + self.teams)
    }

    pub fn is_z(&self, col: usize) -> bool {
        (2 * self.per_period() * self.cells..3 * self.per_period() * self.cells).contains(&col)
    }

    pub fn is_assign(&self, col: usize) -> bool {
        col >= 3 * self.per_period() * self.cells && col < self.n_cols()
    }
}

/// The mixed-integer program together with its calibration.
#[derive(Debug, Clone)]
pub struct FluidModel {
    pub problem: LpProblem,
    pub layout: Layout,
    pub calibration: Calibration,
    pub options: ModelOptions,
}

impl FluidModel {
    /// Largest big-M coefficient `F0(x) + sum_{y in N(x)} F0(y)`.
    pub fn fuel_big_m(&self, x: usize) -> f64 {
        let c = &self.calibration;
        c.f0[x] + c.zeta[x].iter().map(|&(y, _)| c.f0[y]).sum::<f64>()
    }
}

/// Assemble the fluid MILP for the current state.
pub fn build_model(calib: &Calibration, rewards: &[f64], teams: usize, options: ModelOptions) -> FluidModel {
    let n = calib.f0.len();
    assert_eq!(rewards.len(), n, "reward vector does not match the calibration");
    let big_t = calib.horizon;
    let layout = Layout { cells: n, horizon: big_t, teams };
    let mut p = LpProblem::new("FLUID");
    let weight = |x: usize| match options.sense {
        ObjectiveSense::Cost => -rewards[x],
        ObjectiveSense::AsPrinted => rewards[x],
    };
    for t in 0..=big_t {
        for x in 0..n {
            let (lo, hi) = if t == 0 { (calib.i0[x], calib.i0[x]) } else { (0.0, f64::INFINITY) };
            let c = p.add_col(format!("I{t:02}{x:03}"), lo, hi, weight(x), false);
            debug_assert_eq!(c, layout.intensity(t, x));
        }
    }
    for t in 0..=big_t {
        for x in 0..n {
            p.add_col(format!("F{t:02}{x:03}"), 0.0, f64::INFINITY, 0.0, false);
        }
    }
    for t in 0..=big_t {
        for x in 0..n {
            p.add_col(format!("Z{t:02}{x:03}"), 0.0, 1.0, 0.0, true);
        }
    }
    for t in 0..=big_t {
        for x in 0..n {
            for i in 0..teams {
                let c = p.add_col(format!("A{t:02}{x:03}{i:02}"), 0.0, 1.0, 0.0, true);
                debug_assert_eq!(c, layout.assign(t, x, i));
            }
        }
    }
    let l = layout;
    let mut model = FluidModel { problem: LpProblem::default(), layout, calibration: calib.clone(), options };

    // intensity dynamics
    for t in 1..=big_t {
        for x in 0..n {
            let gate = match options.fuel_gate {
                FuelGate::Current => t,
                FuelGate::Lagged => t - 1,
            };
            let mut row = vec![(l.intensity(t, x), 1.0), (l.intensity(t - 1, x), -1.0)];
            for &(y, zeta) in &calib.zeta[x] {
                row.push((l.intensity(t - 1, y), -zeta));
            }
            for i in 0..teams {
                row.push((l.assign(t - 1, x, i), calib.ibar[t][x] * calib.zeta_tilde[x]));
            }
            row.push((l.z(gate, x), model.fuel_big_m(x)));
            p.add_row(format!("B{t:02}{x:03}"), 0.0, f64::INFINITY, &row);
        }
    }
    // fuel accounting
    for t in 0..=big_t {
        for x in 0..n {
            let mut row = vec![(l.fuel(t, x), 1.0)];
            for tp in 0..t {
                row.push((l.intensity(tp, x), 1.0));
            }
            p.add_row(format!("C{t:02}{x:03}"), calib.f0[x], calib.f0[x], &row);
        }
    }
    // fuel flag forcing, both directions
    for t in 0..=big_t {
        for x in 0..n {
            let d = calib.delta;
            p.add_row(format!("D{t:02}{x:03}"), d, f64::INFINITY, &[(l.fuel(t, x), 1.0), (l.z(t, x), d)]);
            p.add_row(
                format!("E{t:02}{x:03}"),
                f64::NEG_INFINITY,
                calib.f0[x],
                &[(l.fuel(t, x), 1.0), (l.z(t, x), calib.f0[x] - d)],
            );
        }
    }
    // no intensity after the fuel is gone
    for t in 0..big_t {
        for x in 0..n {
            p.add_row(
                format!("F{t:02}{x:03}"),
                f64::NEG_INFINITY,
                calib.f0[x],
                &[(l.intensity(t + 1, x), 1.0), (l.z(t, x), calib.f0[x])],
            );
        }
    }
    // one cell per team per period
    for t in 0..=big_t {
        for i in 0..teams {
            let row: Vec<(usize, f64)> = (0..n).map(|x| (l.assign(t, x, i), 1.0)).collect();
            p.add_row(format!("G{t:02}{i:03}"), f64::NEG_INFINITY, 1.0, &row);
        }
    }
    model.problem = p;
    model
}

/// The model in fixed-format MPS.
pub fn export_lp(model: &FluidModel) -> String {
    write_mps(&model.problem)
}

/// A feasible no-suppression trajectory used to fix the fuel flags.
///
/// Intensities follow the fluid dynamics with equality. When a cell would
/// keep its flag off at `t + 1` yet be unable to sustain the intensity the
/// dynamics demand there, its intensity at `t` is raised so that its fuel
/// lands exactly on `delta` and the cell burns out instead.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTrajectory {
    pub intensity: Vec<Vec<f64>>,
    pub fuel: Vec<Vec<f64>>,
    pub spent: Vec<Vec<bool>>,
}

pub fn reference_trajectory(calib: &Calibration) -> ReferenceTrajectory {
    let n = calib.f0.len();
    let big_t = calib.horizon;
    let d = calib.delta;
    let tol = 1e-9;
    let rec = |prev: &[f64], x: usize| prev[x] + calib.zeta[x].iter().map(|&(y, z)| z * prev[y]).sum::<f64>();
    let mut intensity = vec![calib.i0.clone()];
    let mut fuel = vec![calib.f0.clone()];
    let mut spent = vec![calib.f0.iter().map(|&f| f <= d + tol).collect::<Vec<_>>()];
    for t in 1..=big_t {
        let f_t: Vec<f64> = (0..n).map(|x| fuel[t - 1][x] - intensity[t - 1][x]).collect();
        let s_t: Vec<bool> = (0..n).map(|x| spent[t - 1][x] || f_t[x] <= d + tol).collect();
        let mut i_t: Vec<f64> = (0..n).map(|x| if s_t[x] { 0.0 } else { rec(&intensity[t - 1], x) }).collect();
        if t < big_t {
            loop {
                let mut changed = false;
                for x in 0..n {
                    if s_t[x] {
                        continue;
                    }
                    let f_next = f_t[x] - i_t[x];
                    if f_next > d + tol && rec(&i_t, x) > f_next && i_t[x] < f_t[x] - d {
                        i_t[x] = f_t[x] - d;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        fuel.push(f_t);
        spent.push(s_t);
        intensity.push(i_t);
    }
    ReferenceTrajectory { intensity, fuel, spent }
}
