//! Wildfire suppression planning on a stochastic grid.
//!
//! The crate provides the fire MDP as a generative simulator ([`mdp`]),
//! baseline heuristics ([`heuristics`]), Monte Carlo tree search with double
//! progressive widening ([`mcts`]), a receding-horizon controller built on a
//! fluid mixed-integer model ([`fluid`]) backed by a bundled LP/MILP solver
//! ([`lp`]), and an experiment harness ([`harness`]).

pub mod error;
pub mod fluid;
pub mod grid;
pub mod harness;
pub mod heuristics;
pub mod lp;
pub mod mcts;
pub mod mdp;
pub mod policy;
pub mod time;

pub use error::{Error, Result};
pub use grid::{GridSpec, Neighborhood};
pub use mdp::{Action, FireMdp, FireState, RewardModel, SpreadModel};
