//! Benchmark scenarios, the closed-loop episode runner and result
//! aggregation.
//!
//! Replication `r` of a scenario uses seed `seed + r`. Each seed feeds three
//! independent ChaCha8 streams (fire generation, dynamics, policy), so every
//! policy in a benchmark faces the same initial fires.

mod episode;
mod generate;
mod report;
mod scenario;
mod stats;

pub use episode::{
    run_benchmark, run_episode, stream_rng, Benchmark, EpisodeResult, Experiment, Stream, TraceStep,
};
pub use generate::{
    gen_grid1_initial, gen_grid2_initial, grid1_fuel, grid1_rewards, grid2_center, grid2_fuel, grid2_rewards,
    grow_fire, grow_grid1, grow_grid2, GrownFire,
};
pub use report::{
    action_label, write_initial_stats, write_results, write_summary, write_trace, write_weights, SCHEMA_VERSION,
};
pub use scenario::{Family, Scenario};
pub use stats::{
    branching_factor, quantile, sign_test, summarize, BranchingFactor, InitialFireStats, PolicySummary,
    RunSummary,
};
