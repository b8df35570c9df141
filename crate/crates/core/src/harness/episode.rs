use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::generate::{grow_grid1, grow_grid2, GrownFire};
use super::scenario::{Family, Scenario};
use super::stats::{summarize, InitialFireStats, RunSummary};
use crate::error::Result;
use crate::heuristics::{all_pairs_distances, fw_weights, WeightMap};
use crate::mdp::{Action, FireMdp, FireState};
use crate::policy::{controller, PolicyKind};

/// Independent random streams derived from one episode seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Generation = 0,
    Dynamics = 1,
    Policy = 2,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub burning: usize,
    pub action: Action,
    pub reward: f64,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub policy: PolicyKind,
    pub rep: usize,
    pub seed: u64,
    pub reward: f64,
    pub steps: usize,
    /// The step cap ended the episode before the fire went out.
    pub capped: bool,
    /// Decisions where the controller fell back to a heuristic.
    pub fallbacks: usize,
    pub initial_burning: usize,
    pub trace: Option<Vec<TraceStep>>,
}

/// A scenario with its MDP and FW weights built once.
#[derive(Debug, Clone)]
pub struct Experiment {
    scenario: Scenario,
    mdp: FireMdp,
    weights: WeightMap,
}

impl Experiment {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let mdp = scenario.mdp()?;
        let weights = fw_weights(&all_pairs_distances(mdp.spread()), mdp.rewards());
        Ok(Self { scenario, mdp, weights })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn mdp(&self) -> &FireMdp {
        &self.mdp
    }

    pub fn weights(&self) -> &WeightMap {
        &self.weights
    }

    /// Seed of replication `rep`.
    pub fn seed(&self, rep: usize) -> u64 {
        self.scenario.seed.wrapping_add(rep as u64)
    }

    /// The starting fire of an episode seed. Custom scenarios report every
    /// burning cell as ever burned.
    pub fn grow(&self, seed: u64) -> Result<GrownFire> {
        let mut rng = stream_rng(seed, Stream::Generation);
        match self.scenario.family {
            Family::Grid1 => grow_grid1(&self.mdp, &mut rng),
            Family::Grid2 => grow_grid2(&self.mdp, &mut rng),
            Family::Custom => {
                let state = self.scenario.initial_state(&self.mdp, &mut rng)?;
                let ever_burned = state.burning().to_vec();
                let untouched_fuel = state.fuel().iter().copied().max().unwrap_or(0);
                Ok(GrownFire { state, ever_burned, untouched_fuel })
            }
        }
    }

    pub fn initial_state(&self, seed: u64) -> Result<FireState> {
        self.grow(seed).map(|g| g.state)
    }

    /// One closed-loop episode from the seed's initial fire.
    pub fn run_episode(&self, policy: PolicyKind, rep: usize, trace: bool) -> Result<EpisodeResult> {
        let seed = self.seed(rep);
        let mut state = self.initial_state(seed)?;
        let initial_burning = state.n_burning();
        let mut ctl = controller(policy, &self.mdp, &self.weights, &self.scenario.mcts, &self.scenario.mo)?;
        let mut dyn_rng = stream_rng(seed, Stream::Dynamics);
        let mut pol_rng = stream_rng(seed, Stream::Policy);
        let cap = self.scenario.step_cap();
        let mut out = EpisodeResult {
            policy,
            rep,
            seed,
            reward: 0.0,
            steps: 0,
            capped: false,
            fallbacks: 0,
            initial_burning,
            trace: trace.then(Vec::new),
        };
        while !state.is_terminal() {
            if out.steps >= cap {
                out.capped = true;
                log::warn!("{policy} seed {seed}: step cap {cap} reached with {} cells burning", state.n_burning());
                break;
            }
            let d = ctl.decide(&state, &mut pol_rng);
            out.fallbacks += usize::from(d.fallback);
            let (next, r) = self.mdp.step(&state, &d.action, &mut dyn_rng);
            if let Some(t) = out.trace.as_mut() {
                t.push(TraceStep {
                    step: out.steps,
                    burning: state.n_burning(),
                    action: d.action,
                    reward: r,
                    fallback: d.fallback,
                });
            }
            out.reward += r;
            out.steps += 1;
            state = next;
        }
        Ok(out)
    }

    /// Run every policy on replications `0..reps` with `jobs` workers.
    /// Results come back ordered by replication, then by policy.
    pub fn run_all(&self, policies: &[PolicyKind], reps: usize, jobs: usize) -> Result<Vec<EpisodeResult>> {
        let tasks: Vec<(usize, PolicyKind)> =
            (0..reps).flat_map(|r| policies.iter().map(move |&p| (r, p))).collect();
        let run = |&(r, p): &(usize, PolicyKind)| self.run_episode(p, r, false);
        par_map(&tasks, jobs, run).into_iter().collect()
    }

    pub fn initial_stats(&self, reps: usize) -> Result<InitialFireStats> {
        let fires = (0..reps).map(|r| self.grow(self.seed(r))).collect::<Result<Vec<_>>>()?;
        Ok(InitialFireStats::from_fires(&fires))
    }

    pub fn run_benchmark(&self, policies: &[PolicyKind], reps: usize, jobs: usize) -> Result<Benchmark> {
        let episodes = self.run_all(policies, reps, jobs)?;
        let summary = summarize(policies, &episodes, self.initial_stats(reps)?);
        Ok(Benchmark { episodes, summary })
    }
}

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub episodes: Vec<EpisodeResult>,
    pub summary: RunSummary,
}

/// Load-and-run convenience used by the CLI and tests.
pub fn run_episode(scenario: &Scenario, policy: PolicyKind, rep: usize) -> Result<EpisodeResult> {
    Experiment::new(scenario.clone())?.run_episode(policy, rep, false)
}

pub fn run_benchmark(scenario: &Scenario, policies: &[PolicyKind], reps: usize, jobs: usize) -> Result<Benchmark> {
    Experiment::new(scenario.clone())?.run_benchmark(policies, reps, jobs)
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, U: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(e) => {
            log::warn!("could not start {jobs} workers ({e}); running sequentially");
            items.iter().map(f).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, U: Send>(items: &[T], _jobs: usize, f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(p: f64, fuel: u32, teams: usize) -> Scenario {
        let text = format!(
            r#"{{"family": "custom", "k": 3, "height": 1, "teams": {teams}, "p_default": {p},
                "rewards": [-1, -1, -1], "fuel": [{fuel}, {fuel}, {fuel}], "burning": [false, true, false]}}"#
        );
        Scenario::from_json(&text).unwrap()
    }

    #[test]
    fn lone_cell_burns_out() {
        for f in [0, 1, 4] {
            let r = run_episode(&line(0.0, f, 0), PolicyKind::Random, 0).unwrap();
            assert_eq!(r.reward, -(f as f64 + 1.0));
            assert_eq!(r.steps, f as usize + 1);
            assert!(!r.capped);
        }
    }

    #[test]
    fn no_fire_no_cost() {
        let mut s = line(0.5, 3, 1);
        s.burning = Some(vec![false; 3]);
        let r = run_episode(&s, PolicyKind::Fw, 0).unwrap();
        assert_eq!((r.reward, r.steps), (0.0, 0));
    }

    #[test]
    fn repeatable() {
        let s = Scenario::grid1(6, 2);
        let e = Experiment::new(s).unwrap();
        let a = e.run_episode(PolicyKind::Random, 3, true).unwrap();
        let b = e.run_episode(PolicyKind::Random, 3, true).unwrap();
        assert_eq!(a, b);
        assert!(a.reward <= 0.0);
    }

    #[test]
    fn cap_is_flagged() {
        let mut s = line(0.0, 50, 0);
        s.step_cap = Some(5);
        let r = run_episode(&s, PolicyKind::Random, 0).unwrap();
        assert!(r.capped);
        assert_eq!((r.steps, r.reward), (5, -5.0));
    }
}
