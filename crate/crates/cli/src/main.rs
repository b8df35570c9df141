use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fireplan::fluid::{export_lp, MoPolicy};
use fireplan::harness::{
    action_label, write_initial_stats, write_results, write_summary, write_trace, write_weights, Experiment,
    Scenario,
};
use fireplan::policy::PolicyKind;

/// Wildfire suppression planning on a stochastic grid.
#[derive(Debug, Parser)]
#[command(name = "fireplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one seeded episode and print its summary.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Controller to run.
        #[arg(long, default_value = "fw")]
        policy: PolicyKind,
        /// Replication index; the episode seed is `seed + rep`.
        #[arg(long, default_value_t = 0)]
        rep: usize,
        /// Write the per-step trace CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run every policy on paired seeds and write results and summary CSVs.
    Benchmark {
        #[command(flatten)]
        common: Common,
        /// Comma-separated policies (random, fw, mcts, mo); defaults to the
        /// scenario's list, else all four.
        #[arg(long, value_delimiter = ',')]
        policies: Option<Vec<PolicyKind>>,
        /// Number of replications; defaults to the scenario's `reps`.
        #[arg(long)]
        reps: Option<usize>,
        /// Output directory for results.csv and summary.csv. Without it the
        /// summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the replications.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Initial-fire statistics over generated starting states.
    Stats {
        #[command(flatten)]
        common: Common,
        /// Number of generated fires; defaults to the scenario's `reps`.
        #[arg(long)]
        reps: Option<usize>,
        /// Output CSV path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the fluid MILP for a starting state in MPS format.
    ExportLp {
        #[command(flatten)]
        common: Common,
        /// Replication whose starting state is used.
        #[arg(long, default_value_t = 0)]
        rep: usize,
        /// Output MPS path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the FW weight map as CSV.
    Weights {
        #[command(flatten)]
        common: Common,
        /// Output CSV path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Base seed; overrides the scenario's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn experiment(&self, reps: Option<usize>) -> Result<Experiment> {
        let mut s = Scenario::load(&self.scenario).with_context(|| format!("loading {}", self.scenario.display()))?;
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(r) = reps {
            if r == 0 {
                bail!("invalid value for `reps`: must be at least 1");
            }
            s.reps = r;
        }
        Ok(Experiment::new(s)?)
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { common, policy, rep, trace } => {
            let exp = common.experiment(None)?;
            let ep = exp.run_episode(policy, rep, trace.is_some())?;
            if let (Some(path), Some(steps)) = (trace.as_deref(), ep.trace.as_deref()) {
                write_trace(sink(Some(path))?, steps)?;
            }
            println!(
                "policy={} seed={} initial_burning={} steps={} reward={} capped={} fallbacks={}",
                ep.policy, ep.seed, ep.initial_burning, ep.steps, ep.reward, ep.capped, ep.fallbacks
            );
            if let Some(first) = ep.trace.as_ref().and_then(|t| t.first()) {
                log::info!("first action {}", action_label(&first.action));
            }
        }
        Command::Benchmark { common, policies, reps, out, jobs } => {
            if jobs == 0 {
                bail!("invalid value for `jobs`: must be at least 1");
            }
            let exp = common.experiment(reps)?;
            let policies = policies
                .or_else(|| exp.scenario().policies.clone())
                .unwrap_or_else(|| PolicyKind::ALL.to_vec());
            if policies.is_empty() {
                bail!("invalid value for `policies`: list is empty");
            }
            let reps = exp.scenario().reps;
            let bench = exp.run_benchmark(&policies, reps, jobs)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    write_results(sink(Some(&dir.join("results.csv")))?, &bench.episodes)?;
                    write_summary(sink(Some(&dir.join("summary.csv")))?, &bench.summary)?;
                    write_initial_stats(sink(Some(&dir.join("initial.csv")))?, &bench.summary.initial)?;
                }
                None => write_summary(sink(None)?, &bench.summary)?,
            }
        }
        Command::Stats { common, reps, out } => {
            let exp = common.experiment(reps)?;
            let stats = exp.initial_stats(exp.scenario().reps)?;
            write_initial_stats(sink(out.as_deref())?, &stats)?;
        }
        Command::ExportLp { common, rep, out } => {
            let exp = common.experiment(None)?;
            let state = exp.initial_state(exp.seed(rep))?;
            let mo = MoPolicy::with_weights(exp.mdp(), exp.weights().clone(), exp.scenario().mo.clone())?;
            let text = export_lp(&mo.model_for(&state));
            sink(out.as_deref())?.write_all(text.as_bytes())?;
        }
        Command::Weights { common, out } => {
            let exp = common.experiment(None)?;
            write_weights(sink(out.as_deref())?, exp.mdp().grid(), exp.weights())?;
        }
    }
    Ok(())
}

/// The error chain on one line, skipping causes already quoted by their
/// parent.
fn one_line(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !msg.contains(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    msg
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", one_line(&e));
            ExitCode::FAILURE
        }
    }
}
