//! Versioned CSV output. Every file starts with a `# fireplan <kind> v1`
//! comment line. Nothing time-dependent is written, so runs with iteration
//! budgets reproduce byte for byte.

use std::io::Write;

use super::episode::{EpisodeResult, TraceStep};
use super::stats::{InitialFireStats, RunSummary};
use crate::error::Result;
use crate::heuristics::WeightMap;
use crate::grid::GridSpec;
use crate::mdp::Action;

pub const SCHEMA_VERSION: u32 = 1;

fn writer<W: Write>(mut out: W, kind: &str, header: &[&str]) -> Result<csv::Writer<W>> {
    writeln!(out, "# fireplan {kind} v{SCHEMA_VERSION}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn action_label(a: &Action) -> String {
    match a {
        Action::Idle => "idle".to_owned(),
        Action::Assign(t) => t.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"),
    }
}

/// One row per (policy, replication).
pub fn write_results<W: Write>(out: W, episodes: &[EpisodeResult]) -> Result<()> {
    let mut w = writer(
        out,
        "results",
        &["policy", "rep", "seed", "reward", "steps", "capped", "fallbacks", "initial_burning"],
    )?;
    for e in episodes {
        w.write_record([
            e.policy.to_string(),
            e.rep.to_string(),
            e.seed.to_string(),
            e.reward.to_string(),
            e.steps.to_string(),
            e.capped.to_string(),
            e.fallbacks.to_string(),
            e.initial_burning.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, summary: &RunSummary) -> Result<()> {
    let mut w = writer(
        out,
        "summary",
        &[
            "policy", "n", "mean", "median", "q1", "q3", "min", "max", "improvement_pct", "wins", "losses",
            "sign_p", "mean_steps", "fallbacks", "capped",
        ],
    )?;
    for p in &summary.policies {
        w.write_record([
            p.policy.to_string(),
            p.n.to_string(),
            p.mean.to_string(),
            p.median.to_string(),
            p.q1.to_string(),
            p.q3.to_string(),
            p.min.to_string(),
            p.max.to_string(),
            opt(p.improvement_pct),
            p.wins.to_string(),
            p.losses.to_string(),
            opt(p.sign_p),
            p.mean_steps.to_string(),
            p.fallbacks.to_string(),
            p.capped.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_initial_stats<W: Write>(out: W, stats: &InitialFireStats) -> Result<()> {
    let mut w = writer(
        out,
        "initial-fire",
        &["reps", "mean_burning", "max_burning", "mean_burning_fuel", "untouched_fuel", "mean_burnt_out"],
    )?;
    w.write_record([
        stats.reps.to_string(),
        stats.mean_burning.to_string(),
        stats.max_burning.to_string(),
        stats.mean_burning_fuel.to_string(),
        stats.untouched_fuel.to_string(),
        stats.mean_burnt_out.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_trace<W: Write>(out: W, trace: &[TraceStep]) -> Result<()> {
    let mut w = writer(out, "trace", &["step", "burning", "action", "reward", "fallback"])?;
    for t in trace {
        w.write_record([
            t.step.to_string(),
            t.burning.to_string(),
            action_label(&t.action),
            t.reward.to_string(),
            t.fallback.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// FW weight and priority per cell.
pub fn write_weights<W: Write>(out: W, grid: &GridSpec, weights: &WeightMap) -> Result<()> {
    let mut w = writer(out, "weights", &["cell", "col", "row", "weight", "priority"])?;
    for x in 0..grid.len() {
        let (c, r) = grid.coords(x);
        w.write_record([
            x.to_string(),
            c.to_string(),
            r.to_string(),
            weights.weight(x).to_string(),
            weights.priority(x).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::PolicyKind;

    #[test]
    fn results_header() {
        let e = EpisodeResult {
            policy: PolicyKind::Fw,
            rep: 0,
            seed: 9,
            reward: -3.5,
            steps: 4,
            capped: false,
            fallbacks: 0,
            initial_burning: 2,
            trace: None,
        };
        let mut buf = Vec::new();
        write_results(&mut buf, &[e]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# fireplan results v1");
        assert_eq!(lines[2], "fw,0,9,-3.5,4,false,0,2");
    }
}
