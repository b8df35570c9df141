use std::collections::BTreeMap;

use statrs::distribution::{Binomial, DiscreteCDF};

use super::episode::EpisodeResult;
use super::generate::GrownFire;
use crate::policy::PolicyKind;

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman and Fan type 7). `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// One-sided exact sign test of "`a` beats `b`" on paired samples. Ties are
/// dropped. Returns `(wins, losses, p)`, with `p = 1` when every pair ties.
pub fn sign_test(a: &[f64], b: &[f64]) -> (usize, usize, f64) {
    assert_eq!(a.len(), b.len(), "sign test needs paired samples");
    let wins = a.iter().zip(b).filter(|(x, y)| x > y).count();
    let losses = a.iter().zip(b).filter(|(x, y)| x < y).count();
    let n = (wins + losses) as u64;
    if n == 0 || wins == 0 {
        return (wins, losses, 1.0);
    }
    let dist = Binomial::new(0.5, n).expect("valid binomial");
    (wins, losses, dist.sf(wins as u64 - 1))
}

/// `N^I / I!` and its Stirling form `(e N / I)^I / sqrt(2 pi I)`, the number
/// of ways to place `teams` identical teams on `n_burning` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchingFactor {
    pub exact: f64,
    pub stirling: f64,
}

pub fn branching_factor(n_burning: f64, teams: usize) -> BranchingFactor {
    assert!(teams >= 1, "branching factor needs at least one team");
    let i = teams as f64;
    let factorial: f64 = (1..=teams).map(|j| j as f64).product();
    BranchingFactor {
        exact: n_burning.powi(teams as i32) / factorial,
        stirling: (std::f64::consts::E * n_burning / i).powf(i) / (2.0 * std::f64::consts::PI * i).sqrt(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialFireStats {
    pub reps: usize,
    pub mean_burning: f64,
    pub max_burning: usize,
    /// Fuel averaged over every burning cell of every fire.
    pub mean_burning_fuel: f64,
    /// Fuel averaged over every cell that never caught fire.
    pub untouched_fuel: f64,
    pub mean_burnt_out: f64,
}

impl InitialFireStats {
    pub fn from_fires(fires: &[GrownFire]) -> Self {
        let reps = fires.len();
        let counts: Vec<usize> = fires.iter().map(|f| f.state.n_burning()).collect();
        let (mut burn_fuel, mut burn_n, mut cold_fuel, mut cold_n, mut out_n) = (0u64, 0u64, 0u64, 0u64, 0u64);
        for f in fires {
            for x in 0..f.state.len() {
                let fuel = f.state.fuel_at(x) as u64;
                if f.state.is_burning(x) {
                    burn_fuel += fuel;
                    burn_n += 1;
                } else if f.ever_burned[x] {
                    out_n += 1;
                } else {
                    cold_fuel += fuel;
                    cold_n += 1;
                }
            }
        }
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        Self {
            reps,
            mean_burning: ratio(counts.iter().sum::<usize>() as u64, reps as u64),
            max_burning: counts.iter().copied().max().unwrap_or(0),
            mean_burning_fuel: ratio(burn_fuel, burn_n),
            untouched_fuel: ratio(cold_fuel, cold_n),
            mean_burnt_out: ratio(out_n, reps as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicySummary {
    pub policy: PolicyKind,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
    /// `(mean - mean_random) / |mean_random|` in percent; absent without a
    /// random baseline or when its mean is zero.
    pub improvement_pct: Option<f64>,
    /// Paired comparison against the random baseline.
    pub wins: usize,
    pub losses: usize,
    pub sign_p: Option<f64>,
    pub mean_steps: f64,
    pub fallbacks: usize,
    pub capped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub policies: Vec<PolicySummary>,
    pub initial: InitialFireStats,
}

impl RunSummary {
    pub fn get(&self, policy: PolicyKind) -> Option<&PolicySummary> {
        self.policies.iter().find(|p| p.policy == policy)
    }
}

/// Per-policy statistics over the episodes, paired by replication.
pub fn summarize(policies: &[PolicyKind], episodes: &[EpisodeResult], initial: InitialFireStats) -> RunSummary {
    let by_policy = |p: PolicyKind| -> BTreeMap<usize, &EpisodeResult> {
        episodes.iter().filter(|e| e.policy == p).map(|e| (e.rep, e)).collect()
    };
    let baseline = by_policy(PolicyKind::Random);
    let base_mean = (!baseline.is_empty()).then(|| mean(baseline.values().map(|e| e.reward)));
    let mut out = Vec::new();
    for &p in policies {
        let eps = by_policy(p);
        if eps.is_empty() {
            continue;
        }
        let rewards: Vec<f64> = eps.values().map(|e| e.reward).collect();
        let mut sorted = rewards.clone();
        sorted.sort_by(f64::total_cmp);
        let m = mean(rewards.iter().copied());
        let paired: Vec<(f64, f64)> = eps
            .iter()
            .filter_map(|(r, e)| baseline.get(r).map(|b| (e.reward, b.reward)))
            .collect();
        let (wins, losses, sign_p) = if paired.is_empty() {
            (0, 0, None)
        } else {
            let (a, b): (Vec<f64>, Vec<f64>) = paired.into_iter().unzip();
            let (w, l, p) = sign_test(&a, &b);
            (w, l, Some(p))
        };
        out.push(PolicySummary {
            policy: p,
            n: rewards.len(),
            mean: m,
            median: quantile(&sorted, 0.5),
            q1: quantile(&sorted, 0.25),
            q3: quantile(&sorted, 0.75),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            improvement_pct: base_mean.filter(|b| *b != 0.0).map(|b| (m - b) / b.abs() * 100.0),
            wins,
            losses,
            sign_p,
            mean_steps: mean(eps.values().map(|e| e.steps as f64)),
            fallbacks: eps.values().map(|e| e.fallbacks).sum(),
            capped: eps.values().filter(|e| e.capped).count(),
        });
    }
    RunSummary { policies: out, initial }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_quantiles() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&xs, 0.25), 1.75);
        assert_eq!(quantile(&xs, 0.5), 2.5);
        assert_eq!(quantile(&[7.0], 0.9), 7.0);
    }

    #[test]
    fn sign_test_tail() {
        let a = [1.0; 10];
        let b = [0.0; 10];
        let (_, _, p) = sign_test(&a, &b);
        assert!((p - 0.5f64.powi(10)).abs() < 1e-15);
        assert_eq!(sign_test(&b, &b).2, 1.0);
    }

    #[test]
    fn branching() {
        assert_eq!(branching_factor(7.0, 1).exact, 7.0);
        assert!((branching_factor(10.0, 4).exact - 416.666_666_666).abs() < 1e-6);
        let b = branching_factor(275.5, 4);
        assert!(b.exact > 2.1e8 && b.exact < 2.6e8);
        assert!((b.stirling / b.exact - 1.0).abs() < 0.03);
    }
}
