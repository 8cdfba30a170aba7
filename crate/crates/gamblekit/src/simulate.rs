//! Seeded Monte Carlo engine.
//!
//! Trajectories draw one Bernoulli per round (rather than a single binomial
//! draw) so that whole score paths, not just endpoints, are reproducible.
//! Batches sub-seed run i with the i-th output of the master stream and fan
//! out across the rayon pool; aggregation walks the results in run order with
//! compensated sums, so the statistics are identical for any thread count.

pub mod rng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::game::{net_profit_given_heads, wins_with_heads, GameParams};
use crate::numeric::KahanSum;
use crate::scalar::Real;
use rng::SplitMix64;

/// One simulated game: the full score path and its outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T = f64> {
    pub seed: u64,
    /// Length n+1; `scores[0]` is the initial score.
    pub scores: Vec<T>,
    pub heads_count: u32,
    pub net_profit: T,
}

/// Aggregates over a batch of independent runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchStats<T = f64> {
    pub num_runs: u64,
    pub mean_profit: T,
    /// Unbiased sample variance of the per-run net profit.
    pub sample_variance: T,
    pub win_count: u64,
    /// Per-run profits in run order, kept only on request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profit_samples: Option<Vec<T>>,
}

/// Simulates one game. Identical `(params, seed)` give bit-identical output.
pub fn simulate_trajectory<T: Real>(params: &GameParams<T>, seed: u64) -> Result<Trajectory<T>> {
    let mut stream = SplitMix64::new(seed);
    let mut scores = Vec::with_capacity(params.n as usize + 1);
    let mut score = params.initial_score;
    scores.push(score);
    let mut heads_count = 0u32;
    for _ in 0..params.n {
        let heads = T::of(stream.next_f64()) < params.p;
        score *= if heads { params.u } else { params.d };
        scores.push(score);
        heads_count += u32::from(heads);
    }
    let net_profit = net_profit_given_heads(params, heads_count)?;
    Ok(Trajectory {
        seed,
        scores,
        heads_count,
        net_profit,
    })
}

/// Heads count of one run without materializing the score path.
fn run_heads_count<T: Real>(params: &GameParams<T>, seed: u64) -> u32 {
    let mut stream = SplitMix64::new(seed);
    let mut heads = 0u32;
    for _ in 0..params.n {
        heads += u32::from(T::of(stream.next_f64()) < params.p);
    }
    heads
}

/// Sub-seed of run `i` under a master seed: the i-th master-stream output.
pub fn run_seed(master_seed: u64, run_index: u64) -> u64 {
    rng::nth(master_seed, run_index)
}

/// Runs `num_runs` independent games sub-seeded from `master_seed` and
/// aggregates their outcomes. Runs execute in parallel; results do not
/// depend on the thread count.
pub fn simulate_batch<T: Real>(
    params: &GameParams<T>,
    num_runs: u64,
    master_seed: u64,
    retain_samples: bool,
) -> Result<BatchStats<T>> {
    assert!(num_runs >= 1, "a batch needs at least one run");
    let heads: Vec<u32> = (0..num_runs)
        .into_par_iter()
        .map(|i| run_heads_count(params, run_seed(master_seed, i)))
        .collect();

    let mut profits = Vec::with_capacity(heads.len());
    let mut win_count = 0u64;
    let mut sum = KahanSum::new();
    for &k in &heads {
        let profit = net_profit_given_heads(params, k)?;
        win_count += u64::from(wins_with_heads(params, k)?);
        sum.add(profit);
        profits.push(profit);
    }
    let runs_t = T::of(num_runs as f64);
    let mean_profit = sum.value() / runs_t;

    let mut sq = KahanSum::new();
    for &x in &profits {
        let dev = x - mean_profit;
        sq.add(dev * dev);
    }
    let sample_variance = if num_runs > 1 {
        sq.value() / (runs_t - T::one())
    } else {
        T::zero()
    };

    Ok(BatchStats {
        num_runs,
        mean_profit,
        sample_variance,
        win_count,
        profit_samples: retain_samples.then_some(profits),
    })
}
