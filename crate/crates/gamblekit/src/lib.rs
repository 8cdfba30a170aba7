//! Analysis, solvers and simulation for a capped-payout multiplicative
//! coin-toss game.
//!
//! The game: a score starts at 100 and is multiplied each round by `u` on
//! heads (probability `p`) or by `d` on tails. After `n` rounds the player
//! wins exactly the stake if the score exceeds its starting value; otherwise
//! the payout is the proportional share `stake * score / 100` (or nothing,
//! under the total-loss variant). The headline configuration (n = 100,
//! u = 1.5, d = 0.6, p = 1/2) looks attractive, since the score grows by 5%
//! per round on average, yet loses about 68% of the stake in expectation:
//! the win condition depends on the realized heads count, not the mean.
//!
//! Modules:
//! - [`game`]: parameters, win threshold and score arithmetic;
//! - [`analysis`]: exact finite-n expectation and variance, with an
//!   arbitrary-precision rational oracle in [`analysis::exact`];
//! - [`asymptotics`]: the profit/fair/loss threshold phenomenon, the
//!   concentration bounds behind it, and convergence tables;
//! - [`fairness`]: bisection solvers for fair parameters;
//! - [`simulate`]: reproducible counter-based Monte Carlo;
//! - [`collision`]: the generalized birthday problem for final scores;
//! - [`cli`]: the `gamblekit` command-line interface.
//!
//! Numeric code is generic over the scalar through [`scalar::Real`]
//! (`f32` or `f64`); concrete aliases for the common `f64` instantiation are
//! exported at the crate root. Defaulted type parameters mean `GameParams`
//! written without arguments is already the `f64` version.

pub mod analysis;
pub mod asymptotics;
pub mod cli;
pub mod collision;
pub mod error;
pub mod fairness;
pub mod game;
mod numeric;
pub mod scalar;
pub mod simulate;

pub use error::{Error, Result};
pub use scalar::Real;

pub use analysis::{ProfitAnalysis, VarianceReport};
pub use asymptotics::{AsymptoticClass, LimitDistribution, Regime};
pub use collision::ScoreWeights;
pub use fairness::{FairSolution, FairStatus};
pub use game::{GameParams, PayoutVariant, ThresholdIndex};
pub use simulate::{BatchStats, Trajectory};

/// `f64` aliases for the generic result types.
pub type GameParams64 = game::GameParams<f64>;
pub type ThresholdIndex64 = game::ThresholdIndex<f64>;
pub type ProfitAnalysis64 = analysis::ProfitAnalysis<f64>;
pub type VarianceReport64 = analysis::VarianceReport<f64>;
pub type AsymptoticClass64 = asymptotics::AsymptoticClass<f64>;
pub type FairSolution64 = fairness::FairSolution<f64>;
pub type Trajectory64 = simulate::Trajectory<f64>;
pub type BatchStats64 = simulate::BatchStats<f64>;
pub type ScoreWeights64 = collision::ScoreWeights<f64>;

/// `f32` aliases; coarse but useful for memory-bound sweeps.
pub type GameParams32 = game::GameParams<f32>;
pub type ProfitAnalysis32 = analysis::ProfitAnalysis<f32>;
pub type VarianceReport32 = analysis::VarianceReport<f32>;
