//! Game definition and deterministic score arithmetic.
//!
//! A game runs `n` rounds. Each round multiplies the current score by the up
//! factor `u` (probability `p`) or the down factor `d` (probability `1 - p`).
//! The player wins if and only if the final score strictly exceeds the
//! initial score; a winner's net profit is exactly the stake. A loser either
//! keeps the proportional share `stake * final_score / initial_score`
//! (variant [`PayoutVariant::Proportional`]) or forfeits the stake
//! ([`PayoutVariant::TotalLoss`]).

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{approx_rational, count_times_ln, MAX_RECONSTRUCTED_DENOMINATOR};
use crate::scalar::Real;

/// Payout rule applied when the player loses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PayoutVariant {
    /// Loser keeps `stake * final_score / initial_score`.
    Proportional,
    /// Loser forfeits the whole stake.
    TotalLoss,
}

/// Full parameterization of one game.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameParams<T = f64> {
    /// Number of rounds, at least 1.
    pub n: u32,
    /// Up factor, `> 0`.
    pub u: T,
    /// Down factor, `> 0`.
    pub d: T,
    /// Probability of an up move, in `[0, 1]`.
    pub p: T,
    /// Stake in euros, `>= 0`.
    pub stake: T,
    /// Starting score, `> 0` (conventionally 100).
    pub initial_score: T,
    pub payout_variant: PayoutVariant,
}

impl<T: Real> GameParams<T> {
    /// Builds parameters with unit stake, initial score 100 and the
    /// proportional payout. Validates only what every operation needs;
    /// analysis operations additionally require [`Self::check_analysis`].
    pub fn new(n: u32, u: T, d: T, p: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be a positive number of rounds"));
        }
        if !(u.is_finite() && u > T::zero()) {
            return Err(Error::domain(format!("u must be finite and > 0, got {u}")));
        }
        if !(d.is_finite() && d > T::zero()) {
            return Err(Error::domain(format!("d must be finite and > 0, got {d}")));
        }
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::domain(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(GameParams {
            n,
            u,
            d,
            p,
            stake: T::one(),
            initial_score: T::of(100.0),
            payout_variant: PayoutVariant::Proportional,
        })
    }

    pub fn with_stake(mut self, stake: T) -> Result<Self> {
        if !(stake.is_finite() && stake >= T::zero()) {
            return Err(Error::domain(format!("stake must be >= 0, got {stake}")));
        }
        self.stake = stake;
        Ok(self)
    }

    pub fn with_initial_score(mut self, initial_score: T) -> Result<Self> {
        if !(initial_score.is_finite() && initial_score > T::zero()) {
            return Err(Error::domain(format!(
                "initial score must be > 0, got {initial_score}"
            )));
        }
        self.initial_score = initial_score;
        Ok(self)
    }

    pub fn with_variant(mut self, variant: PayoutVariant) -> Self {
        self.payout_variant = variant;
        self
    }

    /// Probability of a down move.
    #[inline]
    pub fn q(&self) -> T {
        T::one() - self.p
    }

    /// The standing assumption of every analysis operation:
    /// `0 < d <= 1 <= u` and `u != d`. The simulator does not need it.
    pub fn check_analysis(&self) -> Result<()> {
        check_up_down(self.u, self.d)
    }
}

pub(crate) fn check_up_down<T: Real>(u: T, d: T) -> Result<()> {
    if d.is_nan() || d <= T::zero() || d > T::one() {
        return Err(Error::domain(format!("d must satisfy 0 < d <= 1, got {d}")));
    }
    if u < T::one() || !u.is_finite() {
        return Err(Error::domain(format!("u must satisfy u >= 1, got {u}")));
    }
    if u == d {
        // Only reachable at u = d = 1, which leaves the game undefined.
        return Err(Error::domain("u and d must differ"));
    }
    Ok(())
}

/// Boundary between winning and losing heads counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdIndex<T = f64> {
    /// Largest heads count that still loses; the player wins iff `k > k0`.
    pub k0: u32,
    /// The real-valued boundary `n * ln(1/d) / ln(u/d)` before flooring.
    pub boundary: T,
    /// True when the boundary is attained: `u^k0 * d^(n-k0)` equals 1, i.e.
    /// a full-precision final score of exactly the initial score (a loss).
    pub exact_boundary: bool,
}

/// Absolute snap tolerance for integer detection on the float path.
const BOUNDARY_SNAP_TOL: f64 = 1e-12;

/// Bigint threshold search is skipped above this n; the powers get too large.
const MAX_EXACT_N: u32 = 100_000;

/// Computes the threshold index `k0 = floor(n * ln(1/d) / ln(u/d))`, clamped
/// to `[0, n]`.
///
/// A floor evaluated on a float that sits a hair below an integer would
/// silently flip the win set, so when `u` and `d` round-trip to small
/// fractions the floor is decided exactly in integer arithmetic; otherwise
/// the ratio is snapped to integers within an absolute `1e-12`.
pub fn threshold_index<T: Real>(n: u32, u: T, d: T) -> Result<ThresholdIndex<T>> {
    if n == 0 {
        return Err(Error::domain("n must be a positive number of rounds"));
    }
    check_up_down(u, d)?;

    let boundary = T::from_count(n) * (T::one() / d).ln() / (u / d).ln();

    if n <= MAX_EXACT_N {
        if let Some((ur, dr)) = reconstruct_pair(u, d) {
            let (k0, exact) = exact_threshold(ur, dr, n);
            return Ok(ThresholdIndex {
                k0,
                boundary,
                exact_boundary: exact,
            });
        }
    }

    let b = boundary.as_f64();
    let nearest = b.round();
    let (k0, exact) = if (b - nearest).abs() <= BOUNDARY_SNAP_TOL {
        (nearest, true)
    } else {
        (b.floor(), false)
    };
    let k0 = k0.clamp(0.0, f64::from(n)) as u32;
    Ok(ThresholdIndex {
        k0,
        boundary,
        exact_boundary: exact && k0 as f64 == nearest,
    })
}

fn reconstruct_pair<T: Real>(u: T, d: T) -> Option<((u64, u64), (u64, u64))> {
    let ur = approx_rational(u.as_f64(), MAX_RECONSTRUCTED_DENOMINATOR)?;
    let dr = approx_rational(d.as_f64(), MAX_RECONSTRUCTED_DENOMINATOR)?;
    Some((ur, dr))
}

/// Compares `u^k * d^(n-k)` with 1 exactly for rational `u = un/ud`,
/// `d = dn/dd`: the comparison reduces to `un^k * dn^(n-k)` vs
/// `ud^k * dd^(n-k)` over the integers.
fn rational_score_cmp(u: (u64, u64), d: (u64, u64), n: u32, k: u32) -> Ordering {
    let lhs = BigUint::from(u.0).pow(k) * BigUint::from(d.0).pow(n - k);
    let rhs = BigUint::from(u.1).pow(k) * BigUint::from(d.1).pow(n - k);
    lhs.cmp(&rhs)
}

/// Largest `k` in `[0, n]` with `u^k * d^(n-k) <= 1`. The score ratio is
/// strictly increasing in `k` (it gains a factor `u/d > 1` per step), so a
/// binary search over exact comparisons is valid.
fn exact_threshold(u: (u64, u64), d: (u64, u64), n: u32) -> (u32, bool) {
    debug_assert!(rational_score_cmp(u, d, n, 0) != Ordering::Greater);
    let (mut lo, mut hi) = (0u32, n);
    // Invariant: cmp(lo) <= Equal; answer in [lo, hi].
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if rational_score_cmp(u, d, n, mid) == Ordering::Greater {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    let exact = rational_score_cmp(u, d, n, lo) == Ordering::Equal;
    (lo, exact)
}

/// `ln(u^k * d^(n-k))`, the log of the final score relative to the start.
#[inline]
pub(crate) fn log_score_ratio<T: Real>(params: &GameParams<T>, k: u32) -> T {
    count_times_ln(k, params.u) + count_times_ln(params.n - k, params.d)
}

/// Final score after `n` rounds with `k` heads: `initial * u^k * d^(n-k)`,
/// evaluated in log space with a single exponentiation so that long games do
/// not underflow term by term.
pub fn final_score<T: Real>(params: &GameParams<T>, k: u32) -> Result<T> {
    ensure_heads_in_range(params, k)?;
    Ok((params.initial_score.ln() + log_score_ratio(params, k)).exp())
}

/// Whether `k` heads win the game, i.e. the final score strictly exceeds the
/// initial one. Decided in float log space away from the boundary; within a
/// rounding-error band of the boundary the comparison is settled exactly for
/// reconstructible rational factors. Works for any `u, d > 0`.
pub fn wins_with_heads<T: Real>(params: &GameParams<T>, k: u32) -> Result<bool> {
    ensure_heads_in_range(params, k)?;
    let s = log_score_ratio(params, k);
    // Error of the log sum is a few ulps of the accumulated magnitude.
    let magnitude =
        count_times_ln(k, params.u).abs() + count_times_ln(params.n - k, params.d).abs() + T::one();
    let guard = T::of(64.0) * T::epsilon() * magnitude;
    if s.abs() > guard {
        return Ok(s > T::zero());
    }
    if let Some((ur, dr)) = reconstruct_pair(params.u, params.d) {
        return Ok(rational_score_cmp(ur, dr, params.n, k) == Ordering::Greater);
    }
    Ok(s > T::zero())
}

/// Net profit for a given heads count: `+stake` on a win, otherwise
/// `stake * (u^k * d^(n-k) - 1)` (proportional) or `-stake` (total loss).
pub fn net_profit_given_heads<T: Real>(params: &GameParams<T>, k: u32) -> Result<T> {
    if wins_with_heads(params, k)? {
        return Ok(params.stake);
    }
    match params.payout_variant {
        PayoutVariant::Proportional => {
            let ratio = log_score_ratio(params, k).exp();
            Ok(params.stake * (ratio - T::one()))
        }
        PayoutVariant::TotalLoss => Ok(-params.stake),
    }
}

fn ensure_heads_in_range<T: Real>(params: &GameParams<T>, k: u32) -> Result<()> {
    if k > params.n {
        return Err(Error::domain(format!(
            "heads count {k} exceeds the number of rounds {}",
            params.n
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, u: f64, d: f64, p: f64) -> GameParams {
        GameParams::new(n, u, d, p).unwrap()
    }

    #[test]
    fn threshold_for_the_default_game() {
        let t = threshold_index(100, 1.5f64, 0.6).unwrap();
        assert_eq!(t.k0, 55);
        assert!((t.boundary - 55.749).abs() < 1e-3);
        assert!(!t.exact_boundary);
    }

    #[test]
    fn threshold_at_d_one_means_one_head_wins() {
        let t = threshold_index(50, 1.5, 1.0).unwrap();
        assert_eq!(t.k0, 0);
        assert!(t.exact_boundary);
        assert_eq!(t.boundary, 0.0);
    }

    /// Brute-force oracle: largest k with 100 * u^k * d^(n-k) <= 100,
    /// decided in exact rational arithmetic so ties come out right.
    fn scan_threshold(n: u32, u: (u64, u64), d: (u64, u64)) -> u32 {
        use num_bigint::BigUint;
        (0..=n)
            .filter(|&k| {
                let lhs = BigUint::from(u.0).pow(k) * BigUint::from(d.0).pow(n - k);
                let rhs = BigUint::from(u.1).pow(k) * BigUint::from(d.1).pow(n - k);
                lhs <= rhs
            })
            .max()
            .unwrap()
    }

    #[test]
    fn threshold_matches_brute_force_scan() {
        assert_eq!(threshold_index(7, 1.5, 0.6).unwrap().k0, 3);
        assert_eq!(scan_threshold(7, (3, 2), (3, 5)), 3);
        let grid: [((u64, u64), (u64, u64)); 5] = [
            ((3, 2), (3, 5)),
            ((5, 4), (4, 5)),
            ((2, 1), (9, 10)),
            ((3, 1), (1, 10)),
            ((1, 1), (7, 10)),
        ];
        for n in [1, 2, 5, 9, 23, 64] {
            for (u, d) in grid {
                let uf = u.0 as f64 / u.1 as f64;
                let df = d.0 as f64 / d.1 as f64;
                assert_eq!(
                    threshold_index(n, uf, df).unwrap().k0,
                    scan_threshold(n, u, d),
                    "n={n} u={uf} d={df}"
                );
            }
        }
    }

    #[test]
    fn exact_boundary_detected_for_reciprocal_factors() {
        // u = 2, d = 1/2, n = 10: the ratio is exactly 5 and k = 5 ties the
        // initial score, which is a loss.
        let t = threshold_index(10, 2.0, 0.5).unwrap();
        assert_eq!(t.k0, 5);
        assert!(t.exact_boundary);
        assert!(!wins_with_heads(&params(10, 2.0, 0.5, 0.5), 5).unwrap());
        assert!(wins_with_heads(&params(10, 2.0, 0.5, 0.5), 6).unwrap());
    }

    #[test]
    fn win_set_agrees_with_the_threshold_everywhere() {
        // The per-heads win decision and the threshold index are computed by
        // different routes; they must split the heads range identically,
        // including at exact score ties.
        for (n, u, d) in [
            (100u32, 1.5, 0.6),
            (64, 1.25, 0.8),
            (10, 2.0, 0.5),
            (33, 1.5, 2.0 / 3.0),
            (20, 1.0, 0.6),
            (15, 1.7, 1.0),
        ] {
            let t = threshold_index(n, u, d).unwrap();
            let pr = params(n, u, d, 0.5);
            for k in 0..=n {
                assert_eq!(
                    wins_with_heads(&pr, k).unwrap(),
                    k > t.k0,
                    "n={n} u={u} d={d} k={k} k0={}",
                    t.k0
                );
            }
        }
    }

    #[test]
    fn threshold_rejects_invalid_factors() {
        assert!(threshold_index(10, 1.0, 1.0).is_err());
        assert!(threshold_index(10, 0.9, 0.6).is_err());
        assert!(threshold_index(10, 1.5, 0.0).is_err());
        assert!(threshold_index(10, 1.5, 1.2).is_err());
        assert!(threshold_index(0, 1.5, 0.6).is_err());
    }

    #[test]
    fn unwinnable_game_clamps_to_n() {
        // u = 1: the score never exceeds the start, so every k loses.
        let t = threshold_index(20, 1.0, 0.6).unwrap();
        assert_eq!(t.k0, 20);
    }

    #[test]
    fn final_score_extremes_and_midpoint() {
        let pr = params(100, 1.5, 0.6, 0.5);
        let all_heads = final_score(&pr, 100).unwrap();
        assert!((all_heads / (100.0 * 1.5f64.powi(100)) - 1.0).abs() < 1e-12);
        let all_tails = final_score(&pr, 0).unwrap();
        assert!((all_tails / (100.0 * 0.6f64.powi(100)) - 1.0).abs() < 1e-12);

        let two = params(2, 1.5, 0.6, 0.5);
        assert!((final_score(&two, 1).unwrap() - 90.0).abs() < 1e-12);
    }

    #[test]
    fn final_score_survives_long_games() {
        let pr = params(1_000_000, 1.5, 0.6, 0.5);
        let mid = final_score(&pr, 500_000).unwrap();
        assert!(mid >= 0.0 && !mid.is_nan());
        assert!(final_score(&pr, 1_000_001).is_err());
    }

    #[test]
    fn net_profit_win_and_loss_branches() {
        let pr = params(100, 1.5, 0.6, 0.5).with_stake(100.0).unwrap();
        assert_eq!(net_profit_given_heads(&pr, 56).unwrap(), 100.0);
        // k = 55 loses; value frozen from the exact rational
        // 100 * ((3/2)^55 * (3/5)^45 - 1) = -49.67016399101452.
        let loss = net_profit_given_heads(&pr, 55).unwrap();
        assert!((loss - (-49.67016399101452)).abs() < 1e-9, "loss = {loss}");

        let total = pr.with_variant(PayoutVariant::TotalLoss);
        assert_eq!(net_profit_given_heads(&total, 55).unwrap(), -100.0);
        assert_eq!(net_profit_given_heads(&total, 0).unwrap(), -100.0);
    }

    #[test]
    fn final_score_strictly_increases_and_profit_is_monotone() {
        let pr = params(60, 1.4, 0.7, 0.5).with_stake(3.0).unwrap();
        let mut prev_score = final_score(&pr, 0).unwrap();
        let mut prev_profit = net_profit_given_heads(&pr, 0).unwrap();
        for k in 1..=60 {
            let s = final_score(&pr, k).unwrap();
            let g = net_profit_given_heads(&pr, k).unwrap();
            assert!(s > prev_score, "score not increasing at k={k}");
            assert!(g >= prev_profit, "profit decreasing at k={k}");
            prev_score = s;
            prev_profit = g;
        }
    }

    #[test]
    fn threshold_consistency_on_grid() {
        for n in [3, 10, 47, 100, 333] {
            for (u, d) in [(1.5, 0.6), (1.2, 0.85), (2.5, 0.35), (1.05, 0.95)] {
                let pr = params(n, u, d, 0.5);
                let t = threshold_index(n, u, d).unwrap();
                let at_k0 = final_score(&pr, t.k0).unwrap();
                assert!(
                    at_k0 <= pr.initial_score * (1.0 + 1e-9),
                    "b({}) = {at_k0} should not exceed 100 for n={n} u={u} d={d}",
                    t.k0
                );
                if t.k0 < n {
                    let above = final_score(&pr, t.k0 + 1).unwrap();
                    assert!(above > pr.initial_score * (1.0 - 1e-9));
                }
            }
        }
    }

    #[test]
    fn works_at_f32() {
        let t = threshold_index(100, 1.5f32, 0.6f32).unwrap();
        assert_eq!(t.k0, 55);
        let pr = GameParams::<f32>::new(2, 1.5, 0.6, 0.5).unwrap();
        assert!((final_score(&pr, 1).unwrap() - 90.0).abs() < 1e-3);
    }
}
