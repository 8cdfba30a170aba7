//! Generalized birthday problem for final scores.
//!
//! The final score of a game is determined by the heads count alone, so m
//! independent games collide exactly when two heads counts coincide. For a
//! pmf `{p_k}` over the n+1 counts, the probability that m draws are pairwise
//! distinct is `m! * e_m(p_0, ..., p_n)` with `e_m` the m-th elementary
//! symmetric polynomial. Enumerating the m-subsets directly is infeasible
//! already at n = 100, m = 8; instead `e_m` comes out of Newton's identities
//! over the power sums `s_j = sum_k p_k^j`, which is O(m * (n + m)). A
//! brute-force enumeration oracle for tiny instances guards the recursion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::scalar::Real;

/// Probability mass function of the final-score index of one game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreWeights<T = f64> {
    weights: Vec<T>,
}

/// Largest deviation of a weight sum from 1 that construction accepts.
const NORMALIZATION_TOL: f64 = 1e-12;

impl<T: Real> ScoreWeights<T> {
    /// Validates that entries are nonnegative and sum to 1 within 1e-12.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("weights must not be empty"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::domain("weights must be finite and nonnegative"));
        }
        let mut acc = KahanSum::new();
        for &w in &weights {
            acc.add(w);
        }
        let sum = acc.value();
        if (sum - T::one()).abs() > T::of(NORMALIZATION_TOL) {
            return Err(Error::domain(format!(
                "weights must sum to 1 within {NORMALIZATION_TOL}, got {sum}"
            )));
        }
        Ok(ScoreWeights { weights })
    }

    /// The heads-count pmf of an n-round game with heads probability p:
    /// entry k is `C(n,k) p^k (1-p)^(n-k)`.
    pub fn binomial(n: u32, p: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::domain(format!("p must lie in [0, 1], got {p}")));
        }
        let rel: Vec<T> = crate::analysis::shifted_log_pmf(n, p)
            .into_iter()
            .map(|l| l.exp())
            .collect();
        let mut acc = KahanSum::new();
        for &r in &rel {
            acc.add(r);
        }
        let total = acc.value();
        ScoreWeights::new(rel.into_iter().map(|r| r / total).collect())
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Number of possible outcomes, n + 1 for an n-round game.
    pub fn outcome_count(&self) -> usize {
        self.weights.len()
    }
}

/// Probability that `m` independent draws from the pmf are pairwise
/// distinct. Zero for `m` beyond the number of outcomes (pigeonhole).
///
/// Runs the Newton-identity recursion on the scaled quantities
/// `f_j = j! * e_j`, which are themselves the all-distinct probabilities for
/// j draws, so no factorial overflow can occur. Power sums use compensated
/// summation; for large j they underflow gracefully to zero, which is exact.
pub fn all_distinct_probability<T: Real>(weights: &ScoreWeights<T>, m: u32) -> Result<T> {
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let outcomes = weights.outcome_count();
    if m as usize > outcomes {
        return Ok(T::zero());
    }

    // s[j] = sum_k p_k^(j+1), j = 0..m-1.
    let mut power_sums = Vec::with_capacity(m as usize);
    let mut powers: Vec<T> = weights.weights().to_vec();
    for _ in 0..m {
        let mut acc = KahanSum::new();
        for &x in &powers {
            acc.add(x);
        }
        power_sums.push(acc.value());
        for (x, &w) in powers.iter_mut().zip(weights.weights()) {
            *x *= w;
        }
    }

    // f_j = sum_{i=1..j} (-1)^(i-1) * (j-1)!/(j-i)! * f_{j-i} * s_i.
    //
    // The alternating sum cancels heavily for concentrated weight vectors;
    // each f_j is itself an all-distinct probability, so the true value lies
    // in [0, f_{j-1}] and each iterate is clamped into that interval. This
    // keeps the sequence a valid probability chain (and the collision
    // probability monotone in m) even when the residual is below noise.
    let mut f = Vec::with_capacity(m as usize + 1);
    f.push(T::one());
    for j in 1..=(m as usize) {
        let mut acc = KahanSum::new();
        let mut falling = T::one();
        let mut sign = T::one();
        for i in 1..=j {
            acc.add(sign * falling * f[j - i] * power_sums[i - 1]);
            falling *= T::of((j - i) as f64);
            sign = -sign;
        }
        f.push(acc.value().max(T::zero()).min(f[j - 1]));
    }
    Ok(f[m as usize])
}

/// Probability of at least one coincidence among `m` draws.
pub fn collision_probability<T: Real>(weights: &ScoreWeights<T>, m: u32) -> Result<T> {
    Ok(T::one() - all_distinct_probability(weights, m)?)
}

/// All-distinct probability under uniform weights over n+1 outcomes,
/// `m! * C(n+1, m) / (n+1)^m`. By Maclaurin's inequality this dominates the
/// all-distinct probability of every pmf on n+1 outcomes, with equality only
/// for the uniform one.
///
/// Equals the falling-factorial product `prod_{i=1}^{m-1} (n+1-i)/(n+1)`;
/// when numerator and denominator fit exactly in floating point the result
/// is the correctly rounded single quotient.
pub fn maclaurin_upper_bound<T: Real>(n: u32, m: u32) -> T {
    if m <= 1 {
        return T::one();
    }
    if u64::from(m) > u64::from(n) + 1 {
        return T::zero();
    }
    let base = u64::from(n) + 1;
    let mut num = 1u128;
    let mut den = 1u128;
    let mut exact = true;
    for i in 1..u64::from(m) {
        match (
            num.checked_mul(u128::from(base - i)),
            den.checked_mul(u128::from(base)),
        ) {
            (Some(a), Some(b)) => {
                num = a;
                den = b;
            }
            _ => {
                exact = false;
                break;
            }
        }
    }
    const MAX_EXACT: u128 = 1 << 53;
    if exact && num <= MAX_EXACT && den <= MAX_EXACT {
        return T::of(num as f64) / T::of(den as f64);
    }
    // Log-space fallback for sizes past exact integer range.
    let ln_base = T::of(base as f64).ln();
    let mut acc = KahanSum::new();
    for i in 1..u64::from(m) {
        acc.add(T::of((base - i) as f64).ln() - ln_base);
    }
    acc.value().exp()
}

/// Enumeration oracle: sums the probability of every ordered all-distinct
/// outcome tuple. Exponential in `m`, so it is deliberately restricted to
/// at most 9 outcomes (n <= 8) and m <= 4.
pub fn brute_force_all_distinct<T: Real>(weights: &ScoreWeights<T>, m: u32) -> Result<T> {
    let outcomes = weights.outcome_count();
    if outcomes > 9 || m > 4 {
        return Err(Error::domain(
            "brute force oracle is limited to at most 9 outcomes and m <= 4",
        ));
    }
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let w = weights.weights();
    let mut total = T::zero();
    let mut chosen: Vec<usize> = Vec::with_capacity(m as usize);
    fn walk<T: Real>(w: &[T], m: usize, chosen: &mut Vec<usize>, acc: T, total: &mut T) {
        if chosen.len() == m {
            *total += acc;
            return;
        }
        for i in 0..w.len() {
            if chosen.contains(&i) {
                continue;
            }
            chosen.push(i);
            walk(w, m, chosen, acc * w[i], total);
            chosen.pop();
        }
    }
    walk(w, m as usize, &mut chosen, T::one(), &mut total);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(k: usize) -> ScoreWeights {
        ScoreWeights::new(vec![1.0 / k as f64; k]).unwrap()
    }

    #[test]
    fn two_slot_birthday_is_a_coin_flip() {
        let w = uniform(2);
        assert!((all_distinct_probability(&w, 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(all_distinct_probability(&w, 3).unwrap(), 0.0);
        assert_eq!(collision_probability(&w, 1).unwrap(), 0.0);
    }

    #[test]
    fn eight_games_of_the_default_match_collide_with_probability_083() {
        let w = ScoreWeights::binomial(100, 0.5f64).unwrap();
        let collision = collision_probability(&w, 8).unwrap();
        assert!((collision - 0.83).abs() < 0.01, "collision = {collision}");
        let distinct = all_distinct_probability(&w, 8).unwrap();
        assert!((collision + distinct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn concentrated_weights_always_collide() {
        let w = ScoreWeights::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(collision_probability(&w, 2).unwrap(), 1.0);
    }

    #[test]
    fn newton_recursion_matches_brute_force() {
        use crate::simulate::rng::SplitMix64;
        let mut rng = SplitMix64::new(2718);
        for n in 1..=8u32 {
            for m in 1..=4u32 {
                // Random positive weights, normalized.
                let raw: Vec<f64> = (0..=n).map(|_| rng.next_f64() + 1e-3).collect();
                let sum: f64 = raw.iter().sum();
                let w = ScoreWeights::new(raw.into_iter().map(|x| x / sum).collect()).unwrap();
                let fast = all_distinct_probability(&w, m).unwrap();
                let slow = brute_force_all_distinct(&w, m).unwrap();
                assert!((fast - slow).abs() < 1e-12, "n={n} m={m}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let w = uniform(10);
        assert!(brute_force_all_distinct(&w, 2).is_err());
        let w = uniform(5);
        assert!(brute_force_all_distinct(&w, 5).is_err());
    }

    #[test]
    fn maclaurin_bound_dominates_and_is_tight_only_at_uniform() {
        use crate::simulate::rng::SplitMix64;
        let mut rng = SplitMix64::new(99);
        for n in [4u32, 9, 30] {
            for m in [2u32, 3, 4] {
                let bound = maclaurin_upper_bound::<f64>(n, m);
                let uni = uniform(n as usize + 1);
                let at_uniform = all_distinct_probability(&uni, m).unwrap();
                assert!((at_uniform - bound).abs() < 1e-12, "n={n} m={m}");

                let raw: Vec<f64> = (0..=n).map(|_| rng.next_f64() + 0.01).collect();
                let sum: f64 = raw.iter().sum();
                let w = ScoreWeights::new(raw.into_iter().map(|x| x / sum).collect()).unwrap();
                let skewed = all_distinct_probability(&w, m).unwrap();
                assert!(skewed < bound + 1e-12, "n={n} m={m}");
            }
        }
        assert_eq!(maclaurin_upper_bound::<f64>(100, 1), 1.0);
        assert_eq!(maclaurin_upper_bound::<f64>(100, 102), 0.0);
    }

    #[test]
    fn default_game_bound_reproduces_the_falling_factorial() {
        let bound = maclaurin_upper_bound::<f64>(100, 8);
        let reference = (100.0 * 99.0 * 98.0 * 97.0 * 96.0 * 95.0 * 94.0) / 101.0f64.powi(7);
        assert_eq!(bound, reference);
        assert!(1.0 - bound >= 0.24);
    }

    #[test]
    fn collision_probability_is_monotone_in_group_size() {
        let w = ScoreWeights::binomial(40, 0.35).unwrap();
        let mut prev = 0.0;
        for m in 1..=20 {
            let c = collision_probability(&w, m).unwrap();
            assert!(c >= prev - 1e-12, "m = {m}");
            prev = c;
        }
    }

    #[test]
    fn binomial_weights_are_a_unimodal_pmf() {
        let w = ScoreWeights::binomial(100, 0.3).unwrap();
        let s: f64 = w.weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        let peak = w
            .weights()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!(w.weights()[..=peak].windows(2).all(|v| v[0] <= v[1]));
        assert!(w.weights()[peak..].windows(2).all(|v| v[0] >= v[1]));
        assert!((29..=31).contains(&peak));
    }

    #[test]
    fn rejects_bad_weight_vectors() {
        assert!(ScoreWeights::<f64>::new(vec![]).is_err());
        assert!(ScoreWeights::new(vec![0.5, 0.6]).is_err());
        assert!(ScoreWeights::new(vec![1.5, -0.5]).is_err());
        let w = uniform(3);
        assert!(all_distinct_probability(&w, 0).is_err());
    }
}
