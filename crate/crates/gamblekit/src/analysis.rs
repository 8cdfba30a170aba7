//! Exact finite-n evaluation of the expected net profit, its loss/win split
//! and the full variance decomposition.
//!
//! All binomial sums span many orders of magnitude (the largest and smallest
//! terms of the loss sum at n = 100 differ by roughly 1e60), so every sum is
//! evaluated in log space through ln-binomials, exponentiated relative to its
//! largest term and added largest-first with compensated summation.
//! Probabilities are normalized by the summed probability mass, which keeps
//! `win + loss = 1` and makes symmetric tails cancel bit-exactly.

pub mod exact;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, threshold_index, GameParams, PayoutVariant};
use crate::numeric::{count_times_ln, sum_descending, KahanSum};
use crate::scalar::Real;

/// Expected net profit per unit stake together with its components.
///
/// `g = -1 + term_a + term_b`, where `term_a` is the loss-branch expectation
/// contribution and `term_b` is twice the win probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfitAnalysis<T = f64> {
    /// Expected net profit per unit stake.
    pub g: T,
    /// Loss-branch contribution (zero under the total-loss payout).
    pub term_a: T,
    /// Twice the win probability.
    pub term_b: T,
    pub win_prob: T,
    pub loss_prob: T,
}

/// Variance of the unit-stake net profit with the five-summand expansion and
/// the capped-score / win-indicator decomposition.
///
/// `variance = summands[0] + summands[1] - summands[2] - summands[3] - summands[4]`
/// and `variance = var_c + var_d + 2 * cov_cd`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport<T = f64> {
    pub variance: T,
    /// `[v1, v2, v3, v4, v5]`; v1 and v2 enter positively, v3..v5 are subtracted.
    pub summands: [T; 5],
    /// Variance of the capped loss-branch score contribution.
    pub var_c: T,
    /// Variance of the win-indicator contribution.
    pub var_d: T,
    pub cov_cd: T,
}

/// ln(k!) for k = 0..=n. Built by compensated accumulation of ln k, which
/// keeps absolute errors near machine precision even for n in the millions.
pub(crate) struct LogFactorials<T> {
    values: Vec<T>,
}

impl<T: Real> LogFactorials<T> {
    pub fn new(n: u32) -> Self {
        let mut values = Vec::with_capacity(n as usize + 1);
        values.push(T::zero());
        let mut acc = KahanSum::new();
        for k in 1..=n {
            acc.add(T::from_count(k).ln());
            values.push(acc.value());
        }
        LogFactorials { values }
    }

    /// ln C(n, k). Grouping the subtrahend keeps the result bit-identical
    /// under k <-> n-k, which the tail normalization relies on.
    #[inline]
    pub fn ln_choose(&self, n: u32, k: u32) -> T {
        self.values[n as usize] - (self.values[k as usize] + self.values[(n - k) as usize])
    }
}

/// Binomial log-pmf terms `ln C(n,k) + k ln p + (n-k) ln q`, shifted by their
/// maximum so the largest term exponentiates to 1. The grouping keeps terms
/// bit-symmetric under k <-> n-k whenever `ln p == ln q`, which the exact
/// tail cancellation at p = 1/2 relies on.
pub(crate) fn shifted_log_pmf<T: Real>(n: u32, p: T) -> Vec<T> {
    let q = T::one() - p;
    let lf = LogFactorials::<T>::new(n);
    let mut log_terms = Vec::with_capacity(n as usize + 1);
    let mut max = T::neg_infinity();
    for k in 0..=n {
        let l = lf.ln_choose(n, k) + (count_times_ln(k, p) + count_times_ln(n - k, q));
        if l > max {
            max = l;
        }
        log_terms.push(l);
    }
    for l in log_terms.iter_mut() {
        *l -= max;
    }
    log_terms
}

/// Shared machinery for the binomial-sum quantities at fixed parameters.
struct Evaluator<T> {
    n: u32,
    k0: u32,
    ln_u: T,
    ln_d: T,
    /// Log pmf terms shifted by their maximum.
    log_pmf: Vec<T>,
    /// exp(log_pmf): pmf terms relative to the largest.
    rel: Vec<T>,
    /// Compensated sum of `rel` above the threshold, and the total mass.
    win_raw: T,
    total: T,
}

impl<T: Real> Evaluator<T> {
    fn new(params: &GameParams<T>) -> Result<Self> {
        params.check_analysis()?;
        let n = params.n;
        let k0 = threshold_index(n, params.u, params.d)?.k0;
        let log_pmf = shifted_log_pmf(n, params.p);
        let rel: Vec<T> = log_pmf.iter().map(|&l| l.exp()).collect();

        let split = k0 as usize + 1;
        let loss_raw = sum_descending(rel[..split].to_vec());
        let win_raw = sum_descending(rel[split..].to_vec());
        Ok(Evaluator {
            n,
            k0,
            ln_u: params.u.ln(),
            ln_d: params.d.ln(),
            log_pmf,
            rel,
            win_raw,
            total: loss_raw + win_raw,
        })
    }

    #[inline]
    fn win_prob(&self) -> T {
        self.win_raw / self.total
    }

    /// ln(u^k * d^(n-k)) for this game's factors.
    #[inline]
    fn log_score(&self, k: u32) -> T {
        let kc = if k == 0 {
            T::zero()
        } else {
            T::from_count(k) * self.ln_u
        };
        let tc = if k == self.n {
            T::zero()
        } else {
            T::from_count(self.n - k) * self.ln_d
        };
        kc + tc
    }

    /// Normalized loss-branch sum of `pmf(k) * (u^k d^(n-k))^power` over
    /// k = 0..=k0. `power` 1 gives the A term, 2 gives the first variance
    /// summand.
    fn capped_score_moment(&self, power: i32) -> T {
        let pw = T::of(f64::from(power));
        let terms: Vec<T> = (0..=self.k0)
            .map(|k| (self.log_pmf[k as usize] + pw * self.log_score(k)).exp())
            .collect();
        sum_descending(terms) / self.total
    }

    /// Normalized sum of squared loss-branch terms: sum of (pmf(k) * x_k)^2.
    fn squared_capped_terms(&self) -> T {
        let two = T::of(2.0);
        let terms: Vec<T> = (0..=self.k0)
            .map(|k| (two * (self.log_pmf[k as usize] + self.log_score(k))).exp())
            .collect();
        sum_descending(terms) / (self.total * self.total)
    }

    /// Normalized pmf weights, for the direct-oracle routes.
    fn weights(&self) -> Vec<T> {
        self.rel.iter().map(|&r| r / self.total).collect()
    }
}

/// Expected net profit per unit stake: the loss branch contributes
/// `A = sum_{k<=k0} C(n,k) (pu)^k (qd)^(n-k)`, the win branch
/// `B = 2 * P(X > k0)`, and `g = -1 + A + B`. Under the total-loss payout the
/// A term is omitted and `g = -1 + B`.
pub fn expected_net_profit<T: Real>(params: &GameParams<T>) -> Result<ProfitAnalysis<T>> {
    let ev = Evaluator::new(params)?;
    let win_prob = ev.win_prob();
    let loss_prob = T::one() - win_prob;
    let term_b = T::of(2.0) * win_prob;
    let term_a = match params.payout_variant {
        PayoutVariant::Proportional => ev.capped_score_moment(1),
        PayoutVariant::TotalLoss => T::zero(),
    };
    Ok(ProfitAnalysis {
        g: -T::one() + term_a + term_b,
        term_a,
        term_b,
        win_prob,
        loss_prob,
    })
}

/// Expected net profit when the payout is always `stake * final/initial`,
/// with no cap and no win bonus: `stake * ((p*u + q*d)^n - 1)`.
pub fn expected_net_profit_unbounded<T: Real>(params: &GameParams<T>) -> T {
    let per_round = params.p * params.u + params.q() * params.d;
    params.stake * (per_round.powi(params.n as i32) - T::one())
}

/// Variance of the unit-stake net profit via the five-summand expansion.
///
/// Requires the proportional payout; the total-loss variance has the closed
/// form [`total_loss_variance`]. The fifth summand's double sum collapses to
/// `A^2 - v3`, which this uses; the literal quadratic loop is kept as a debug
/// path and checked in tests.
pub fn variance_report<T: Real>(params: &GameParams<T>) -> Result<VarianceReport<T>> {
    if params.payout_variant != PayoutVariant::Proportional {
        return Err(Error::domain(
            "variance_report covers the proportional payout; use total_loss_variance",
        ));
    }
    let ev = Evaluator::new(params)?;
    let four = T::of(4.0);
    let win = ev.win_prob();
    let loss = T::one() - win;
    let a = ev.capped_score_moment(1);

    let v1 = ev.capped_score_moment(2);
    let v2 = four * win * loss;
    let v3 = ev.squared_capped_terms();
    let v4 = four * a * win;
    let v5 = a * a - v3;

    let var_c = v1 - a * a;
    let var_d = v2;
    let cov_cd = -(a + a) * win;
    Ok(VarianceReport {
        variance: v1 + v2 - v3 - v4 - v5,
        summands: [v1, v2, v3, v4, v5],
        var_c,
        var_d,
        cov_cd,
    })
}

/// Closed-form variance under the total-loss payout: the profit is a
/// two-point variable at `-stake`/`+stake`, so Var = 4 * win * loss * stake^2.
pub fn total_loss_variance<T: Real>(params: &GameParams<T>) -> Result<T> {
    let ev = Evaluator::new(params)?;
    let win = ev.win_prob();
    Ok(T::of(4.0) * win * (T::one() - win) * params.stake * params.stake)
}

/// Independent oracle route for the first two moments of the unit-stake net
/// profit: sums `pmf(k) * t(k)` and `pmf(k) * t(k)^2` directly over the heads
/// count, where `t` is [`game::net_profit_given_heads`] at unit stake. Valid
/// because the profit is a function of the heads count alone.
pub fn direct_moments<T: Real>(params: &GameParams<T>) -> Result<(T, T)> {
    let ev = Evaluator::new(params)?;
    let unit = params.with_stake(T::one())?;
    let weights = ev.weights();
    let mut mean = KahanSum::new();
    let mut second = KahanSum::new();
    for (k, &w) in weights.iter().enumerate() {
        let t = game::net_profit_given_heads(&unit, k as u32)?;
        mean.add(w * t);
        second.add(w * t * t);
    }
    let m = mean.value();
    Ok((m, second.value() - m * m))
}

/// Debug path for the fifth variance summand: the literal quadratic double
/// sum `2 * sum_{k<l<=k0} b_k b_l` over the loss-branch terms `b_k`.
/// [`variance_report`] uses the algebraically identical O(n) collapse
/// `A^2 - v3`; this loop exists to check it.
pub fn fifth_summand_literal<T: Real>(params: &GameParams<T>) -> Result<T> {
    let ev = Evaluator::new(params)?;
    let b: Vec<T> = (0..=ev.k0)
        .map(|k| (ev.log_pmf[k as usize] + ev.log_score(k)).exp() / ev.total)
        .collect();
    let mut acc = KahanSum::new();
    for k in 0..b.len() {
        for l in (k + 1)..b.len() {
            acc.add(b[k] * b[l]);
        }
    }
    Ok(T::of(2.0) * acc.value())
}

/// Upper tail `P(X >= k_min)` of a Binomial(n, p), normalized against the
/// full mass so complementary tails add to exactly 1.
pub fn binomial_upper_tail<T: Real>(n: u32, p: T, k_min: u32) -> Result<T> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::domain(format!("p must lie in [0, 1], got {p}")));
    }
    if k_min > n {
        return Ok(T::zero());
    }
    if k_min == 0 {
        return Ok(T::one());
    }
    let rel: Vec<T> = shifted_log_pmf(n, p).into_iter().map(|l| l.exp()).collect();
    let split = k_min as usize;
    let below = sum_descending(rel[..split].to_vec());
    let above = sum_descending(rel[split..].to_vec());
    Ok(above / (below + above))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, u: f64, d: f64, p: f64) -> GameParams {
        GameParams::new(n, u, d, p).unwrap()
    }

    fn default_game(n: u32) -> GameParams {
        params(n, 1.5, 0.6, 0.5)
    }

    #[test]
    fn one_round_profit_is_three_tenths() {
        let a = expected_net_profit(&default_game(1)).unwrap();
        assert!((a.g - 0.3).abs() < 1e-14, "g = {}", a.g);
        assert!((a.win_prob - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_round_profit_and_loss_probability() {
        // Win only at k = 2 (probability 1/4); the exact expectation is
        // 1/4 - 1/2 * 1/10 - 1/4 * 16/25 = 1/25.
        let a = expected_net_profit(&default_game(2)).unwrap();
        assert!((a.g - 0.04).abs() < 1e-14, "g = {}", a.g);
        assert!((a.loss_prob - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hundred_round_game_loses_two_thirds_of_the_stake() {
        let a = expected_net_profit(&default_game(100)).unwrap();
        assert!((a.g - (-0.68)).abs() < 5e-3, "g = {}", a.g);
        assert!((a.loss_prob - 0.864).abs() < 1e-3);
        assert!((a.win_prob - 0.136).abs() < 1e-3);
    }

    #[test]
    fn components_satisfy_their_identities() {
        for n in [1, 2, 7, 40, 150] {
            for (u, d, p) in [(1.5, 0.6, 0.5), (1.3, 0.8, 0.4), (2.0, 0.5, 0.65)] {
                let a = expected_net_profit(&params(n, u, d, p)).unwrap();
                assert!((a.g - (-1.0 + a.term_a + a.term_b)).abs() < 1e-10);
                assert!((a.win_prob + a.loss_prob - 1.0).abs() < 1e-12);
                assert_eq!(a.term_b, 2.0 * a.win_prob);
                assert!((-1.0..=1.0).contains(&a.g));
            }
        }
    }

    #[test]
    fn total_loss_omits_the_recovery_term() {
        let pr = default_game(100).with_variant(PayoutVariant::TotalLoss);
        let a = expected_net_profit(&pr).unwrap();
        assert_eq!(a.term_a, 0.0);
        assert!((a.g - (-1.0 + a.term_b)).abs() < 1e-15);
        // Strictly worse than the proportional payout.
        let prop = expected_net_profit(&default_game(100)).unwrap();
        assert!(a.g < prop.g);
    }

    #[test]
    fn win_tail_is_exactly_half_for_odd_fair_games() {
        // u * d = 1 with p = 1/2 puts the threshold at floor(n/2); for odd n
        // the upper tail is exactly half of the mass by symmetry, and the
        // normalized summation preserves that exactly.
        for n in [11, 101, 1001, 2001] {
            let a = expected_net_profit(&params(n, 1.5, 2.0 / 3.0, 0.5)).unwrap();
            assert_eq!(a.term_b, 1.0, "n = {n}");
            assert_eq!(a.win_prob, 0.5, "n = {n}");
        }
    }

    #[test]
    fn unbounded_profit_matches_gross_average_growth() {
        let pr = default_game(100).with_stake(1.0).unwrap();
        let g = expected_net_profit_unbounded(&pr);
        assert!((g - (1.05f64.powi(100) - 1.0)).abs() < 1e-9);
        assert!((g - 130.5).abs() < 0.01, "g = {g}");
    }

    #[test]
    fn unbounded_profit_is_zero_on_the_fair_lines() {
        // u + d = 2 with p = 1/2, exactly representable.
        let pr = params(57, 1.25, 0.75, 0.5);
        assert_eq!(expected_net_profit_unbounded(&pr), 0.0);
        // p*u + q*d = 1 with a biased coin: p = 0.25, u = 2.5, d = 0.5.
        let pr = params(12, 2.5, 0.5, 0.25);
        assert_eq!(expected_net_profit_unbounded(&pr), 0.0);
    }

    #[test]
    fn variance_matches_direct_oracle() {
        for n in [1, 2, 10, 55, 200] {
            for (u, d, p) in [(1.5, 0.6, 0.5), (1.3, 0.8, 0.4), (1.5, 2.0 / 3.0, 0.5)] {
                let pr = params(n, u, d, p);
                let report = variance_report(&pr).unwrap();
                let (mean, var) = direct_moments(&pr).unwrap();
                let g = expected_net_profit(&pr).unwrap().g;
                assert!(
                    (report.variance - var).abs() < 1e-9,
                    "n={n} u={u} d={d} p={p}: {} vs {var}",
                    report.variance
                );
                assert!((mean - g).abs() < 1e-12);
                assert!(report.variance >= 0.0);
            }
        }
    }

    #[test]
    fn variance_decompositions_agree() {
        for n in [5, 60, 173] {
            let pr = params(n, 1.4, 0.7, 0.45);
            let r = variance_report(&pr).unwrap();
            let [v1, v2, v3, v4, v5] = r.summands;
            assert!((r.variance - (v1 + v2 - v3 - v4 - v5)).abs() < 1e-12);
            assert!((r.variance - (r.var_c + r.var_d + 2.0 * r.cov_cd)).abs() < 1e-10);
            assert!(r.cov_cd * r.cov_cd <= r.var_c * r.var_d * (1.0 + 1e-9) + 1e-15);
        }
    }

    #[test]
    fn fifth_summand_collapse_matches_literal_loop() {
        for n in [3, 25, 120] {
            let pr = params(n, 1.5, 0.6, 0.5);
            let fast = variance_report(&pr).unwrap().summands[4];
            let literal = fifth_summand_literal(&pr).unwrap();
            assert!((fast - literal).abs() < 1e-12, "n={n}: {fast} vs {literal}");
        }
    }

    #[test]
    fn variance_shrinks_in_the_loss_regime_and_peaks_on_the_fair_line() {
        let early = variance_report(&default_game(50)).unwrap().variance;
        let late = variance_report(&default_game(200)).unwrap().variance;
        assert!(late < early);
        assert!(late < 0.25, "var(200) = {late}");

        let fair = variance_report(&params(1000, 1.5, 2.0 / 3.0, 0.5)).unwrap();
        assert!((fair.variance - 1.0).abs() < 0.1, "var = {}", fair.variance);
    }

    #[test]
    fn total_loss_variance_closed_form() {
        let pr = default_game(100)
            .with_stake(3.0)
            .unwrap()
            .with_variant(PayoutVariant::TotalLoss);
        let v = total_loss_variance(&pr).unwrap();
        let win = expected_net_profit(&pr).unwrap().win_prob;
        assert!((v - 4.0 * win * (1.0 - win) * 9.0).abs() < 1e-12);
        assert!(variance_report(&pr).is_err());
    }

    #[test]
    fn tail_normalization() {
        assert_eq!(binomial_upper_tail(10, 0.3, 0).unwrap(), 1.0);
        assert_eq!(binomial_upper_tail(10, 0.3, 11).unwrap(), 0.0);
        assert_eq!(binomial_upper_tail(101, 0.5, 51).unwrap(), 0.5);
        let p = binomial_upper_tail(100, 0.5f64, 56).unwrap();
        assert!((p - 0.136).abs() < 1e-3);
    }

    #[test]
    fn degenerate_coins() {
        let certain = expected_net_profit(&params(30, 1.5, 0.6, 1.0)).unwrap();
        assert_eq!(certain.win_prob, 1.0);
        assert_eq!(certain.g, 1.0);
        let never = expected_net_profit(&params(30, 1.5, 0.6, 0.0)).unwrap();
        assert_eq!(never.win_prob, 0.0);
        assert!((never.g - (0.6f64.powi(30) - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(expected_net_profit(&params(10, 1.5, 1.5, 0.5)).is_err());
        let bad = GameParams::new(10, 0.8, 0.6, 0.5).unwrap();
        assert!(expected_net_profit(&bad).is_err());
    }

    #[test]
    fn f32_instantiation_is_coarse_but_sane() {
        let pr = GameParams::<f32>::new(20, 1.5, 0.6, 0.5).unwrap();
        let a = expected_net_profit(&pr).unwrap();
        let a64 = expected_net_profit(&default_game(20)).unwrap();
        assert!((f64::from(a.g) - a64.g).abs() < 1e-4);
    }
}
