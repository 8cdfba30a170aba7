//! Large-n behaviour: regime classification, the concentration bounds that
//! drive the convergence rates, two analytic inequalities as testable
//! functions, and side-by-side convergence tables.
//!
//! The long-run fate of the game is decided by the sign of
//! `ln(u^p * d^q) = p ln u + q ln d`: positive means the expected unit-stake
//! profit tends to +1, negative to -1, and exactly zero is the fair boundary
//! where the profit tends to a two-point limit and the variance to 1.

use serde::{Deserialize, Serialize};

use crate::analysis::{expected_net_profit, variance_report};
use crate::error::{Error, Result};
use crate::game::{check_up_down, threshold_index, GameParams};
use crate::scalar::Real;

/// Long-run regime of the game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Loss,
    Fair,
    Profit,
}

/// Limit law of the unit-stake net profit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitDistribution {
    /// Degenerate at the given value, -1 or +1.
    PointMass(i8),
    /// +1 and -1 with probability 1/2 each.
    TwoPoint,
}

/// Classification of a parameter triple with all limit objects filled in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticClass<T = f64> {
    pub regime: Regime,
    /// The threshold quantity `u^p * d^q`.
    pub criterion: T,
    /// Limit of the expected unit-stake profit: -1, 0 or +1.
    pub g_limit: T,
    /// Limit of the unit-stake profit variance: 0, or 1 on the fair boundary.
    pub var_limit: T,
    pub limit_distribution: LimitDistribution,
}

/// Default tolerance for fair-boundary detection, applied on the log scale.
pub const DEFAULT_FAIR_TOL: f64 = 1e-12;

/// Classifies `(u, d, p)` by the sign of `p ln u + q ln d`.
///
/// The comparison runs on the log scale because the multiplicative criterion
/// is ill-conditioned near 1; `tol` is the half-width of the band treated as
/// fair.
pub fn classify<T: Real>(u: T, d: T, p: T, tol: T) -> Result<AsymptoticClass<T>> {
    check_up_down(u, d)?;
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain(format!(
            "classification requires 0 < p < 1, got {p}"
        )));
    }
    if tol.is_nan() || tol < T::zero() {
        return Err(Error::domain("tol must be nonnegative"));
    }
    let log_criterion = p * u.ln() + (T::one() - p) * d.ln();
    let criterion = log_criterion.exp();
    let class = if log_criterion.abs() <= tol {
        AsymptoticClass {
            regime: Regime::Fair,
            criterion,
            g_limit: T::zero(),
            var_limit: T::one(),
            limit_distribution: LimitDistribution::TwoPoint,
        }
    } else if log_criterion > T::zero() {
        AsymptoticClass {
            regime: Regime::Profit,
            criterion,
            g_limit: T::one(),
            var_limit: T::zero(),
            limit_distribution: LimitDistribution::PointMass(1),
        }
    } else {
        AsymptoticClass {
            regime: Regime::Loss,
            criterion,
            g_limit: -T::one(),
            var_limit: T::zero(),
            limit_distribution: LimitDistribution::PointMass(-1),
        }
    };
    Ok(class)
}

/// Relative-entropy upper tail bound for a Binomial(n, prob):
/// `P(X >= n*y) <= (((1-prob)^(1-y) * prob^y) / ((1-y)^(1-y) * y^y))^n`
/// for `prob < y < 1`. Evaluated in log space.
pub fn chernoff_hoeffding_bound<T: Real>(n: u32, prob: T, y: T) -> Result<T> {
    if !(prob > T::zero() && prob < T::one()) {
        return Err(Error::domain(format!(
            "prob must lie in (0, 1), got {prob}"
        )));
    }
    if !(y > prob && y < T::one()) {
        return Err(Error::domain(format!(
            "y must lie strictly between prob = {prob} and 1, got {y}"
        )));
    }
    let one = T::one();
    let per_trial = (one - y) * ((one - prob) / (one - y)).ln() + y * (prob / y).ln();
    Ok((T::from_count(n) * per_trial).exp())
}

/// One-sided sub-Gaussian tail bound `exp(-2 * deviation^2 * n)` for the
/// event `X - n*p >= deviation * n`. Valid for any bounded per-round outcome.
pub fn hoeffding_tail_bound<T: Real>(n: u32, deviation: T) -> T {
    (-T::of(2.0) * deviation * deviation * T::from_count(n)).exp()
}

/// Both sides of `(1-x)^(1-x) * (d-x)^x >= 1 - x/d` for `d` in (0, 1] and
/// `x` in [0, d]. Strict inside the open rectangle; equal along `d = 1`,
/// `x = 0` and `x = d`.
pub fn power_product_lower_bound<T: Real>(d: T, x: T) -> Result<(T, T)> {
    let one = T::one();
    if !(d > T::zero() && d <= one) {
        return Err(Error::domain(format!("d must lie in (0, 1], got {d}")));
    }
    if !(x >= T::zero() && x <= d) {
        return Err(Error::domain(format!("x must lie in [0, d], got {x}")));
    }
    let lhs = (one - x).powf(one - x) * (d - x).powf(x);
    let rhs = one - x / d;
    Ok((lhs, rhs))
}

/// `(x/p)^x * ((1-x)/(1-p))^(1-x)`, which is `exp(KL(x || p))` for Bernoulli
/// laws and therefore at least 1, with equality exactly at `x = p`. Returns
/// `(lhs, 1)`.
pub fn kl_exponential_lower_bound<T: Real>(x: T, p: T) -> Result<(T, T)> {
    let one = T::one();
    if !(x > T::zero() && x < one) || !(p > T::zero() && p < one) {
        return Err(Error::domain(format!(
            "x and p must lie in (0, 1), got x = {x}, p = {p}"
        )));
    }
    let lhs = (x / p).powf(x) * ((one - x) / (one - p)).powf(one - x);
    Ok((lhs, one))
}

/// Expected convergence speed of the finite-n quantities toward their limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvergenceRate {
    Exponential,
    /// Order 1/sqrt(n), seen on the fair boundary.
    InverseSqrtN,
}

/// One row of a convergence table: the exact finite-n quantities next to the
/// applicable theoretical tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow<T = f64> {
    pub n: u32,
    pub a_term: T,
    pub b_term: T,
    pub g: T,
    pub variance: T,
    /// Limit of the b term in this regime: 0, 1 or 2.
    pub b_limit: T,
    /// Sub-Gaussian bound on `|b_term - b_limit|` once the threshold index
    /// sits on the correct side of `n*p`; descriptive, not asserted.
    pub b_deviation_bound: Option<T>,
    pub rate: ConvergenceRate,
}

/// Evaluates exact finite-n quantities over an ascending list of round
/// counts, annotated with the regime's bound and expected rate.
pub fn convergence_profile<T: Real>(
    u: T,
    d: T,
    p: T,
    n_list: &[u32],
) -> Result<Vec<ConvergenceRow<T>>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("n_list must be strictly ascending"));
    }
    let class = classify(u, d, p, T::of(DEFAULT_FAIR_TOL))?;
    let (b_limit, rate) = match class.regime {
        Regime::Loss => (T::zero(), ConvergenceRate::Exponential),
        Regime::Fair => (T::one(), ConvergenceRate::InverseSqrtN),
        Regime::Profit => (T::of(2.0), ConvergenceRate::Exponential),
    };

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let params = GameParams::new(n, u, d, p)?;
        let profile = expected_net_profit(&params)?;
        let variance = variance_report(&params)?.variance;
        let k0 = threshold_index(n, u, d)?.k0;
        let deviation = T::from_count(k0) / T::from_count(n) - p;
        let b_deviation_bound = match class.regime {
            Regime::Loss if deviation > T::zero() => {
                Some(T::of(2.0) * hoeffding_tail_bound(n, deviation))
            }
            Regime::Profit if deviation < T::zero() => {
                Some(T::of(2.0) * hoeffding_tail_bound(n, deviation))
            }
            _ => None,
        };
        rows.push(ConvergenceRow {
            n,
            a_term: profile.term_a,
            b_term: profile.term_b,
            g: profile.g,
            variance,
            b_limit,
            b_deviation_bound,
            rate,
        });
    }
    Ok(rows)
}
