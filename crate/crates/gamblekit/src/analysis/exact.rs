//! Arbitrary-precision rational oracle for the profit moments.
//!
//! An independent verification path: no floating point, no log-space tricks,
//! just direct summation over the heads count in `BigRational` arithmetic.
//! Restricted to `n <= 40`, where it runs instantly; the float pipeline is
//! checked against it on randomized parameter grids.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::game::PayoutVariant;
use crate::numeric::{approx_rational, MAX_RECONSTRUCTED_DENOMINATOR};

/// Largest n the oracle accepts.
pub const MAX_ORACLE_ROUNDS: u32 = 40;

/// Game parameters as exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalGameParams {
    pub n: u32,
    pub u: BigRational,
    pub d: BigRational,
    pub p: BigRational,
    pub payout_variant: PayoutVariant,
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl RationalGameParams {
    pub fn new(n: u32, u: BigRational, d: BigRational, p: BigRational) -> Result<Self> {
        if n == 0 || n > MAX_ORACLE_ROUNDS {
            return Err(Error::domain(format!(
                "oracle accepts 1 <= n <= {MAX_ORACLE_ROUNDS}, got {n}"
            )));
        }
        let one = BigRational::one();
        if d <= BigRational::zero() || d > one {
            return Err(Error::domain("d must satisfy 0 < d <= 1"));
        }
        if u < one {
            return Err(Error::domain("u must satisfy u >= 1"));
        }
        if u == d {
            return Err(Error::domain("u and d must differ"));
        }
        if p < BigRational::zero() || p > one {
            return Err(Error::domain("p must lie in [0, 1]"));
        }
        Ok(RationalGameParams {
            n,
            u,
            d,
            p,
            payout_variant: PayoutVariant::Proportional,
        })
    }

    /// Recovers exact rationals from rounded doubles. Rejects inputs that are
    /// not within a few ulps of a fraction with denominator at most 10^6.
    pub fn from_f64(n: u32, u: f64, d: f64, p: f64) -> Result<Self> {
        let rec = |x: f64, name: &str| {
            approx_rational(x, MAX_RECONSTRUCTED_DENOMINATOR)
                .map(|(a, b)| ratio(a, b))
                .ok_or_else(|| Error::NonRational(format!("{name} = {x}")))
        };
        RationalGameParams::new(n, rec(u, "u")?, rec(d, "d")?, rec(p, "p")?)
    }

    pub fn with_variant(mut self, variant: PayoutVariant) -> Self {
        self.payout_variant = variant;
        self
    }
}

/// Exact expectation and variance of the unit-stake net profit.
pub fn exact_rational_oracle(params: &RationalGameParams) -> Result<(BigRational, BigRational)> {
    let n = params.n;
    let one = BigRational::one();
    let q = &one - &params.p;

    // score(k) = u^k * d^(n-k); win iff score > 1.
    let score = |k: u32| -> BigRational {
        params.u.clone().pow(k as i32) * params.d.clone().pow((n - k) as i32)
    };
    let profit = |k: u32| -> BigRational {
        let s = score(k);
        if s > one {
            one.clone()
        } else {
            match params.payout_variant {
                PayoutVariant::Proportional => s - &one,
                PayoutVariant::TotalLoss => -one.clone(),
            }
        }
    };

    let mut mean = BigRational::zero();
    let mut second = BigRational::zero();
    let mut choose = BigUint::one();
    let mut mass = BigRational::zero();
    for k in 0..=n {
        if k > 0 {
            // C(n, k) = C(n, k-1) * (n - k + 1) / k, exact at every step.
            choose = choose * BigUint::from(n - k + 1) / BigUint::from(k);
        }
        let pmf = BigRational::from(BigInt::from(choose.clone()))
            * params.p.clone().pow(k as i32)
            * q.clone().pow((n - k) as i32);
        let t = profit(k);
        mean += &pmf * &t;
        second += &pmf * &t * &t;
        mass += pmf;
    }
    debug_assert!(mass.is_one(), "binomial mass must sum to 1 exactly");
    let var = second - &mean * &mean;
    Ok((mean, var))
}
