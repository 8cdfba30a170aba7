//! Numerical search for fair parameters at finite n.
//!
//! A game is fair when the expected net profit is exactly zero. The profit
//! is strictly increasing in `u`, `d` and `p`, smooth on each plateau of the
//! threshold index and jumping upward by one pmf term where the index drops,
//! so a fair point is located by bracketing a sign change and bisecting. A
//! bracket whose endpoints straddle zero across a threshold jump without
//! attaining it is reported as [`FairStatus::JumpAcrossZero`], a first-class
//! outcome rather than an error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::expected_net_profit;
use crate::error::{Error, Result};
use crate::game::{threshold_index, GameParams};
use crate::scalar::Real;

/// How a fair-parameter search concluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FairStatus {
    /// The profit attains zero inside the bracket.
    Crossing,
    /// The profit jumps from negative to positive across a threshold-index
    /// discontinuity inside the bracket without attaining zero.
    JumpAcrossZero,
    /// The profit has one sign over the whole scan range.
    NoSignChange,
}

/// Bracket returned by the fair-parameter searches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FairSolution<T = f64> {
    pub bracket_lo: T,
    pub bracket_hi: T,
    pub g_lo: T,
    pub g_hi: T,
    pub status: FairStatus,
}

impl<T: Real> FairSolution<T> {
    /// Midpoint of the bracket, the point estimate of the fair parameter.
    pub fn midpoint(&self) -> T {
        (self.bracket_lo + self.bracket_hi) / T::of(2.0)
    }
}

/// Default upper end of the up-factor scan range; covers every regime of
/// interest for d >= 0.25 and is configurable per call.
pub const DEFAULT_U_MAX: f64 = 4.0;

/// A bracket endpoint with |g| at or below this counts as an attained zero
/// even when the threshold index changes inside the bracket.
const ZERO_ATTAINED_TOL: f64 = 1e-6;

const MAX_BISECTIONS: u32 = 200;

/// Finds the up factor making the game fair at the given `d` and `p`
/// (`params.u` is ignored). Scans `u` over `[1, u_max]` on a grid dense
/// enough that the threshold index moves by at most one step per cell, then
/// bisects the sign-change cell to width `tol`.
///
/// The profit is strictly increasing in `u`, so the grid can be probed by
/// binary search instead of a full left-to-right walk; the bracketing cell
/// found this way is the unique sign-change cell of the grid.
pub fn fair_u_for_d<T: Real>(params: &GameParams<T>, tol: T, u_max: T) -> Result<FairSolution<T>> {
    let d = params.d;
    let p = params.p;
    if !(d > T::zero() && d < T::one()) {
        return Err(Error::domain(format!(
            "fair_u_for_d needs 0 < d < 1, got {d}"
        )));
    }
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::domain(format!(
            "fair_u_for_d needs 0 < p < 1, got {p}"
        )));
    }
    if u_max.is_nan() || u_max <= T::one() {
        return Err(Error::domain("u_max must exceed 1"));
    }
    ensure_positive_tol(tol)?;

    let g_at = |u: T| -> Result<T> {
        let mut pr = *params;
        pr.u = u;
        Ok(expected_net_profit(&pr)?.g)
    };

    // The threshold index moves fastest near u = 1, at rate n / ln(1/d) per
    // unit of u, which dictates the cell count; 4n is the floor.
    let span = (u_max - T::one()).as_f64();
    let slope = f64::from(params.n) / (1.0 / d.as_f64()).ln();
    let cells = ((span * slope).ceil() as u64)
        .max(4 * u64::from(params.n))
        .clamp(16, 2_000_000);
    let grid = |i: u64| -> T {
        if i >= cells {
            u_max
        } else {
            T::one() + (u_max - T::one()) * T::of(i as f64 / cells as f64)
        }
    };

    let mut solution = bracket_and_bisect(&g_at, grid, cells, tol)?;

    // A sign change across a threshold-index step with neither endpoint near
    // zero means the profit jumped over zero rather than attaining it.
    if solution.status == FairStatus::Crossing && solution.bracket_lo != solution.bracket_hi {
        let k_lo = threshold_index(params.n, solution.bracket_lo, d)?.k0;
        let k_hi = threshold_index(params.n, solution.bracket_hi, d)?.k0;
        let near_zero = solution.g_lo.abs().min(solution.g_hi.abs()) <= T::of(ZERO_ATTAINED_TOL);
        if k_lo != k_hi && !near_zero {
            solution.status = FairStatus::JumpAcrossZero;
        }
    }
    Ok(solution)
}

/// Finds the heads probability making the game fair at the given `u` and `d`
/// (`params.p` is ignored). The threshold index does not depend on `p`, so
/// the profit is continuous in `p` and a genuine crossing is expected
/// whenever the sign changes over `[0, 1]`.
pub fn fair_p<T: Real>(params: &GameParams<T>, tol: T) -> Result<FairSolution<T>> {
    params.check_analysis()?;
    ensure_positive_tol(tol)?;

    let g_at = |p: T| -> Result<T> {
        let mut pr = *params;
        pr.p = p;
        Ok(expected_net_profit(&pr)?.g)
    };

    let cells = 1024u64;
    let grid = |i: u64| -> T {
        if i >= cells {
            T::one()
        } else {
            T::of(i as f64 / cells as f64)
        }
    };
    let solution = bracket_and_bisect(&g_at, grid, cells, tol)?;
    // k0 is independent of p: a bracketed sign change is always a crossing.
    Ok(solution)
}

/// Maps [`fair_u_for_d`] over a grid of down factors. Points are evaluated in
/// parallel; the result order follows the grid order regardless of scheduling.
pub fn fair_curve<T: Real>(
    params: &GameParams<T>,
    d_grid: &[T],
    tol: T,
    u_max: T,
) -> Result<Vec<(T, FairSolution<T>)>> {
    for &d in d_grid {
        if !(d > T::zero() && d < T::one()) {
            return Err(Error::domain(format!(
                "curve grid needs 0 < d < 1, got {d}"
            )));
        }
    }
    d_grid
        .par_iter()
        .map(|&d| {
            let mut pr = *params;
            pr.d = d;
            fair_u_for_d(&pr, tol, u_max).map(|s| (d, s))
        })
        .collect()
}

fn ensure_positive_tol<T: Real>(tol: T) -> Result<()> {
    if !(tol > T::zero() && tol.is_finite()) {
        return Err(Error::domain(format!("tol must be > 0, got {tol}")));
    }
    Ok(())
}

/// Locates the first grid cell where a monotone objective reaches zero and
/// bisects it to width `tol`, keeping `g(lo) < 0 <= g(hi)`.
fn bracket_and_bisect<T, G, F>(g_at: &G, grid: F, cells: u64, tol: T) -> Result<FairSolution<T>>
where
    T: Real,
    G: Fn(T) -> Result<T>,
    F: Fn(u64) -> T,
{
    let g_first = g_at(grid(0))?;
    if g_first >= T::zero() {
        return Ok(FairSolution {
            bracket_lo: grid(0),
            bracket_hi: grid(0),
            g_lo: g_first,
            g_hi: g_first,
            status: FairStatus::Crossing,
        });
    }
    let g_last = g_at(grid(cells))?;
    if g_last < T::zero() {
        return Ok(FairSolution {
            bracket_lo: grid(0),
            bracket_hi: grid(cells),
            g_lo: g_first,
            g_hi: g_last,
            status: FairStatus::NoSignChange,
        });
    }

    // Binary search for the first grid index with g >= 0.
    let (mut lo_i, mut hi_i) = (0u64, cells);
    while hi_i - lo_i > 1 {
        let mid = lo_i + (hi_i - lo_i) / 2;
        if g_at(grid(mid))? < T::zero() {
            lo_i = mid;
        } else {
            hi_i = mid;
        }
    }

    let (mut lo, mut hi) = (grid(lo_i), grid(hi_i));
    let (mut g_lo, mut g_hi) = (g_at(lo)?, g_at(hi)?);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) / T::of(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g_at(mid)?;
        if g_mid < T::zero() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    Ok(FairSolution {
        bracket_lo: lo,
        bracket_hi: hi,
        g_lo,
        g_hi,
        status: FairStatus::Crossing,
    })
}
