//! Small numeric helpers shared across modules: compensated summation,
//! log-space term evaluation and rational reconstruction of floats.

use crate::scalar::Real;

/// Kahan compensated accumulator.
#[derive(Clone, Copy, Debug)]
pub(crate) struct KahanSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        KahanSum {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum
    }
}

/// Sorts terms descending and adds them compensated. Sorting largest-first
/// keeps the running sum's exponent stable; non-finite inputs are a bug.
pub(crate) fn sum_descending<T: Real>(mut terms: Vec<T>) -> T {
    terms.sort_unstable_by(|a, b| b.partial_cmp(a).expect("terms must not be NaN"));
    let mut acc = KahanSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// `count * ln(base)` with the convention `0 * ln(0) = 0`, so that a weight
/// `base^count` contributes the factor 1 when `count = 0` even at `base = 0`.
#[inline]
pub(crate) fn count_times_ln<T: Real>(count: u32, base: T) -> T {
    if count == 0 {
        T::zero()
    } else {
        T::from_count(count) * base.ln()
    }
}

/// Reconstructs `x` as a fraction `num/den` with `den <= max_den`, accepting a
/// convergent only when it lies within a few ulps of `x`. Used to recover the
/// rational parameters a caller meant (0.6 -> 3/5) from their rounded doubles.
/// Returns `None` when no small fraction matches, e.g. for generic irrationals.
pub(crate) fn approx_rational(x: f64, max_den: u64) -> Option<(u64, u64)> {
    if !x.is_finite() || !(0.0..=9.0e15).contains(&x) {
        return None;
    }
    let tol = 8.0 * f64::EPSILON * x.abs().max(1.0);
    let close = |num: u64, den: u64| (num as f64 / den as f64 - x).abs() <= tol;

    // Continued-fraction convergents p/q of x.
    let (mut p0, mut q0) = (1u64, 0u64);
    let (mut p1, mut q1) = (x.floor() as u64, 1u64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if close(p1, q1) {
            return Some((p1, q1));
        }
        if frac <= 0.0 {
            break;
        }
        let inv = frac.recip();
        let a = inv.floor();
        if a > 9.0e15 {
            break;
        }
        frac = inv - a;
        let a = a as u64;
        let p2 = match a.checked_mul(p1).and_then(|v| v.checked_add(p0)) {
            Some(v) => v,
            None => break,
        };
        let q2 = match a.checked_mul(q1).and_then(|v| v.checked_add(q0)) {
            Some(v) => v,
            None => break,
        };
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    close(p1, q1).then_some((p1, q1))
}

/// Default denominator bound for [`approx_rational`] callers.
pub(crate) const MAX_RECONSTRUCTED_DENOMINATOR: u64 = 1_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::<f64>::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1e-15)).abs() < 1e-18);
    }

    #[test]
    fn descending_sum_matches_plain_sum_on_benign_input() {
        let terms = vec![0.5, 0.25, 0.125, 0.0625];
        assert_eq!(sum_descending(terms), 0.9375);
    }

    #[test]
    fn reconstructs_common_decimals() {
        assert_eq!(approx_rational(0.6, 1_000_000), Some((3, 5)));
        assert_eq!(approx_rational(1.5, 1_000_000), Some((3, 2)));
        assert_eq!(approx_rational(2.0 / 3.0, 1_000_000), Some((2, 3)));
        assert_eq!(approx_rational(0.0, 1_000_000), Some((0, 1)));
        assert_eq!(approx_rational(1.0, 1_000_000), Some((1, 1)));
    }

    #[test]
    fn rejects_irrationals_and_bad_input() {
        assert_eq!(approx_rational(std::f64::consts::SQRT_2, 1_000), None);
        assert_eq!(approx_rational(std::f64::consts::E, 1_000_000), None);
        assert_eq!(approx_rational(-0.5, 1_000_000), None);
        assert_eq!(approx_rational(f64::NAN, 1_000_000), None);
    }

    #[test]
    fn zero_count_times_ln_zero_is_zero() {
        assert_eq!(count_times_ln(0, 0.0f64), 0.0);
        assert_eq!(count_times_ln(2, 0.0f64), f64::NEG_INFINITY);
    }
}
