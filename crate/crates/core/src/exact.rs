//! Small exact-arithmetic helpers shared by the closed forms and the
//! harmonic sums.

use num_rational::Ratio;
use num_traits::{CheckedAdd, ToPrimitive};

pub(crate) type Rational = Ratio<i128>;

/// Largest `n` whose factorial is exactly representable as an `f64`.
pub(crate) const MAX_EXACT_FACTORIAL: u32 = 22;

/// `n!` as an `f64`; exact for `n <= 22`, correctly accumulated above.
pub(crate) fn factorial_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

pub(crate) fn factorial_i128(n: u32) -> Option<i128> {
    (2..=n).try_fold(1i128, |acc, k| acc.checked_mul(i128::from(k)))
}

/// `Σ_{k=1}^{n} 1/k^s` as an exact rational, or `None` once the
/// denominators outgrow `i128`.
pub(crate) fn power_sum(s: u32, n: u64) -> Option<Rational> {
    let mut acc = Rational::from_integer(0);
    for k in 1..=n {
        let denom = i128::from(k).checked_pow(s)?;
        acc = acc.checked_add(&Rational::new(1, denom))?;
    }
    Some(acc)
}

pub(crate) fn harmonic(n: u64) -> Option<Rational> {
    power_sum(1, n)
}

pub(crate) fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Neumaier-compensated sum, accumulated in the iterator's order.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_are_exact_up_to_22() {
        for n in 0..=MAX_EXACT_FACTORIAL {
            let exact = factorial_i128(n).unwrap();
            assert_eq!(factorial_f64(n) as i128, exact, "n = {n}");
        }
    }

    #[test]
    fn harmonic_small() {
        assert_eq!(harmonic(0).unwrap(), Rational::from_integer(0));
        assert_eq!(harmonic(3).unwrap(), Rational::new(11, 6));
        assert_eq!(harmonic(5).unwrap(), Rational::new(137, 60));
        assert!(harmonic(30).is_some());
    }

    #[test]
    fn power_sum_overflow_is_reported() {
        assert!(power_sum(4, 100).is_none());
        assert_eq!(power_sum(2, 3).unwrap(), Rational::new(49, 36));
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
