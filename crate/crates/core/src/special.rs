//! Gamma-family special functions on the real line.
//!
//! Γ and log Γ use the Lanczos approximation (g = 7, nine coefficients) on
//! `x >= 1/2` and the reflection formula below that. ψ and ψ⁽ᵐ⁾ shift the
//! argument upward with the recurrence `ψ(x+1) = ψ(x) + 1/x` (differentiated
//! `m` times for polygamma) and finish with the Bernoulli asymptotic series.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exact::{compensated_sum, factorial_f64, MAX_EXACT_FACTORIAL};

/// Euler's constant γ = −Γ′(1).
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// B₂ₖ for k = 1..=10.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174_611.0 / 330.0,
];

/// Largest argument for which Γ(x) is finite in double precision.
const GAMMA_OVERFLOW: f64 = 171.624_376_956_302_7;

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn pole(function: &'static str, at: f64) -> Error {
    Error::Pole { function, at }
}

fn check_arg(function: &'static str, x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::domain(format!("{function}: argument is NaN")));
    }
    if is_nonpositive_integer(x) {
        return Err(pole(function, x));
    }
    Ok(())
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r <= -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// cos(πx) with exact zeros at the half-integers.
pub(crate) fn cos_pi(x: f64) -> f64 {
    let r = (x % 2.0).abs();
    let r = if r > 1.0 { 2.0 - r } else { r };
    sin_pi(0.5 - r)
}

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| {
            acc + c / (z + (i + 1) as f64)
        })
}

fn small_positive_integer(x: f64) -> Option<u32> {
    (x >= 1.0 && x <= f64::from(MAX_EXACT_FACTORIAL + 1) && x == x.floor()).then_some(x as u32)
}

/// log |Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_arg("ln_gamma", x)?;
    if let Some(n) = small_positive_integer(x) {
        return Ok(factorial_f64(n - 1).ln());
    }
    if x < 0.5 {
        let s = sin_pi(x).abs();
        return Ok(PI.ln() - s.ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Γ(x), signed. Overflows to `+inf` above x ≈ 171.62.
pub fn gamma(x: f64) -> Result<f64> {
    check_arg("gamma", x)?;
    if x == x.floor() && (1.0..=171.0).contains(&x) {
        return Ok(factorial_f64(x as u32 - 1));
    }
    if x < 0.5 {
        return Ok(PI / (sin_pi(x) * gamma(1.0 - x)?));
    }
    if x > GAMMA_OVERFLOW {
        return Ok(f64::INFINITY);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (z + 0.5));
    Ok(SQRT_2PI * lanczos_sum(z) * half * (half * (-t).exp()))
}

/// Sign of Γ(x) for a non-pole argument.
pub(crate) fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || (x.floor() as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// 1/Γ(x), which is entire: zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Digamma ψ(x) = Γ′(x)/Γ(x).
pub fn digamma(x: f64) -> Result<f64> {
    check_arg("digamma", x)?;
    if x < 0.0 {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        return Ok(digamma(1.0 - x)? - PI * cos_pi(x) / sin_pi(x));
    }
    let mut z = x;
    let mut shift = 0.0;
    while z < 10.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(7).enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pow;
        pow *= inv2;
    }
    Ok(shift + z.ln() - 0.5 / z - series)
}

/// Polygamma ψ⁽ᵐ⁾(x) = dᵐ/dxᵐ ψ(x). `m = 0` is the digamma function.
pub fn polygamma(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return digamma(x).map_err(|_| pole("polygamma", x));
    }
    check_arg("polygamma", x)?;

    let mf = f64::from(m);
    let threshold = 20.0 + mf;
    let shifts = if x < threshold {
        (threshold - x).ceil() as u64
    } else {
        0
    };
    let z = x + shifts as f64;

    // (−1)^{m+1} (m−1)!/zᵐ · [1 + m/(2z) + Σ C(2k+m−1, 2k) B₂ₖ / z²ᵏ]
    let inv2 = 1.0 / (z * z);
    let mut binom = (mf + 1.0) * mf / 2.0;
    let mut pow = inv2;
    let mut series = 1.0 + mf / (2.0 * z);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        series += binom * b * pow;
        let kk = (k + 1) as f64;
        binom *= (2.0 * kk + mf) * (2.0 * kk + mf + 1.0) / ((2.0 * kk + 1.0) * (2.0 * kk + 2.0));
        pow *= inv2;
    }
    let sign_odd = if m % 2 == 1 { 1.0 } else { -1.0 }; // (−1)^{m+1}
    let asymptotic = sign_odd * factorial_f64(m - 1) * z.powi(-(m as i32)) * series;

    // ψ⁽ᵐ⁾(x) = ψ⁽ᵐ⁾(x+N) − (−1)ᵐ m! Σ_{k<N} (x+k)^{−m−1}
    let tail = compensated_sum(
        (0..shifts)
            .rev()
            .map(|k| (x + k as f64).powi(-(m as i32) - 1)),
    );
    Ok(asymptotic + sign_odd * factorial_f64(m) * tail)
}

/// lim_{ε→0} Γ(1+r+ε) / Γ(1+r+ε−σ).
///
/// Cases, with `A = 1+r` and `B = 1+r−σ`:
/// - neither is a pole: the plain ratio Γ(A)/Γ(B);
/// - only `B` is a pole: 0;
/// - only `A` is a pole: [`Error::DivergentLimit`];
/// - both are poles, `A = −p`, `B = −q`: the residues cancel and the limit
///   is `(−1)^{p−q} q!/p!`.
pub fn gamma_ratio_limit(r: f64, sigma: f64) -> Result<f64> {
    if r.is_nan() || sigma.is_nan() {
        return Err(Error::domain("gamma_ratio_limit: NaN argument"));
    }
    let a = 1.0 + r;
    let b = 1.0 + r - sigma;
    match (is_nonpositive_integer(a), is_nonpositive_integer(b)) {
        (false, false) => plain_gamma_ratio(a, b),
        (false, true) => Ok(0.0),
        (true, false) => Err(Error::DivergentLimit { r, sigma }),
        (true, true) => {
            let p = (-a) as u32;
            let q = (-b) as u32;
            let sign = if (p + q).is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(sign * factorial_ratio(q, p))
        }
    }
}

/// `num!/den!` as f64, correctly rounded while both factorials are exact.
pub(crate) fn factorial_ratio(num: u32, den: u32) -> f64 {
    if num <= MAX_EXACT_FACTORIAL && den <= MAX_EXACT_FACTORIAL {
        return factorial_f64(num) / factorial_f64(den);
    }
    if num >= den {
        (den + 1..=num).fold(1.0, |acc, k| acc * f64::from(k))
    } else {
        1.0 / (num + 1..=den).fold(1.0, |acc, k| acc * f64::from(k))
    }
}

fn plain_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a.abs() < 170.0 && b.abs() < 170.0 {
        return Ok(gamma(a)? / gamma(b)?);
    }
    let sign = gamma_sign(a) * gamma_sign(b);
    Ok(sign * (ln_gamma(a)? - ln_gamma(b)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn euler_constant_literal() {
        assert!((EULER_GAMMA - 0.577_215_664_901_532_9).abs() < 1e-15);
        assert_eq!(format!("{EULER_GAMMA:.6}"), "0.577216");
        assert!(format!("{EULER_GAMMA}").starts_with("0.577215"));
    }

    #[test]
    fn ln_gamma_examples() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert!(close(ln_gamma(0.5).unwrap(), 0.5 * PI.ln(), 1e-14));
        assert!(close(ln_gamma(5.0).unwrap(), 24f64.ln(), 1e-15));
        // log|Γ(−0.5)| = log(2√π)
        assert!(close(
            ln_gamma(-0.5).unwrap(),
            (2.0 * PI.sqrt()).ln(),
            1e-14
        ));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(4.0).unwrap(), 6.0);
        assert!(close(gamma(1.5).unwrap(), PI.sqrt() / 2.0, 1e-14));
        assert!(close(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-14));
        assert!(close(gamma(0.1).unwrap(), 9.513_507_698_668_732, 1e-14));
        assert!(close(gamma(170.5).unwrap(), 5.562_092_414_56e305, 1e-12));
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -2.0, -17.0] {
            assert!(matches!(gamma(x), Err(Error::Pole { .. })));
            assert!(matches!(ln_gamma(x), Err(Error::Pole { .. })));
            assert!(matches!(digamma(x), Err(Error::Pole { .. })));
            assert!(matches!(polygamma(2, x), Err(Error::Pole { .. })));
        }
        assert_eq!(recip_gamma(-3.0), 0.0);
    }

    #[test]
    fn digamma_examples() {
        assert!(close(digamma(1.0).unwrap(), -EULER_GAMMA, 1e-15));
        assert!(close(digamma(2.0).unwrap(), 1.0 - EULER_GAMMA, 1e-15));
        assert!(close(
            digamma(0.5).unwrap(),
            -EULER_GAMMA - 2.0 * 2f64.ln(),
            1e-15
        ));
        // two recurrence steps down from 1/2
        let psi_m15 = digamma(-1.5).unwrap();
        let psi_05 = digamma(0.5).unwrap();
        assert!(close(psi_m15, psi_05 + 2.0 + 2.0 / 3.0, 1e-14));
    }

    #[test]
    fn polygamma_examples() {
        assert!(close(polygamma(1, 1.0).unwrap(), PI * PI / 6.0, 1e-15));
        assert_eq!(polygamma(0, 1.0).unwrap(), digamma(1.0).unwrap());
        // ζ(3) = 1.2020569031595942
        assert!(close(
            polygamma(2, 1.0).unwrap(),
            -2.0 * 1.202_056_903_159_594_2,
            1e-15
        ));
        // ψ‴(1) = 6 ζ(4) = π⁴/15
        assert!(close(polygamma(3, 1.0).unwrap(), PI.powi(4) / 15.0, 1e-14));
        // ψ′(1/2) = π²/2
        assert!(close(polygamma(1, 0.5).unwrap(), PI * PI / 2.0, 1e-14));
    }

    #[test]
    fn polygamma_negative_argument_follows_recurrence() {
        let x = -1.3;
        for m in 1..4u32 {
            let lhs = polygamma(m, x + 1.0).unwrap() - polygamma(m, x).unwrap();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let rhs = sign * factorial_f64(m) * x.powi(-(m as i32) - 1);
            assert!(close(lhs, rhs, 1e-12), "m = {m}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn gamma_ratio_limit_examples() {
        assert_eq!(gamma_ratio_limit(2.0, 1.0).unwrap(), 2.0);
        assert_eq!(gamma_ratio_limit(-2.0, 1.0).unwrap(), -2.0);
        assert_eq!(gamma_ratio_limit(-1.0, 2.0).unwrap(), 2.0);
        assert_eq!(gamma_ratio_limit(-3.0, 3.0).unwrap(), -60.0);
        assert_eq!(gamma_ratio_limit(-3.0, -1.0).unwrap(), -0.5);
        // numerator regular, denominator at a pole
        assert_eq!(gamma_ratio_limit(1.0, 3.0).unwrap(), 0.0);
        assert!(matches!(
            gamma_ratio_limit(-2.0, 0.5),
            Err(Error::DivergentLimit { .. })
        ));
        // far outside the direct-Gamma range
        let big = gamma_ratio_limit(300.0, 0.5).unwrap();
        let expected = (ln_gamma(301.0).unwrap() - ln_gamma(300.5).unwrap()).exp();
        assert!(close(big, expected, 1e-13));
    }

    #[test]
    fn trig_pi_helpers() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(cos_pi(2.5), 0.0);
        assert!(close(sin_pi(0.25), 0.5f64.sqrt(), 1e-15));
        assert!(close(cos_pi(-1.0), -1.0, 1e-15));
        assert!(close(sin_pi(-2.75), (PI * -2.75).sin(), 1e-14));
    }
}
