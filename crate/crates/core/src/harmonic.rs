//! Harmonic numbers, their extension `h(ρ) = ψ(1+ρ) + γ`, the generating
//! integral of `log x`, and partial zeta sums.

use crate::closed_form::{d_log, ClosedFormExpr};
use crate::error::{Error, Result};
use crate::exact;
use crate::quadrature::{rl_integral, Integrand, QuadratureConfig};
use crate::special::{digamma, gamma, is_nonpositive_integer, polygamma, EULER_GAMMA};

/// Largest `n` summed in exact rationals by [`harmonic_int`].
const MAX_EXACT_HARMONIC: u64 = 30;

/// A validated order for the extended harmonic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicOrder {
    rho: f64,
}

impl HarmonicOrder {
    pub fn new(rho: f64) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::domain(format!("order must be finite, got {rho}")));
        }
        if is_nonpositive_integer(1.0 + rho) {
            return Err(Error::Pole {
                function: "h",
                at: rho,
            });
        }
        Ok(HarmonicOrder { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn value(&self) -> f64 {
        digamma(1.0 + self.rho).expect("validated order") + EULER_GAMMA
    }
}

/// Arguments of `ζ(m|n) = Σ_{k=1}^n k^{−m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialZetaArgs {
    s_int: u32,
    n: u64,
}

impl PartialZetaArgs {
    pub fn new(s_int: u32, n: u64) -> Result<Self> {
        if s_int == 0 {
            return Err(Error::domain("zeta order must be >= 1"));
        }
        Ok(PartialZetaArgs { s_int, n })
    }

    pub fn s_int(&self) -> u32 {
        self.s_int
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// `h(n) = Σ_{k=1}^n 1/k`; exact rationals up to n = 30, compensated
/// summation (smallest terms first) beyond.
pub fn harmonic_int(n: u64) -> f64 {
    if n <= MAX_EXACT_HARMONIC {
        if let Some(h) = exact::harmonic(n) {
            return exact::to_f64(&h);
        }
    }
    exact::compensated_sum((1..=n).rev().map(|k| 1.0 / k as f64))
}

/// `h(ρ) = ψ(1+ρ) + γ`.
pub fn harmonic_ext(rho: f64) -> Result<f64> {
    Ok(HarmonicOrder::new(rho)?.value())
}

/// `h(ρ) = log x − Γ(1+ρ)/x^ρ · ∫₀^x log t (dt)^ρ`, evaluated literally.
///
/// For ρ > 0 the inner generating integral is computed by quadrature; for
/// −1 < ρ ≤ 0 it is an operator of non-negative order and the closed form
/// of `D^{−ρ} log x` is used instead. The result is independent of `x`.
pub fn harmonic_via_integral(rho: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let order = HarmonicOrder::new(rho)?;
    if rho < -1.0 {
        return Err(Error::domain(format!(
            "the generating integral route needs rho > -1, got {rho}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    let rho = order.rho();
    let inner = if rho > 0.0 {
        rl_integral(&Integrand::log(), -rho, x, 0.0, cfg)?
    } else {
        d_log(-rho)?.eval(x)
    };
    Ok(x.ln() - gamma(1.0 + rho)? / x.powf(rho) * inner)
}

/// `∫₀^x log t (dt)^ρ = x^ρ/Γ(1+ρ) · (log x − ψ(1+ρ) − γ)`, i.e. `D^{−ρ} log x`.
pub fn generating_integral_log(rho: f64) -> Result<ClosedFormExpr> {
    if rho.is_finite() && is_nonpositive_integer(1.0 + rho) {
        return Err(Error::Pole {
            function: "gamma",
            at: 1.0 + rho,
        });
    }
    d_log(-rho)
}

/// `ζ(m|n) = (−1)^m/(m−1)! · (ψ^{(m−1)}(1) − ψ^{(m−1)}(1+n))`.
///
/// This sign follows from `ψ^{(m−1)}(x) = (−1)^m (m−1)! Σ_{k≥0} (x+k)^{−m}`
/// and makes `m = 1` reproduce `h(n)`.
pub fn zeta_partial(args: PartialZetaArgs) -> f64 {
    let m = args.s_int;
    if args.n == 0 {
        return 0.0;
    }
    let at = |x: f64| polygamma(m - 1, x).expect("positive argument");
    let diff = at(1.0) - at(1.0 + args.n as f64);
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * diff / exact::factorial_f64(m - 1)
}

/// `Σ_{k=1}^n k^{−s}` summed directly: exactly when `s` is a small positive
/// integer and the rational fits, otherwise with compensated summation.
pub fn zeta_partial_direct(s: f64, n: u64) -> f64 {
    if s >= 1.0 && s == s.floor() && s <= 64.0 {
        if let Some(q) = exact::power_sum(s as u32, n) {
            return exact::to_f64(&q);
        }
    }
    exact::compensated_sum((1..=n).rev().map(|k| (k as f64).powf(-s)))
}

/// `h(n) − log n − γ`, which lies in `(0, 1/n)`.
pub fn asymptotic_gap(n: u64) -> f64 {
    assert!(n >= 1, "asymptotic_gap needs n >= 1");
    harmonic_int(n) - (n as f64).ln() - EULER_GAMMA
}

/// Samples closer than this to a pole of `h` are skipped.
pub const CURVE_POLE_GAP: f64 = 1e-6;

/// Largest number of samples [`harmonic_curve`] will produce.
pub const MAX_CURVE_POINTS: usize = 10_000_000;

/// One sample of `ρ ↦ h(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvePoint {
    /// `exact` carries `h(n)` from the finite sum when `ρ = n ≥ 0`.
    Value {
        rho: f64,
        h: f64,
        exact: Option<f64>,
    },
    /// `ρ` lies within [`CURVE_POLE_GAP`] of a negative integer.
    SkippedPole { rho: f64 },
}

/// Samples `h(ρ)` at `ρ_min, ρ_min + step, …, ≤ ρ_max`. Samples within
/// 1e-9 of an integer are snapped onto it.
pub fn harmonic_curve(rho_min: f64, rho_max: f64, step: f64) -> Result<Vec<CurvePoint>> {
    if !rho_min.is_finite() || !rho_max.is_finite() || !step.is_finite() {
        return Err(Error::domain("curve bounds and step must be finite"));
    }
    if !(step > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    if rho_min > rho_max {
        return Err(Error::domain(format!(
            "rho_min = {rho_min} exceeds rho_max = {rho_max}"
        )));
    }
    let count = ((rho_max - rho_min) / step + 1e-9).floor() + 1.0;
    if count > MAX_CURVE_POINTS as f64 {
        return Err(Error::domain(format!(
            "curve would have {count} points (limit {MAX_CURVE_POINTS})"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    for k in 0..count as usize {
        let mut rho = rho_min + k as f64 * step;
        let nearest = rho.round();
        if (rho - nearest).abs() <= 1e-9 {
            rho = nearest;
        }
        if nearest <= -1.0 && (rho - nearest).abs() < CURVE_POLE_GAP {
            out.push(CurvePoint::SkippedPole { rho });
            continue;
        }
        let exact = (rho == nearest && rho >= 0.0).then(|| harmonic_int(rho as u64));
        out.push(CurvePoint::Value {
            rho,
            h: harmonic_ext(rho)?,
            exact,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_int_examples() {
        assert_eq!(harmonic_int(0), 0.0);
        assert_eq!(harmonic_int(1), 1.0);
        assert_eq!(harmonic_int(3), 11.0 / 6.0);
        let h100 = harmonic_int(100);
        assert!((h100 - 5.187_377_517_639_621).abs() < 1e-13);
    }

    #[test]
    fn harmonic_ext_examples() {
        assert!(harmonic_ext(0.0).unwrap().abs() < 1e-15);
        assert!((harmonic_ext(5.0).unwrap() - 137.0 / 60.0).abs() < 1e-14);
        let half = 2.0 - 2.0 * 2f64.ln();
        assert!((harmonic_ext(0.5).unwrap() - half).abs() < 1e-14);
        assert!(matches!(harmonic_ext(-2.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn harmonic_via_integral_examples() {
        let cfg = QuadratureConfig::default();
        let e = std::f64::consts::E;
        assert!((harmonic_via_integral(1.0, e, &cfg).unwrap() - 1.0).abs() < 1e-9);
        assert!((harmonic_via_integral(2.0, 1.0, &cfg).unwrap() - 1.5).abs() < 1e-9);
        let half = 2.0 - 2.0 * 2f64.ln();
        assert!((harmonic_via_integral(0.5, 2.0, &cfg).unwrap() - half).abs() < 1e-8);
        // closed-form route for −1 < ρ ≤ 0
        let v = harmonic_via_integral(-0.5, 3.0, &cfg).unwrap();
        assert!((v - harmonic_ext(-0.5).unwrap()).abs() < 1e-13);
        assert!(matches!(
            harmonic_via_integral(-1.5, 1.0, &cfg),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            harmonic_via_integral(-1.0, 1.0, &cfg),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn generating_integral_examples() {
        let e = generating_integral_log(1.0).unwrap();
        assert_eq!(e.coeff(1.0, 1), 1.0);
        assert_eq!(e.coeff(1.0, 0), -1.0);
        let e = generating_integral_log(3.0).unwrap();
        assert!((e.coeff(3.0, 1) - 1.0 / 6.0).abs() < 1e-16);
        assert!((e.coeff(3.0, 0) + 11.0 / 36.0).abs() < 1e-16);
        assert!(matches!(
            generating_integral_log(-1.0),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn zeta_examples() {
        let z = |m, n| zeta_partial(PartialZetaArgs::new(m, n).unwrap());
        assert!((z(2, 1) - 1.0).abs() < 1e-14);
        assert!((z(2, 3) - 49.0 / 36.0).abs() < 1e-14);
        assert!((z(3, 10) - zeta_partial_direct(3.0, 10)).abs() < 1e-12);
        assert_eq!(zeta_partial_direct(2.0, 0), 0.0);
        assert_eq!(zeta_partial_direct(2.0, 3), 49.0 / 36.0);
        assert!(PartialZetaArgs::new(0, 3).is_err());
    }

    #[test]
    fn curve_examples() {
        let pts = harmonic_curve(0.0, 3.0, 1.0).unwrap();
        let exact: Vec<f64> = pts
            .iter()
            .map(|p| match p {
                CurvePoint::Value { exact, .. } => exact.unwrap(),
                CurvePoint::SkippedPole { .. } => panic!("no poles here"),
            })
            .collect();
        assert_eq!(exact, vec![0.0, 1.0, 1.5, 11.0 / 6.0]);

        let pts = harmonic_curve(0.5, 0.5, 1.0).unwrap();
        assert_eq!(pts.len(), 1);

        let pts = harmonic_curve(-2.5, -0.5, 0.5).unwrap();
        let skipped = pts
            .iter()
            .filter(|p| matches!(p, CurvePoint::SkippedPole { .. }))
            .count();
        assert_eq!((pts.len(), skipped), (5, 2));

        assert!(harmonic_curve(1.0, 0.0, 0.1).is_err());
        assert!(harmonic_curve(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn asymptotic_gap_examples() {
        assert!((asymptotic_gap(1) - (1.0 - EULER_GAMMA)).abs() < 1e-15);
        let g10 = asymptotic_gap(10);
        // h(10) − log 10 − γ, from a 30-digit reference
        assert!((g10 - 0.049_167_496_072_675_42).abs() < 1e-15 && g10 < 0.06);
        assert!(asymptotic_gap(1000) < 1e-3);
    }
}
