//! The quadrature oracle against the closed forms, plus linearity,
//! semigroup and m-independence of the numerical operators.

use std::f64::consts::FRAC_2_SQRT_PI;

use fraccalc::{
    d_log, d_power, default_m, rl_apply, rl_derivative, rl_integral, Error, Integrand,
    QuadratureConfig,
};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn non_integer(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_filter("away from integers", |v: &f64| (v - v.round()).abs() > 0.02)
}

#[test]
fn classical_examples() {
    // ∫_0^2 log t dt = 2 log 2 − 2
    let v = rl_integral(&Integrand::log(), -1.0, 2.0, 0.0, &cfg()).unwrap();
    assert!((v - (2.0 * 2f64.ln() - 2.0)).abs() < 1e-12);
    // D^{1/2} t at 1 is 2/√π
    let d = rl_apply(&Integrand::power(1.0), 0.5, 1.0, 0.0, &cfg()).unwrap();
    assert!((d - FRAC_2_SQRT_PI).abs() < 1e-8);
    // order 0 is the identity
    assert_eq!(
        rl_apply(&Integrand::power(1.0), 0.0, 7.0, 0.0, &cfg()).unwrap(),
        7.0
    );
}

#[test]
fn lower_limit_one_fold() {
    // ∫_a^x t^{1/2} dt
    let (a, x) = (0.5f64, 3.0f64);
    let want = (x.powf(1.5) - a.powf(1.5)) / 1.5;
    let got = rl_integral(&Integrand::power(0.5), -1.0, x, a, &cfg()).unwrap();
    assert!((got - want).abs() < 1e-12);
    assert!(d_power(-1.0, 0.5, a).unwrap().eval(x) - want < 1e-13);
}

#[test]
fn rejects_bad_input() {
    let f = Integrand::log();
    assert!(matches!(
        rl_integral(&f, -0.5, 1.0, 2.0, &cfg()),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        rl_integral(&f, 0.5, 1.0, 0.0, &cfg()),
        Err(Error::Domain(_))
    ));
    // m must exceed 1 + σ
    assert!(matches!(
        rl_derivative(&f, 1.5, 1.0, 0.0, 2, &cfg()),
        Err(Error::Domain(_))
    ));
    // non-integrable at 0
    assert!(rl_integral(&Integrand::power(-1.5), -0.5, 1.0, 0.0, &cfg()).is_err());
    let bad = QuadratureConfig {
        abs_tol: -1.0,
        ..cfg()
    };
    assert!(rl_integral(&f, -0.5, 1.0, 0.0, &bad).is_err());
}

#[test]
fn tiny_budget_reports_tolerance() {
    let tight = QuadratureConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-300,
        max_subdivisions: 1,
        ..cfg()
    };
    let f = Integrand::new(|t: f64| (50.0 * t).sin());
    assert!(matches!(
        rl_integral(&f, -0.5, 3.0, 0.0, &tight),
        Err(Error::ToleranceNotMet { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrals_match_closed_forms(rho in 0.05f64..4.0, r in -0.9f64..3.5, x in 0.05f64..5.0) {
        prop_assume!(r + rho > 0.0);
        let got = rl_integral(&Integrand::power(r), -rho, x, 0.0, &cfg()).unwrap();
        let want = d_power(-rho, r, 0.0).unwrap().eval(x);
        prop_assert!(rel(got, want) < 1e-9, "rho = {rho}, r = {r}, x = {x}: {got} vs {want}");
        let got = rl_integral(&Integrand::log(), -rho, x, 0.0, &cfg()).unwrap();
        let want = d_log(-rho).unwrap().eval(x);
        prop_assert!(rel(got, want) < 1e-9, "log, rho = {rho}, x = {x}: {got} vs {want}");
    }

    #[test]
    fn derivatives_match_closed_forms(sigma in non_integer(0.05, 3.0), r in 0.0f64..3.5, x in 0.2f64..4.0) {
        let got = rl_apply(&Integrand::power(r), sigma, x, 0.0, &cfg()).unwrap();
        let want = d_power(sigma, r, 0.0).unwrap().eval(x);
        prop_assert!(rel(got, want) < 1e-6, "sigma = {sigma}, r = {r}, x = {x}: {got} vs {want}");
        let got = rl_apply(&Integrand::log(), sigma, x, 0.0, &cfg()).unwrap();
        let want = d_log(sigma).unwrap().eval(x);
        prop_assert!(rel(got, want) < 1e-6, "log, sigma = {sigma}, x = {x}: {got} vs {want}");
    }

    #[test]
    fn derivative_is_independent_of_m(sigma in non_integer(0.05, 2.9), x in 0.3f64..3.0) {
        let m0 = default_m(sigma);
        let f = Integrand::log();
        let a = rl_derivative(&f, sigma, x, 0.0, m0, &cfg()).unwrap();
        let b = rl_derivative(&f, sigma, x, 0.0, m0 + 1, &cfg()).unwrap();
        prop_assert!((a - b).abs() < 1e-6 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn integral_is_linear(rho in 0.1f64..3.0, c in -3.0f64..3.0, x in 0.1f64..4.0) {
        let f = Integrand::singular(move |t: f64| c * t.sqrt() + t.ln(), 0.0);
        let combined = rl_integral(&f, -rho, x, 0.0, &cfg()).unwrap();
        let parts = c * rl_integral(&Integrand::power(0.5), -rho, x, 0.0, &cfg()).unwrap()
            + rl_integral(&Integrand::log(), -rho, x, 0.0, &cfg()).unwrap();
        prop_assert!(rel(combined, parts) < 1e-9);
    }

    #[test]
    fn numeric_semigroup(alpha in 0.2f64..2.0, beta in 0.2f64..2.0, x in 0.3f64..3.0) {
        // the inner integral D^{-β} t² is applied pointwise by quadrature
        let inner = Integrand::new(move |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                rl_integral(&Integrand::power(2.0), -beta, t, 0.0, &QuadratureConfig::default())
                    .unwrap_or(f64::NAN)
            }
        });
        let nested = rl_integral(&inner, -alpha, x, 0.0, &cfg()).unwrap();
        let direct = rl_integral(&Integrand::power(2.0), -(alpha + beta), x, 0.0, &cfg()).unwrap();
        prop_assert!(rel(nested, direct) < 1e-8, "{nested} vs {direct}");
    }
}
