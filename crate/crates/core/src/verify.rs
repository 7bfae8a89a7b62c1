//! The property suites, runnable as one report.
//!
//! Each check evaluates one invariant over its whole grid and reports the
//! worst error seen against its tolerance. Checks are independent and run
//! in parallel; results come back in registration order.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::closed_form::{
    classify_region, d_int_power, d_log, d_power, d_power_extended, ClosedFormExpr, LogPowerTerm,
    Region,
};
use crate::error::{Error, Result};
use crate::harmonic::{
    asymptotic_gap, generating_integral_log, harmonic_curve, harmonic_ext, harmonic_int,
    harmonic_via_integral, zeta_partial, zeta_partial_direct, CurvePoint, PartialZetaArgs,
};
use crate::quadrature::{
    default_m, rl_apply, rl_derivative, rl_integral, Integrand, QuadratureConfig,
};
use crate::special::{digamma, gamma, gamma_ratio_limit, polygamma, EULER_GAMMA};
use crate::tables::{
    gen_integral_coeff, render_table, table1, TableFormat, TABLE1_GOLDEN_CSV, TABLE1_GOLDEN_TEXT,
};

/// Environment variable overriding [`VerifyConfig::tolerance`].
pub const TOLERANCE_ENV: &str = "FRACCALC_TOL";

/// Default tolerance of the quadrature-backed checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Fixed seed: the sampled grids are the same on every run.
const SEED: u64 = 0x5eed_f4ac;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Special,
    ClosedForm,
    ClosedVsQuad,
    Quadrature,
    LemmaM,
    Harmonic,
    Zeta,
    Table1,
    Tables,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "all",
        "special",
        "closed-form",
        "closed-vs-quad",
        "quadrature",
        "lemma-m",
        "harmonic",
        "zeta",
        "table1",
        "tables",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Special => "special",
            Suite::ClosedForm => "closed-form",
            Suite::ClosedVsQuad => "closed-vs-quad",
            Suite::Quadrature => "quadrature",
            Suite::LemmaM => "lemma-m",
            Suite::Harmonic => "harmonic",
            Suite::Zeta => "zeta",
            Suite::Table1 => "table1",
            Suite::Tables => "tables",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "special" => Suite::Special,
            "closed-form" => Suite::ClosedForm,
            "closed-vs-quad" => Suite::ClosedVsQuad,
            "quadrature" => Suite::Quadrature,
            "lemma-m" => Suite::LemmaM,
            "harmonic" => Suite::Harmonic,
            "zeta" => Suite::Zeta,
            "table1" => Suite::Table1,
            "tables" => Suite::Tables,
            other => {
                return Err(Error::domain(format!(
                    "unknown suite '{other}' (expected one of {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Tolerance of the quadrature-backed checks.
    pub tolerance: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tolerance: DEFAULT_TOLERANCE,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl VerifyConfig {
    /// Defaults, with the tolerance taken from `FRACCALC_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = VerifyConfig::default();
        if let Ok(raw) = std::env::var(TOLERANCE_ENV) {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("{TOLERANCE_ENV}='{raw}' is not a number")))?;
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(Error::domain(format!(
                    "{TOLERANCE_ENV} must be positive and finite, got {tol}"
                )));
            }
            cfg.tolerance = tol;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    /// Worst error over the grid, in the check's own measure.
    pub worst_error: f64,
    pub tolerance: f64,
    /// First failing case, when there is one.
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{} worst={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.worst_error,
            self.tolerance
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// A registered invariant.
#[derive(Clone, Copy)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    run: fn(&VerifyConfig) -> Tracker,
}

impl Check {
    pub fn run(&self, cfg: &VerifyConfig) -> CheckResult {
        let t = (self.run)(cfg);
        CheckResult {
            suite: self.suite,
            name: self.name,
            passed: t.first_failure.is_none() && t.cases > 0,
            worst_error: t.worst,
            tolerance: t.nominal_tol,
            detail: t.first_failure.unwrap_or_else(|| {
                if t.cases == 0 {
                    "no cases".into()
                } else {
                    String::new()
                }
            }),
        }
    }
}

impl fmt::Debug for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Check({}/{})", self.suite, self.name)
    }
}

/// Accumulates the worst error of a check.
struct Tracker {
    nominal_tol: f64,
    worst: f64,
    cases: usize,
    first_failure: Option<String>,
}

impl Tracker {
    fn new(nominal_tol: f64) -> Self {
        Tracker {
            nominal_tol,
            worst: 0.0,
            cases: 0,
            first_failure: None,
        }
    }

    /// Records `err` against `tol`; NaN fails.
    fn record(&mut self, err: f64, tol: f64, label: impl FnOnce() -> String) {
        self.cases += 1;
        if err.is_nan() || err > self.worst {
            self.worst = if err.is_nan() { f64::NAN } else { err };
        }
        if !(err <= tol) && self.first_failure.is_none() {
            self.first_failure = Some(format!("{}: error {err:.3e} > {tol:.1e}", label()));
        }
    }

    fn fail(&mut self, label: impl FnOnce() -> String) {
        self.cases += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(label());
        }
    }

    /// Records a fallible case; an `Err` is a failure.
    fn record_result(&mut self, r: Result<f64>, tol: f64, label: impl Fn() -> String) {
        match r {
            Ok(err) => self.record(err, tol, label),
            Err(e) => self.fail(|| format!("{}: {e}", label())),
        }
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------- special

fn euler_constant(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-15);
    t.record((EULER_GAMMA - 0.577_215_664_901_532_9).abs(), 1e-15, || {
        "literal".into()
    });
    let digits = format!("{EULER_GAMMA:.6}");
    if !digits.starts_with("0.577215") && !digits.starts_with("0.577216") {
        t.fail(|| format!("leading digits {digits}"));
    }
    let six = (EULER_GAMMA * 1e6).floor() / 1e6;
    t.record((six - 0.577_215).abs(), 1e-12, || "first six digits".into());
    t
}

fn digamma_recurrence(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let fixed = [0.1, 0.5, 1.0, 2.5, 10.0];
    let random: Vec<f64> = (0..1000).map(|_| 50.0 * (1.0 - rng.gen::<f64>())).collect();
    for &x in fixed.iter().chain(&random) {
        let r = digamma(x + 1.0).and_then(|a| Ok(a - digamma(x)? - 1.0 / x));
        t.record_result(r.map(f64::abs), 1e-12, || format!("x = {x}"));
    }
    t
}

fn gamma_reflection(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-12);
    for k in 0..1000 {
        let x = -5.0 + 10.0 * (k as f64 + 0.5) / 1000.0;
        if (x - x.round()).abs() < 1e-3 {
            continue;
        }
        let want = PI / (PI * x).sin();
        let r = gamma(x).and_then(|a| Ok(rel_err(a * gamma(1.0 - x)?, want)));
        t.record_result(r, 1e-12, || format!("x = {x}"));
    }
    t
}

fn polygamma_series(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-10);
    const TERMS: usize = 20_000;
    for m in 1..=3u32 {
        for x in [0.5, 1.0, 2.0] {
            let p = f64::from(m + 1);
            // head of Σ 1/(x+k)^{m+1}, smallest terms first
            let head: f64 = (0..TERMS).rev().map(|k| (x + k as f64).powf(-p)).sum();
            // midpoint Euler-Maclaurin tail, error O(N^{−m−3})
            let tail = (x + TERMS as f64 - 0.5).powf(-f64::from(m)) / f64::from(m);
            let fact: f64 = (1..=m).map(f64::from).product();
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            let want = sign * fact * (head + tail);
            let r = polygamma(m, x).map(|v| rel_err(v, want));
            t.record_result(r, 1e-10, || format!("m = {m}, x = {x}"));
        }
    }
    t
}

fn gamma_ratio_plain(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-13);
    for i in 0..40 {
        for j in 0..40 {
            let r = -0.95 + 0.2437 * i as f64;
            let sigma = -4.9 + 0.2513 * j as f64;
            let (a, b) = (1.0 + r, 1.0 + r - sigma);
            if (b - b.round()).abs() < 1e-9 && b <= 0.0 {
                continue;
            }
            let res =
                gamma_ratio_limit(r, sigma).and_then(|v| Ok(rel_err(v, gamma(a)? / gamma(b)?)));
            t.record_result(res, 1e-13, || format!("r = {r}, sigma = {sigma}"));
        }
    }
    t
}

// ------------------------------------------------------------ closed form

fn region_partition(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut points: Vec<(f64, f64)> = (0..10_000)
        .map(|_| (rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0)))
        .collect();
    // the boundary lines themselves
    points.extend((-5..=5).flat_map(|k| {
        let k = f64::from(k);
        [(k, k), (k, 0.0), (0.0, k)]
    }));
    for (sigma, r) in points {
        let preds = [
            (Region::Zero, r < sigma && r >= 0.0),
            (Region::Upper, r >= sigma && r >= 0.0),
            (Region::Low, r < sigma && r < 0.0),
            (Region::Log, r >= sigma && r < 0.0),
        ];
        let holding: Vec<Region> = preds.iter().filter(|p| p.1).map(|p| p.0).collect();
        let ok = holding.len() == 1 && holding[0] == classify_region(sigma, r);
        t.record(if ok { 0.0 } else { 1.0 }, 0.0, || {
            format!("sigma = {sigma}, r = {r}: predicates {holding:?}")
        });
    }
    t
}

fn integer_consistency(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(0.0);
    for n in -3..=3 {
        for m in -3..=2 {
            let (sigma, r) = (f64::from(n), f64::from(m));
            let res = (|| {
                let table = d_int_power(n, m, 0.0)?.expr;
                let ext = d_power_extended(sigma, r)?;
                let mut worst = table.max_coeff_diff(&ext);
                if r > -1.0 && !(sigma < 0.0 && r - sigma <= 0.0) {
                    worst = worst.max(table.max_coeff_diff(&d_power(sigma, r, 0.0)?));
                }
                Ok(worst)
            })();
            t.record_result(res, 0.0, || format!("n = {n}, m = {m}"));
        }
    }
    t
}

fn corpus() -> Vec<(&'static str, ClosedFormExpr)> {
    let mut v: Vec<(&str, ClosedFormExpr)> =
        [("x^0", 0.0), ("x^0.5", 0.5), ("x^1", 1.0), ("x^2", 2.0)]
            .into_iter()
            .map(|(n, r)| (n, ClosedFormExpr::new([LogPowerTerm::power(1.0, r)])))
            .collect();
    v.push(("log x", ClosedFormExpr::new([LogPowerTerm::log(1.0, 0.0)])));
    v
}

fn semigroup_closed(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-12);
    let orders = [0.25, 0.5, 1.0, 1.3];
    for (name, f) in corpus() {
        for &alpha in &orders {
            for &beta in &orders {
                let res = (|| {
                    let twice = f.fractional_integral(beta)?.fractional_integral(alpha)?;
                    let once = f.fractional_integral(alpha + beta)?;
                    Ok(twice.max_coeff_diff(&once))
                })();
                t.record_result(res, 1e-12, || {
                    format!("{name}, alpha = {alpha}, beta = {beta}")
                });
            }
        }
    }
    t
}

fn derivative_of_integral(_: &VerifyConfig) -> Tracker {
    // exact up to the rounding of one Gamma ratio
    let tol = 4.0 * f64::EPSILON;
    let mut t = Tracker::new(tol);
    for (name, f) in corpus() {
        let res = f
            .fractional_integral(1.0)
            .map(|i| i.derivative().max_coeff_diff(&f));
        t.record_result(res, tol, || name.to_string());
    }
    t
}

fn zero_region(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(0.0);
    for sigma in 1..=8 {
        for r in 0..sigma {
            let res = d_power(f64::from(sigma), f64::from(r), 0.0)
                .map(|e| e.terms().iter().map(|t| t.coeff.abs()).fold(0.0, f64::max));
            t.record_result(res, 0.0, || format!("sigma = {sigma}, r = {r}"));
        }
    }
    t
}

fn limit_branch(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(0.0);
    let classical = [
        (
            -2.0,
            ClosedFormExpr::new([LogPowerTerm::log(0.5, 2.0), LogPowerTerm::power(-0.75, 2.0)]),
        ),
        (
            -1.0,
            ClosedFormExpr::new([LogPowerTerm::log(1.0, 1.0), LogPowerTerm::power(-1.0, 1.0)]),
        ),
        (1.0, ClosedFormExpr::new([LogPowerTerm::power(1.0, -1.0)])),
        (2.0, ClosedFormExpr::new([LogPowerTerm::power(-1.0, -2.0)])),
    ];
    for (sigma, want) in classical {
        let res = d_log(sigma).map(|e| e.max_coeff_diff(&want));
        t.record_result(res, 0.0, || format!("sigma = {sigma}"));
    }
    t
}

/// Five-point central difference of `f` at `x`.
fn central_derivative(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-3 * x;
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// `d_power_extended` on `r ∈ {−1, −2}`: exact agreement with the integer-order table at
/// integer σ; at fractional σ the exact and the numerical derivative must
/// step the order by one, and integrating must step it back where the
/// result is integrable at 0.
fn extension_lines(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(cfg.tolerance);
    for r in [-1i32, -2] {
        let rf = f64::from(r);
        for sigma in [1.0, 2.0] {
            let res = (|| {
                let ext = d_power_extended(sigma, rf)?;
                Ok(ext.max_coeff_diff(&d_int_power(sigma as i32, r, 0.0)?.expr))
            })();
            t.record_result(res, 0.0, || format!("r = {r}, sigma = {sigma} vs table"));
        }
        for sigma in [-0.5, 0.5, 1.0, 2.0] {
            let res = (|| {
                let ext = d_power_extended(sigma, rf)?;
                let next = d_power_extended(sigma + 1.0, rf)?;
                let mut worst = ext.derivative().max_coeff_diff(&next);
                for x in [0.5, 1.0, 2.0] {
                    let num = central_derivative(|u| ext.eval(u), x);
                    let want = next.eval(x);
                    worst = worst.max((num - want).abs() / want.abs().max(1.0));
                }
                let integrable = ext.terms().iter().all(|t| t.power > -1.0);
                if integrable {
                    let back = ext.fractional_integral(0.5)?;
                    worst = worst.max(back.max_coeff_diff(&d_power_extended(sigma - 0.5, rf)?));
                }
                Ok(worst)
            })();
            t.record_result(res, cfg.tolerance, || format!("r = {r}, sigma = {sigma}"));
        }
    }
    t
}

// -------------------------------------------------------------- quadrature

/// Closed form and quadrature on a 20×20 grid of (σ, x) for each function.
fn oracle_agreement(cfg: &VerifyConfig) -> Tracker {
    let sigmas: Vec<f64> = (0..20)
        .map(|i| -3.0 + 6.0 * (i as f64 + 0.5) / 20.0)
        .collect();
    let xs: Vec<f64> = (1..=20).map(|i| 4.0 * i as f64 / 20.0).collect();
    let funcs: [(&str, Option<f64>); 5] = [
        ("t^0", Some(0.0)),
        ("t^0.5", Some(0.5)),
        ("t^1", Some(1.0)),
        ("t^2", Some(2.0)),
        ("log t", None),
    ];
    let cases: Vec<(usize, f64, f64)> = (0..funcs.len())
        .flat_map(|fi| {
            let xs = &xs;
            sigmas
                .iter()
                .flat_map(move |&s| xs.iter().map(move |&x| (fi, s, x)))
        })
        .collect();
    type Case = (usize, f64, f64, Result<(f64, f64)>);
    let errs: Vec<Case> = cases
        .par_iter()
        .map(|&(fi, sigma, x)| {
            let res = (|| {
                let (closed, integrand) = match funcs[fi].1 {
                    Some(r) => (d_power(sigma, r, 0.0)?, Integrand::power(r)),
                    None => (d_log(sigma)?, Integrand::log()),
                };
                let want = closed.eval(x);
                let got = rl_apply(&integrand, sigma, x, 0.0, &cfg.quadrature)?;
                Ok(((got - want).abs(), want))
            })();
            (fi, sigma, x, res)
        })
        .collect();
    let mut t = Tracker::new(cfg.tolerance);
    for (fi, sigma, x, res) in errs {
        let label = || format!("{}, sigma = {sigma}, x = {x}", funcs[fi].0);
        match res {
            Ok((err, want)) => {
                // relative, with values below 0.01 measured against 0.01
                t.record(err / want.abs().max(0.01), cfg.tolerance, label);
            }
            Err(e) => t.fail(|| format!("{}: {e}", label())),
        }
    }
    t
}

fn linearity(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    for _ in 0..12 {
        let alpha: f64 = rng.gen_range(-2.0..=2.0);
        let beta: f64 = rng.gen_range(-2.0..=2.0);
        let sigma: f64 = -rng.gen_range(0.1..=2.5);
        let x: f64 = rng.gen_range(0.25..=3.0);
        let combo = Integrand::singular(move |s| alpha * s * s + beta * s.ln(), 0.0);
        let q = &cfg.quadrature;
        let res = (|| {
            let lhs = rl_integral(&combo, sigma, x, 0.0, q)?;
            let rhs = alpha * rl_integral(&Integrand::power(2.0), sigma, x, 0.0, q)?
                + beta * rl_integral(&Integrand::log(), sigma, x, 0.0, q)?;
            Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
        })();
        t.record_result(res, 1e-10, || {
            format!("alpha = {alpha}, beta = {beta}, sigma = {sigma}, x = {x}")
        });
    }
    t
}

fn semigroup_numeric(cfg: &VerifyConfig) -> Tracker {
    let q = cfg.quadrature;
    let funcs: [(&str, Option<f64>); 3] = [("t", Some(1.0)), ("t^2", Some(2.0)), ("log t", None)];
    let orders = [(-0.5, -0.5), (-0.3, -1.2)];
    let cases: Vec<(usize, (f64, f64), f64)> = (0..funcs.len())
        .flat_map(|fi| {
            orders
                .iter()
                .flat_map(move |&o| [0.5, 1.0, 2.0].into_iter().map(move |x| (fi, o, x)))
        })
        .collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(fi, (s1, s2), x)| {
            let (f, exponent) = match funcs[fi].1 {
                Some(r) => (Integrand::power(r), r - s2),
                None => (Integrand::log(), -s2),
            };
            let inner_f = f.clone();
            let inner = Integrand::singular(
                move |u| rl_integral(&inner_f, s2, u, 0.0, &q).unwrap_or(f64::NAN),
                exponent,
            );
            let res = (|| {
                let twice = rl_integral(&inner, s1, x, 0.0, &q)?;
                let once = rl_integral(&f, s1 + s2, x, 0.0, &q)?;
                Ok((twice - once).abs() / once.abs().max(1.0))
            })();
            (fi, s1, s2, x, res)
        })
        .collect();
    let mut t = Tracker::new(cfg.tolerance);
    for (fi, s1, s2, x, res) in results {
        t.record_result(res, cfg.tolerance, || {
            format!("{}, sigma1 = {s1}, sigma2 = {s2}, x = {x}", funcs[fi].0)
        });
    }
    t
}

/// Integrals of `(t^ε − 1)/ε` tend to the integral of `log t` linearly in
/// ε; one Richardson step on ε = 1e-3, 1e-4 must land on it, and the
/// ε = 1e-5 sample must lie on the same line.
fn arzela_interchange(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(cfg.tolerance);
    let q = &cfg.quadrature;
    for sigma in [-0.5, -1.5] {
        for x in [0.5, 1.0, 2.0] {
            let res = (|| {
                let at = |eps: f64| {
                    let f = Integrand::singular(move |s: f64| (eps * s.ln()).exp_m1() / eps, 0.0);
                    rl_integral(&f, sigma, x, 0.0, q)
                };
                let (l1, l2, l3) = (at(1e-3)?, at(1e-4)?, at(1e-5)?);
                let limit = rl_integral(&Integrand::log(), sigma, x, 0.0, q)?;
                let extrapolated = (1e-3 * l2 - 1e-4 * l1) / (1e-3 - 1e-4);
                let slope = (l1 - l2) / (1e-3 - 1e-4);
                let predicted = limit + slope * 1e-5;
                Ok((extrapolated - limit).abs().max((l3 - predicted).abs()))
            })();
            t.record_result(res, cfg.tolerance, || format!("sigma = {sigma}, x = {x}"));
        }
    }
    t
}

fn lemma_m(cfg: &VerifyConfig) -> Tracker {
    let funcs: [(&str, Option<f64>); 3] = [("t", Some(1.0)), ("t^2", Some(2.0)), ("log t", None)];
    let mut cases = Vec::new();
    for sigma in [0.3, 0.5, 1.2, 2.7] {
        for fi in 0..funcs.len() {
            for x in [0.5, 1.0, 2.0] {
                cases.push((sigma, fi, x));
            }
        }
    }
    let q = cfg.quadrature;
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(sigma, fi, x)| {
            let f = match funcs[fi].1 {
                Some(r) => Integrand::power(r),
                None => Integrand::log(),
            };
            let m0 = default_m(sigma);
            let values: Result<Vec<f64>> = (m0..=m0 + 2)
                .map(|m| rl_derivative(&f, sigma, x, 0.0, m, &q))
                .collect();
            let res = values.map(|v| {
                let mut worst: f64 = 0.0;
                for i in 0..v.len() {
                    for j in i + 1..v.len() {
                        worst = worst.max((v[i] - v[j]).abs());
                    }
                }
                worst
            });
            (sigma, fi, x, res)
        })
        .collect();
    let mut t = Tracker::new(cfg.tolerance);
    for (sigma, fi, x, res) in results {
        t.record_result(res, cfg.tolerance, || {
            format!("{}, sigma = {sigma}, x = {x}", funcs[fi].0)
        });
    }
    t
}

// ---------------------------------------------------------------- harmonic

fn harmonic_integer_agreement(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-11);
    for n in 0..=50u64 {
        let res = harmonic_ext(n as f64).map(|h| (h - harmonic_int(n)).abs());
        t.record_result(res, 1e-11, || format!("n = {n}"));
    }
    t
}

fn harmonic_recurrence(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-11);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    for _ in 0..200 {
        let rho: f64 = rng.gen_range(0.05..=20.0);
        let res =
            harmonic_ext(rho).and_then(|a| Ok((a - harmonic_ext(rho - 1.0)? - 1.0 / rho).abs()));
        t.record_result(res, 1e-11, || format!("rho = {rho}"));
    }
    t
}

fn harmonic_x_independence(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(cfg.tolerance);
    for rho in [0.5, 1.5, 2.5] {
        let vals: Result<Vec<f64>> = [0.5, 1.0, 2.0, E]
            .iter()
            .map(|&x| harmonic_via_integral(rho, x, &cfg.quadrature))
            .collect();
        let res = vals.map(|v| {
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        });
        t.record_result(res, cfg.tolerance, || format!("rho = {rho}"));
    }
    t
}

fn induction_ladder(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-8);
    let mut fact = 1.0;
    for n in 1..=8u64 {
        fact *= n as f64;
        for x in [0.5f64, 1.0, 2.0] {
            let want = x.powi(n as i32) / fact * (x.ln() - harmonic_int(n));
            let res = rl_apply(&Integrand::log(), -(n as f64), x, 0.0, &cfg.quadrature)
                .map(|v| (v - want).abs());
            t.record_result(res, 1e-8, || format!("n = {n}, x = {x}"));
        }
    }
    t
}

fn generating_integral(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(cfg.tolerance);
    for rho in [0.5, 1.5, 2.5] {
        for x in [0.5, 1.0, 2.0, E] {
            let res = (|| {
                // written out directly, independently of d_log
                let want =
                    x.powf(rho) / gamma(1.0 + rho)? * (x.ln() - digamma(1.0 + rho)? - EULER_GAMMA);
                let got = rl_integral(&Integrand::log(), -rho, x, 0.0, &cfg.quadrature)?;
                let expr = generating_integral_log(rho)?.eval(x);
                Ok((got - want).abs().max((expr - want).abs()))
            })();
            t.record_result(res, cfg.tolerance, || format!("rho = {rho}, x = {x}"));
        }
    }
    let half = 2.0 - 2.0 * 2f64.ln();
    let res = harmonic_via_integral(0.5, 2.0, &cfg.quadrature)
        .and_then(|q| Ok((q - half).abs().max((harmonic_ext(0.5)? - half).abs())));
    t.record_result(res, cfg.tolerance, || "h(1/2) two ways".into());
    t
}

fn asymptotic_bound(_: &VerifyConfig) -> Tracker {
    // worst reported as max n·gap, which must stay below 1
    let mut t = Tracker::new(1.0);
    let mut h = 0.0f64;
    let mut comp = 0.0f64;
    for n in 1..=10_000u64 {
        // running compensated sum of 1/k; spot-checked against harmonic_int
        let v = 1.0 / n as f64;
        let s = h + v;
        comp += if h.abs() >= v {
            (h - s) + v
        } else {
            (v - s) + h
        };
        h = s;
        let gap = (h + comp) - (n as f64).ln() - EULER_GAMMA;
        if gap <= 0.0 {
            t.fail(|| format!("n = {n}: gap {gap:e} is not positive"));
        }
        t.record(gap * n as f64, 1.0 - 1e-15, || {
            format!("n = {n}: gap {gap:e} >= 1/n")
        });
    }
    for n in [1u64, 10, 100, 1000, 10_000] {
        t.record(
            (asymptotic_gap(n) - (harmonic_int(n) - (n as f64).ln() - EULER_GAMMA)).abs(),
            1e-15,
            || format!("asymptotic_gap({n})"),
        );
    }
    t
}

fn curve_interpolation(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-11);
    match harmonic_curve(0.0, 50.0, 0.25) {
        Ok(points) => {
            let mut integer_points = 0;
            for p in points {
                if let CurvePoint::Value {
                    rho,
                    h,
                    exact: Some(e),
                } = p
                {
                    integer_points += 1;
                    t.record((h - e).abs(), 1e-11, || format!("rho = {rho}"));
                }
            }
            if integer_points != 51 {
                t.fail(|| format!("expected 51 integer samples, got {integer_points}"));
            }
        }
        Err(e) => t.fail(|| format!("curve: {e}")),
    }
    t
}

// -------------------------------------------------------------------- zeta

fn zeta_polygamma_identity(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-12);
    for m in 1..=4u32 {
        for n in 0..=100u64 {
            let z = PartialZetaArgs::new(m, n).map(zeta_partial);
            let res = z.map(|z| (z - zeta_partial_direct(f64::from(m), n)).abs());
            t.record_result(res, 1e-12, || format!("m = {m}, n = {n}"));
        }
    }
    for n in 0..=100u64 {
        let res = PartialZetaArgs::new(1, n).map(|a| (zeta_partial(a) - harmonic_int(n)).abs());
        t.record_result(res, 1e-12, || format!("m = 1 vs h({n})"));
    }
    t
}

fn zeta_tail(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1.01e-4);
    let limit = PI * PI / 6.0;
    let direct = zeta_partial_direct(2.0, 10_000);
    t.record((limit - direct).abs(), 1.01e-4, || "direct".into());
    let res = PartialZetaArgs::new(2, 10_000).map(|a| (limit - zeta_partial(a)).abs());
    t.record_result(res, 1.01e-4, || "polygamma".into());
    t
}

// ------------------------------------------------------------------ tables

fn table1_golden(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(0.0);
    let res = table1(-3..=2, -3..=3).and_then(|tab| {
        Ok((
            tab.cells.len(),
            render_table(&tab, TableFormat::Csv)?,
            render_table(&tab, TableFormat::Text)?,
        ))
    });
    match res {
        Ok((cells, csv, text)) => {
            t.record(if cells == 42 { 0.0 } else { 1.0 }, 0.0, || {
                format!("{cells} cells")
            });
            t.record(
                if csv == TABLE1_GOLDEN_CSV { 0.0 } else { 1.0 },
                0.0,
                || "csv differs from golden file".into(),
            );
            t.record(
                if text == TABLE1_GOLDEN_TEXT { 0.0 } else { 1.0 },
                0.0,
                || "text differs from golden file".into(),
            );
        }
        Err(e) => t.fail(|| e.to_string()),
    }
    t
}

const GEN_RHOS: [f64; 3] = [0.5, 1.0, 2.0];
const GEN_RS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

fn gen_matches_d_power(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(0.0);
    for rho in [0.5, 1.0, 1.5, 2.0, 3.0] {
        for r in [-0.5, 0.0, 0.25, 0.5, 1.0, 2.0, 3.0] {
            // d_power has no a = 0 form when r + ρ ≤ 0; the table does
            if r + rho <= 0.0 {
                continue;
            }
            let res = (|| {
                let g = gen_integral_coeff(rho, r, 0)?;
                Ok(g.max_coeff_diff(&d_power(-rho, r, 0.0)?))
            })();
            t.record_result(res, 0.0, || format!("rho = {rho}, r = {r}"));
        }
    }
    t
}

fn gen_log_vs_quadrature(cfg: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-8);
    for rho in GEN_RHOS {
        for r in GEN_RS {
            for x in [0.5, 1.0, 2.0] {
                let res = (|| {
                    let closed = gen_integral_coeff(rho, r, 1)?.eval(x);
                    let f = Integrand::singular(move |s: f64| s.powf(r) * s.ln(), r);
                    let quad = rl_integral(&f, -rho, x, 0.0, &cfg.quadrature)?;
                    Ok((closed - quad).abs())
                })();
                t.record_result(res, 1e-8, || format!("rho = {rho}, r = {r}, x = {x}"));
            }
        }
    }
    t
}

fn gen_differentiation_closure(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-12);
    for a in [0u8, 1] {
        for rho in [1.0, 1.5, 2.0, 2.5] {
            for r in GEN_RS {
                let res = (|| {
                    let d = gen_integral_coeff(rho, r, a)?.derivative();
                    Ok(d.max_coeff_diff(&gen_integral_coeff(rho - 1.0, r, a)?))
                })();
                t.record_result(res, 1e-12, || format!("a = {a}, rho = {rho}, r = {r}"));
            }
        }
    }
    t
}

fn gen_log_reduces_to_log_integral(_: &VerifyConfig) -> Tracker {
    let mut t = Tracker::new(1e-14);
    for rho in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5] {
        let res = (|| {
            let g = gen_integral_coeff(rho, 0.0, 1)?;
            Ok(g.max_coeff_diff(&generating_integral_log(rho)?))
        })();
        t.record_result(res, 1e-14, || format!("rho = {rho}"));
    }
    t
}

/// Every registered check, in report order.
pub fn checks() -> Vec<Check> {
    macro_rules! check {
        ($suite:ident, $name:literal, $f:ident) => {
            Check {
                suite: Suite::$suite,
                name: $name,
                run: $f,
            }
        };
    }
    vec![
        check!(Special, "euler-constant", euler_constant),
        check!(Special, "digamma-recurrence", digamma_recurrence),
        check!(Special, "gamma-reflection", gamma_reflection),
        check!(Special, "polygamma-series", polygamma_series),
        check!(Special, "gamma-ratio-plain", gamma_ratio_plain),
        check!(ClosedForm, "region-partition", region_partition),
        check!(ClosedForm, "integer-consistency", integer_consistency),
        check!(ClosedForm, "semigroup", semigroup_closed),
        check!(ClosedForm, "derivative-of-integral", derivative_of_integral),
        check!(ClosedForm, "zero-region", zero_region),
        check!(ClosedForm, "limit-branch", limit_branch),
        check!(ClosedForm, "extension-lines", extension_lines),
        check!(ClosedVsQuad, "oracle-agreement", oracle_agreement),
        check!(Quadrature, "linearity", linearity),
        check!(Quadrature, "semigroup-numeric", semigroup_numeric),
        check!(Quadrature, "arzela-interchange", arzela_interchange),
        check!(LemmaM, "m-independence", lemma_m),
        check!(Harmonic, "integer-agreement", harmonic_integer_agreement),
        check!(Harmonic, "recurrence", harmonic_recurrence),
        check!(Harmonic, "x-independence", harmonic_x_independence),
        check!(Harmonic, "induction-ladder", induction_ladder),
        check!(Harmonic, "generating-integral", generating_integral),
        check!(Harmonic, "asymptotic-bound", asymptotic_bound),
        check!(Harmonic, "curve-interpolation", curve_interpolation),
        check!(Zeta, "polygamma-identity", zeta_polygamma_identity),
        check!(Zeta, "tail-bound", zeta_tail),
        check!(Table1, "golden-file", table1_golden),
        check!(Tables, "a0-matches-d-power", gen_matches_d_power),
        check!(Tables, "a1-vs-quadrature", gen_log_vs_quadrature),
        check!(
            Tables,
            "differentiation-closure",
            gen_differentiation_closure
        ),
        check!(Tables, "a1-reduces-to-log", gen_log_reduces_to_log_integral),
    ]
}

/// Looks a check up by `suite/name`.
pub fn find_check(id: &str) -> Option<Check> {
    checks()
        .into_iter()
        .find(|c| format!("{}/{}", c.suite, c.name) == id)
}

/// Runs every check of `suite` (all of them for [`Suite::All`]).
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let selected: Vec<Check> = checks()
        .into_iter()
        .filter(|c| suite == Suite::All || c.suite == suite)
        .collect();
    selected.par_iter().map(|c| c.run(cfg)).collect()
}
