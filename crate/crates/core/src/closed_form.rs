//! Closed-form Riemann-Liouville operators on `x^r` and `log x`.
//!
//! Every result is a [`ClosedFormExpr`]: a finite sum of `c · x^p · (log x)^k`
//! with `k ∈ {0, 1}`, optionally minus the same kind of sum evaluated at a
//! lower limit `a`. Lower limit `a = 0` is assumed everywhere except
//! [`d_power`] and [`d_int_power`], which accept `a > 0` for the branches
//! where the boundary term `x̂^{r−σ}|_a^x` is defined.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::special::{
    digamma, factorial_ratio, gamma_ratio_limit, is_nonpositive_integer, recip_gamma, EULER_GAMMA,
};

/// Powers closer than this (relative) are treated as the same monomial.
const POWER_KEY_TOL: f64 = 1e-12;

/// Largest fold count for which the iterated integral of `log x` is built
/// from exact rationals.
const MAX_EXACT_FOLDS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPowerTerm {
    pub coeff: f64,
    /// Exponent of `x`.
    pub power: f64,
    /// Exponent of `log x`; always 0 or 1.
    pub log_power: u8,
}

impl LogPowerTerm {
    pub fn power(coeff: f64, power: f64) -> Self {
        LogPowerTerm {
            coeff,
            power,
            log_power: 0,
        }
    }

    pub fn log(coeff: f64, power: f64) -> Self {
        LogPowerTerm {
            coeff,
            power,
            log_power: 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        let p = if self.power == 0.0 {
            1.0
        } else {
            x.powf(self.power)
        };
        match self.log_power {
            0 => self.coeff * p,
            _ => self.coeff * p * x.ln(),
        }
    }

    fn same_key(&self, other: &LogPowerTerm) -> bool {
        self.log_power == other.log_power
            && (self.power - other.power).abs() <= POWER_KEY_TOL * self.power.abs().max(1.0)
    }
}

/// `Σ terms(x) − Σ lower_limit_terms(a)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClosedFormExpr {
    terms: Vec<LogPowerTerm>,
    lower_limit_terms: Vec<LogPowerTerm>,
    lower_limit: f64,
}

fn merge_terms(raw: impl IntoIterator<Item = LogPowerTerm>) -> Vec<LogPowerTerm> {
    let mut out: Vec<LogPowerTerm> = Vec::new();
    for t in raw {
        debug_assert!(t.log_power <= 1, "log power above 1");
        debug_assert!(t.coeff.is_finite(), "non-finite coefficient");
        match out.iter_mut().find(|o| o.same_key(&t)) {
            Some(o) => o.coeff += t.coeff,
            None => out.push(t),
        }
    }
    out.retain(|t| t.coeff != 0.0);
    // log term first, then decreasing power
    out.sort_by(|a, b| {
        b.log_power
            .cmp(&a.log_power)
            .then(b.power.total_cmp(&a.power))
    });
    out
}

impl ClosedFormExpr {
    pub fn new(terms: impl IntoIterator<Item = LogPowerTerm>) -> Self {
        ClosedFormExpr {
            terms: merge_terms(terms),
            lower_limit_terms: Vec::new(),
            lower_limit: 0.0,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_lower_limit(
        mut self,
        a: f64,
        terms: impl IntoIterator<Item = LogPowerTerm>,
    ) -> Self {
        self.lower_limit = a;
        self.lower_limit_terms = merge_terms(terms);
        self
    }

    pub fn terms(&self) -> &[LogPowerTerm] {
        &self.terms
    }

    pub fn lower_limit_terms(&self) -> &[LogPowerTerm] {
        &self.lower_limit_terms
    }

    pub fn lower_limit(&self) -> f64 {
        self.lower_limit
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.lower_limit_terms.is_empty()
    }

    /// Coefficient of `x^power (log x)^log_power`, zero if absent.
    pub fn coeff(&self, power: f64, log_power: u8) -> f64 {
        let probe = LogPowerTerm {
            coeff: 0.0,
            power,
            log_power,
        };
        self.terms
            .iter()
            .find(|t| t.same_key(&probe))
            .map_or(0.0, |t| t.coeff)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let upper: f64 = self.terms.iter().map(|t| t.eval(x)).sum();
        let lower: f64 = self
            .lower_limit_terms
            .iter()
            .map(|t| t.eval(self.lower_limit))
            .sum();
        upper - lower
    }

    pub fn scale(&self, c: f64) -> Self {
        let s = |ts: &[LogPowerTerm]| {
            ts.iter()
                .map(|t| LogPowerTerm {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect::<Vec<_>>()
        };
        ClosedFormExpr::new(s(&self.terms))
            .with_lower_limit(self.lower_limit, s(&self.lower_limit_terms))
    }

    /// Sum of two expressions with a common lower limit.
    pub fn add(&self, other: &ClosedFormExpr) -> Self {
        let terms = self.terms.iter().chain(&other.terms).copied();
        let lower = self
            .lower_limit_terms
            .iter()
            .chain(&other.lower_limit_terms)
            .copied();
        let a = if self.lower_limit_terms.is_empty() {
            other.lower_limit
        } else {
            self.lower_limit
        };
        ClosedFormExpr::new(terms).with_lower_limit(a, lower)
    }

    /// Ordinary derivative d/dx, exact term by term. Lower-limit terms are
    /// constants in `x` and drop out.
    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power != 0.0 {
                out.push(LogPowerTerm {
                    coeff: t.coeff * t.power,
                    power: t.power - 1.0,
                    log_power: t.log_power,
                });
            }
            if t.log_power == 1 {
                out.push(LogPowerTerm::power(t.coeff, t.power - 1.0));
            }
        }
        ClosedFormExpr::new(out)
    }

    /// Riemann-Liouville integral of order `rho` from 0, term by term:
    ///
    /// - `x^p ↦ Γ(1+p)/Γ(1+p+ρ) · x^{p+ρ}`
    /// - `x^p log x ↦ Γ(1+p)/Γ(1+p+ρ) · x^{p+ρ} · (log x + ψ(1+p) − ψ(1+p+ρ))`
    ///
    /// The second rule is the `p`-derivative of the first; at `p = 0` it is
    /// the generating integral of `log x`. Every term needs `p > −1`.
    pub fn fractional_integral(&self, rho: f64) -> Result<Self> {
        if !self.lower_limit_terms.is_empty() {
            return Err(Error::domain(
                "fractional_integral is defined for lower limit 0 only",
            ));
        }
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            match t.log_power {
                0 => out.extend(power_integral(rho, t.power)?.scale(t.coeff).terms),
                _ => out.extend(log_power_integral(rho, t.power)?.scale(t.coeff).terms),
            }
        }
        Ok(ClosedFormExpr::new(out))
    }

    /// Term-by-term agreement: coefficients within `rel_tol` relative (or
    /// absolute below magnitude 1), missing terms count as zero.
    pub fn approx_eq(&self, other: &ClosedFormExpr, rel_tol: f64) -> bool {
        self.max_coeff_diff(other) <= rel_tol
    }

    /// Largest coefficient discrepancy, scaled by max(1, |coeff|).
    pub fn max_coeff_diff(&self, other: &ClosedFormExpr) -> f64 {
        fn one_side(a: &[LogPowerTerm], b: &[LogPowerTerm]) -> f64 {
            a.iter()
                .map(|t| {
                    let c = b.iter().find(|o| o.same_key(t)).map_or(0.0, |o| o.coeff);
                    (t.coeff - c).abs() / t.coeff.abs().max(c.abs()).max(1.0)
                })
                .fold(0.0, f64::max)
        }
        let mut worst =
            one_side(&self.terms, &other.terms).max(one_side(&other.terms, &self.terms));
        worst = worst
            .max(one_side(&self.lower_limit_terms, &other.lower_limit_terms))
            .max(one_side(&other.lower_limit_terms, &self.lower_limit_terms));
        if !self.lower_limit_terms.is_empty() && self.lower_limit != other.lower_limit {
            worst = f64::INFINITY;
        }
        worst
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[LogPowerTerm], var: &str) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, t) in terms.iter().enumerate() {
        let c = if i == 0 {
            format!("{:.16e}", t.coeff)
        } else if t.coeff < 0.0 {
            format!(" - {:.16e}", -t.coeff)
        } else {
            format!(" + {:.16e}", t.coeff)
        };
        write!(f, "{c}")?;
        if t.power != 0.0 {
            write!(f, " {var}^{}", t.power)?;
        }
        if t.log_power == 1 {
            write!(f, " log {var}")?;
        }
    }
    Ok(())
}

/// Decimal rendering, 17 significant digits per coefficient.
impl fmt::Display for ClosedFormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, "x")?;
        if !self.lower_limit_terms.is_empty() {
            write!(f, " - [")?;
            fmt_terms(f, &self.lower_limit_terms, "a")?;
            write!(f, "]_(a={})", self.lower_limit)?;
        }
        Ok(())
    }
}

fn power_integral(rho: f64, p: f64) -> Result<ClosedFormExpr> {
    if p <= -1.0 {
        return Err(Error::domain(format!(
            "integral of x^{p} from 0 diverges (power must exceed -1)"
        )));
    }
    let c = gamma_ratio_limit(p, -rho)?;
    Ok(ClosedFormExpr::new([LogPowerTerm::power(c, p + rho)]))
}

/// `D^{−ρ} [x^p log x]` from 0.
pub(crate) fn log_power_integral(rho: f64, p: f64) -> Result<ClosedFormExpr> {
    if p <= -1.0 {
        return Err(Error::domain(format!(
            "integral of x^{p} log x from 0 diverges (power must exceed -1)"
        )));
    }
    let top = 1.0 + p + rho;
    if is_nonpositive_integer(top) {
        return Err(Error::Pole {
            function: "digamma",
            at: top,
        });
    }
    let c = gamma_ratio_limit(p, -rho)?;
    let shift = digamma(1.0 + p)? - digamma(top)?;
    Ok(ClosedFormExpr::new([
        LogPowerTerm::log(c, p + rho),
        LogPowerTerm::power(c * shift, p + rho),
    ]))
}

/// The four regions of the `(σ, r)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `r < σ, r ≥ 0`
    Zero,
    /// `r ≥ σ, r ≥ 0`
    Upper,
    /// `r < σ, r < 0`
    Low,
    /// `r ≥ σ, r < 0`
    Log,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::Zero => "zero",
            Region::Upper => "upper",
            Region::Low => "low",
            Region::Log => "log",
        };
        f.write_str(s)
    }
}

pub fn classify_region(sigma: f64, r: f64) -> Region {
    match (r >= sigma, r >= 0.0) {
        (false, true) => Region::Zero,
        (true, true) => Region::Upper,
        (false, false) => Region::Low,
        (true, false) => Region::Log,
    }
}

fn validate_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {v}")))
    }
}

/// `D^σ x^r` with lower limit `a`, on the half plane `r > −1`.
///
/// For σ < 0 the result is `c·(x^{r−σ} − a^{r−σ})` with
/// `c = Γ(1+r)/Γ(1+r−σ)`; the boundary term vanishes at `a = 0`, which
/// requires `r − σ > 0`. For σ > 0 only the `x` term is produced, and the
/// coefficient is zero when `1+r−σ` is a non-positive integer.
///
/// With `a > 0` the integral branch keeps only the single boundary term, as
/// in the integer-order table; it is the exact Riemann-Liouville integral for
/// σ = −1 only.
pub fn d_power(sigma: f64, r: f64, a: f64) -> Result<ClosedFormExpr> {
    validate_finite("sigma", sigma)?;
    validate_finite("r", r)?;
    validate_finite("a", a)?;
    if r <= -1.0 {
        return Err(Error::domain(format!(
            "d_power requires r > -1 (got r = {r}); use d_power_extended"
        )));
    }
    if a < 0.0 {
        return Err(Error::domain(format!("lower limit must be >= 0, got {a}")));
    }
    if sigma == 0.0 {
        return Ok(ClosedFormExpr::new([LogPowerTerm::power(1.0, r)]));
    }
    let c = gamma_ratio_limit(r, sigma)?;
    let p = r - sigma;
    let expr = ClosedFormExpr::new([LogPowerTerm::power(c, p)]);
    if sigma > 0.0 {
        return Ok(expr);
    }
    if a == 0.0 {
        if p <= 0.0 {
            return Err(Error::domain(format!(
                "boundary term a^{p} is infinite at a = 0 (r - sigma must be > 0)"
            )));
        }
        return Ok(expr);
    }
    Ok(expr.with_lower_limit(a, [LogPowerTerm::power(c, p)]))
}

/// `n`-fold integral of `log x` from 0 as exact rationals:
/// `xⁿ/n! · (log x − h(n))`.
fn iterated_log_integral(n: u32) -> Option<ClosedFormExpr> {
    if n > MAX_EXACT_FOLDS {
        return None;
    }
    let inv_fact = Rational::new(1, exact::factorial_i128(n)?);
    let h = exact::harmonic(u64::from(n))?;
    let constant = -(h * inv_fact);
    let p = f64::from(n);
    Some(ClosedFormExpr::new([
        LogPowerTerm::log(exact::to_f64(&inv_fact), p),
        LogPowerTerm::power(exact::to_f64(&constant), p),
    ]))
}

/// `D^σ log x` from 0, for every real σ.
///
/// Non-integer σ: `x^{−σ}/Γ(1−σ) · (log x − ψ(1−σ) − γ)`. Integer σ uses
/// the limit branch: `σ = −n` gives `xⁿ/n! · (log x − h(n))` and `σ = n ≥ 1`
/// gives `(−1)^{n−1} (n−1)! · x^{−n}`.
pub fn d_log(sigma: f64) -> Result<ClosedFormExpr> {
    validate_finite("sigma", sigma)?;
    if sigma == sigma.floor() {
        if sigma >= 1.0 {
            let n = sigma as u32;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            return Ok(ClosedFormExpr::new([LogPowerTerm::power(
                sign * factorial_ratio(n - 1, 0),
                -sigma,
            )]));
        }
        if let Some(expr) = iterated_log_integral((-sigma) as u32) {
            return Ok(expr);
        }
    }
    let rg = recip_gamma(1.0 - sigma);
    let shift = digamma(1.0 - sigma)? + EULER_GAMMA;
    Ok(ClosedFormExpr::new([
        LogPowerTerm::log(rg, -sigma),
        LogPowerTerm::power(-shift * rg, -sigma),
    ]))
}

/// `D^σ x^r` from 0 on the whole `(σ, r)` plane.
///
/// On the lines `r = −k`, `k = 1, 2, …` the operator is rerouted through the
/// logarithm: `lim Γ(1−k+ε)/Γ(ε) · D^{σ+k} log x`, and that limit equals
/// `(−1)^{k−1}/(k−1)!`. Everywhere else it is the regularised Γ-ratio times
/// `x^{r−σ}`, with boundary constants at 0 omitted.
pub fn d_power_extended(sigma: f64, r: f64) -> Result<ClosedFormExpr> {
    validate_finite("sigma", sigma)?;
    validate_finite("r", r)?;
    if r < 0.0 && r == r.floor() {
        let k = (-r) as u32;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let factor = sign * factorial_ratio(0, k - 1);
        return Ok(d_log(sigma + f64::from(k))?.scale(factor));
    }
    let c = gamma_ratio_limit(r, sigma)?;
    Ok(ClosedFormExpr::new([LogPowerTerm::power(c, r - sigma)]))
}

/// `± numer!/denom!`, the coefficient shape of every integer-order cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorialRatio {
    pub negative: bool,
    pub numer: u32,
    pub denom: u32,
}

impl FactorialRatio {
    pub fn new(negative: bool, numer: u32, denom: u32) -> Self {
        // 0! = 1! = 1 and k!/k! = 1
        if numer == denom || (numer < 2 && denom < 2) {
            return FactorialRatio {
                negative,
                numer: 0,
                denom: 0,
            };
        }
        FactorialRatio {
            negative,
            numer,
            denom,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.numer < 2 && self.denom < 2
    }

    pub fn to_f64(&self) -> f64 {
        let v = factorial_ratio(self.numer, self.denom);
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// Exact value, when both factorials fit in `i128`.
    pub fn to_rational(&self) -> Option<Rational> {
        let r = Rational::new(
            exact::factorial_i128(self.numer)?,
            exact::factorial_i128(self.denom)?,
        );
        Some(if self.negative { -r } else { r })
    }
}

/// Factorial-ratio rendering: `2!/5!`, `-3!`, `1/2!`; unit ratios render as
/// a bare sign.
impl fmt::Display for FactorialRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.is_unit() {
            return Ok(());
        }
        if self.numer >= 2 {
            write!(f, "{}!", self.numer)?;
        } else {
            write!(f, "1")?;
        }
        if self.denom >= 2 {
            write!(f, "/{}!", self.denom)?;
        }
        Ok(())
    }
}

/// Exact shape of `Dⁿ xᵐ` at an integer grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegerCell {
    Zero,
    /// `coeff · x^power`
    Power {
        coeff: FactorialRatio,
        power: i32,
    },
    /// `coeff · ∫ log x (dx)^folds`; `folds = 0` is `log x` itself.
    IteratedLog {
        coeff: FactorialRatio,
        folds: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegerOrderForm {
    pub cell: IntegerCell,
    pub expr: ClosedFormExpr,
}

/// Integer-order `Dⁿ xᵐ` with lower limit `a`, by the four-branch rule:
///
/// | branch         | result                                        |
/// |----------------|-----------------------------------------------|
/// | m ≥ 0, m < n   | 0                                             |
/// | m ≥ 0, m ≥ n   | m!/(m−n)! · x^{m−n}                           |
/// | m < 0, m < n   | (−1)ⁿ (|m|−1+n)!/(|m|−1)! · x̂^{m−n}|_a^x      |
/// | m < 0, m ≥ n   | (−1)^{m+1}/(|m|−1)! · ∫ log x (dx)^{m−n}      |
///
/// At `a = 0` the constant terms containing `a` are omitted. The log
/// branch is only defined for `a = 0`.
pub fn d_int_power(n: i32, m: i32, a: f64) -> Result<IntegerOrderForm> {
    validate_finite("a", a)?;
    if a < 0.0 {
        return Err(Error::domain(format!("lower limit must be >= 0, got {a}")));
    }
    let integrating = n < 0;
    let power_cell = |coeff: FactorialRatio, power: i32| {
        let c = coeff.to_f64();
        let mut expr = ClosedFormExpr::new([LogPowerTerm::power(c, f64::from(power))]);
        if integrating && a > 0.0 {
            expr = expr.with_lower_limit(a, [LogPowerTerm::power(c, f64::from(power))]);
        }
        IntegerOrderForm {
            cell: IntegerCell::Power { coeff, power },
            expr,
        }
    };

    if m >= 0 && m < n {
        return Ok(IntegerOrderForm {
            cell: IntegerCell::Zero,
            expr: ClosedFormExpr::zero(),
        });
    }
    if m >= 0 {
        let coeff = FactorialRatio::new(false, m as u32, (m - n) as u32);
        return Ok(power_cell(coeff, m - n));
    }
    let k = m.unsigned_abs();
    if m < n {
        let coeff = FactorialRatio::new(n.rem_euclid(2) == 1, (n - m - 1) as u32, k - 1);
        return Ok(power_cell(coeff, m - n));
    }
    if a > 0.0 {
        return Err(Error::domain(
            "the log-region branch is tabulated for lower limit a = 0 only",
        ));
    }
    let folds = (m - n) as u32;
    let coeff = FactorialRatio::new(k.is_multiple_of(2), 0, k - 1);
    let expr = iterated_log_integral(folds)
        .map(Ok)
        .unwrap_or_else(|| d_log(-f64::from(folds)))?
        .scale(coeff.to_f64());
    Ok(IntegerOrderForm {
        cell: IntegerCell::IteratedLog { coeff, folds },
        expr,
    })
}

impl fmt::Display for IntegerCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IntegerCell::Zero => write!(f, "0"),
            IntegerCell::Power { coeff, power } => {
                if power == 0 {
                    return match (coeff.is_unit(), coeff.negative) {
                        (true, false) => write!(f, "1"),
                        (true, true) => write!(f, "-1"),
                        _ => write!(f, "{coeff}"),
                    };
                }
                if !coeff.is_unit() {
                    write!(f, "{coeff} ")?;
                } else {
                    write!(f, "{coeff}")?;
                }
                match power {
                    1 => write!(f, "x"),
                    p => write!(f, "x^{p}"),
                }
            }
            IntegerCell::IteratedLog { coeff, folds } => {
                if !coeff.is_unit() {
                    write!(f, "{coeff} ")?;
                } else {
                    write!(f, "{coeff}")?;
                }
                match folds {
                    0 => write!(f, "log x"),
                    1 => write!(f, "∫log x (dx)"),
                    k => write!(f, "∫log x (dx)^{k}"),
                }
            }
        }
    }
}
