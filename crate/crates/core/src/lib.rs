//! Riemann-Liouville fractional calculus on powers and logarithms.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: Γ, log Γ, ψ, ψ⁽ᵐ⁾ and the regularised Γ-ratio limits.
//! - [`closed_form`]: exact closed forms of `D^σ x^r` and `D^σ log x`, the
//!   integer-order table branches and the `(σ, r)` region classification.
//! - [`quadrature`]: an independent numerical oracle that evaluates the
//!   Cauchy repeated-integration formula directly with Gauss-Jacobi panels.
//! - [`harmonic`]: harmonic numbers, their extension `h(ρ) = ψ(1+ρ) + γ`,
//!   the generating integral of `log x` and partial zeta sums.
//! - [`tables`]: the integer-order table and generating-integral tables.
//! - [`verify`]: the property suites run by `fraccalc verify`.

// `!(a <= b)` is used deliberately so that NaN fails comparisons
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod error;
mod exact;
pub mod harmonic;
pub mod quadrature;
pub mod special;
pub mod tables;
pub mod verify;

pub use closed_form::{
    classify_region, d_int_power, d_log, d_power, d_power_extended, ClosedFormExpr, FactorialRatio,
    IntegerCell, IntegerOrderForm, LogPowerTerm, Region,
};
pub use error::{Error, Result};
pub use harmonic::{
    asymptotic_gap, generating_integral_log, harmonic_curve, harmonic_ext, harmonic_int,
    harmonic_via_integral, zeta_partial, zeta_partial_direct, CurvePoint, HarmonicOrder,
    PartialZetaArgs,
};
pub use quadrature::{
    default_m, rl_apply, rl_derivative, rl_integral, Integrand, QuadratureConfig,
};
pub use special::{digamma, gamma, gamma_ratio_limit, ln_gamma, polygamma, EULER_GAMMA};
pub use tables::{
    emit_table, gen_integral_coeff, gen_table, render_table, table1, GridTable, TableCell,
    TableFormat,
};
