//! `fraccalc`: point evaluation, tables, the harmonic curve and the
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 computational or verification failure, 2 usage.

use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fraccalc::harmonic::{harmonic_curve, CurvePoint};
use fraccalc::tables::{gen_table, TABLE1_KEY_LIMIT};
use fraccalc::verify::{run_suite, Suite, VerifyConfig};
use fraccalc::{
    d_log, d_power, d_power_extended, emit_table, harmonic_ext, harmonic_via_integral, rl_apply,
    table1, zeta_partial, zeta_partial_direct, ClosedFormExpr, Error, Integrand, PartialZetaArgs,
    QuadratureConfig, TableFormat,
};

/// Discrepancy below which `eval --method both` succeeds.
const EVAL_AGREEMENT: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(
    name = "fraccalc",
    version,
    about = "Riemann-Liouville fractional calculus on powers and logarithms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate D^order f at x, in closed form and/or by quadrature.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// The extended harmonic number h(rho) = psi(1+rho) + gamma.
    #[command(allow_negative_numbers = true)]
    Harmonic {
        #[arg(long)]
        rho: f64,
        /// Also evaluate the generating-integral formula at this x.
        #[arg(long, value_parser = positive_f64)]
        x: Option<f64>,
    },
    /// Partial zeta sum sum_{k=1}^n k^-m, via polygamma and directly.
    Zeta {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long)]
        n: u64,
    },
    /// Integer-order results D^n x^m.
    Table1 {
        /// Rows, as A..B.
        #[arg(long, default_value = "-3..2", allow_hyphen_values = true, value_parser = key_range)]
        m_range: RangeInclusive<i32>,
        /// Columns, as C..D.
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true, value_parser = key_range)]
        n_range: RangeInclusive<i32>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Generating-integral expressions for integrals of x^r (log x)^a.
    #[command(allow_negative_numbers = true)]
    Gentable {
        /// Integration orders, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        rho_list: Vec<f64>,
        /// Exponents r > -1, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        r_list: Vec<f64>,
        /// Power of log x: 0 or 1.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        a: u8,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// CSV samples of rho -> h(rho).
    #[command(allow_negative_numbers = true)]
    Curve {
        #[arg(long)]
        rho_min: f64,
        #[arg(long)]
        rho_max: f64,
        #[arg(long, value_parser = positive_f64)]
        step: f64,
    },
    /// Run the property suites; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = suite_arg)]
        suite: Suite,
    },
}

#[derive(clap::Args, Debug)]
struct EvalArgs {
    /// The function: x^r or log x.
    #[arg(long = "f", value_enum)]
    function: FunctionArg,
    /// Exponent, for --f power.
    #[arg(long)]
    r: Option<f64>,
    /// sigma: negative integrates, positive differentiates.
    #[arg(long)]
    order: f64,
    #[arg(long, value_parser = positive_f64)]
    x: f64,
    /// Lower limit.
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FunctionArg {
    Power,
    Log,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Closed,
    Quad,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Csv,
    Text,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => TableFormat::Csv,
            FormatArg::Text => TableFormat::Text,
        }
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

fn key_range(s: &str) -> Result<RangeInclusive<i32>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("'{s}' is not of the form A..B"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<i32>()
            .map_err(|_| format!("'{t}' is not an integer"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    for v in [lo, hi] {
        if v.abs() > TABLE1_KEY_LIMIT {
            return Err(format!(
                "{v} is outside [-{TABLE1_KEY_LIMIT}, {TABLE1_KEY_LIMIT}]"
            ));
        }
    }
    Ok(lo..=hi)
}

fn suite_arg(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Scientific notation with 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A failure after argument parsing.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn closed_form(args: &EvalArgs) -> Result<ClosedFormExpr, Error> {
    match args.function {
        FunctionArg::Power => {
            let r = args.r.expect("validated");
            if r > -1.0 {
                d_power(args.order, r, args.a)
            } else if args.a == 0.0 {
                d_power_extended(args.order, r)
            } else {
                Err(Error::Domain(format!(
                    "r = {r} <= -1 is supported for lower limit 0 only"
                )))
            }
        }
        FunctionArg::Log => {
            if args.a != 0.0 {
                return Err(Error::Domain(
                    "closed forms of D^sigma log x use lower limit 0".into(),
                ));
            }
            d_log(args.order)
        }
    }
}

fn cmd_eval(args: &EvalArgs, out: &mut impl Write) -> Result<(), Failure> {
    match (args.function, args.r) {
        (FunctionArg::Power, None) => return Err(Failure::Usage("--f power needs --r".into())),
        (FunctionArg::Log, Some(_)) => {
            return Err(Failure::Usage("--r applies to --f power only".into()))
        }
        _ => {}
    }
    if !args.order.is_finite() || !args.a.is_finite() || args.a < 0.0 || args.a >= args.x {
        return Err(Failure::Usage(format!(
            "need a finite order and 0 <= a < x (a = {}, x = {})",
            args.a, args.x
        )));
    }
    let closed = if args.method != MethodArg::Quad {
        let expr = closed_form(args)?;
        let v = expr.eval(args.x);
        writeln!(out, "expr {expr}")?;
        writeln!(out, "closed {}", num(v))?;
        Some(v)
    } else {
        None
    };
    let quad = if args.method != MethodArg::Closed {
        let f = match args.function {
            FunctionArg::Power => Integrand::power(args.r.expect("validated")),
            FunctionArg::Log => Integrand::log(),
        };
        let v = rl_apply(&f, args.order, args.x, args.a, &QuadratureConfig::default())?;
        writeln!(out, "quad {}", num(v))?;
        Some(v)
    } else {
        None
    };
    if let (Some(c), Some(q)) = (closed, quad) {
        let d = (c - q).abs();
        writeln!(out, "discrepancy {}", num(d))?;
        if d.is_nan() || d >= EVAL_AGREEMENT {
            return Err(Failure::Compute(format!(
                "closed form and quadrature differ by {d:e} (limit {EVAL_AGREEMENT:e})"
            )));
        }
    }
    Ok(())
}

fn run(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Eval(args) => cmd_eval(&args, out)?,
        Command::Harmonic { rho, x } => {
            writeln!(out, "h {}", num(harmonic_ext(rho)?))?;
            if let Some(x) = x {
                let v = harmonic_via_integral(rho, x, &QuadratureConfig::default())?;
                writeln!(out, "h_integral {}", num(v))?;
                writeln!(out, "discrepancy {}", num((v - harmonic_ext(rho)?).abs()))?;
            }
        }
        Command::Zeta { m, n } => {
            let z = zeta_partial(PartialZetaArgs::new(m, n)?);
            let direct = zeta_partial_direct(f64::from(m), n);
            writeln!(out, "zeta {}", num(z))?;
            writeln!(out, "zeta_direct {}", num(direct))?;
        }
        Command::Table1 {
            m_range,
            n_range,
            format,
        } => {
            let table = table1(m_range, n_range)?;
            emit_table(&table, format.into(), &mut *out)?;
        }
        Command::Gentable {
            rho_list,
            r_list,
            a,
            format,
        } => {
            let table = gen_table(&rho_list, &r_list, a)?;
            emit_table(&table, format.into(), &mut *out)?;
        }
        Command::Curve {
            rho_min,
            rho_max,
            step,
        } => {
            if !rho_min.is_finite() || !rho_max.is_finite() || rho_min > rho_max {
                return Err(Failure::Usage(format!(
                    "need finite rho-min <= rho-max, got {rho_min} and {rho_max}"
                )));
            }
            // poles are skipped, so any error here is a bad flag combination
            let points = harmonic_curve(rho_min, rho_max, step)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out, "rho,h_rho,h_n_exact")?;
            for p in points {
                match p {
                    CurvePoint::Value { rho, h, exact } => {
                        let e = exact.map(num).unwrap_or_default();
                        writeln!(out, "{},{},{e}", num(rho), num(h))?;
                    }
                    CurvePoint::SkippedPole { rho } => {
                        writeln!(out, "# skipped rho = {} (pole of h)", num(rho))?;
                    }
                }
            }
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig::from_env().map_err(|e| Failure::Usage(e.to_string()))?;
            let results = run_suite(suite, &cfg);
            let passed = results.iter().filter(|r| r.passed).count();
            for r in &results {
                writeln!(out, "{r}")?;
            }
            writeln!(out, "verify: {passed}/{} checks passed", results.len())?;
            if passed != results.len() {
                out.flush()?;
                return Err(Failure::Compute(format!(
                    "{} check(s) failed",
                    results.len() - passed
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Failure::Usage(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        (Err(Failure::Compute(msg)), _) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
