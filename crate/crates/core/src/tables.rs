//! The integer-order table `D^n x^m` and the coefficient tables of the
//! generating integrals `∫ x^r (log x)^a (dx)^ρ`, plus their CSV and
//! aligned-text renderings.

use std::io::Write;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::closed_form::{d_int_power, log_power_integral, ClosedFormExpr, LogPowerTerm};
use crate::error::{Error, Result};
use crate::special::{gamma_ratio_limit, is_nonpositive_integer};

/// Integer keys accepted by [`table1`].
pub const TABLE1_KEY_LIMIT: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub row_key: f64,
    pub col_key: f64,
    pub expr: ClosedFormExpr,
    pub display: String,
}

/// Dense row-major grid of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTable {
    /// Top-left header entry, naming the row and column keys.
    pub corner: String,
    /// Emitted before the header, each prefixed with `# `.
    pub comments: Vec<String>,
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    pub cells: Vec<TableCell>,
}

impl GridTable {
    pub fn cell(&self, row: usize, col: usize) -> &TableCell {
        &self.cells[row * self.cols.len() + col]
    }

    /// The cell with the given keys, if present.
    pub fn find(&self, row_key: f64, col_key: f64) -> Option<&TableCell> {
        let r = self.rows.iter().position(|&k| k == row_key)?;
        let c = self.cols.iter().position(|&k| k == col_key)?;
        Some(self.cell(r, c))
    }
}

fn key_text(k: f64) -> String {
    // shortest round-trip form: "2", "-3", "0.5"
    format!("{k}")
}

/// `Dⁿ xᵐ` at lower limit 0 for every `m` in `m_range` (rows, descending)
/// and `n` in `n_range` (columns, ascending). The default ranges `-3..=2`
/// and `-3..=3` give the 6×7 table of integer-order results.
pub fn table1(m_range: RangeInclusive<i32>, n_range: RangeInclusive<i32>) -> Result<GridTable> {
    for (name, range) in [("m", &m_range), ("n", &n_range)] {
        if !range.is_empty()
            && (*range.start() < -TABLE1_KEY_LIMIT || *range.end() > TABLE1_KEY_LIMIT)
        {
            return Err(Error::domain(format!(
                "{name} range {}..{} leaves [-{TABLE1_KEY_LIMIT}, {TABLE1_KEY_LIMIT}]",
                range.start(),
                range.end()
            )));
        }
    }
    let rows: Vec<i32> = m_range.rev().collect();
    let cols: Vec<i32> = n_range.collect();
    let keys: Vec<(i32, i32)> = rows
        .iter()
        .flat_map(|&m| cols.iter().map(move |&n| (m, n)))
        .collect();
    let cells = keys
        .par_iter()
        .map(|&(m, n)| {
            let form = d_int_power(n, m, 0.0)?;
            Ok(TableCell {
                row_key: f64::from(m),
                col_key: f64::from(n),
                display: form.cell.to_string(),
                expr: form.expr,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridTable {
        corner: "m\\n".to_string(),
        comments: Vec::new(),
        rows: rows.into_iter().map(f64::from).collect(),
        cols: cols.into_iter().map(f64::from).collect(),
        cells,
    })
}

/// `∫₀^x t^r (log t)^a (dt)^ρ` for `a ∈ {0, 1}`:
///
/// - `a = 0`: `Γ(1+r)/Γ(1+r+ρ) · x^{r+ρ}`
/// - `a = 1`: `Γ(1+r)/Γ(1+r+ρ) · x^{r+ρ} · (log x + ψ(1+r) − ψ(1+r+ρ))`
///
/// The `a = 1` formula is a derived formula (the `r`-derivative of the
/// `a = 0` one); it is checked against quadrature by the test suite.
pub fn gen_integral_coeff(rho: f64, r: f64, a: u8) -> Result<ClosedFormExpr> {
    if !rho.is_finite() || !r.is_finite() {
        return Err(Error::domain("rho and r must be finite"));
    }
    if r <= -1.0 {
        return Err(Error::domain(format!(
            "generating integral of x^{r} diverges at 0 (r must exceed -1)"
        )));
    }
    if is_nonpositive_integer(1.0 + rho) {
        return Err(Error::Pole {
            function: "gamma",
            at: 1.0 + rho,
        });
    }
    match a {
        0 => {
            let c = gamma_ratio_limit(r, -rho)?;
            Ok(ClosedFormExpr::new([LogPowerTerm::power(c, r + rho)]))
        }
        1 => log_power_integral(rho, r),
        _ => Err(Error::domain(format!(
            "log power a = {a} is outside the supported set {{0, 1}}"
        ))),
    }
}

fn is_integer(v: f64) -> bool {
    v == v.floor() && v.abs() < 1e9
}

/// Factorial-style rendering for integer keys with `a = 0`:
/// `r!/(r+ρ)! x^{r+ρ}`, or `0` when `r+ρ` is a negative integer.
fn factorial_display(rho: f64, r: f64) -> Option<String> {
    use crate::closed_form::{FactorialRatio, IntegerCell};
    if !is_integer(rho) || !is_integer(r) || r < 0.0 {
        return None;
    }
    let top = r + rho;
    if top < 0.0 {
        return Some(IntegerCell::Zero.to_string());
    }
    let coeff = FactorialRatio::new(false, r as u32, top as u32);
    Some(
        IntegerCell::Power {
            coeff,
            power: top as i32,
        }
        .to_string(),
    )
}

/// One row per `r`, one column per `ρ`, every cell the full expression.
/// Integer keys with `a = 0` render in factorial style, all others in
/// decimal.
pub fn gen_table(rho_list: &[f64], r_list: &[f64], a: u8) -> Result<GridTable> {
    let keys: Vec<(f64, f64)> = r_list
        .iter()
        .flat_map(|&r| rho_list.iter().map(move |&rho| (r, rho)))
        .collect();
    let cells = keys
        .par_iter()
        .map(|&(r, rho)| {
            let expr = gen_integral_coeff(rho, r, a)?;
            let display = match (a, factorial_display(rho, r)) {
                (0, Some(s)) => s,
                _ => expr.to_string(),
            };
            Ok(TableCell {
                row_key: r,
                col_key: rho,
                expr,
                display,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridTable {
        corner: "r\\rho".to_string(),
        comments: vec![format!("a = {a}")],
        rows: r_list.to_vec(),
        cols: rho_list.to_vec(),
        cells,
    })
}

fn header(table: &GridTable) -> Vec<String> {
    std::iter::once(table.corner.clone())
        .chain(table.cols.iter().map(|&k| key_text(k)))
        .collect()
}

fn body(table: &GridTable) -> Vec<Vec<String>> {
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            std::iter::once(key_text(k))
                .chain((0..table.cols.len()).map(|j| table.cell(i, j).display.clone()))
                .collect()
        })
        .collect()
}

/// Writes the table as CSV (header first, `#` comment lines before it) or
/// as right-aligned text columns separated by `" | "`.
pub fn emit_table(table: &GridTable, format: TableFormat, mut out: impl Write) -> Result<()> {
    for c in &table.comments {
        writeln!(out, "# {c}")?;
    }
    let head = header(table);
    let rows = body(table);
    match format {
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            w.write_record(&head)?;
            for row in &rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        TableFormat::Text => {
            let mut widths: Vec<usize> = head.iter().map(|s| s.chars().count()).collect();
            for row in &rows {
                for (w, s) in widths.iter_mut().zip(row) {
                    *w = (*w).max(s.chars().count());
                }
            }
            let line = |cells: &[String]| -> String {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(s, &w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join(" | ")
            };
            writeln!(out, "{}", line(&head))?;
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            writeln!(out, "{}", rule.join("-+-"))?;
            for row in &rows {
                writeln!(out, "{}", line(row))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Renders to a `String`.
pub fn render_table(table: &GridTable, format: TableFormat) -> Result<String> {
    let mut buf = Vec::new();
    emit_table(table, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("tables render as UTF-8"))
}

/// Golden integer-order table (default ranges), CSV.
pub const TABLE1_GOLDEN_CSV: &str = include_str!("../data/table1.csv");
/// Golden integer-order table (default ranges), aligned text.
pub const TABLE1_GOLDEN_TEXT: &str = include_str!("../data/table1.txt");
