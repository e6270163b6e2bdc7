//! The three reference tables: partial sums of the γ series, the
//! deviations δ_m and the exact coefficients e_1..e_20.

use dyadic_gamma::exact::EmTable;
use dyadic_gamma::reference::REFERENCE_DIGITS;
use dyadic_gamma::series::{
    delta_range, gamma_series, plan_for_digits, GammaApproximation, SeriesPlan,
};
use dyadic_gamma::{FixedPoint, PrecisionCtx, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::commands::rounding_bound;
use crate::format::{fraction, fraction_latex, sci, sci_latex, Rounding};
use crate::{CmdResult, Failure, OutputFormat};

/// Rows of table 1 as (level, terms, digit count in the original layout).
const TABLE1_ROWS: [(u32, usize, usize); 9] = [
    (2, 10, 6),
    (3, 10, 10),
    (4, 10, 12),
    (5, 10, 16),
    (6, 10, 20),
    (7, 10, 24),
    (4, 20, 24),
    (3, 20, 18),
    (2, 20, 10),
];

/// Digits carried when evaluating a table-1 row; no row gets close.
const TABLE1_MAX_DIGITS: usize = 40;
/// Digits of the comparison value of γ.
const GAMMA_CHECK_DIGITS: usize = 60;

pub fn table(which: u8, fmt: OutputFormat) -> CmdResult {
    match which {
        1 => table1(fmt),
        2 => table2(fmt),
        3 => table3(fmt),
        _ => Err(Failure::Usage(format!("unknown table {which}"))),
    }
}

pub struct Table1Row {
    pub level: u32,
    pub terms: usize,
    pub digits: usize,
    pub layout_digits: usize,
    pub value: String,
    pub last_term: Rational,
    /// Rigorous bound on |partial sum - γ|.
    pub error_bound: Rational,
}

/// Largest `d` for which `x` and every point of `[lo, hi]` share their
/// first `d` truncated digits.
fn agreeing_digits(x: &FixedPoint, lo: &FixedPoint, hi: &FixedPoint, max: usize) -> usize {
    (0..=max)
        .rev()
        .find(|&d| {
            let t = x.to_decimal(d);
            t == lo.to_decimal(d) && t == hi.to_decimal(d)
        })
        .unwrap_or(0)
}

/// Computes every row. The displayed digit count for a row is the number of
/// truncated digits of the partial sum that provably coincide with those of
/// γ, judged against a separate high-precision enclosure of γ.
pub fn table1_rows() -> dyadic_gamma::Result<Vec<Table1Row>> {
    let reference = gamma_series(&plan_for_digits(GAMMA_CHECK_DIGITS, 4)?)?;
    let f = reference.plan.frac_bits;
    let slack = (&reference.total_error_bound
        * Rational::from_integer(BigInt::from(1) << f as usize))
    .ceil()
    .to_integer();
    let g_lo = reference.value.offset_ulps(&-slack.clone());
    let g_hi = reference.value.offset_ulps(&slack);

    let mut rows = Vec::new();
    for &(level, terms, layout_digits) in &TABLE1_ROWS {
        let plan = SeriesPlan::for_terms(level, terms, TABLE1_MAX_DIGITS)?;
        let s = gamma_series(&plan)?;
        let x = s.value.rescale(f);
        let digits = agreeing_digits(&x, &g_lo, &g_hi, TABLE1_MAX_DIGITS);
        rows.push(Table1Row {
            level,
            terms,
            digits,
            layout_digits,
            value: s.value.to_decimal(digits),
            last_term: s.last_term.as_ref().expect("rows have terms").to_rational(),
            error_bound: distance_bound(&s, &reference),
        });
    }
    Ok(rows)
}

fn distance_bound(s: &GammaApproximation, reference: &GammaApproximation) -> Rational {
    (s.value.to_rational() - reference.value.to_rational()).abs()
        + &reference.total_error_bound
        + rounding_bound(s)
}

fn table1(fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    let rows = table1_rows()?;
    match fmt {
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "level": r.level,
                        "terms": r.terms,
                        "value": r.value,
                        "digits": r.digits,
                        "layout_digits": r.layout_digits,
                        "last_term": sci(&r.last_term, 4, Rounding::Nearest),
                        "error_bound": sci(&r.error_bound, 2, Rounding::Up),
                    })
                })
                .collect();
            outln!(
                out,
                "{}",
                serde_json::to_string_pretty(
                    &json!({ "rows": rows, "reference": REFERENCE_DIGITS })
                )
                .expect("JSON values serialize")
            );
        }
        OutputFormat::Latex => {
            for (i, r) in rows.iter().enumerate() {
                if i == 6 {
                    outln!(out, "\\hline\\hline");
                    outln!(out, "$\\gamma$ & {REFERENCE_DIGITS}\\dots & \\\\");
                    outln!(out, "\\hline\\hline");
                }
                outln!(
                    out,
                    "{} & {}\\dots & ${{}}\\approx{}$\\\\",
                    r.level,
                    r.value,
                    sci_latex(&r.last_term, 4, Rounding::Nearest)
                );
            }
        }
        OutputFormat::Plain => {
            outln!(out, "level  terms  partial sum (truncated)                    last term    |sum - γ| <=");
            for (i, r) in rows.iter().enumerate() {
                if i == 6 {
                    outln!(out, "γ             {REFERENCE_DIGITS}");
                }
                let note = if r.digits == r.layout_digits {
                    String::new()
                } else {
                    format!("  [original layout shows {} digits]", r.layout_digits)
                };
                outln!(
                    out,
                    "{:<5}  {:<5}  {:<41}  {:<11}  {}{note}",
                    r.level,
                    r.terms,
                    r.value,
                    sci(&r.last_term, 4, Rounding::Nearest),
                    sci(&r.error_bound, 2, Rounding::Up),
                );
            }
        }
    }
    Ok(out)
}

fn table2(fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    let ctx = PrecisionCtx::new(128)?;
    let mut t = EmTable::new();
    let records = delta_range(1..=20, &mut t, &ctx)?;
    match fmt {
        OutputFormat::Json => {
            let rows: Vec<Value> = records
                .iter()
                .map(|r| json!({ "m": r.m, "delta": r.delta.to_decimal(12) }))
                .collect();
            outln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("JSON values serialize")
            );
        }
        OutputFormat::Latex => {
            for r in &records {
                outln!(out, "${}$ & {}\\dots\\\\", r.m, r.delta.to_decimal(12));
            }
        }
        OutputFormat::Plain => {
            for r in &records {
                outln!(out, "{:>2}  {}", r.m, r.delta.to_decimal(12));
            }
        }
    }
    Ok(out)
}

fn table3(fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    let mut t = EmTable::new();
    t.extend_to(20);
    let rows = &t.values()[1..=20];
    match fmt {
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .enumerate()
                .map(|(i, e)| json!({ "m": i + 1, "e": fraction(e) }))
                .collect();
            outln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("JSON values serialize")
            );
        }
        OutputFormat::Latex => {
            for (i, e) in rows.iter().enumerate() {
                outln!(
                    out,
                    "${}$ & $\\displaystyle {}$\\\\",
                    i + 1,
                    fraction_latex(e)
                );
            }
        }
        OutputFormat::Plain => {
            for (i, e) in rows.iter().enumerate() {
                outln!(out, "{:>2}  {}", i + 1, fraction(e));
            }
        }
    }
    Ok(out)
}
