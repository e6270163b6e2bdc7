use std::time::Instant;

use dyadic_gamma::exact::{CmTable, EmTable};
use dyadic_gamma::fixed::{rational_to_f64, ulps_to_rational};
use dyadic_gamma::series::{
    auto_level, cross_level_agreement, delta_range, derivative_oracle_check, eta_level_series,
    eta_log2_check, gamma_series, guard_frac_bits, plan_for_digits, verify_bounds,
    GammaApproximation, SeriesPlan, EXACT_TRACK_CAP,
};
use dyadic_gamma::{PrecisionCtx, Rational};
use serde_json::{json, Value};

use crate::format::{fraction, fraction_latex, sci, sci_latex, Rounding};
use crate::{
    CmArgs, CmdResult, DeltaArgs, EtaArgs, Failure, GammaArgs, OutputFormat, PlanArgs, RangeArgs,
    VerifyArgs, MAX_FRAC_BITS,
};

pub(crate) fn push_json(out: &mut String, v: &Value) {
    outln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn bound_str(q: &Rational) -> String {
    sci(q, 2, Rounding::Up)
}

fn check_range(r: &RangeArgs, cap: usize) -> Result<(), Failure> {
    if r.from > r.to {
        return Err(Failure::Usage(format!(
            "--from {} exceeds --to {}",
            r.from, r.to
        )));
    }
    if r.to > cap {
        return Err(Failure::Usage(format!(
            "--to {} exceeds the limit {cap}",
            r.to
        )));
    }
    Ok(())
}

/// Rough bit count for `digits` decimal digits, used to refuse absurd
/// requests before any planning work.
fn rough_bits(digits: u64) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 64
}

fn check_caps(plan: &SeriesPlan, max_terms: usize) -> Result<(), Failure> {
    if plan.terms > max_terms {
        return Err(Failure::Resource(format!(
            "plan needs {} terms, above --max-terms {max_terms}",
            plan.terms
        )));
    }
    if plan.frac_bits > MAX_FRAC_BITS {
        return Err(Failure::Resource(format!(
            "plan needs {} fractional bits, above the limit {MAX_FRAC_BITS}",
            plan.frac_bits
        )));
    }
    Ok(())
}

pub fn gamma(a: &GammaArgs, fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    let start = Instant::now();
    let level = match a.level {
        Some(l) => l,
        None => auto_level(a.digits.unwrap_or(0) as usize, a.cost)?,
    };

    if let Some(digits) = a.digits {
        if rough_bits(digits) > u64::from(MAX_FRAC_BITS) {
            return Err(Failure::Resource(format!(
                "{digits} digits exceed the precision limit"
            )));
        }
        let digits = digits as usize;
        let plan = plan_for_digits(digits, level)?;
        check_caps(&plan, a.max_terms)?;
        let g = gamma_series(&plan)?;
        let value = g.value.to_decimal(digits);
        let certified = g.certified_digits(digits).is_some();
        if !certified {
            eprintln!("note: the error bound straddles a digit boundary; the last digit may be off by one");
        }
        let elapsed = start.elapsed().as_millis();
        match fmt {
            OutputFormat::Json => push_json(
                &mut out,
                &json!({
                    "value": value,
                    "error_bound": bound_str(&g.total_error_bound),
                    "level": plan.level,
                    "terms": g.terms_used,
                    "frac_bits": plan.frac_bits,
                    "elapsed_ms": elapsed,
                    "digits": digits,
                    "certified": certified,
                }),
            ),
            OutputFormat::Latex => outln!(
                out,
                "{} & {value}\\dots & ${{}}\\leq {}$\\\\",
                plan.level,
                sci_latex(&g.total_error_bound, 2, Rounding::Up)
            ),
            OutputFormat::Plain => {
                outln!(out, "{value}");
                outln!(out, "error_bound  {}", bound_str(&g.total_error_bound));
                outln!(out, "level        {}", plan.level);
                outln!(out, "terms        {}", g.terms_used);
                outln!(out, "frac_bits    {}", plan.frac_bits);
                outln!(out, "certified    {}", if certified { "yes" } else { "no" });
                outln!(out, "elapsed_ms   {elapsed}");
            }
        }
        return Ok(out);
    }

    let terms = a.terms.expect("clap requires --digits or --terms");
    if terms > a.max_terms {
        return Err(Failure::Resource(format!(
            "{terms} terms exceed --max-terms {}",
            a.max_terms
        )));
    }
    if rough_bits(a.digits_shown as u64) > u64::from(MAX_FRAC_BITS) {
        return Err(Failure::Resource(
            "--digits-shown exceeds the precision limit".into(),
        ));
    }
    let plan = SeriesPlan::for_terms(level, terms, a.digits_shown)?;
    check_caps(&plan, a.max_terms)?;
    let g = gamma_series(&plan)?;
    Ok(partial_sum_report(&g, a.digits_shown, start, fmt))
}

fn partial_sum_report(
    g: &GammaApproximation,
    shown: usize,
    start: Instant,
    fmt: OutputFormat,
) -> String {
    let mut out = String::new();
    let value = g.value.to_decimal(shown);
    let last = g.last_term.as_ref().map(|t| t.to_rational());
    let elapsed = start.elapsed().as_millis();
    match fmt {
        OutputFormat::Json => push_json(
            &mut out,
            &json!({
                "value": value,
                "error_bound": bound_str(&g.total_error_bound),
                "level": g.plan.level,
                "terms": g.terms_used,
                "frac_bits": g.plan.frac_bits,
                "elapsed_ms": elapsed,
                "last_term": last.as_ref().map(|t| sci(t, 4, Rounding::Nearest)),
            }),
        ),
        OutputFormat::Latex => {
            let last = last
                .map(|t| format!("${{}}\\approx{}$", sci_latex(&t, 4, Rounding::Nearest)))
                .unwrap_or_default();
            outln!(out, "{} & {value}\\dots & {last}\\\\", g.plan.level);
        }
        OutputFormat::Plain => {
            outln!(out, "{value}");
            if let Some(t) = last {
                outln!(out, "last_term    {}", sci(&t, 4, Rounding::Nearest));
            }
            outln!(out, "error_bound  {}", bound_str(&g.total_error_bound));
            outln!(out, "level        {}", g.plan.level);
            outln!(out, "terms        {}", g.terms_used);
            outln!(out, "frac_bits    {}", g.plan.frac_bits);
            outln!(out, "elapsed_ms   {elapsed}");
        }
    }
    out
}

fn fraction_report(label: &str, rows: &[(usize, Rational)], fmt: OutputFormat) -> String {
    let mut out = String::new();
    match fmt {
        OutputFormat::Json => push_json(
            &mut out,
            &Value::Array(
                rows.iter()
                    .map(|(m, q)| json!({ "m": m, label: fraction(q) }))
                    .collect(),
            ),
        ),
        OutputFormat::Latex => {
            for (m, q) in rows {
                outln!(out, "${m}$ & $\\displaystyle {}$\\\\", fraction_latex(q));
            }
        }
        OutputFormat::Plain => {
            for (_, q) in rows {
                outln!(out, "{}", fraction(q));
            }
        }
    }
    out
}

pub fn em(a: &RangeArgs, fmt: OutputFormat) -> CmdResult {
    check_range(a, EXACT_TRACK_CAP)?;
    let mut table = EmTable::new();
    table.extend_to(a.to);
    let rows: Vec<_> = (a.from..=a.to)
        .map(|m| (m, table.values()[m].clone()))
        .collect();
    Ok(fraction_report("e", &rows, fmt))
}

pub fn cm(a: &CmArgs, fmt: OutputFormat) -> CmdResult {
    check_range(&a.range, EXACT_TRACK_CAP)?;
    let mut table = CmTable::new(a.s)?;
    table.extend_to(a.range.to);
    let rows: Vec<_> = (a.range.from..=a.range.to)
        .map(|m| (m, table.values()[m].clone()))
        .collect();
    Ok(fraction_report("c", &rows, fmt))
}

pub fn delta(a: &DeltaArgs, fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    check_range(&a.range, EXACT_TRACK_CAP)?;
    let ctx = PrecisionCtx::new(guard_frac_bits(a.digits_shown.max(16), 2, 0))?;
    let mut table = EmTable::new();
    let records = delta_range(a.range.from..=a.range.to, &mut table, &ctx)?;
    match fmt {
        OutputFormat::Json => push_json(
            &mut out,
            &Value::Array(
                records
                    .iter()
                    .map(|r| {
                        json!({
                            "m": r.m,
                            "delta": r.delta.to_decimal(a.digits_shown),
                            "error_bound": bound_str(&r.error_bound),
                        })
                    })
                    .collect(),
            ),
        ),
        OutputFormat::Latex => {
            for r in &records {
                outln!(
                    out,
                    "${}$ & {}\\dots\\\\",
                    r.m,
                    r.delta.to_decimal(a.digits_shown)
                );
            }
        }
        OutputFormat::Plain => {
            for r in &records {
                outln!(out, "{:>3}  {}", r.m, r.delta.to_decimal(a.digits_shown));
            }
        }
    }
    Ok(out)
}

pub fn plan(a: &PlanArgs, fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    let start = Instant::now();
    if rough_bits(a.digits) > u64::from(MAX_FRAC_BITS) {
        return Err(Failure::Usage(format!(
            "{} digits exceed the precision limit",
            a.digits
        )));
    }
    let digits = a.digits as usize;
    let level = match a.level {
        Some(l) => l,
        None => auto_level(digits, a.cost)?,
    };
    let plan = plan_for_digits(digits, level)?;
    let log10 = plan.tail_bound_log10();
    let elapsed = start.elapsed().as_millis();
    match fmt {
        OutputFormat::Json => push_json(
            &mut out,
            &json!({
                "value": Value::Null,
                "error_bound": bound_str(&plan.total_bound()),
                "level": plan.level,
                "terms": plan.terms,
                "frac_bits": plan.frac_bits,
                "elapsed_ms": elapsed,
                "tail_bound_log10": (log10 * 100.0).round() / 100.0,
            }),
        ),
        OutputFormat::Latex => outln!(
            out,
            "{digits} & {} & {} & {} & $10^{{{:.2}}}$\\\\",
            plan.level,
            plan.terms,
            plan.frac_bits,
            log10
        ),
        OutputFormat::Plain => {
            outln!(out, "level             {}", plan.level);
            outln!(out, "terms             {}", plan.terms);
            outln!(out, "frac_bits         {}", plan.frac_bits);
            outln!(out, "tail_bound_log10  {log10:.2}");
            outln!(out, "error_bound       {}", bound_str(&plan.total_bound()));
        }
    }
    Ok(out)
}

pub fn eta(a: &EtaArgs, fmt: OutputFormat) -> CmdResult {
    let mut out = String::new();
    if rough_bits(a.digits_shown as u64) > u64::from(MAX_FRAC_BITS) {
        return Err(Failure::Resource(
            "--digits-shown exceeds the precision limit".into(),
        ));
    }
    let ctx = PrecisionCtx::new(guard_frac_bits(a.digits_shown, a.level, a.terms))?;
    let e = eta_level_series(a.s, a.level, a.terms, &ctx)?;
    let value = e.value.to_decimal(a.digits_shown);
    let bound = e.total_error_bound();
    match fmt {
        OutputFormat::Json => push_json(
            &mut out,
            &json!({
                "s": a.s,
                "value": value,
                "error_bound": bound_str(&bound),
                "level": a.level,
                "terms": a.terms,
                "frac_bits": ctx.frac_bits(),
            }),
        ),
        OutputFormat::Latex => outln!(
            out,
            "{} & {} & {value}\\dots & ${{}}\\leq {}$\\\\",
            a.s,
            a.level,
            sci_latex(&bound, 2, Rounding::Up)
        ),
        OutputFormat::Plain => {
            outln!(out, "{value}");
            outln!(out, "error_bound  {}", bound_str(&bound));
        }
    }
    Ok(out)
}

/// One line of the verification report.
struct Outcome {
    name: &'static str,
    scope: String,
    passed: bool,
    detail: String,
    extra: Value,
}

pub fn verify(a: &VerifyArgs, fmt: OutputFormat) -> CmdResult {
    let defaults = a.bounds.is_none() && a.oracle.is_none() && a.cross_level.is_none() && !a.eta;
    let bounds = a.bounds.or(defaults.then_some(300));
    let oracle = a.oracle.or(defaults.then_some(10));
    let cross = a.cross_level.or(defaults.then_some(50));
    let eta = a.eta || defaults;

    let mut results = Vec::new();
    let mut table = EmTable::new();

    if let Some(m_hi) = bounds {
        if m_hi > EXACT_TRACK_CAP {
            return Err(Failure::Usage(format!(
                "--bounds {m_hi} exceeds {EXACT_TRACK_CAP}"
            )));
        }
        let report = verify_bounds(0, m_hi, &mut table)?;
        let failed: Vec<usize> = report.failures().map(|c| c.m).collect();
        results.push(Outcome {
            name: "bounds",
            scope: format!("m=0..={m_hi}"),
            passed: failed.is_empty(),
            detail: format!(
                "min margin {:.3e}, failures {}",
                report.min_margin(),
                failed.len()
            ),
            extra: json!({ "min_margin": report.min_margin(), "failed_m": failed }),
        });
    }

    if let Some(m_hi) = oracle {
        if !(1..=64).contains(&m_hi) {
            return Err(Failure::Usage("--oracle needs 1 <= M <= 64".into()));
        }
        let checks = derivative_oracle_check(m_hi, &mut table)?;
        let worst = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
        results.push(Outcome {
            name: "oracle",
            scope: format!("m=1..={m_hi}"),
            passed: checks.iter().all(|c| c.deviation < 1e-7),
            detail: format!("max deviation {worst:.3e} (tolerance 1e-7)"),
            extra: json!({ "max_deviation": worst }),
        });
    }

    if let Some(digits) = cross {
        if !(1..=2000).contains(&digits) {
            return Err(Failure::Usage("--cross-level needs 1 <= D <= 2000".into()));
        }
        let checks = cross_level_agreement(digits, &[2, 3, 4, 5, 6, 7])?;
        let worst = checks
            .iter()
            .map(|c| rational_to_f64(&(&c.difference / &c.allowed)))
            .fold(0.0, f64::max);
        results.push(Outcome {
            name: "cross-level",
            scope: format!("D={digits}, levels 2..=7"),
            passed: checks.iter().all(|c| c.passed()),
            detail: format!("{} pairs, max difference/allowed {worst:.3e}", checks.len()),
            extra: json!({ "pairs": checks.len(), "max_ratio": worst }),
        });
    }

    if eta {
        let checks = eta_log2_check(&[2, 3, 4], 40, 160)?;
        let worst = checks
            .iter()
            .map(|c| rational_to_f64(&c.difference))
            .fold(0.0, f64::max);
        results.push(Outcome {
            name: "eta",
            scope: "s=1, levels 2,3,4".into(),
            passed: checks.iter().all(|c| c.passed()),
            detail: format!("max |η(1) - ln 2| {worst:.3e}"),
            extra: json!({ "max_difference": worst }),
        });
    }

    let all = results.iter().all(|o| o.passed);
    let mut out = String::new();
    match fmt {
        OutputFormat::Json => push_json(
            &mut out,
            &json!({
                "passed": all,
                "checks": results.iter().map(|o| json!({
                    "name": o.name,
                    "scope": o.scope,
                    "passed": o.passed,
                    "detail": o.extra,
                })).collect::<Vec<_>>(),
            }),
        ),
        OutputFormat::Latex => {
            for o in &results {
                let verdict = if o.passed { "pass" } else { "fail" };
                outln!(
                    out,
                    "{} & {} & {verdict} & {}\\\\",
                    o.name,
                    o.scope,
                    o.detail
                );
            }
        }
        OutputFormat::Plain => {
            for o in &results {
                let verdict = if o.passed { "PASS" } else { "FAIL" };
                outln!(
                    out,
                    "{verdict}  {:<12} {:<22} {}",
                    o.name,
                    o.scope,
                    o.detail
                );
            }
        }
    }
    if all {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

/// Exact rounding error of `g`, without the tail bound.
pub fn rounding_bound(g: &GammaApproximation) -> Rational {
    ulps_to_rational(g.rounding_ulps, g.plan.frac_bits)
}
