use crate::error::{Error, Result};
use crate::exact::{e_exact, harmonic, EmTable, Rational};
use crate::fixed::{ulps_to_rational, Enclosure, FixedPoint, PrecisionCtx};

/// `δ_m = e_m - H_{m+1} / ln 2` with a bound on the evaluation error.
#[derive(Debug, Clone)]
pub struct DeltaRecord {
    pub m: usize,
    pub delta: FixedPoint,
    pub error_bound: Rational,
}

/// Single `δ_m`.
pub fn delta(m: usize, table: &mut EmTable, ctx: &PrecisionCtx) -> Result<DeltaRecord> {
    let ln2 = checked_log2(ctx)?;
    delta_with(m, table, ctx, &ln2)
}

/// `δ_m` for every `m` in `range`, sharing one `ln 2`.
pub fn delta_range(
    range: std::ops::RangeInclusive<usize>,
    table: &mut EmTable,
    ctx: &PrecisionCtx,
) -> Result<Vec<DeltaRecord>> {
    let ln2 = checked_log2(ctx)?;
    range.map(|m| delta_with(m, table, ctx, &ln2)).collect()
}

fn checked_log2(ctx: &PrecisionCtx) -> Result<Enclosure> {
    // The error propagation below assumes ln 2's enclosure stays above 1/2.
    if ctx.frac_bits() < 16 {
        return Err(Error::domain(
            "frac_bits",
            "delta needs at least 16 fractional bits",
        ));
    }
    Ok(ctx.log2())
}

fn delta_with(
    m: usize,
    table: &mut EmTable,
    ctx: &PrecisionCtx,
    ln2: &Enclosure,
) -> Result<DeltaRecord> {
    let e = ctx.from_rational_enclosed(&e_exact(m, table));
    let h = ctx.from_rational_enclosed(&harmonic(m as u64 + 1));
    let q = ctx.div(&h.value, &ln2.value)?;
    // H/L - H'/L' = (H - H')/L + H'(L' - L)/(L L'), with L, L' > 1/2.
    let h_ceil = h.value.to_rational().ceil().to_integer();
    let h_ceil = u64::try_from(h_ceil).unwrap_or(u64::MAX);
    let q_err = 2 * h.err_ulps + 4 * h_ceil.saturating_mul(ln2.err_ulps) + 1;
    Ok(DeltaRecord {
        m,
        delta: &e.value - &q,
        error_bound: ulps_to_rational(e.err_ulps + q_err, ctx.frac_bits()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::log2_rational_enclosure;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(192).unwrap()
    }

    /// Exact interval for `q_e - q_h / ln 2` from a rational `ln 2` enclosure.
    fn delta_interval(e: Rational, h: Rational) -> (Rational, Rational) {
        let (lo, hi) = log2_rational_enclosure(80);
        (&e - &h / &lo, &e - &h / &hi)
    }

    #[test]
    fn landmarks() {
        let mut t = EmTable::new();
        let c = ctx();
        let d0 = delta(0, &mut t, &c).unwrap();
        assert!(d0.delta.to_decimal(6).starts_with("-1.442695"));
        let d1 = delta(1, &mut t, &c).unwrap();
        assert_eq!(d1.delta.to_decimal(12), "-0.164042561333");
        let d3 = delta(3, &mut t, &c).unwrap();
        assert!(d3.delta.to_decimal(5).starts_with("-0.33894"));

        for (rec, e, h) in [
            (
                &d0,
                Rational::from_integer(0.into()),
                Rational::from_integer(1.into()),
            ),
            (
                &d1,
                Rational::from_integer(2.into()),
                crate::exact::ratio(3, 2),
            ),
            (&d3, crate::exact::ratio(8, 3), crate::exact::ratio(25, 12)),
        ] {
            let (lo, hi) = delta_interval(e, h);
            let v = rec.delta.to_rational();
            assert!(&v + &rec.error_bound >= lo && &v - &rec.error_bound <= hi);
            assert!(rec.error_bound < crate::exact::ratio(1, 1_000_000_000_000_000_000));
        }
    }

    #[test]
    fn range_matches_single_calls() {
        let mut t = EmTable::new();
        let c = ctx();
        let all = delta_range(0..=12, &mut t, &c).unwrap();
        for rec in &all {
            let single = delta(rec.m, &mut t, &c).unwrap();
            assert_eq!(single.delta, rec.delta);
        }
    }

    #[test]
    fn rejects_tiny_contexts() {
        let mut t = EmTable::new();
        assert!(delta(1, &mut t, &PrecisionCtx::new(8).unwrap()).is_err());
    }
}
