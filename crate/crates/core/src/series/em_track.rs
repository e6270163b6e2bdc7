//! Fixed-point evaluation of the `e_m` recurrence.
//!
//! The divisor `2^{m+1} - 2` equals the binomial mass
//! `sum_{j=1..m} C(m+1, j)`, so errors in earlier entries are averaged, not
//! amplified: `err(e_m) <= max_{j<m} err(e_j) + 1` ulp.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::exact::{pow2, EmTable, PascalRow};
use crate::fixed::{Enclosure, FixedPoint, PrecisionCtx};

/// Indices up to this bound come from the exact rational track when the
/// γ series is evaluated; larger ones from the fixed-point recurrence.
pub const EXACT_TRACK_CAP: usize = 512;

/// `e_0..=e_{m_max}` computed entirely in fixed point, starting from `e_0 = 0`.
pub fn em_fixed(m_max: usize, ctx: &PrecisionCtx) -> Vec<Enclosure> {
    let mut values = vec![Enclosure::exact(ctx.zero())];
    extend_fixed(&mut values, m_max, ctx);
    values
}

/// `e_0..=e_{m_max}`: exact rationals converted for `m <= exact_cap`,
/// the fixed-point recurrence beyond.
pub fn em_enclosures(
    m_max: usize,
    exact_cap: usize,
    table: &mut EmTable,
    ctx: &PrecisionCtx,
) -> Vec<Enclosure> {
    let seeded = m_max.min(exact_cap);
    table.extend_to(seeded);
    let mut values: Vec<Enclosure> = table.values()[..=seeded]
        .iter()
        .map(|q| ctx.from_rational_enclosed(q))
        .collect();
    extend_fixed(&mut values, m_max, ctx);
    values
}

fn extend_fixed(values: &mut Vec<Enclosure>, m_max: usize, ctx: &PrecisionCtx) {
    let frac_bits = ctx.frac_bits();
    let mut row = PascalRow::first();
    while row.index() < values.len() {
        row.advance();
    }
    let mut worst = values.iter().map(|e| e.err_ulps).max().unwrap_or(0);
    while values.len() <= m_max {
        let m = values.len();
        debug_assert_eq!(row.index(), m);
        row.advance();
        let mut acc = BigInt::from(pow2(m + 1 + frac_bits as usize));
        for j in 1..=m {
            acc += BigInt::from(row.entries()[j].clone()) * values[m - j].value.mantissa();
        }
        let divisor = BigInt::from(pow2(m + 1) - BigUint::from(2u32));
        let (q, r) = acc.div_rem(&divisor);
        let inexact = !r.is_zero();
        worst = worst.saturating_add(u64::from(inexact));
        values.push(Enclosure {
            value: FixedPoint::from_mantissa(q, frac_bits),
            err_ulps: worst,
        });
    }
}
