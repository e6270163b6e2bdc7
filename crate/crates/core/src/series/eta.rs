use num_bigint::BigInt;
use num_traits::One;

use super::{block_power_sum, check_level};
use crate::error::{Error, Result};
use crate::exact::{binomial, pochhammer_ratio, pow2, CmTable, Rational};
use crate::fixed::{ulps_to_rational, FixedPoint, PrecisionCtx};

/// A value of `η(s)` from the level-ℓ representation.
#[derive(Debug, Clone)]
pub struct EtaApproximation {
    pub value: FixedPoint,
    pub rounding_ulps: u64,
    /// Bound on the omitted terms `m > M`.
    pub tail_bound: Rational,
}

impl EtaApproximation {
    pub fn total_error_bound(&self) -> Rational {
        &self.tail_bound + ulps_to_rational(self.rounding_ulps, self.value.frac_bits())
    }
}

/// `η(s)` for integer `s >= 1` via
///
/// ```text
/// η(s) = (2^s - 2)/2^s sum_{0<n<2^{ℓ-1}} n^-s + sum_block n^-s
///        + sum_{m=1..M} (-1)^m (s)_m/m! c_m(s) sum_block n^-(s+m)
/// ```
///
/// The leading sum and the coefficients `(s)_m/m! c_m(s)` are exact
/// rationals; only block sums and products are rounded.
pub fn eta_level_series(
    s: i64,
    level: u32,
    terms: usize,
    ctx: &PrecisionCtx,
) -> Result<EtaApproximation> {
    if s < 1 {
        return Err(Error::domain("s", format!("need s >= 1, got {s}")));
    }
    check_level(level)?;
    let su = s as u32;

    let two_s = Rational::from_integer(pow2(su as usize).into());
    let prefactor = (&two_s - Rational::from_integer(2.into())) / &two_s;
    let head: Rational = (1..1u64 << (level - 1))
        .map(|n| Rational::new(BigInt::one(), BigInt::from(n).pow(su)))
        .sum();
    let head = ctx.from_rational_enclosed(&(prefactor * head));
    let block = block_power_sum(level, su, ctx)?;

    let mut value = &head.value + &block.value;
    let mut rounding = head.err_ulps + block.err_ulps;

    let mut cm = CmTable::new(s)?;
    for m in 1..=terms {
        let coeff = pochhammer_ratio(s, m as u64)? * cm.get(m);
        let coeff = ctx.from_rational_enclosed(&coeff);
        let b = block_power_sum(level, su + m as u32, ctx)?;
        let t = ctx.mul_enclosed(&coeff, &b)?;
        value = if m % 2 == 0 {
            &value + &t.value
        } else {
            &value - &t.value
        };
        rounding = rounding.saturating_add(t.err_ulps);
    }

    Ok(EtaApproximation {
        value,
        rounding_ulps: rounding,
        tail_bound: eta_tail_bound(su, level, terms)?,
    })
}

/// Using `0 < c_m(s) <= 1` and a block sum at most `2^{ℓ-1} 2^{-(ℓ-1)(s+m)}`,
/// term `m` is at most `C(s+m-1, m) 2^{ℓ-1} r^{s+m}` with `r = 2^{-(ℓ-1)}`.
/// For `m > M` consecutive majorants shrink by at most
/// `ρ r`, `ρ = (s+M+1)/(M+2)`, giving a geometric bound.
fn eta_tail_bound(s: u32, level: u32, terms: usize) -> Result<Rational> {
    let shift = (level - 1) as usize;
    let m = terms as u64 + 1;
    let rho = Rational::new(BigInt::from(u64::from(s) + m), BigInt::from(m + 1));
    let r = Rational::new(BigInt::one(), pow2(shift).into());
    let ratio = &rho * &r;
    if ratio >= Rational::one() {
        return Err(Error::domain(
            "terms",
            format!("too few terms ({terms}) for a geometric tail bound at s = {s}"),
        ));
    }
    let first = Rational::from_integer(binomial(u64::from(s) + m - 1, m as i64).into())
        * Rational::from_integer(pow2(shift).into())
        / Rational::from_integer(pow2(shift * (s as usize + m as usize)).into());
    Ok(first / (Rational::one() - ratio))
}
