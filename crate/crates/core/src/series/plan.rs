//! Choosing level, term count and working precision for a digit target.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::check_level;
use crate::error::{Error, Result};
use crate::exact::{harmonic, pow2, Rational};
use crate::fixed::{inv_log2_upper, rational_log10, ulps_to_rational};

pub const MIN_LEVEL: u32 = 2;
pub const MAX_AUTO_LEVEL: u32 = 7;
pub const MIN_PLAN_FRAC_BITS: u32 = 64;
/// Cost exponent used when none is given: the recurrence is quadratic.
pub const DEFAULT_COST_EXPONENT: f64 = 2.0;

/// Level, term count and precision for one evaluation, together with the
/// a-priori bounds on the two error sources.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPlan {
    pub level: u32,
    pub terms: usize,
    pub frac_bits: u32,
    /// Upper bound on the omitted tail `sum_{m > terms}`.
    pub tail_bound: Rational,
    /// Upper bound on accumulated truncation error.
    pub rounding_bound: Rational,
    /// Digit target the plan was built for, if any.
    pub digits: Option<usize>,
}

impl SeriesPlan {
    /// A plan for an explicit partial sum with `terms` terms, sized for
    /// `digits` displayed digits.
    pub fn for_terms(level: u32, terms: usize, digits: usize) -> Result<Self> {
        check_level(level)?;
        let frac_bits = guard_frac_bits(digits, level, terms);
        Ok(SeriesPlan {
            level,
            terms,
            frac_bits,
            tail_bound: tail_bound(level, terms)?,
            rounding_bound: ulps_to_rational(rounding_budget_ulps(level, terms), frac_bits),
            digits: None,
        })
    }

    /// `log10` of the tail bound, for reporting.
    pub fn tail_bound_log10(&self) -> f64 {
        rational_log10(&self.tail_bound)
    }

    pub fn total_bound(&self) -> Rational {
        &self.tail_bound + &self.rounding_bound
    }

    /// `tail + rounding < 10^-(digits+1)`.
    pub fn meets_target(&self, digits: usize) -> bool {
        self.total_bound() < pow10_recip(digits + 1)
    }
}

pub(crate) fn pow10_recip(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(k as u32))
}

/// Rigorous bound on `|sum_{m > terms} t_m|`.
///
/// From `e_m < H_{m+1} / ln 2` and a block sum at most `2^{-(ℓ-1)m}`, the
/// `m`-th term is dominated by `H_{m+1}/((m+1) ln 2) 2^{-(ℓ-1)m}`, which is
/// decreasing in `m`; summing the geometric majorant gives
/// `H_{M+2}/((M+2) ln 2) * 2^{-(ℓ-1)(M+1)} / (1 - 2^{-(ℓ-1)})`.
/// `1/ln 2` is replaced by a rational upper bound.
pub fn tail_bound(level: u32, terms: usize) -> Result<Rational> {
    check_level(level)?;
    let shift = (level - 1) as usize;
    let prefactor = harmonic(terms as u64 + 2) * inv_log2_upper()
        / Rational::from_integer(BigInt::from(terms + 2));
    // 2^{-s(M+1)} / (1 - 2^{-s}) = 1 / (2^{s(M+1)} - 2^{sM})
    let den = pow2(shift * (terms + 1)) - pow2(shift * terms);
    Ok(prefactor / Rational::from_integer(den.into()))
}

/// Fractional bits for a `digits`-digit target: the decimal precision,
/// 64 guard bits, and one bit per doubling of the inexact operation count.
pub fn guard_frac_bits(digits: usize, level: u32, terms: usize) -> u32 {
    let decimal_bits = if digits == 0 {
        0
    } else {
        // ceil(D log2 10) is the bit length of 10^D - 1.
        (num_traits::pow(BigUint::from(10u32), digits) - 1u32).bits() as u32
    };
    let ops = (terms as u64)
        .saturating_mul(1u64 << (level - 1))
        .saturating_add(16);
    let op_bits = 64 - (ops - 1).leading_zeros();
    (decimal_bits + 64 + op_bits).max(MIN_PLAN_FRAC_BITS)
}

/// A-priori ulp budget for the truncation errors of `gamma_series`.
///
/// Mirrors the bookkeeping done during evaluation with worst-case inputs:
/// `|e_m| <= H_{m+1}/ln 2 + 1`, `err(e_m) <= m + 1`, block error `2^{ℓ-1}`.
pub(crate) fn rounding_budget_ulps(level: u32, terms: usize) -> u64 {
    let block_err = 1u64 << (level - 1);
    let mut h = 1.0f64; // H_{m+1}, starting from H_1
    let mut total = 1u64 + 2 * u64::from(level - 1);
    for m in 1..=terms as u64 {
        h += 1.0 / (m + 1) as f64;
        let e_cap = (h * std::f64::consts::LOG2_E + 1e-6).floor() as u64 + 2;
        let mul_err = e_cap * block_err + (m + 1) + 2;
        total = total.saturating_add(mul_err.div_ceil(m + 1) + 1);
    }
    total
}

fn estimate_terms(digits: usize, level: u32) -> usize {
    let target = -((digits + 2) as f64) - 2f64.log10();
    let s = (level - 1) as f64;
    let mut h = 1.5f64;
    let mut m = 0usize;
    loop {
        h += 1.0 / (m + 2) as f64;
        m += 1;
        let log_b = (h / ((m + 2) as f64) * std::f64::consts::LOG2_E).log10()
            - s * (m + 1) as f64 * std::f64::consts::LOG10_2
            - (1.0 - 2f64.powf(-s)).log10();
        if log_b < target {
            return m;
        }
    }
}

/// Smallest `M >= 1` with `tail_bound(ℓ, M) < 10^-(D+2) / 2`, and the
/// working precision from [`guard_frac_bits`].
pub fn plan_for_digits(digits: usize, level: u32) -> Result<SeriesPlan> {
    if digits == 0 {
        return Err(Error::domain("digits", "need at least one digit"));
    }
    check_level(level)?;
    let target = pow10_recip(digits + 2) / Rational::from_integer(BigInt::from(2));
    let below = |m: usize| -> Result<bool> { Ok(tail_bound(level, m)? < target) };

    let mut terms = estimate_terms(digits, level).saturating_sub(2).max(1);
    while terms > 1 && below(terms - 1)? {
        terms -= 1;
    }
    while !below(terms)? {
        terms += 1;
    }

    let frac_bits = guard_frac_bits(digits, level, terms);
    let plan = SeriesPlan {
        level,
        terms,
        frac_bits,
        tail_bound: tail_bound(level, terms)?,
        rounding_bound: ulps_to_rational(rounding_budget_ulps(level, terms), frac_bits),
        digits: Some(digits),
    };
    debug_assert!(plan.meets_target(digits));
    Ok(plan)
}

/// The largest level worth using under a cost model in which per-term
/// work grows like `terms^c`.
///
/// Going from level `ℓ` to `ℓ + 1` shrinks the term count by `ℓ/(ℓ-1)` and
/// doubles the block length, so it pays only while `(ℓ/(ℓ-1))^c > 2`.
/// The answer is clamped to `[2, 7]`; `digits` does not enter the model.
pub fn auto_level(_digits: usize, cost_exponent: f64) -> Result<u32> {
    if !(1.0..=3.0).contains(&cost_exponent) {
        return Err(Error::domain(
            "cost_exponent",
            format!("need 1 <= c <= 3, got {cost_exponent}"),
        ));
    }
    let mut level = MIN_LEVEL;
    while level < MAX_AUTO_LEVEL {
        let gain = (f64::from(level) / f64::from(level - 1)).powf(cost_exponent);
        if gain <= 2.0 {
            break;
        }
        level += 1;
    }
    Ok(level)
}
