//! Independent route to `e_m` through `e_m = -(m+1) c_m'(1) / ln 2`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact::{PascalRow, Rational};
use crate::fixed::{FixedPoint, PrecisionCtx};

/// `c_0(s)..=c_m(s)` at a real `s` near 1, in fixed point.
fn c_fixed(m: usize, s: &Rational, ctx: &PrecisionCtx) -> Result<Vec<FixedPoint>> {
    let two_s = ctx.pow2_real(s)?.value;
    let two = ctx.from_int(2);
    let mut values = vec![ctx.one()];
    let mut row = PascalRow::first();
    for k in 1..=m {
        row.advance();
        let mut sum = ctx.zero();
        for j in 1..=k {
            sum = &sum + &values[k - j].mul_int(&BigInt::from(row.entries()[j].clone()));
        }
        // 2^{k+s} - 2, scaling by 2^k exactly.
        let den = &two_s.mul_int(&(BigInt::one() << k)) - &two;
        values.push(ctx.div(&sum, &den)?);
    }
    Ok(values)
}

/// Central-difference estimate of `e_m = -(m+1) c_m'(1) / ln 2`.
///
/// `h` must be a dyadic rational in `[2^-60, 2^-10]` and the context must
/// carry at least `4 * ceil(-log2 h)` fractional bits. The truncation
/// error of the difference quotient is `O(h^2)`.
pub fn em_derivative_oracle(m: usize, h: &Rational, ctx: &PrecisionCtx) -> Result<FixedPoint> {
    if m == 0 {
        return Err(Error::domain("m", "need m >= 1"));
    }
    let den = h.denom();
    if !h.is_positive() || (den & (den - BigInt::one())) != BigInt::from(0) {
        return Err(Error::domain(
            "h",
            format!("need a positive dyadic step, got {h}"),
        ));
    }
    let lo = Rational::new(BigInt::one(), BigInt::one() << 60usize);
    let hi = Rational::new(BigInt::one(), BigInt::one() << 10usize);
    if *h < lo || *h > hi {
        return Err(Error::domain(
            "h",
            format!("need 2^-60 <= h <= 2^-10, got {h}"),
        ));
    }
    // ceil(-log2 h): smallest k with 2^-k <= h.
    let mut neg_log2 = 10u32;
    while Rational::new(BigInt::one(), BigInt::one() << neg_log2 as usize) > *h {
        neg_log2 += 1;
    }
    if ctx.frac_bits() < 4 * neg_log2 {
        return Err(Error::domain(
            "frac_bits",
            format!(
                "need at least {} fractional bits for this step",
                4 * neg_log2
            ),
        ));
    }

    let one = Rational::one();
    let plus = c_fixed(m, &(&one + h), ctx)?;
    let minus = c_fixed(m, &(&one - h), ctx)?;
    let diff = &plus[m] - &minus[m];

    let two_h = ctx.from_rational(&(h * Rational::from_integer(2.into())));
    let ln2 = ctx.log2();
    let scale = ctx.mul(&two_h, &ln2.value)?;
    let numer = diff.mul_int(&-BigInt::from(m + 1));
    ctx.div(&numer, &scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, EmTable};
    use crate::fixed::rational_to_f64;

    fn step() -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << 20usize)
    }

    #[test]
    fn matches_first_coefficients() {
        let ctx = PrecisionCtx::new(192).unwrap();
        for (m, want, tol) in [
            (1, ratio(2, 1), 1e-8),
            (2, ratio(7, 3), 1e-8),
            (5, ratio(16, 5), 1e-7),
        ] {
            let got = em_derivative_oracle(m, &step(), &ctx).unwrap();
            let err = rational_to_f64(&(got.to_rational() - want)).abs();
            assert!(err < tol, "m = {m}: {err}");
        }
    }

    #[test]
    fn matches_exact_track_up_to_ten() {
        let ctx = PrecisionCtx::new(192).unwrap();
        let mut t = EmTable::new();
        t.extend_to(10);
        for m in 1..=10 {
            let got = em_derivative_oracle(m, &step(), &ctx).unwrap();
            let err = rational_to_f64(&(got.to_rational() - &t.values()[m])).abs();
            assert!(err < 1e-7, "m = {m}: {err}");
        }
    }

    #[test]
    fn c_fixed_at_one_is_reciprocal() {
        let ctx = PrecisionCtx::new(128).unwrap();
        let c = c_fixed(6, &Rational::one(), &ctx).unwrap();
        for (m, v) in c.iter().enumerate() {
            let err = rational_to_f64(&(v.to_rational() - ratio(1, m as i64 + 1))).abs();
            assert!(err < 1e-30);
        }
    }

    #[test]
    fn rejects_bad_steps() {
        let ctx = PrecisionCtx::new(192).unwrap();
        assert!(em_derivative_oracle(1, &ratio(1, 3), &ctx).is_err());
        assert!(em_derivative_oracle(1, &ratio(1, 2), &ctx).is_err());
        assert!(em_derivative_oracle(1, &ratio(-1, 1 << 20), &ctx).is_err());
        assert!(em_derivative_oracle(0, &step(), &ctx).is_err());
        let small = PrecisionCtx::new(64).unwrap();
        assert!(em_derivative_oracle(1, &step(), &small).is_err());
        let tiny = Rational::new(BigInt::one(), BigInt::one() << 61usize);
        assert!(em_derivative_oracle(1, &tiny, &ctx).is_err());
    }
}
