//! Binary fixed-point numbers over big integers.
//!
//! A [`FixedPoint`] with `F` fractional bits represents `mantissa / 2^F`
//! exactly. Addition and subtraction are exact; multiplication and
//! division truncate toward zero and lose less than one unit in the last
//! place (ulp, `2^-F`). Functions that approximate transcendental values
//! return an [`Enclosure`], which pairs the value with an upper bound on
//! its distance to the true result, counted in ulps.

use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{pow2, Rational};

/// Extra bits carried internally by the constant and elementary routines.
pub const GUARD_BITS: u32 = 32;

/// Working precision plus a running tally of inexact operations.
///
/// The tally is atomic so one context can be shared by worker threads.
#[derive(Debug)]
pub struct PrecisionCtx {
    frac_bits: u32,
    inexact_ops: AtomicU64,
}

impl Clone for PrecisionCtx {
    fn clone(&self) -> Self {
        PrecisionCtx {
            frac_bits: self.frac_bits,
            inexact_ops: AtomicU64::new(self.op_count()),
        }
    }
}

/// A fixed-point value: `mantissa / 2^frac_bits`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    mantissa: BigInt,
    frac_bits: u32,
}

/// A value together with a bound on its error: `|value - exact| <= err_ulps * 2^-F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub value: FixedPoint,
    pub err_ulps: u64,
}

impl Enclosure {
    pub fn exact(value: FixedPoint) -> Self {
        Enclosure { value, err_ulps: 0 }
    }

    /// Error bound as an exact rational.
    pub fn error_bound(&self) -> Rational {
        ulps_to_rational(self.err_ulps, self.value.frac_bits)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        (self.value.to_rational() - x).abs() <= self.error_bound()
    }
}

/// `ulps * 2^-frac_bits`, exactly.
pub fn ulps_to_rational(ulps: u64, frac_bits: u32) -> Rational {
    Rational::new(BigInt::from(ulps), BigInt::from(pow2(frac_bits as usize)))
}

/// `x >> bits`, truncating toward zero.
fn shr_trunc(x: &BigInt, bits: u32) -> BigInt {
    let mag = x.magnitude() >> bits as usize;
    BigInt::from_biguint(x.sign(), mag)
}

/// Smallest integer `>= |x|` for a fixed-point value, saturated to `u64`.
fn ceil_abs(x: &FixedPoint) -> u64 {
    let (q, r) = x.mantissa.magnitude().div_rem(&pow2(x.frac_bits as usize));
    let q = if r.is_zero() { q } else { q + 1u32 };
    u64::try_from(q).unwrap_or(u64::MAX)
}

impl PrecisionCtx {
    /// A context with `frac_bits` fractional bits. Series plans always use
    /// at least 64; smaller contexts are accepted for low-level work.
    pub fn new(frac_bits: u32) -> Result<Self> {
        if frac_bits == 0 {
            return Err(Error::domain("frac_bits", "must be positive"));
        }
        Ok(PrecisionCtx {
            frac_bits,
            inexact_ops: AtomicU64::new(0),
        })
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Number of inexact operations performed through this context.
    pub fn op_count(&self) -> u64 {
        self.inexact_ops.load(Ordering::Relaxed)
    }

    fn count(&self, n: u64) {
        self.inexact_ops.fetch_add(n, Ordering::Relaxed);
    }

    fn check(&self, x: &FixedPoint) -> Result<()> {
        if x.frac_bits != self.frac_bits {
            return Err(Error::ScaleMismatch(x.frac_bits, self.frac_bits));
        }
        Ok(())
    }

    fn wider(&self) -> PrecisionCtx {
        PrecisionCtx {
            frac_bits: self.frac_bits + GUARD_BITS,
            inexact_ops: AtomicU64::new(0),
        }
    }

    /// Drops a wide enclosure back to this context. The guard bits absorb
    /// the wide error; truncation adds at most one ulp.
    fn narrow(&self, wide: &PrecisionCtx, e: Enclosure) -> Enclosure {
        self.count(wide.op_count() + 1);
        let extra = wide.frac_bits - self.frac_bits;
        let value = FixedPoint {
            mantissa: shr_trunc(&e.value.mantissa, extra),
            frac_bits: self.frac_bits,
        };
        let carried = e.err_ulps.div_ceil(1u64 << extra.min(63));
        Enclosure {
            value,
            err_ulps: carried.saturating_add(1),
        }
    }

    pub fn zero(&self) -> FixedPoint {
        FixedPoint::zero(self.frac_bits)
    }

    pub fn one(&self) -> FixedPoint {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FixedPoint {
        FixedPoint {
            mantissa: BigInt::from(v) << self.frac_bits as usize,
            frac_bits: self.frac_bits,
        }
    }

    /// Nearest value toward zero; error below one ulp, exact for dyadic
    /// rationals with at most `F` fractional bits.
    pub fn from_rational(&self, q: &Rational) -> FixedPoint {
        self.from_rational_enclosed(q).value
    }

    pub fn from_rational_enclosed(&self, q: &Rational) -> Enclosure {
        let shifted = q.numer() << self.frac_bits as usize;
        let (mantissa, rem) = shifted.div_rem(q.denom());
        let exact = rem.is_zero();
        if !exact {
            self.count(1);
        }
        Enclosure {
            value: FixedPoint {
                mantissa,
                frac_bits: self.frac_bits,
            },
            err_ulps: u64::from(!exact),
        }
    }

    /// `a * b`, truncated toward zero.
    pub fn mul(&self, a: &FixedPoint, b: &FixedPoint) -> Result<FixedPoint> {
        self.check(a)?;
        self.check(b)?;
        self.count(1);
        Ok(FixedPoint {
            mantissa: shr_trunc(&(&a.mantissa * &b.mantissa), self.frac_bits),
            frac_bits: self.frac_bits,
        })
    }

    /// `a / b`, truncated toward zero.
    pub fn div(&self, a: &FixedPoint, b: &FixedPoint) -> Result<FixedPoint> {
        self.check(a)?;
        self.check(b)?;
        if b.mantissa.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.count(1);
        Ok(FixedPoint {
            mantissa: (&a.mantissa << self.frac_bits as usize) / &b.mantissa,
            frac_bits: self.frac_bits,
        })
    }

    /// `a / d` for a nonzero integer `d`, truncated toward zero.
    pub fn div_int(&self, a: &FixedPoint, d: &BigInt) -> Result<FixedPoint> {
        self.check(a)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.count(1);
        Ok(FixedPoint {
            mantissa: &a.mantissa / d,
            frac_bits: self.frac_bits,
        })
    }

    /// Enclosed product: propagates both input bounds plus the truncation.
    pub fn mul_enclosed(&self, a: &Enclosure, b: &Enclosure) -> Result<Enclosure> {
        let value = self.mul(&a.value, &b.value)?;
        // |ab - a'b'| <= |a'| eb + |b'| ea + ea eb ulp^2; the last term is
        // below one ulp whenever ea * eb < 2^F, otherwise charge it fully.
        let cross =
            if (a.err_ulps as u128) * (b.err_ulps as u128) < (1u128 << self.frac_bits.min(127)) {
                u64::from(a.err_ulps > 0 && b.err_ulps > 0)
            } else {
                a.err_ulps.saturating_mul(b.err_ulps)
            };
        let err = ceil_abs(&a.value)
            .saturating_mul(b.err_ulps)
            .saturating_add(ceil_abs(&b.value).saturating_mul(a.err_ulps))
            .saturating_add(cross)
            .saturating_add(1);
        Ok(Enclosure {
            value,
            err_ulps: err,
        })
    }

    /// Enclosed quotient by a positive integer.
    pub fn div_int_enclosed(&self, a: &Enclosure, d: u64) -> Result<Enclosure> {
        let value = self.div_int(&a.value, &BigInt::from(d))?;
        Ok(Enclosure {
            value,
            err_ulps: a.err_ulps.div_ceil(d).saturating_add(1),
        })
    }

    /// `n^-k`, from one exact integer power and one truncating division.
    pub fn inv_pow(&self, n: u64, k: u32) -> Result<FixedPoint> {
        if n < 2 {
            return Err(Error::domain("n", format!("need n >= 2, got {n}")));
        }
        if k == 0 {
            return Err(Error::domain("k", "need k >= 1"));
        }
        let power = num_traits::pow(BigUint::from(n), k as usize);
        let (q, r) = pow2(self.frac_bits as usize).div_rem(&power);
        if !r.is_zero() {
            self.count(1);
        }
        Ok(FixedPoint {
            mantissa: q.into(),
            frac_bits: self.frac_bits,
        })
    }

    /// `ln 2` via `sum_k 2 / ((2k+1) 3^{2k+1})`.
    ///
    /// Every term is truncated downward, so the result never exceeds
    /// `ln 2`; the recorded bound is at most two ulps.
    pub fn log2(&self) -> Enclosure {
        let wide = self.wider();
        let w = wide.frac_bits as usize;
        // p_k = floor(2^{w+1} / 3^{2k+1}) exactly, by repeated floor division.
        let mut p = (BigUint::one() << (w + 1)) / 3u32;
        let mut sum = BigUint::zero();
        let mut terms = 0u64;
        let mut k = 0u64;
        while !p.is_zero() {
            sum += &p / (2 * k + 1);
            terms += 1;
            k += 1;
            p /= 9u32;
        }
        wide.count(terms);
        // One ulp per term from the division by 2k+1, one per term from p's
        // own floor, and below one ulp for the tail once p vanished.
        let err = 2 * terms + 1;
        let e = Enclosure {
            value: FixedPoint {
                mantissa: sum.into(),
                frac_bits: wide.frac_bits,
            },
            err_ulps: err,
        };
        self.narrow(&wide, e)
    }

    /// `e^x` for `|x| <= 1` by its Taylor series.
    pub fn exp_small(&self, x: &FixedPoint) -> Result<Enclosure> {
        self.check(x)?;
        if x.mantissa.magnitude() > &pow2(self.frac_bits as usize) {
            return Err(Error::domain("x", "exp_small needs |x| <= 1"));
        }
        let wide = self.wider();
        let xw = x.rescale(wide.frac_bits);
        let mut term = wide.one();
        let mut sum = wide.one();
        let mut k = 1u64;
        loop {
            term = wide.mul(&term, &xw)?;
            term = wide.div_int(&term, &BigInt::from(k))?;
            if term.mantissa.is_zero() {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        // Each computed term is within 3 ulps of x^k/k!; once a term
        // truncates to zero the remaining tail is below 6 ulps.
        let err = 3 * k + 6;
        Ok(self.narrow(
            &wide,
            Enclosure {
                value: sum,
                err_ulps: err,
            },
        ))
    }

    /// `2^s = 2 e^{(s-1) ln 2}` for `|s - 1| <= 1`.
    pub fn pow2_real(&self, s: &Rational) -> Result<Enclosure> {
        let h = s - Rational::one();
        if h.abs() > Rational::one() {
            return Err(Error::domain(
                "s",
                format!("need |s - 1| <= 1, got s = {s}"),
            ));
        }
        let wide = self.wider();
        let hw = wide.from_rational_enclosed(&h);
        let ln2 = wide.log2();
        // |h| <= 1 and ln 2 < 1 keep the product error at e_h + e_ln2 + 2.
        let y = wide.mul(&hw.value, &ln2.value)?;
        let y_err = hw.err_ulps + ln2.err_ulps + 2;
        let ey = wide.exp_small(&y)?;
        // e^y stays below 3 for |y| <= ln 2 plus a few ulps.
        let err = 2 * (ey.err_ulps + 3 * y_err);
        let value = FixedPoint {
            mantissa: ey.value.mantissa << 1usize,
            frac_bits: wide.frac_bits,
        };
        Ok(self.narrow(
            &wide,
            Enclosure {
                value,
                err_ulps: err,
            },
        ))
    }
}

impl FixedPoint {
    pub fn zero(frac_bits: u32) -> Self {
        FixedPoint {
            mantissa: BigInt::zero(),
            frac_bits,
        }
    }

    pub fn from_mantissa(mantissa: BigInt, frac_bits: u32) -> Self {
        FixedPoint {
            mantissa,
            frac_bits,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        FixedPoint {
            mantissa: self.mantissa.abs(),
            frac_bits: self.frac_bits,
        }
    }

    /// Exact product with an integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        FixedPoint {
            mantissa: &self.mantissa * k,
            frac_bits: self.frac_bits,
        }
    }

    /// The exact rational value `mantissa / 2^F`.
    pub fn to_rational(&self) -> Rational {
        Rational::new(
            self.mantissa.clone(),
            BigInt::from(pow2(self.frac_bits as usize)),
        )
    }

    /// Changes scale; widening is exact, narrowing truncates toward zero.
    pub fn rescale(&self, frac_bits: u32) -> Self {
        let mantissa = if frac_bits >= self.frac_bits {
            &self.mantissa << (frac_bits - self.frac_bits) as usize
        } else {
            shr_trunc(&self.mantissa, self.frac_bits - frac_bits)
        };
        FixedPoint {
            mantissa,
            frac_bits,
        }
    }

    /// Moves the value by `ulps` units of the last place.
    pub fn offset_ulps(&self, ulps: &BigInt) -> Self {
        FixedPoint {
            mantissa: &self.mantissa + ulps,
            frac_bits: self.frac_bits,
        }
    }

    /// Decimal expansion truncated toward zero to `digits` fractional
    /// digits. Never rounds; negative values carry a leading `-`.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mag = self.mantissa.magnitude();
        let unit = pow2(self.frac_bits as usize);
        let (int_part, frac) = mag.div_rem(&unit);
        let mut out = String::new();
        if self.mantissa.sign() == Sign::Minus {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            let scaled = frac * num_traits::pow(BigUint::from(10u32), digits) / unit;
            let s = scaled.to_string();
            out.push('.');
            out.extend(std::iter::repeat_n('0', digits - s.len()));
            out.push_str(&s);
        }
        out
    }

    /// Rough `f64` view for diagnostics and margins.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.to_rational())
    }
}

impl Add for &FixedPoint {
    type Output = FixedPoint;

    /// Exact. Panics when the operands carry different scales.
    fn add(self, rhs: &FixedPoint) -> FixedPoint {
        assert_eq!(self.frac_bits, rhs.frac_bits, "fixed-point scale mismatch");
        FixedPoint {
            mantissa: &self.mantissa + &rhs.mantissa,
            frac_bits: self.frac_bits,
        }
    }
}

impl Sub for &FixedPoint {
    type Output = FixedPoint;

    /// Exact. Panics when the operands carry different scales.
    fn sub(self, rhs: &FixedPoint) -> FixedPoint {
        assert_eq!(self.frac_bits, rhs.frac_bits, "fixed-point scale mismatch");
        FixedPoint {
            mantissa: &self.mantissa - &rhs.mantissa,
            frac_bits: self.frac_bits,
        }
    }
}

impl Neg for FixedPoint {
    type Output = FixedPoint;

    fn neg(self) -> FixedPoint {
        FixedPoint {
            mantissa: -self.mantissa,
            frac_bits: self.frac_bits,
        }
    }
}

/// Approximate `f64` value of a rational, good to a few ulps of `f64`
/// even when numerator and denominator overflow it.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    let (m, e) = rational_log2_parts(q);
    sign * m * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// `log10 |q|`, approximately; `-inf` for zero.
pub fn rational_log10(q: &Rational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = rational_log2_parts(q);
    m.log10() + e as f64 * std::f64::consts::LOG10_2
}

// |q| = m * 2^e with m in roughly [0.5, 2).
fn rational_log2_parts(q: &Rational) -> (f64, i64) {
    fn top(x: &BigUint) -> (f64, i64) {
        let bits = x.bits() as i64;
        let shift = (bits - 64).max(0);
        let head = u64::try_from(x >> shift as usize).unwrap_or(u64::MAX);
        (head as f64, shift)
    }
    let (n, ne) = top(q.numer().magnitude());
    let (d, de) = top(q.denom().magnitude());
    let ratio = n / d;
    let (frac, exp) = frexp(ratio);
    (frac, exp + ne - de)
}

fn frexp(x: f64) -> (f64, i64) {
    let e = x.log2().floor() as i64;
    (x / 2f64.powi(e as i32), e)
}

/// Rational interval `[lo, hi]` containing `ln 2`, from the first
/// `terms` terms of `sum_k 2 / ((2k+1) 3^{2k+1})` and a geometric tail bound.
pub fn log2_rational_enclosure(terms: u32) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut three_pow = BigInt::from(3);
    for k in 0..terms {
        lo += Rational::new(BigInt::from(2), BigInt::from(2 * k + 1) * &three_pow);
        three_pow *= 9;
    }
    // Remaining terms are at most 2/((2K+1) 3^{2K+1}) times 1/(1 - 1/9).
    let first_omitted = Rational::new(BigInt::from(2), BigInt::from(2 * terms + 1) * &three_pow);
    let hi = &lo + first_omitted * Rational::new(BigInt::from(9), BigInt::from(8));
    (lo, hi)
}

/// A rational upper bound for `1 / ln 2`, accurate to about `1e-10`.
pub fn inv_log2_upper() -> &'static Rational {
    static CELL: OnceLock<Rational> = OnceLock::new();
    CELL.get_or_init(|| {
        let (lo, _) = log2_rational_enclosure(10);
        lo.recip()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    const LN2_30: &str = "0.693147180559945309417232121458";

    fn ctx(f: u32) -> PrecisionCtx {
        PrecisionCtx::new(f).unwrap()
    }

    #[test]
    fn from_rational_examples() {
        let c = ctx(64);
        assert_eq!(c.from_rational(&ratio(1, 2)).mantissa, BigInt::one() << 63);
        assert_eq!(c.from_rational(&ratio(0, 1)).mantissa, BigInt::zero());
        assert_eq!(
            ctx(8).from_rational(&ratio(1, 3)).mantissa,
            BigInt::from(85)
        );
        assert_eq!(
            ctx(8).from_rational(&ratio(-1, 3)).mantissa,
            BigInt::from(-85)
        );
        assert_eq!(c.from_rational_enclosed(&ratio(3, 8)).err_ulps, 0);
        assert_eq!(c.from_rational_enclosed(&ratio(1, 3)).err_ulps, 1);
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx(8);
        let third = c.from_rational(&ratio(1, 3));
        assert_eq!(&third + &c.zero(), third);
        let half = c.from_rational(&ratio(1, 2));
        assert_eq!(c.mul(&half, &half).unwrap().to_rational(), ratio(1, 4));
        let q = c.div(&c.one(), &c.from_int(3)).unwrap();
        assert_eq!(q.mantissa, BigInt::from(85));
        assert_eq!(c.div(&c.one(), &c.zero()), Err(Error::DivisionByZero));
        assert_eq!(c.mul(&half, &ctx(9).one()), Err(Error::ScaleMismatch(9, 8)));
    }

    #[test]
    fn op_count_tracks_inexact_ops() {
        let c = ctx(64);
        let third = c.from_rational(&ratio(1, 3));
        let before = c.op_count();
        let _ = c.mul(&third, &third).unwrap();
        let _ = c.div(&third, &c.from_int(7)).unwrap();
        assert_eq!(c.op_count(), before + 2);
        let _ = &third + &third;
        assert_eq!(c.op_count(), before + 2);
    }

    #[test]
    fn inv_pow_examples() {
        assert_eq!(ctx(3).inv_pow(2, 3).unwrap().to_rational(), ratio(1, 8));
        assert_eq!(ctx(16).inv_pow(3, 2).unwrap().mantissa, BigInt::from(7281));
        assert_eq!(ctx(8).inv_pow(10, 1).unwrap().mantissa, BigInt::from(25));
        assert!(ctx(8).inv_pow(1, 1).is_err());
    }

    #[test]
    fn log2_against_rational_series_and_digits() {
        let c = ctx(64);
        let ln2 = c.log2();
        assert!(ln2.err_ulps <= 2);
        assert!(ln2.value.to_decimal(15).starts_with("0.693147180559945"));
        // Oracle: 60 terms of the same series in exact rationals.
        let (lo, hi) = log2_rational_enclosure(60);
        let v = ln2.value.to_rational();
        let e = ln2.error_bound();
        assert!(&v - &e <= hi && &v + &e >= lo);
        let wide = ctx(110).log2();
        assert_eq!(wide.value.to_decimal(30), LN2_30);
    }

    #[test]
    fn log2_refines_consistently() {
        for f in [64u32, 128, 200] {
            let coarse = ctx(f).log2().value;
            let fine = ctx(2 * f).log2().value.rescale(f);
            let diff = (coarse.mantissa() - fine.mantissa()).abs();
            assert!(diff <= BigInt::from(8), "F={f}: {diff}");
        }
    }

    #[test]
    fn log2_enclosure_is_tight() {
        let (lo, hi) = log2_rational_enclosure(45);
        let width = hi.recip() - lo.recip();
        assert!(width.abs() < Rational::new(BigInt::one(), BigInt::from(10).pow(40)));
        assert!(inv_log2_upper() > &lo.recip());
    }

    #[test]
    fn exp_small_examples() {
        let c = ctx(64);
        let one = c.exp_small(&c.zero()).unwrap();
        assert_eq!(one.value, c.one());

        // Oracle: sum_{k<=25} 1/k! exactly, with tail below 1/25!.
        let mut e = Rational::zero();
        let mut fact = BigInt::one();
        for k in 0..=25u32 {
            if k > 0 {
                fact *= k;
            }
            e += Rational::new(BigInt::one(), fact.clone());
        }
        let got = c.exp_small(&c.one()).unwrap();
        assert!(got.value.to_decimal(15).starts_with("2.718281828459045"));
        let diff = (got.value.to_rational() - &e).abs();
        assert!(diff <= got.error_bound() + ratio(1, 1) / Rational::from_integer(fact));

        let half = c.from_rational(&ratio(1, 2));
        let p = c.exp_small(&half).unwrap();
        let m = c.exp_small(&-half).unwrap();
        let prod = c.mul_enclosed(&p, &m).unwrap();
        assert!(prod.contains(&Rational::one()));

        assert!(c.exp_small(&c.from_int(2)).is_err());
    }

    #[test]
    fn exp_of_log2_is_two() {
        let c = ctx(128);
        let ln2 = c.log2();
        let two = c.exp_small(&ln2.value).unwrap();
        // e^x has slope <= 2 here.
        let budget = two.err_ulps + 2 * ln2.err_ulps;
        let diff = (two.value.to_rational() - Rational::from_integer(BigInt::from(2))).abs();
        assert!(diff <= ulps_to_rational(budget, 128));
    }

    #[test]
    fn pow2_real_examples() {
        let c = ctx(96);
        let two = c.pow2_real(&ratio(1, 1)).unwrap();
        assert!(two.contains(&ratio(2, 1)));
        let four = c.pow2_real(&ratio(2, 1)).unwrap();
        assert!(four.contains(&ratio(4, 1)));
        assert!(c.pow2_real(&ratio(5, 2)).is_err());

        // Oracle: 2^h = sum (h ln2)^k / k!, h = 2^-30, with ln 2 from the
        // rational enclosure; terms beyond k = 4 are below 1e-40.
        let h = Rational::new(BigInt::one(), BigInt::one() << 30usize);
        let (lo, _) = log2_rational_enclosure(40);
        let x = &h * &lo;
        let mut sum = Rational::zero();
        let mut term = Rational::one();
        for k in 0..6u32 {
            if k > 0 {
                term = term * &x / Rational::from_integer(BigInt::from(k));
            }
            sum += &term;
        }
        let oracle = sum * Rational::from_integer(BigInt::from(2));
        let got = c.pow2_real(&(Rational::one() + h)).unwrap();
        let diff = (got.value.to_rational() - oracle).abs();
        assert!(diff < ratio(1, 1_000_000_000_000_000));
    }

    #[test]
    fn decimal_truncates() {
        let c = ctx(64);
        assert_eq!(c.from_rational(&ratio(1, 3)).to_decimal(3), "0.333");
        assert_eq!(c.from_rational(&ratio(2, 3)).to_decimal(3), "0.666");
        assert_eq!(c.from_int(2).to_decimal(2), "2.00");
        assert_eq!(c.from_rational(&ratio(-1, 3)).to_decimal(4), "-0.3333");
        assert_eq!(c.from_rational(&ratio(1, 1000)).to_decimal(5), "0.00099");
        assert_eq!(c.from_int(7).to_decimal(0), "7");
    }

    #[test]
    fn float_views() {
        let q = ratio(3, 7);
        assert!((rational_to_f64(&q) - 3.0 / 7.0).abs() < 1e-15);
        let tiny = Rational::new(BigInt::one(), BigInt::from(10).pow(400));
        assert!((rational_log10(&tiny) + 400.0).abs() < 1e-9);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-1_000_000i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| ratio(n, d))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn mul_and_div_lose_under_one_ulp(a in arb_rational(), b in arb_rational()) {
                let c = ctx(64);
                let (fa, fb) = (c.from_rational(&a), c.from_rational(&b));
                let (ra, rb) = (fa.to_rational(), fb.to_rational());
                let ulp = ulps_to_rational(1, 64);
                let p = c.mul(&fa, &fb).unwrap().to_rational();
                prop_assert!((p - &ra * &rb).abs() < ulp);
                if !rb.is_zero() {
                    let q = c.div(&fa, &fb).unwrap().to_rational();
                    prop_assert!((q - &ra / &rb).abs() < ulp);
                }
            }

            #[test]
            fn decimal_never_exceeds_value(a in arb_rational(), digits in 0usize..30) {
                let x = ctx(80).from_rational(&a);
                let s = x.to_decimal(digits);
                let parsed = parse_decimal(&s);
                let v = x.to_rational();
                prop_assert!(parsed.abs() <= v.abs());
                let step = Rational::new(BigInt::one(), BigInt::from(10).pow(digits as u32));
                prop_assert!((v - parsed).abs() < step);
            }

            #[test]
            fn deterministic_mantissas(a in arb_rational()) {
                let x = ctx(100).from_rational(&a);
                let y = ctx(100).from_rational(&a);
                prop_assert_eq!(ctx(100).mul(&x, &x).unwrap(), ctx(100).mul(&y, &y).unwrap());
            }
        }

        fn parse_decimal(s: &str) -> Rational {
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, s),
            };
            let (int, frac) = body.split_once('.').unwrap_or((body, ""));
            let digits: BigInt = format!("{int}{frac}").parse().unwrap();
            let q = Rational::new(digits, BigInt::from(10).pow(frac.len() as u32));
            if neg {
                -q
            } else {
                q
            }
        }
    }
}
