//! Number formatting shared by the commands.

use dyadic_gamma::fixed::rational_log10;
use dyadic_gamma::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    /// Away from zero, so the printed magnitude is an upper bound.
    Up,
}

fn pow10(k: i64) -> Rational {
    let p = Rational::from_integer(BigInt::from(10).pow(k.unsigned_abs() as u32));
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

/// `q` in scientific notation with `sig` significant digits, e.g. `1.3e-103`.
pub fn sci(q: &Rational, sig: usize, mode: Rounding) -> String {
    assert!(sig >= 1);
    if q.is_zero() {
        return "0".to_string();
    }
    let mag = q.abs();
    let lo = pow10(sig as i64 - 1);
    let hi = pow10(sig as i64);
    // 10^(sig-1) <= |q| 10^shift < 10^sig
    let mut shift = sig as i64 - 1 - rational_log10(&mag).floor() as i64;
    let mut scaled = &mag * pow10(shift);
    while scaled < lo {
        shift += 1;
        scaled = &mag * pow10(shift);
    }
    while scaled >= hi {
        shift -= 1;
        scaled = &mag * pow10(shift);
    }
    let mut digits = match mode {
        Rounding::Up => scaled.ceil().to_integer(),
        Rounding::Nearest => scaled.round().to_integer(),
    };
    if Rational::from_integer(digits.clone()) >= hi {
        digits /= 10;
        shift -= 1;
    }
    let s = digits.to_string();
    let exp = sig as i64 - 1 - shift;
    let sign = if q.is_negative() { "-" } else { "" };
    if sig == 1 {
        format!("{sign}{s}e{exp}")
    } else {
        format!("{sign}{}.{}e{exp}", &s[..1], &s[1..])
    }
}

/// `x.yz \times 10^{k}` for LaTeX output.
pub fn sci_latex(q: &Rational, sig: usize, mode: Rounding) -> String {
    let s = sci(q, sig, mode);
    match s.split_once('e') {
        Some((m, e)) => format!("{m}\\times10^{{{e}}}"),
        None => s,
    }
}

/// `p/q`, or just `p` for integers.
pub fn fraction(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn fraction_latex(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        let sign = if q.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom())
    }
}
