//! Published digits of Euler's constant used for verification.

use num_bigint::BigInt;

use crate::exact::Rational;

/// γ truncated to 27 fractional digits.
pub const REFERENCE_DIGITS: &str = "0.577215664901532860606512090";

/// Number of fractional digits in [`REFERENCE_DIGITS`].
pub const REFERENCE_FRAC_DIGITS: usize = 27;

/// The reference prefix as an exact rational `r`; γ lies in `[r, r + 10^-27)`.
pub fn reference_prefix() -> Rational {
    let digits = REFERENCE_DIGITS.trim_start_matches("0.");
    Rational::new(
        digits
            .parse::<BigInt>()
            .expect("reference digits are decimal"),
        BigInt::from(10).pow(REFERENCE_FRAC_DIGITS as u32),
    )
}

/// Width of the interval pinned down by the reference digits.
pub fn reference_ulp() -> Rational {
    Rational::new(
        BigInt::from(1),
        BigInt::from(10).pow(REFERENCE_FRAC_DIGITS as u32),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_round_trips() {
        let r = reference_prefix();
        let scaled = r * Rational::from_integer(BigInt::from(10).pow(27));
        assert!(scaled.is_integer());
        assert_eq!(
            scaled.to_integer(),
            "577215664901532860606512090".parse::<BigInt>().unwrap()
        );
        assert_eq!(REFERENCE_DIGITS.len(), 2 + REFERENCE_FRAC_DIGITS);
    }
}
