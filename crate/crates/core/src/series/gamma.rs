use num_bigint::BigInt;
use rayon::prelude::*;

use super::em_track::{em_enclosures, EXACT_TRACK_CAP};
use super::{block_power_sum, check_level, SeriesPlan};
use crate::error::Result;
use crate::exact::{harmonic, EmTable, Rational};
use crate::fixed::{ulps_to_rational, Enclosure, FixedPoint, PrecisionCtx};

/// A value of γ with a rigorous bound on its distance to γ.
#[derive(Debug, Clone)]
pub struct GammaApproximation {
    pub value: FixedPoint,
    /// `tail_bound + rounding`, so `|value - γ| <= total_error_bound`.
    pub total_error_bound: Rational,
    /// Accumulated truncation error, in ulps of `plan.frac_bits`.
    pub rounding_ulps: u64,
    pub plan: SeriesPlan,
    pub terms_used: usize,
    /// The last summand included, with its sign; `None` when no terms were used.
    pub last_term: Option<FixedPoint>,
}

impl GammaApproximation {
    /// Truncated decimal digits that hold for every point of the enclosure,
    /// i.e. for γ itself. Returns `None` if the enclosure straddles a
    /// truncation boundary at `digits` places.
    pub fn certified_digits(&self, digits: usize) -> Option<String> {
        let f = self.value.frac_bits();
        let ulp = ulps_to_rational(1, f);
        let slack = (&self.total_error_bound / ulp).ceil().to_integer();
        let lo = self.value.offset_ulps(&-slack.clone()).to_decimal(digits);
        let hi = self.value.offset_ulps(&slack).to_decimal(digits);
        (lo == hi).then_some(lo)
    }
}

/// Evaluates the level-ℓ series with `plan.terms` terms.
///
/// Summands are computed independently (in parallel) and folded in
/// ascending `m`, so the result is bit-identical for any thread count.
pub fn gamma_series(plan: &SeriesPlan) -> Result<GammaApproximation> {
    check_level(plan.level)?;
    let ctx = PrecisionCtx::new(plan.frac_bits)?;
    let level = plan.level;
    let terms = plan.terms;

    let head = harmonic((1u64 << (level - 1)) - 1);
    let head = ctx.from_rational_enclosed(&head);
    let ln2 = ctx.log2();
    let mult = BigInt::from(level - 1);
    let log_part = ln2.value.mul_int(&mult);

    let mut table = EmTable::new();
    let em = em_enclosures(terms, EXACT_TRACK_CAP, &mut table, &ctx);

    let blocks: Vec<Enclosure> = (1..=terms)
        .into_par_iter()
        .map(|m| block_power_sum(level, m as u32 + 1, &ctx))
        .collect::<Result<_>>()?;

    let summands: Vec<Enclosure> = (1..=terms)
        .into_par_iter()
        .map(|m| {
            let prod = ctx.mul_enclosed(&em[m], &blocks[m - 1])?;
            ctx.div_int_enclosed(&prod, m as u64 + 1)
        })
        .collect::<Result<_>>()?;

    let mut value = &head.value - &log_part;
    let mut rounding = head.err_ulps + ln2.err_ulps * u64::from(level - 1);
    let mut last_term = None;
    for (i, s) in summands.into_iter().enumerate() {
        let m = i + 1;
        let t = if m % 2 == 1 { s.value } else { -s.value };
        value = &value + &t;
        rounding = rounding.saturating_add(s.err_ulps);
        if m % 100 == 0 {
            log::debug!("gamma level {level}: folded {m}/{terms} terms");
        }
        last_term = Some(t);
    }

    let total_error_bound = &plan.tail_bound + ulps_to_rational(rounding, plan.frac_bits);
    Ok(GammaApproximation {
        value,
        total_error_bound,
        rounding_ulps: rounding,
        plan: plan.clone(),
        terms_used: terms,
        last_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{reference_prefix, reference_ulp, REFERENCE_DIGITS};
    use crate::series::plan_for_digits;

    #[test]
    fn empty_series_is_one_minus_log2() {
        let plan = SeriesPlan::for_terms(2, 0, 6).unwrap();
        let g = gamma_series(&plan).unwrap();
        assert_eq!(g.value.to_decimal(6), "0.306852");
        assert!(g.last_term.is_none());
    }

    #[test]
    fn one_term_at_level_two() {
        let plan = SeriesPlan::for_terms(2, 1, 6).unwrap();
        let g = gamma_series(&plan).unwrap();
        // 0.6679639305...
        assert_eq!(g.value.to_decimal(6), "0.667963");
        assert_eq!(g.last_term.unwrap().to_decimal(6), "0.361111");
    }

    #[test]
    fn reference_digits_at_every_level() {
        for level in 2..=7 {
            let plan = plan_for_digits(27, level).unwrap();
            let g = gamma_series(&plan).unwrap();
            assert_eq!(g.value.to_decimal(27), REFERENCE_DIGITS, "level {level}");
            assert_eq!(g.certified_digits(27).as_deref(), Some(REFERENCE_DIGITS));
            assert!(g.rounding_ulps <= super::super::plan::rounding_budget_ulps(level, plan.terms));
        }
    }

    #[test]
    fn hundred_digits_at_level_four() {
        let plan = plan_for_digits(100, 4).unwrap();
        let g = gamma_series(&plan).unwrap();
        assert!(g
            .value
            .to_decimal(100)
            .starts_with("0.577215664901532860606512090"));
        let r = reference_prefix();
        let v = g.value.to_rational();
        assert!(&v - &g.total_error_bound <= &r + reference_ulp());
        assert!(&v + &g.total_error_bound >= r);
    }

    #[test]
    fn rejects_level_one() {
        let mut plan = SeriesPlan::for_terms(2, 3, 10).unwrap();
        plan.level = 1;
        assert!(gamma_series(&plan).is_err());
    }
}
