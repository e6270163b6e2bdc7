//! Checks that tie the implementation back to known properties of `e_m`,
//! the γ series and the η series.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{em_derivative_oracle, eta_level_series, gamma_series, plan_for_digits};
use crate::error::Result;
use crate::exact::{harmonic, EmTable, Rational};
use crate::fixed::{log2_rational_enclosure, rational_to_f64, PrecisionCtx};

/// Outcome of the bound checks for one index `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub m: usize,
    /// `(H_{m+1} - 1)/ln 2 <= e_m`
    pub lower_ok: bool,
    /// `e_m < H_{m+1}/ln 2 - 0.161`
    pub upper_ok: bool,
    /// `H_{m+1}/ln 2 - 0.35 < e_m < H_{m+1}/ln 2 - 0.31`, only for `m >= 2`.
    pub sharp_ok: Option<bool>,
    /// Smallest slack over the applicable inequalities (approximate).
    pub margin: f64,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.sharp_ok.unwrap_or(true)
    }
}

#[derive(Debug, Clone, Default)]
pub struct BoundsReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(BoundCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn min_margin(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Rational interval around `1/ln 2` of width below `10^-40`.
pub fn inv_log2_interval() -> (Rational, Rational) {
    let (lo, hi) = log2_rational_enclosure(45);
    (hi.recip(), lo.recip())
}

/// Checks both two-sided bounds on `e_m` for `m_lo..=m_hi`.
///
/// `e_m` and `H_{m+1}` are exact; `1/ln 2` enters only through
/// [`inv_log2_interval`], and each inequality is judged with the endpoint
/// that makes it hardest to satisfy, so a pass is never spurious.
pub fn verify_bounds(m_lo: usize, m_hi: usize, table: &mut EmTable) -> Result<BoundsReport> {
    let (inv_lo, inv_hi) = inv_log2_interval();
    let c161 = Rational::new(161.into(), 1000.into());
    let c35 = Rational::new(35.into(), 100.into());
    let c31 = Rational::new(31.into(), 100.into());
    table.extend_to(m_hi);

    let mut checks = Vec::with_capacity(m_hi.saturating_sub(m_lo) + 1);
    let mut h = harmonic(m_lo as u64 + 1);
    for m in m_lo..=m_hi {
        if m > m_lo {
            h += Rational::new(BigInt::one(), BigInt::from(m + 1));
        }
        let e = &table.values()[m];
        let h_lo = &h * &inv_lo;
        let h_hi = &h * &inv_hi;

        let lower_slack = e - (&h - Rational::one()) * &inv_hi;
        let upper_slack = &h_lo - &c161 - e;
        let mut margins = vec![lower_slack.clone(), upper_slack.clone()];
        let lower_ok = lower_slack >= Rational::from_integer(0.into());
        let upper_ok = upper_slack > Rational::from_integer(0.into());

        let sharp_ok = (m >= 2).then(|| {
            let below = e - (&h_hi - &c35);
            let above = &h_lo - &c31 - e;
            let ok = below > Rational::from_integer(0.into())
                && above > Rational::from_integer(0.into());
            margins.push(below);
            margins.push(above);
            ok
        });

        let margin = margins
            .iter()
            .map(rational_to_f64)
            .fold(f64::INFINITY, f64::min);
        checks.push(BoundCheck {
            m,
            lower_ok,
            upper_ok,
            sharp_ok,
            margin,
        });
    }
    Ok(BoundsReport { checks })
}

/// Derivative-oracle comparison for one `m`.
#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub m: usize,
    pub deviation: f64,
}

/// Compares [`em_derivative_oracle`] with the exact `e_m` for `1..=m_max`,
/// with `h = 2^-20` at 192 fractional bits.
pub fn derivative_oracle_check(m_max: usize, table: &mut EmTable) -> Result<Vec<OracleCheck>> {
    let ctx = PrecisionCtx::new(192)?;
    let h = Rational::new(BigInt::one(), BigInt::one() << 20usize);
    table.extend_to(m_max);
    (1..=m_max)
        .map(|m| {
            let approx = em_derivative_oracle(m, &h, &ctx)?;
            let deviation = rational_to_f64(&(approx.to_rational() - &table.values()[m])).abs();
            Ok(OracleCheck { m, deviation })
        })
        .collect()
}

/// Agreement of two γ evaluations at different levels.
#[derive(Debug, Clone)]
pub struct CrossLevelCheck {
    pub levels: (u32, u32),
    pub difference: Rational,
    pub allowed: Rational,
}

impl CrossLevelCheck {
    pub fn passed(&self) -> bool {
        self.difference <= self.allowed
    }
}

/// Evaluates γ to `digits` digits at each level in `levels` and checks
/// every pair against the sum of their error bounds.
pub fn cross_level_agreement(digits: usize, levels: &[u32]) -> Result<Vec<CrossLevelCheck>> {
    let evals = levels
        .iter()
        .map(|&l| gamma_series(&plan_for_digits(digits, l)?))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for (i, a) in evals.iter().enumerate() {
        for b in &evals[i + 1..] {
            out.push(CrossLevelCheck {
                levels: (a.plan.level, b.plan.level),
                difference: (a.value.to_rational() - b.value.to_rational()).abs(),
                allowed: &a.total_error_bound + &b.total_error_bound,
            });
        }
    }
    Ok(out)
}

/// `η(1)` from the level-ℓ series against the fixed-point `ln 2`.
#[derive(Debug, Clone)]
pub struct EtaCheck {
    pub level: u32,
    pub difference: Rational,
    pub allowed: Rational,
}

impl EtaCheck {
    pub fn passed(&self) -> bool {
        self.difference <= self.allowed
    }
}

pub fn eta_log2_check(levels: &[u32], terms: usize, frac_bits: u32) -> Result<Vec<EtaCheck>> {
    let ctx = PrecisionCtx::new(frac_bits)?;
    let ln2 = ctx.log2();
    levels
        .iter()
        .map(|&level| {
            let eta = eta_level_series(1, level, terms, &ctx)?;
            Ok(EtaCheck {
                level,
                difference: (eta.value.to_rational() - ln2.value.to_rational()).abs(),
                allowed: eta.total_error_bound() + ln2.error_bound(),
            })
        })
        .collect()
}
