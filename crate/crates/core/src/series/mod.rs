//! The level-ℓ series for γ and everything built around it.
//!
//! For a level `ℓ >= 2`,
//!
//! ```text
//! γ = H_{2^{ℓ-1}-1} - (ℓ-1) ln 2
//!     + sum_{m>=1} (-1)^{m-1} e_m/(m+1) * sum_{2^{ℓ-1} <= n < 2^ℓ} n^{-(m+1)}
//! ```
//!
//! The inner dyadic block sum shrinks like `2^{-(ℓ-1)m}`, so every term buys
//! roughly `ℓ-1` bits.

mod blocks;
mod delta;
mod em_track;
mod eta;
mod gamma;
mod oracle;
mod plan;
mod verify;

pub use blocks::block_power_sum;
pub use delta::{delta, delta_range, DeltaRecord};
pub use em_track::{em_enclosures, em_fixed, EXACT_TRACK_CAP};
pub use eta::{eta_level_series, EtaApproximation};
pub use gamma::{gamma_series, GammaApproximation};
pub use oracle::em_derivative_oracle;
pub use plan::{
    auto_level, guard_frac_bits, plan_for_digits, tail_bound, SeriesPlan, DEFAULT_COST_EXPONENT,
    MAX_AUTO_LEVEL, MIN_LEVEL, MIN_PLAN_FRAC_BITS,
};
pub use verify::{
    cross_level_agreement, derivative_oracle_check, eta_log2_check, inv_log2_interval,
    verify_bounds, BoundCheck, BoundsReport, CrossLevelCheck, EtaCheck, OracleCheck,
};

use crate::error::{Error, Result};

pub(crate) fn check_level(level: u32) -> Result<()> {
    if level < MIN_LEVEL {
        return Err(Error::LevelTooSmall(level));
    }
    Ok(())
}

/// First and one-past-last integers of the level-`level` dyadic block.
pub(crate) fn block_range(level: u32) -> std::ops::Range<u64> {
    (1u64 << (level - 1))..(1u64 << level)
}
