use super::{block_range, check_level};
use crate::error::Result;
use crate::fixed::{Enclosure, PrecisionCtx};

/// `sum_{2^{ℓ-1} <= n < 2^ℓ} n^-k`, summed in ascending `n`.
///
/// Each reciprocal power loses under one ulp, so the recorded error is
/// the block length `2^{ℓ-1}`.
pub fn block_power_sum(level: u32, k: u32, ctx: &PrecisionCtx) -> Result<Enclosure> {
    check_level(level)?;
    let mut sum = ctx.zero();
    for n in block_range(level) {
        sum = &sum + &ctx.inv_pow(n, k)?;
    }
    Ok(Enclosure {
        value: sum,
        err_ulps: 1u64 << (level - 1),
    })
}
