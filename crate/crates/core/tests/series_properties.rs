use dyadic_gamma::exact::EmTable;
use dyadic_gamma::reference::{reference_prefix, reference_ulp};
use dyadic_gamma::series::{
    block_power_sum, em_fixed, gamma_series, plan_for_digits, EXACT_TRACK_CAP,
};
use dyadic_gamma::{PrecisionCtx, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[test]
fn fixed_track_agrees_with_exact_track_up_to_cap() {
    let ctx = PrecisionCtx::new(256).unwrap();
    let fixed = em_fixed(EXACT_TRACK_CAP, &ctx);
    let mut table = EmTable::new();
    table.extend_to(EXACT_TRACK_CAP);
    let mut prev_err = 0;
    for (m, (f, e)) in fixed.iter().zip(table.values()).enumerate() {
        assert!(f.contains(e), "m = {m}");
        // Errors grow by at most one ulp per step.
        assert!(f.err_ulps <= prev_err + 1, "m = {m}");
        prev_err = f.err_ulps;
    }
}

#[test]
fn summand_signs_alternate() {
    // Summand m is (-1)^{m-1} e_m/(m+1) times a block sum; both factors
    // are positive, so the sign is fixed by the parity of m.
    let mut table = EmTable::new();
    table.extend_to(200);
    assert!(table.values()[0].is_zero());
    for (m, e) in table.values().iter().enumerate().skip(1) {
        assert!(e.is_positive(), "e_{m}");
    }
    let ctx = PrecisionCtx::new(2048).unwrap();
    for level in 2..=4 {
        for m in 1..=200u32 {
            let b = block_power_sum(level, m + 1, &ctx).unwrap();
            let lo = b.value.to_rational() - b.error_bound();
            assert!(lo.is_positive(), "level {level}, m = {m}");
        }
    }
}

#[test]
fn result_is_independent_of_thread_count() {
    let plan = plan_for_digits(200, 3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| gamma_series(&plan).unwrap())
    };
    let one = run(1);
    let many = run(4);
    assert_eq!(one.value, many.value);
    assert_eq!(one.rounding_ulps, many.rounding_ulps);
}

#[test]
fn fixed_track_beyond_cap_stays_consistent() {
    // 700 terms at level 2 cross into the fixed-point coefficient track;
    // the enclosure still has to contain the reference interval.
    let plan = plan_for_digits(200, 2).unwrap();
    assert!(plan.terms > EXACT_TRACK_CAP);
    let g = gamma_series(&plan).unwrap();
    let dist = (g.value.to_rational() - reference_prefix()).abs();
    assert!(dist <= &g.total_error_bound + reference_ulp());
    assert!(g.total_error_bound < Rational::new(1.into(), BigInt::from(10).pow(201)));
}
