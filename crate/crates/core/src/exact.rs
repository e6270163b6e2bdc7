//! Exact integer and rational machinery.
//!
//! Everything here is computed without rounding. Rationals are always in
//! canonical form (positive denominator, coprime parts), which is what
//! `num_rational::BigRational` maintains after every operation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact fraction of arbitrary-precision integers, always reduced.
pub type Rational = num_rational::BigRational;

/// Builds the rational `num/den` from machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^k` as a big unsigned integer.
pub(crate) fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// One row of Pascal's triangle, `C(n, 0..=n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PascalRow {
    index: usize,
    entries: Vec<BigUint>,
}

impl PascalRow {
    /// Row 0, i.e. `[1]`.
    pub fn first() -> Self {
        PascalRow {
            index: 0,
            entries: vec![BigUint::one()],
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// `C(n, k)`, zero outside `0..=n`.
    pub fn get(&self, k: i64) -> BigUint {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.entries.get(k))
            .cloned()
            .unwrap_or_default()
    }

    /// The following row, built by pairwise addition.
    pub fn next(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() + 1);
        entries.push(BigUint::one());
        entries.extend(self.entries.windows(2).map(|w| &w[0] + &w[1]));
        entries.push(BigUint::one());
        PascalRow {
            index: self.index + 1,
            entries,
        }
    }

    /// Advances in place to the following row.
    pub fn advance(&mut self) {
        *self = self.next();
    }
}

/// Cache of Pascal rows indexed by `n`, extended additively on demand.
#[derive(Debug, Clone)]
pub struct PascalCache {
    rows: Vec<PascalRow>,
}

impl Default for PascalCache {
    fn default() -> Self {
        PascalCache {
            rows: vec![PascalRow::first()],
        }
    }
}

impl PascalCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&mut self, n: usize) -> &PascalRow {
        while self.rows.len() <= n {
            let next = self.rows.last().expect("row 0 always present").next();
            self.rows.push(next);
        }
        &self.rows[n]
    }

    pub fn binomial(&mut self, n: usize, k: i64) -> BigUint {
        self.row(n).get(k)
    }
}

/// `C(n, k)`; zero when `k < 0` or `k > n`.
///
/// Walks Pascal's triangle one row at a time, keeping only the current row.
/// Use [`PascalCache`] when many coefficients are needed.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let mut row = PascalRow::first();
    while (row.index() as u64) < n {
        row.advance();
    }
    row.get(k)
}

/// Exact harmonic number `H_n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> Rational {
    // Summing over a common denominator avoids one gcd per term.
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for j in 1..=n {
        let j = BigUint::from(j);
        num = num * &j + &den;
        den *= j;
    }
    Rational::new(num.into(), den.into())
}

/// Memoized exact values of `e_0, e_1, ...`.
///
/// `e_0 = 0` and, for `m >= 1`,
/// `(2^{m+1} - 2) e_m = 2^{m+1} + sum_{j=1..m} C(m+1, j) e_{m-j}`.
///
/// Alongside the canonical rationals the table keeps every entry scaled to
/// a common denominator (the lcm of all denominators so far), so that each
/// new entry costs `m` big-times-small integer products and one gcd instead
/// of `m` rational additions.
#[derive(Debug, Clone)]
pub struct EmTable {
    values: Vec<Rational>,
    scaled: Vec<BigUint>,
    common_den: BigUint,
    // Row `computed_up_to() + 1`, the one the next entry needs.
    row: PascalRow,
}

impl Default for EmTable {
    fn default() -> Self {
        EmTable {
            values: vec![Rational::zero()],
            scaled: vec![BigUint::zero()],
            common_den: BigUint::one(),
            row: PascalRow::first().next(),
        }
    }
}

impl EmTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Largest index currently stored.
    pub fn computed_up_to(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Extends the table so that `e_m` is available.
    pub fn extend_to(&mut self, m: usize) {
        while self.computed_up_to() < m {
            self.push_next();
        }
    }

    /// `e_m`, extending the table as needed.
    pub fn get(&mut self, m: usize) -> &Rational {
        self.extend_to(m);
        &self.values[m]
    }

    fn push_next(&mut self) {
        let m = self.values.len();
        self.row.advance();
        debug_assert_eq!(self.row.index(), m + 1);

        let mut sum = BigUint::zero();
        for j in 1..=m {
            sum += &self.row.entries()[j] * &self.scaled[m - j];
        }
        let two_pow = pow2(m + 1);
        let num = &two_pow * &self.common_den + sum;
        let den = &self.common_den * (two_pow - 2u32);
        let g = num.gcd(&den);
        let (num, den) = (num / &g, den / &g);

        let lcm = self.common_den.lcm(&den);
        let grow = &lcm / &self.common_den;
        if !grow.is_one() {
            for s in &mut self.scaled {
                *s *= &grow;
            }
        }
        self.scaled.push(&num * (&lcm / &den));
        self.common_den = lcm;
        self.values
            .push(Rational::new_raw(BigInt::from(num), BigInt::from(den)));
    }
}

/// Exact `e_m`, extending `table` as needed.
pub fn e_exact(m: usize, table: &mut EmTable) -> Rational {
    table.get(m).clone()
}

/// Memoized exact values of `c_m(s)` for one integer `s >= 1`.
///
/// `c_0(s) = 1` and, for `m >= 1`,
/// `(2^{m+s} - 2) c_m(s) = sum_{j=1..m} C(m, j) c_{m-j}(s)`.
#[derive(Debug, Clone)]
pub struct CmTable {
    s: u32,
    values: Vec<Rational>,
    // Row `computed_up_to()`.
    row: PascalRow,
}

impl CmTable {
    pub fn new(s: i64) -> Result<Self> {
        let s = u32::try_from(s)
            .ok()
            .filter(|&s| s >= 1)
            .ok_or_else(|| Error::domain("s", format!("need s >= 1, got {s}")))?;
        Ok(CmTable {
            s,
            values: vec![Rational::one()],
            row: PascalRow::first(),
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn computed_up_to(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn extend_to(&mut self, m: usize) {
        while self.computed_up_to() < m {
            let m = self.values.len();
            self.row.advance();
            let mut sum = Rational::zero();
            for j in 1..=m {
                let coeff = BigInt::from(self.row.entries()[j].clone());
                sum += &self.values[m - j] * coeff;
            }
            let den = BigInt::from(pow2(m + self.s as usize)) - 2;
            self.values.push(sum / den);
        }
    }

    pub fn get(&mut self, m: usize) -> &Rational {
        self.extend_to(m);
        &self.values[m]
    }
}

/// Exact `c_m(s)`; `table` must have been created for the same `s`.
pub fn c_exact(s: i64, m: usize, table: &mut CmTable) -> Result<Rational> {
    if s < 1 {
        return Err(Error::domain("s", format!("need s >= 1, got {s}")));
    }
    if i64::from(table.s()) != s {
        return Err(Error::domain(
            "table",
            format!("table holds c_m({}), asked for c_m({s})", table.s()),
        ));
    }
    Ok(table.get(m).clone())
}

/// `(s)_m / m! = C(s + m - 1, m)` for integer `s >= 1`.
pub fn pochhammer_ratio(s: i64, m: u64) -> Result<Rational> {
    if s < 1 {
        return Err(Error::domain("s", format!("need s >= 1, got {s}")));
    }
    let top = s as u64 + m - 1;
    Ok(Rational::from_integer(binomial(top, m as i64).into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(5, 6), BigUint::zero());
    }

    #[test]
    fn binomial_twelve_five_by_row_addition() {
        // Oracle: rows 0..=12 built independently with u64 addition.
        let mut row = vec![1u64];
        for _ in 0..12 {
            let mut next = vec![1u64];
            next.extend(row.windows(2).map(|w| w[0] + w[1]));
            next.push(1);
            row = next;
        }
        assert_eq!(row[5], 792);
        assert_eq!(binomial(12, 5), BigUint::from(792u32));
    }

    #[test]
    fn pascal_symmetry_up_to_64() {
        let mut cache = PascalCache::new();
        for n in 0..=64usize {
            let row = cache.row(n).clone();
            assert_eq!(row.get(0), BigUint::one());
            assert_eq!(row.get(n as i64), BigUint::one());
            for k in 0..=n as i64 {
                assert_eq!(row.get(k), row.get(n as i64 - k));
            }
        }
        assert_eq!(cache.binomial(64, 32).to_string(), "1832624140942590534");
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), int(0));
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(4), ratio(25, 12));
        let direct = (1..=30).fold(Rational::zero(), |acc, j| acc + ratio(1, j));
        assert_eq!(harmonic(30), direct);
    }

    #[test]
    fn first_coefficients_by_hand() {
        let mut t = EmTable::new();
        assert_eq!(e_exact(0, &mut t), int(0));
        assert_eq!(e_exact(1, &mut t), int(2));
        assert_eq!(e_exact(2, &mut t), ratio(7, 3));
        assert_eq!(e_exact(3, &mut t), ratio(8, 3));
        assert_eq!(e_exact(4, &mut t), ratio(133, 45));
        assert_eq!(e_exact(5, &mut t), ratio(16, 5));
        assert_eq!(e_exact(10, &mut t), ratio(163287, 40579));
    }

    #[test]
    fn table_matches_naive_rational_recurrence() {
        // Oracle: the recurrence evaluated directly with reduced rationals.
        let mut naive = vec![Rational::zero()];
        for m in 1..=40usize {
            let mut s = Rational::from_integer(BigInt::from(pow2(m + 1)));
            for j in 1..=m {
                s += &naive[m - j] * BigInt::from(binomial(m as u64 + 1, j as i64));
            }
            naive.push(s / (BigInt::from(pow2(m + 1)) - 2));
        }
        let mut t = EmTable::new();
        t.extend_to(40);
        assert_eq!(t.values(), &naive[..]);
    }

    #[test]
    fn em_table_extends_monotonically() {
        let mut t = EmTable::new();
        assert_eq!(t.computed_up_to(), 0);
        t.extend_to(7);
        let prefix = t.values().to_vec();
        t.extend_to(12);
        assert_eq!(&t.values()[..8], &prefix[..]);
        t.extend_to(3);
        assert_eq!(t.computed_up_to(), 12);
    }

    #[test]
    fn c_at_one_is_reciprocal() {
        let mut t = CmTable::new(1).unwrap();
        for m in 0..=2usize {
            assert_eq!(c_exact(1, m, &mut t).unwrap(), ratio(1, m as i64 + 1));
        }
    }

    #[test]
    fn c_at_two_by_hand() {
        let mut t = CmTable::new(2).unwrap();
        assert_eq!(c_exact(2, 0, &mut t).unwrap(), int(1));
        assert_eq!(c_exact(2, 1, &mut t).unwrap(), ratio(1, 6));
        assert_eq!(c_exact(2, 2, &mut t).unwrap(), ratio(2, 21));
    }

    #[test]
    fn c_rejects_nonpositive_s() {
        assert!(CmTable::new(0).is_err());
        assert!(CmTable::new(-3).is_err());
        let mut t = CmTable::new(2).unwrap();
        assert!(c_exact(0, 1, &mut t).is_err());
        assert!(c_exact(3, 1, &mut t).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        for m in 0..6 {
            assert_eq!(pochhammer_ratio(1, m).unwrap(), int(1));
        }
        assert_eq!(pochhammer_ratio(2, 3).unwrap(), int(4));
        assert_eq!(pochhammer_ratio(3, 2).unwrap(), int(6));
        assert_eq!(pochhammer_ratio(4, 0).unwrap(), int(1));
        assert!(pochhammer_ratio(0, 2).is_err());
    }
}
