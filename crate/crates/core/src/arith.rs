//! Exact combinatorial primitives over `BigInt`.
//!
//! Factorials, Pascal rows and the unsigned Stirling triangle of the first
//! kind are memoized in a process-wide cache that grows on demand. Rows are
//! never modified after they are pushed, so concurrent readers only ever see
//! complete rows.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use num_bigint::BigInt as Integer;
pub use num_rational::BigRational as Rational;

/// Memo tables for factorials, binomials and unsigned Stirling numbers of the
/// first kind.
#[derive(Debug, Default)]
pub struct CombinatoricsCache {
    factorials: RwLock<Vec<BigInt>>,
    pascal: RwLock<Vec<Vec<BigInt>>>,
    stirling: RwLock<Vec<Vec<BigInt>>>,
}

impl CombinatoricsCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shared process-wide cache.
    pub fn global() -> &'static CombinatoricsCache {
        static CACHE: OnceLock<CombinatoricsCache> = OnceLock::new();
        CACHE.get_or_init(CombinatoricsCache::new)
    }

    pub fn factorial(&self, n: usize) -> BigInt {
        if let Some(v) = self.factorials.read().unwrap().get(n) {
            return v.clone();
        }
        let mut table = self.factorials.write().unwrap();
        if table.is_empty() {
            table.push(BigInt::one());
        }
        while table.len() <= n {
            let k = table.len();
            let next = &table[k - 1] * BigInt::from(k);
            table.push(next);
        }
        table[n].clone()
    }

    pub fn binomial(&self, n: usize, k: i64) -> BigInt {
        if k < 0 || k as u64 > n as u64 {
            return BigInt::zero();
        }
        let k = k as usize;
        if let Some(row) = self.pascal.read().unwrap().get(n) {
            return row[k].clone();
        }
        let mut rows = self.pascal.write().unwrap();
        if rows.is_empty() {
            rows.push(vec![BigInt::one()]);
        }
        while rows.len() <= n {
            let prev = rows.last().unwrap();
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(BigInt::one());
            for w in prev.windows(2) {
                row.push(&w[0] + &w[1]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        rows[n][k].clone()
    }

    /// Unsigned Stirling number of the first kind, `[k n]`.
    pub fn stirling1(&self, k: usize, n: i64) -> BigInt {
        if n < 0 || n as u64 > k as u64 {
            return BigInt::zero();
        }
        let n = n as usize;
        if let Some(row) = self.stirling.read().unwrap().get(k) {
            return row[n].clone();
        }
        let mut rows = self.stirling.write().unwrap();
        if rows.is_empty() {
            rows.push(vec![BigInt::one()]);
        }
        // [k+1 n] = [k n-1] + k [k n]
        while rows.len() <= k {
            let kk = rows.len() - 1;
            let prev = &rows[kk];
            let mult = BigInt::from(kk);
            let mut row = vec![BigInt::zero(); kk + 2];
            for (j, slot) in row.iter_mut().enumerate() {
                let mut v = BigInt::zero();
                if j >= 1 {
                    v += &prev[j - 1];
                }
                if j <= kk {
                    v += &prev[j] * &mult;
                }
                *slot = v;
            }
            rows.push(row);
        }
        rows[k][n].clone()
    }
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: i64) -> BigInt {
    CombinatoricsCache::global().binomial(n, k)
}

/// Unsigned Stirling number of the first kind: the number of permutations of
/// `k` elements with exactly `n` cycles.
pub fn stirling1_unsigned(k: usize, n: i64) -> BigInt {
    CombinatoricsCache::global().stirling1(k, n)
}

pub fn factorial(n: usize) -> BigInt {
    CombinatoricsCache::global().factorial(n)
}

/// `x (x+1) ... (x+m-1)`.
pub fn rising_factorial(x: &BigInt, m: usize) -> BigInt {
    (0..m).fold(BigInt::one(), |acc, i| acc * (x + BigInt::from(i)))
}

/// `x (x-1) ... (x-m+1)`.
pub fn falling_factorial(x: &BigInt, m: usize) -> BigInt {
    (0..m).fold(BigInt::one(), |acc, i| acc * (x - BigInt::from(i)))
}

/// `0! 1! ... s!`
pub fn superfactorial(s: usize) -> BigInt {
    (0..=s).map(factorial).product()
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
