//! The lower-triangular integer matrices `A^s` entering the closed form of the
//! `Q`-series coefficients.
//!
//! Column zero is the Kronecker column `A_{m,0} = δ_{m,0}`; for `j >= 1`
//!
//! ```text
//! A_{m,j} = Σ_{μ=0}^{m-j} A_{m-μ-1, j-1} · C(m, μ+1) · (s-m+1)^(rising μ)
//! ```

use std::fmt;
use std::io::BufRead;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{binomial, factorial, falling_factorial, rising_factorial, superfactorial};
use crate::error::{Error, Result};

/// `A^s` stored as a jagged triangle: row `m` holds `A_{m,0..=m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMatrix {
    s: usize,
    rows: Vec<Vec<BigInt>>,
}

impl AMatrix {
    pub fn compute(s: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(s + 1);
        for m in 0..=s {
            let mut row = vec![BigInt::zero(); m + 1];
            if m == 0 {
                row[0] = BigInt::one();
            }
            // rising factorials (s-m+1)^(μ) for μ = 0..m-1
            let base = BigInt::from(s as i64 - m as i64 + 1);
            let rising: Vec<BigInt> = (0..m).map(|mu| rising_factorial(&base, mu)).collect();
            for j in 1..=m {
                let mut acc = BigInt::zero();
                for mu in 0..=(m - j) {
                    let prev = &rows[m - mu - 1];
                    let Some(a) = prev.get(j - 1) else { continue };
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * binomial(m, mu as i64 + 1) * &rising[mu];
                }
                row[j] = acc;
            }
            rows.push(row);
        }
        AMatrix { s, rows }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.s + 1
    }

    /// `A_{m,j}`; zero above the diagonal.
    pub fn get(&self, m: usize, j: usize) -> BigInt {
        self.rows
            .get(m)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn entry(&self, m: usize, j: usize) -> Option<&BigInt> {
        self.rows.get(m).and_then(|r| r.get(j))
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Rows padded with zeros to a square `(s+1) × (s+1)` matrix.
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(self.dim(), BigInt::zero());
                r
            })
            .collect()
    }

    /// Product of the diagonal.
    pub fn determinant(&self) -> BigInt {
        self.rows.iter().enumerate().map(|(m, r)| r[m].clone()).product()
    }

    pub fn last_row(&self) -> &[BigInt] {
        &self.rows[self.s]
    }

    pub fn check_special_values(&self) -> SpecialValueReport {
        let s = self.s;
        let mut report = SpecialValueReport {
            s,
            ..Default::default()
        };
        let s_minus_1 = BigInt::from(s as i64 - 1);
        for m in 0..=s {
            let delta = if m == 0 { BigInt::one() } else { BigInt::zero() };
            report.record(Identity::KroneckerColumn, m, 0, &delta, &self.get(m, 0));
            if m >= 1 {
                let expected = falling_factorial(&s_minus_1, m - 1);
                report.record(Identity::FallingFactorialColumn, m, 1, &expected, &self.get(m, 1));
            }
            report.record(Identity::FactorialDiagonal, m, m, &factorial(m), &self.get(m, m));
        }
        let det = self.determinant();
        let sf = superfactorial(s);
        report.determinant_ok = det == sf;
        report.determinant = det;
        report
    }
}

impl fmt::Display for AMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn compute_a_matrix(s: usize) -> AMatrix {
    AMatrix::compute(s)
}

pub fn a_determinant(a: &AMatrix) -> BigInt {
    a.determinant()
}

pub fn last_row(a: &AMatrix) -> Vec<BigInt> {
    a.last_row().to_vec()
}

pub fn check_special_values(a: &AMatrix) -> SpecialValueReport {
    a.check_special_values()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `A_{m,0} = δ_{m,0}`
    KroneckerColumn,
    /// `A_{m,1} = (s-1)^(falling m-1)`
    FallingFactorialColumn,
    /// `A_{m,m} = m!`
    FactorialDiagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialValueFailure {
    pub identity: Identity,
    pub m: usize,
    pub j: usize,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecialValueReport {
    pub s: usize,
    pub checked: usize,
    pub failures: Vec<SpecialValueFailure>,
    pub determinant: BigInt,
    pub determinant_ok: bool,
}

impl SpecialValueReport {
    fn record(&mut self, identity: Identity, m: usize, j: usize, expected: &BigInt, actual: &BigInt) {
        self.checked += 1;
        if expected != actual {
            self.failures.push(SpecialValueFailure {
                identity,
                m,
                j,
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    pub fn identity_ok(&self, identity: Identity) -> bool {
        !self.failures.iter().any(|f| f.identity == identity)
    }

    pub fn all_ok(&self) -> bool {
        self.failures.is_empty() && self.determinant_ok
    }
}

/// Integer sequence read from a b-file: `index value` pairs, one per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(i64, BigInt)>,
}

impl BFile {
    /// Parses whitespace-separated `index value` lines. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut it = t.split_whitespace();
            let (Some(idx), Some(val)) = (it.next(), it.next()) else {
                return Err(Error::BFile {
                    line: i + 1,
                    msg: "expected `index value`".into(),
                });
            };
            let idx: i64 = idx.parse().map_err(|_| Error::BFile {
                line: i + 1,
                msg: format!("bad index {idx:?}"),
            })?;
            let val: BigInt = val.parse().map_err(|_| Error::BFile {
                line: i + 1,
                msg: format!("bad value {val:?}"),
            })?;
            entries.push((idx, val));
        }
        Ok(BFile { entries })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::parse(std::io::BufReader::new(f))
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.entries.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Where a run of values was found inside a reference sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alignment {
    /// Position in the reference sequence (0-based, not the b-file index).
    pub offset: usize,
    /// Number of leading values of the probe that were skipped.
    pub skipped: usize,
    /// Length of the matched run.
    pub matched: usize,
    /// True when every remaining value of the probe was matched.
    pub complete: bool,
}

/// Finds the longest contiguous match of `probe` (optionally with a prefix
/// dropped, e.g. a leading zero) inside `reference`. The alignment convention
/// of published triangles varies, so no fixed offset is assumed.
pub fn best_alignment(probe: &[BigInt], reference: &[BigInt]) -> Option<Alignment> {
    let mut best: Option<Alignment> = None;
    for skipped in 0..probe.len() {
        let p = &probe[skipped..];
        for offset in 0..reference.len() {
            let matched = p
                .iter()
                .zip(&reference[offset..])
                .take_while(|(a, b)| a == b)
                .count();
            if matched == 0 {
                continue;
            }
            let cand = Alignment {
                offset,
                skipped,
                matched,
                complete: matched == p.len(),
            };
            let better = match &best {
                None => true,
                Some(b) => (cand.complete, cand.matched, std::cmp::Reverse(cand.skipped))
                    > (b.complete, b.matched, std::cmp::Reverse(b.skipped)),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best
}

/// True when every entry in `1 <= j <= m` is strictly positive.
pub fn interior_positive(a: &AMatrix) -> bool {
    a.rows
        .iter()
        .enumerate()
        .all(|(m, r)| (1..=m).all(|j| r[j].is_positive()))
}
