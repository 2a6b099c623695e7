//! Coefficient series `Q_n` of the log-power expansion of `J^n[1]`.
//!
//! Two independent routes are provided:
//!
//! * [`q_via_recurrence`] runs the operator recurrence
//!   `Q_{n+1} = -H[Li_1(1/x)^n / n! - ∇[Q_n]]` from `Q_0 = 1`, `Q_1 = 0`;
//! * [`q_closed_form`] evaluates each coefficient `q_{n+1,s}` from Stirling
//!   numbers, binomials and the matrix `A^s`.
//!
//! Both are exact, so agreement is checked by rational equality.
//!
//! The recurrence above keeps only the `i = 0` term of the full relation
//! obtained from `J = H ∘ S` and `ln(x-1) = ln(x) - Li_1(1/x)`,
//!
//! ```text
//! Q_{n+1} = -H[ Σ_{i=0}^{n-1} S[Q_i] Li_1(1/x)^{n-i} / (n-i)! - ∇[Q_n] ]
//! ```
//!
//! The dropped terms involve `S[Q_i]` with `2 <= i <= n-1`, so the two agree for
//! `n + 1 <= 3` and differ from `Q_4` on. [`q_sequence_full`] runs the full
//! relation and [`q_from_j_iteration`] reads `Q_n` off `J^n[1]` built by
//! applying `J` directly; these are what the `f_n` evaluator uses.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::amatrix::AMatrix;
use crate::arith::{binomial, factorial, stirling1_unsigned};
use crate::error::{Error, Result};
use crate::series::{apply_j, harmonic_h, li1_power, LogSeries, PowerSeriesInvX};

/// `Q_n` as a truncated series in `1/x`, coefficients `q_{n,s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub n: usize,
    pub series: PowerSeriesInvX,
}

impl QSeries {
    pub fn coeff(&self, s: usize) -> BigRational {
        self.series.coeff(s)
    }
}

/// `Q_0, ..., Q_{n_max}` by the operator recurrence, truncated at `order`.
pub fn q_sequence(n_max: usize, order: usize) -> Result<Vec<QSeries>> {
    let mut out = vec![QSeries {
        n: 0,
        series: PowerSeriesInvX::one(order),
    }];
    if n_max == 0 {
        return Ok(out);
    }
    out.push(QSeries {
        n: 1,
        series: PowerSeriesInvX::zero(order),
    });
    for n in 1..n_max {
        let prev = &out[n].series;
        let arg = li1_power(n, order).sub(&prev.backward_diff())?;
        if !arg.coeff(0).is_zero() {
            return Err(Error::Inconsistent {
                index: n + 1,
                constant: arg.coeff(0).to_string(),
            });
        }
        let h = harmonic_h(&arg);
        debug_assert_eq!(h.degree(), 0);
        // abscissa is inherited from ∇[Q_n], giving x >= n + 1
        out.push(QSeries {
            n: n + 1,
            series: h.part(0).neg(),
        });
    }
    Ok(out)
}

/// `Q_n` by the operator recurrence.
pub fn q_via_recurrence(n: usize, order: usize) -> Result<QSeries> {
    Ok(q_sequence(n, order)?.pop().expect("sequence is non-empty"))
}

/// `Q_0, ..., Q_{n_max}` by the full relation including every `S[Q_i]` term.
pub fn q_sequence_full(n_max: usize, order: usize) -> Result<Vec<QSeries>> {
    let mut out = vec![QSeries {
        n: 0,
        series: PowerSeriesInvX::one(order),
    }];
    if n_max == 0 {
        return Ok(out);
    }
    out.push(QSeries {
        n: 1,
        series: PowerSeriesInvX::zero(order),
    });
    let mut shifted = vec![out[0].series.shift(), out[1].series.shift()];
    for n in 1..n_max {
        let mut arg = out[n].series.backward_diff().neg();
        for (i, sq) in shifted.iter().enumerate().take(n) {
            if sq.is_zero() {
                continue;
            }
            arg = arg.add(&sq.mul(&li1_power(n - i, order))?)?;
        }
        if !arg.coeff(0).is_zero() {
            return Err(Error::Inconsistent {
                index: n + 1,
                constant: arg.coeff(0).to_string(),
            });
        }
        let q = harmonic_h(&arg).part(0).neg();
        shifted.push(q.shift());
        out.push(QSeries { n: n + 1, series: q });
    }
    Ok(out)
}

/// `Q_0, ..., Q_{n_max}` read off `J^n[1] = Σ_j (-1)^j Q_j ln^{n-j}/(n-j)!`
/// with `J^n[1]` obtained by applying `J` to `1` repeatedly.
pub fn q_from_j_iteration(n_max: usize, order: usize) -> Result<Vec<QSeries>> {
    let mut out = vec![QSeries {
        n: 0,
        series: PowerSeriesInvX::one(order),
    }];
    let mut j = LogSeries::from_series(PowerSeriesInvX::one(order));
    for n in 1..=n_max {
        j = apply_j(&j)?;
        // Q_n sits at ln^0 with weight (-1)^n
        let mut q = j.part(0);
        if n % 2 == 1 {
            q = q.neg();
        }
        out.push(QSeries { n, series: q });
    }
    Ok(out)
}

/// Smallest `n <= n_max` at which the truncated recurrence and the full
/// relation give different `Q_n`.
pub fn first_recurrence_defect(n_max: usize, order: usize) -> Result<Option<usize>> {
    let short = q_sequence(n_max, order)?;
    let full = q_sequence_full(n_max, order)?;
    Ok((0..=n_max).find(|&n| short[n].series.coeffs() != full[n].series.coeffs()))
}

fn a_matrix_cached(s: usize) -> Arc<AMatrix> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<AMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().unwrap().get(&s) {
        return a.clone();
    }
    let a = Arc::new(AMatrix::compute(s));
    cache.lock().unwrap().entry(s).or_insert(a).clone()
}

/// `q_{n+1,s}` in closed form. Zero for `s < n`; otherwise
///
/// ```text
/// (1/s)(1/s!) Σ_{ν=0}^{n-1} Σ_{σ=ν}^{ν+s-n} [s-σ  n-ν] C(s,σ) A^s_{σ,ν}
/// ```
pub fn q_closed_form(n_plus_1: usize, s: usize) -> Result<BigRational> {
    if n_plus_1 < 2 {
        return Err(Error::IndexRange(format!(
            "closed form needs n+1 >= 2, got {n_plus_1}"
        )));
    }
    let n = n_plus_1 - 1;
    if s < n {
        return Ok(BigRational::zero());
    }
    let a = a_matrix_cached(s);
    let mut acc = BigInt::zero();
    for nu in 0..n {
        for sigma in nu..=(nu + s - n) {
            let st = stirling1_unsigned(s - sigma, (n - nu) as i64);
            if st.is_zero() {
                continue;
            }
            let Some(entry) = a.entry(sigma, nu) else { continue };
            acc += st * binomial(s, sigma as i64) * entry;
        }
    }
    Ok(BigRational::new(acc, BigInt::from(s) * factorial(s)))
}

/// Table of `q_{n,s}` for `2 <= n <= n_max`, `0 <= s <= s_max` via the
/// closed form; row `i` holds `n = i + 2`. The `s = 0` column is zero.
pub fn q_table(n_max: usize, s_max: usize) -> Result<Vec<Vec<BigRational>>> {
    if n_max < 2 {
        return Err(Error::IndexRange(format!("q_table needs n_max >= 2, got {n_max}")));
    }
    // columns are independent
    let columns: Vec<Vec<BigRational>> = (0..=s_max)
        .into_par_iter()
        .map(|s| {
            (2..=n_max)
                .map(|n| {
                    if s == 0 {
                        Ok(BigRational::zero())
                    } else {
                        q_closed_form(n, s)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=n_max - 2)
        .map(|row| columns.iter().map(|c| c[row].clone()).collect())
        .collect())
}

/// First `(n, s)` where the two routes disagree, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPathMismatch {
    pub n: usize,
    pub s: usize,
    pub recurrence: BigRational,
    pub closed_form: BigRational,
}

/// Compares both routes for `2 <= n <= n_max`, `1 <= s <= s_max`, and checks
/// that `q_{n,s} = 0` for `s < n - 1`.
pub fn dual_path_check(n_max: usize, s_max: usize) -> Result<Vec<DualPathMismatch>> {
    let seq = q_sequence(n_max, s_max)?;
    let table = q_table(n_max.max(2), s_max)?;
    let mut bad = Vec::new();
    for n in 2..=n_max {
        for s in 1..=s_max {
            let rec = seq[n].coeff(s);
            let cf = table[n - 2][s].clone();
            let zero_violation = s + 1 < n && !rec.is_zero();
            if rec != cf || zero_violation {
                bad.push(DualPathMismatch {
                    n,
                    s,
                    recurrence: rec,
                    closed_form: cf,
                });
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn initial_data() {
        let seq = q_sequence(1, 8).unwrap();
        assert_eq!(seq[0].series, PowerSeriesInvX::one(8));
        assert!(seq[1].series.is_zero());
    }

    #[test]
    fn q2_is_dilog() {
        let q2 = q_via_recurrence(2, 12).unwrap();
        assert_eq!(q2.series.coeffs(), PowerSeriesInvX::polylog(2, 12).coeffs());
        assert_eq!(q2.series.conv_abscissa(), &q(2, 1));
    }

    #[test]
    fn q3_hand_values() {
        let q3 = q_via_recurrence(3, 6).unwrap();
        assert_eq!(q3.coeff(1), q(0, 1));
        assert_eq!(q3.coeff(2), q(3, 4));
        assert_eq!(q3.coeff(3), q(2, 3));
        assert_eq!(q3.series.conv_abscissa(), &q(3, 1));
    }

    #[test]
    fn closed_form_values() {
        for s in 1..=4 {
            assert_eq!(q_closed_form(2, s).unwrap(), q(1, (s * s) as i64));
        }
        assert_eq!(q_closed_form(3, 2).unwrap(), q(3, 4));
        assert_eq!(q_closed_form(3, 1).unwrap(), q(0, 1));
        assert!(q_closed_form(1, 3).is_err());
    }

    #[test]
    fn table_entries() {
        let t = q_table(4, 4).unwrap();
        assert_eq!(t[0][2], q(1, 4));
        assert_eq!(t[1][2], q(3, 4));
        assert_eq!(t[2][2], q(0, 1));
        assert!(q_table(1, 3).is_err());
    }

    #[test]
    fn full_relation_matches_j_iteration() {
        let full = q_sequence_full(6, 16).unwrap();
        let iter = q_from_j_iteration(6, 16).unwrap();
        for n in 0..=6 {
            assert_eq!(full[n].series.coeffs(), iter[n].series.coeffs(), "n={n}");
        }
        assert_eq!(full[4].coeff(2), q(1, 2));
        assert_eq!(full[4].coeff(3), q(41, 36));
        assert_eq!(full[5].coeff(3), q(3, 4));
    }

    #[test]
    fn truncated_recurrence_departs_at_four() {
        assert_eq!(first_recurrence_defect(3, 16).unwrap(), None);
        assert_eq!(first_recurrence_defect(6, 16).unwrap(), Some(4));
    }

    #[test]
    fn routes_agree_small() {
        assert!(dual_path_check(5, 12).unwrap().is_empty());
    }
}
