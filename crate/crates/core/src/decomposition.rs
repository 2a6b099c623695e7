//! `f_n` as a linear combination of J-iterates,
//!
//! ```text
//! f_n(y) = Σ_{k=0}^{n} β_k · J^{n-k}[1](y + n)
//! ```
//!
//! with `β_0 = 1`, `β_n = -Σ_{k<n} β_k J^{n-k}[1](n)`, and
//! `J^n[1](x) = Σ_j (-1)^j Q_j(x) ln(x)^{n-j} / (n-j)!`, the `Q_j` coming from
//! the full shift relation ([`q_sequence_full`]).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::qcoeff::{q_sequence_full, QSeries};
use crate::quad::{integrate, QuadOptions};
use crate::series::{EvalResult, LogSeries};

/// `J^n[1]` in log-power form.
#[derive(Clone, Debug, PartialEq)]
pub struct JIterate {
    pub n: usize,
    pub logseries: LogSeries,
}

impl JIterate {
    /// Assembles `J^n[1]` from `Q_0 .. Q_n` (at least `n + 1` entries).
    pub fn from_q(n: usize, qs: &[QSeries]) -> Result<Self> {
        let parts = (0..=n)
            .map(|p| {
                // ln^p carries (-1)^j Q_j / p! with j = n - p
                let j = n - p;
                let mut c = BigRational::new(BigInt::from(1), factorial(p));
                if j % 2 == 1 {
                    c = -c;
                }
                qs[j].series.scale(&c)
            })
            .collect();
        Ok(JIterate {
            n,
            logseries: LogSeries::new(parts)?,
        })
    }

    pub fn eval(&self, x: f64) -> Result<EvalResult> {
        self.logseries.eval(x)
    }

    /// Series parts are summed exactly at the integer argument before rounding.
    pub fn eval_at_integer(&self, x: u64) -> Result<EvalResult> {
        self.logseries
            .eval_rational(&BigRational::from_integer(BigInt::from(x)))
    }
}

/// `J^0[1], ..., J^{n_max}[1]`, sharing one `Q` sequence.
pub fn j_iterates(n_max: usize, order: usize) -> Result<Vec<JIterate>> {
    let qs = q_sequence_full(n_max, order)?;
    (0..=n_max).map(|n| JIterate::from_q(n, &qs)).collect()
}

pub fn build_j_iterate(n: usize, order: usize) -> Result<JIterate> {
    let qs = q_sequence_full(n, order)?;
    JIterate::from_q(n, &qs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaEntry {
    pub n: usize,
    pub value: f64,
    pub tail: f64,
}

/// `β_0 .. β_n` with first-order propagated error bars.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTable {
    entries: Vec<BetaEntry>,
}

impl BetaTable {
    pub fn entries(&self) -> &[BetaEntry] {
        &self.entries
    }

    pub fn value(&self, k: usize) -> f64 {
        self.entries[k].value
    }

    pub fn tail(&self, k: usize) -> f64 {
        self.entries[k].tail
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn from_iterates(n_max: usize, js: &[JIterate]) -> Result<Self> {
        let mut entries = vec![BetaEntry {
            n: 0,
            value: 1.0,
            tail: 0.0,
        }];
        for n in 1..=n_max {
            let mut value = 0.0;
            let mut tail = 0.0;
            for (k, beta) in entries.iter().enumerate() {
                let m = n - k;
                let j = if m == 1 && n == 1 {
                    // J[1](1) = ln 1
                    EvalResult::exact(0.0)
                } else {
                    js[m].eval_at_integer(n as u64)?
                };
                value -= beta.value * j.value;
                tail += beta.value.abs() * j.tail_estimate + j.value.abs() * beta.tail;
            }
            entries.push(BetaEntry { n, value, tail });
        }
        Ok(BetaTable { entries })
    }
}

pub fn beta_table(n_max: usize, order: usize) -> Result<BetaTable> {
    let js = j_iterates(n_max, order)?;
    BetaTable::from_iterates(n_max, &js)
}

/// Everything needed to evaluate one `f_n`.
#[derive(Clone, Debug)]
pub struct FEvaluator {
    n: usize,
    betas: BetaTable,
    iterates: Vec<JIterate>,
}

impl FEvaluator {
    pub fn new(n: usize, order: usize) -> Result<Self> {
        let iterates = j_iterates(n, order)?;
        let betas = BetaTable::from_iterates(n, &iterates)?;
        Ok(FEvaluator { n, betas, iterates })
    }

    /// Shared evaluator per `(n, order)`, built on first use.
    pub fn cached(n: usize, order: usize) -> Result<Arc<FEvaluator>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<FEvaluator>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(e) = cache.lock().unwrap().get(&(n, order)) {
            return Ok(e.clone());
        }
        let e = Arc::new(FEvaluator::new(n, order)?);
        Ok(cache.lock().unwrap().entry((n, order)).or_insert(e).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn betas(&self) -> &BetaTable {
        &self.betas
    }

    pub fn iterates(&self) -> &[JIterate] {
        &self.iterates
    }

    pub fn eval(&self, y: f64) -> Result<EvalResult> {
        if !(y >= 0.0) {
            return Err(Error::Domain { x: y, min: 0.0 });
        }
        if self.n == 0 {
            return Ok(EvalResult::exact(1.0));
        }
        let x = y + self.n as f64;
        let mut value = 0.0;
        let mut tail = 0.0;
        let mut reliable = true;
        for k in 0..=self.n {
            let beta = self.betas.entries[k];
            let j = self.iterates[self.n - k].eval(x)?;
            value += beta.value * j.value;
            tail += beta.value.abs() * j.tail_estimate + j.value.abs() * beta.tail;
            reliable &= j.reliable;
        }
        Ok(EvalResult {
            value,
            tail_estimate: tail,
            reliable,
        })
    }
}

pub fn f_eval(n: usize, y: f64, order: usize) -> Result<EvalResult> {
    FEvaluator::cached(n, order)?.eval(y)
}

/// `|(y+n) f_n'(y) - f_{n-1}(y)|` with a central difference of step `h`.
pub fn derivative_residual(n: usize, y: f64, h: f64, order: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::IndexRange("derivative identity needs n >= 1".into()));
    }
    if !(h > 0.0 && y > h) {
        return Err(Error::Domain { x: y, min: h });
    }
    let f = FEvaluator::cached(n, order)?;
    let g = FEvaluator::cached(n - 1, order)?;
    let derivative = (f.eval(y + h)?.value - f.eval(y - h)?.value) / (2.0 * h);
    Ok(((y + n as f64) * derivative - g.eval(y)?.value).abs())
}

/// Both sides of the reflection identity
/// `∫_0^y f_n(s)/(y-s+1) ds = (n+1) ∫_0^y f_n(s)/(s+n+1) ds`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Reflection {
    pub lhs: f64,
    pub rhs: f64,
    pub quad_error: f64,
}

impl Reflection {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn reflection(n: usize, y: f64, order: usize, opts: &QuadOptions) -> Result<Reflection> {
    if !(y >= 0.0) {
        return Err(Error::Domain { x: y, min: 0.0 });
    }
    let f = FEvaluator::cached(n, order)?;
    let fv = |s: f64| f.eval(s.max(0.0)).map(|r| r.value).unwrap_or(f64::NAN);
    let lhs = integrate(|s| fv(s) / (y - s + 1.0), 0.0, y, opts)?;
    let rhs = integrate(|s| fv(s) / (s + n as f64 + 1.0), 0.0, y, opts)?;
    Ok(Reflection {
        lhs: lhs.value,
        rhs: (n as f64 + 1.0) * rhs.value,
        quad_error: lhs.abs_error + (n as f64 + 1.0) * rhs.abs_error,
    })
}

pub fn reflection_residual(n: usize, y: f64, order: usize, opts: &QuadOptions) -> Result<f64> {
    Ok(reflection(n, y, order, opts)?.residual())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{PowerSeriesInvX, DEFAULT_ORDER};
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn j_iterate_shapes() {
        let j0 = build_j_iterate(0, 8).unwrap();
        assert_eq!(j0.logseries, LogSeries::from_series(PowerSeriesInvX::one(8)));
        let j1 = build_j_iterate(1, 8).unwrap();
        assert_eq!(j1.logseries.degree(), 1);
        assert!(j1.logseries.part(0).is_zero());
        let j2 = build_j_iterate(2, 8).unwrap();
        assert_eq!(
            j2.logseries.part(0).coeffs(),
            PowerSeriesInvX::polylog(2, 8).coeffs()
        );
        assert!(j2.logseries.part(1).is_zero());
        assert_eq!(
            j2.logseries.part(2).coeff(0),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn first_betas() {
        let t = beta_table(2, DEFAULT_ORDER).unwrap();
        assert_eq!(t.value(0), 1.0);
        assert_eq!(t.value(1), 0.0);
        assert!((t.value(2) + PI * PI / 12.0).abs() < 1e-14, "{:?}", t.entries());
    }

    #[test]
    fn listed_beta_combinations() {
        let js = j_iterates(4, DEFAULT_ORDER).unwrap();
        let j = |m: usize, x: u64| js[m].eval_at_integer(x).unwrap().value;
        let t = beta_table(4, DEFAULT_ORDER).unwrap();
        let b3 = -j(3, 3) + j(2, 2) * j(1, 3);
        let b4 = -j(4, 4) + j(2, 2) * j(2, 4) + (j(3, 3) - j(2, 2) * j(1, 3)) * j(1, 4);
        assert!((t.value(3) - b3).abs() < 1e-14);
        assert!((t.value(4) - b4).abs() < 1e-14);
    }

    #[test]
    fn f_small_cases() {
        for y in [0.0, 0.3, 4.0, 100.0] {
            assert_eq!(f_eval(0, y, 16).unwrap().value, 1.0);
        }
        assert!((f_eval(1, 1.0, DEFAULT_ORDER).unwrap().value - LN_2).abs() < 1e-15);
        assert!(f_eval(2, 0.0, DEFAULT_ORDER).unwrap().value.abs() < 1e-14);
        assert!(f_eval(2, -0.1, DEFAULT_ORDER).is_err());
    }

    #[test]
    fn derivative_and_reflection() {
        assert!(derivative_residual(1, 1.0, 1e-4, DEFAULT_ORDER).unwrap() <= 1e-7);
        assert!(derivative_residual(2, 2.0, 1e-4, DEFAULT_ORDER).unwrap() <= 1e-6);
        assert!(derivative_residual(0, 2.0, 1e-4, DEFAULT_ORDER).is_err());
        assert!(derivative_residual(2, 1e-5, 1e-4, DEFAULT_ORDER).is_err());
        let opts = QuadOptions::with_abs_tol(1e-12);
        assert!(reflection_residual(0, 3.0, DEFAULT_ORDER, &opts).unwrap() <= 1e-10);
        assert!(reflection_residual(1, 2.0, DEFAULT_ORDER, &opts).unwrap() <= 1e-8);
    }
}
