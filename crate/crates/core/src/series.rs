//! Truncated power series in `1/x` with exact rational coefficients, series
//! decorated with powers of `ln(x)`, and the operators acting on them:
//! harmonic integration `H[f] = ∫ f(x)/x dx`, the backward difference
//! `∇[f](x) = f(x) - f(x-1)`, the shift `S = I - ∇` and `J = H ∘ S`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{binomial, factorial, stirling1_unsigned};
use crate::error::{Error, Result};

/// Truncation order used when nothing else is configured.
pub const DEFAULT_ORDER: usize = 64;

/// `Σ_{k=0}^{N} a_k x^{-k}`, truncated at order `N`.
///
/// `conv_abscissa` is the smallest `x` at which evaluation is accepted. It is
/// carried as metadata: binary operations take the larger of the two operands'
/// abscissae and the backward difference shifts it by one.
#[derive(Clone)]
pub struct PowerSeriesInvX {
    coeffs: Vec<BigRational>,
    conv_abscissa: BigRational,
    float_coeffs: OnceLock<Vec<f64>>,
}

/// Value of a truncated series together with a heuristic error bar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Geometric-ratio estimate of the truncation error plus a floating-point
    /// rounding bound. Always finite.
    pub tail_estimate: f64,
    /// False when the coefficient ratio test gave `ρ >= 1`, i.e. the tail
    /// estimate cannot be trusted.
    pub reliable: bool,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            tail_estimate: 0.0,
            reliable: true,
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn big_to_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl PowerSeriesInvX {
    pub fn new(coeffs: Vec<BigRational>, conv_abscissa: BigRational) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Config("series needs at least one coefficient".into()));
        }
        if conv_abscissa < BigRational::one() {
            return Err(Error::Config(format!(
                "convergence abscissa must be >= 1, got {conv_abscissa}"
            )));
        }
        Ok(PowerSeriesInvX {
            coeffs,
            conv_abscissa,
            float_coeffs: OnceLock::new(),
        })
    }

    fn from_parts(coeffs: Vec<BigRational>, conv_abscissa: BigRational) -> Self {
        debug_assert!(!coeffs.is_empty());
        PowerSeriesInvX {
            coeffs,
            conv_abscissa,
            float_coeffs: OnceLock::new(),
        }
    }

    /// Builds a series from a coefficient function, abscissa 1.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> BigRational) -> Self {
        Self::from_parts((0..=order).map(f).collect(), BigRational::one())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| BigRational::zero())
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// `c · x^{-k}`; the zero series when `k` exceeds the order.
    pub fn monomial(k: usize, c: BigRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// `Li_s(1/x) = Σ_{k>=1} x^{-k} / k^s`.
    pub fn polylog(s: u32, order: usize) -> Self {
        Self::from_fn(order, |k| {
            if k == 0 {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::one(), BigInt::from(k).pow(s))
            }
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^{-k}`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn conv_abscissa(&self) -> &BigRational {
        &self.conv_abscissa
    }

    pub fn with_abscissa(mut self, abscissa: BigRational) -> Self {
        self.conv_abscissa = abscissa.max(BigRational::one());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    fn joint_abscissa(&self, other: &Self) -> BigRational {
        self.conv_abscissa.clone().max(other.conv_abscissa.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(coeffs, self.joint_abscissa(other)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(coeffs, self.joint_abscissa(other)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_parts(
            self.coeffs.iter().map(|a| a * c).collect(),
            self.conv_abscissa.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(
            self.coeffs.iter().map(|a| -a).collect(),
            self.conv_abscissa.clone(),
        )
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_parts(out, self.joint_abscissa(other)))
    }

    /// `∇[g](x) = g(x) - g(x-1)` expanded in `1/x`: the coefficient of
    /// `x^{-k}` is `-Σ_{r=1}^{k-1} C(k-1, r) a_{k-r}` for `k >= 2`, zero for
    /// `k < 2`. The abscissa moves up by one.
    pub fn backward_diff(&self) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let mut acc = BigRational::zero();
            for r in 1..k {
                let a = &self.coeffs[k - r];
                if !a.is_zero() {
                    acc += a * big_to_rat(binomial(k - 1, r as i64));
                }
            }
            *slot = -acc;
        }
        Self::from_parts(out, &self.conv_abscissa + BigRational::one())
    }

    /// `S[g] = g - ∇[g]`, i.e. `g(x-1)`.
    pub fn shift(&self) -> Self {
        let d = self.backward_diff();
        let coeffs = self.coeffs.iter().zip(&d.coeffs).map(|(a, b)| a - b).collect();
        Self::from_parts(coeffs, d.conv_abscissa)
    }

    fn float_coeffs(&self) -> &[f64] {
        self.float_coeffs
            .get_or_init(|| self.coeffs.iter().map(rat_to_f64).collect())
    }

    fn tail_ratio(&self, x: f64) -> (f64, bool) {
        let n = self.order();
        let last = self.float_coeffs()[n].abs();
        if last == 0.0 {
            return (0.0, true);
        }
        let ratio = if n == 0 {
            1.0
        } else {
            let prev = self.float_coeffs()[n - 1].abs();
            if prev == 0.0 {
                f64::INFINITY
            } else {
                last / prev
            }
        };
        let rho = ratio.max(1.0) / x;
        (rho, rho < 1.0)
    }

    fn truncation_tail(&self, x: f64) -> (f64, bool) {
        let n = self.order();
        let last = self.float_coeffs()[n].abs();
        if last == 0.0 {
            return (0.0, true);
        }
        let term = last * x.powi(-(n as i32));
        let (rho, ok) = self.tail_ratio(x);
        if ok {
            (term / (1.0 - rho), true)
        } else {
            // ρ >= 1: no geometric bound; report a wide but finite bar.
            (term * 1e3, false)
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let min = rat_to_f64(&self.conv_abscissa);
        if !(x >= min) {
            return Err(Error::Domain { x, min });
        }
        Ok(())
    }

    /// Horner evaluation in `1/x` on the coefficients rounded to `f64`.
    ///
    /// The error bar is the geometric tail estimate plus the standard Horner
    /// rounding bound `2(N+1)ε Σ_{k>=1} |a_k| x^{-k}`.
    pub fn eval(&self, x: f64) -> Result<EvalResult> {
        self.check_domain(x)?;
        let c = self.float_coeffs();
        let t = 1.0 / x;
        let mut value = 0.0;
        let mut abs_sum = 0.0;
        for a in c[1..].iter().rev() {
            value = (value + a) * t;
            abs_sum = (abs_sum + a.abs()) * t;
        }
        value += c[0];
        let rounding = 2.0 * (c.len() as f64) * f64::EPSILON * abs_sum;
        let (tail, reliable) = self.truncation_tail(x);
        Ok(EvalResult {
            value,
            tail_estimate: tail + rounding,
            reliable,
        })
    }

    /// Exact partial sum at a rational argument.
    pub fn eval_exact(&self, x: &BigRational) -> Result<BigRational> {
        if x < &self.conv_abscissa {
            return Err(Error::Domain {
                x: rat_to_f64(x),
                min: rat_to_f64(&self.conv_abscissa),
            });
        }
        let t = x.recip();
        let mut acc = BigRational::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * &t + a;
        }
        Ok(acc)
    }

    /// Exact partial sum at a rational argument, rounded to `f64` once.
    pub fn eval_rational(&self, x: &BigRational) -> Result<EvalResult> {
        let exact = self.eval_exact(x)?;
        let value = rat_to_f64(&exact);
        let (tail, reliable) = self.truncation_tail(rat_to_f64(x));
        Ok(EvalResult {
            value,
            tail_estimate: tail + value.abs() * f64::EPSILON,
            reliable,
        })
    }
}

impl PartialEq for PowerSeriesInvX {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.conv_abscissa == other.conv_abscissa
    }
}

impl fmt::Debug for PowerSeriesInvX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeriesInvX")
            .field("coeffs", &self.coeffs)
            .field("conv_abscissa", &self.conv_abscissa)
            .finish()
    }
}

/// `Σ_j P_j(x) ln(x)^j` with all parts at one truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    parts: Vec<PowerSeriesInvX>,
}

impl LogSeries {
    pub fn new(parts: Vec<PowerSeriesInvX>) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::Config("log series needs at least one part".into()));
        };
        for p in &parts[1..] {
            first.check_order(p)?;
        }
        Ok(LogSeries { parts })
    }

    pub fn from_series(p: PowerSeriesInvX) -> Self {
        LogSeries { parts: vec![p] }
    }

    /// `c · ln(x)^j`.
    pub fn log_power(j: usize, c: BigRational, order: usize) -> Self {
        let mut parts = vec![PowerSeriesInvX::zero(order); j + 1];
        parts[j] = PowerSeriesInvX::constant(c, order);
        LogSeries { parts }
    }

    /// Highest power of `ln(x)` carrying a non-zero part (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.parts.iter().rposition(|p| !p.is_zero()).unwrap_or(0)
    }

    pub fn order(&self) -> usize {
        self.parts[0].order()
    }

    pub fn parts(&self) -> &[PowerSeriesInvX] {
        &self.parts
    }

    /// Part multiplying `ln(x)^j`; zero beyond the stored degree.
    pub fn part(&self, j: usize) -> PowerSeriesInvX {
        self.parts
            .get(j)
            .cloned()
            .unwrap_or_else(|| PowerSeriesInvX::zero(self.order()))
    }

    fn trimmed(mut self) -> Self {
        let d = self.degree();
        self.parts.truncate(d + 1);
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let d = self.parts.len().max(other.parts.len());
        let parts = (0..d)
            .map(|j| self.part(j).add(&other.part(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LogSeries { parts }.trimmed())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        LogSeries {
            parts: self.parts.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Evaluates `Σ_j P_j(x) ln(x)^j`, accumulating each part's error bar
    /// weighted by `|ln(x)|^j`.
    pub fn eval(&self, x: f64) -> Result<EvalResult> {
        if !(x >= 1.0) {
            return Err(Error::Domain { x, min: 1.0 });
        }
        self.combine(x.ln(), |p| p.eval(x))
    }

    /// As [`LogSeries::eval`], with the series parts summed exactly at the
    /// rational argument before rounding.
    pub fn eval_rational(&self, x: &BigRational) -> Result<EvalResult> {
        let xf = rat_to_f64(x);
        if !(xf >= 1.0) {
            return Err(Error::Domain { x: xf, min: 1.0 });
        }
        self.combine(xf.ln(), |p| p.eval_rational(x))
    }

    fn combine(
        &self,
        ln_x: f64,
        mut eval_part: impl FnMut(&PowerSeriesInvX) -> Result<EvalResult>,
    ) -> Result<EvalResult> {
        let mut value = 0.0;
        let mut tail = 0.0;
        let mut reliable = true;
        let mut ln_pow = 1.0;
        for p in &self.parts {
            if !p.is_zero() {
                let r = eval_part(p)?;
                value += r.value * ln_pow;
                tail += r.tail_estimate * ln_pow.abs();
                reliable &= r.reliable;
            }
            ln_pow *= ln_x;
        }
        tail += value.abs() * f64::EPSILON * self.parts.len() as f64;
        Ok(EvalResult {
            value,
            tail_estimate: tail,
            reliable,
        })
    }
}

/// Cauchy product of two truncated series.
pub fn series_mul(f: &PowerSeriesInvX, g: &PowerSeriesInvX) -> Result<PowerSeriesInvX> {
    f.mul(g)
}

/// `H[g] = a_0 ln(x) - Σ_{k>=1} (a_k / k) x^{-k}`, integration constant zero.
pub fn harmonic_h(g: &PowerSeriesInvX) -> LogSeries {
    harmonic_h_power(g, 1)
}

/// `H^m[g] = a_0 ln(x)^m / m! + (-1)^m Σ_{k>=1} (a_k / k^m) x^{-k}`.
pub fn harmonic_h_power(g: &PowerSeriesInvX, m: usize) -> LogSeries {
    let order = g.order();
    let sign = if m % 2 == 0 { rat(1) } else { rat(-1) };
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(if m == 0 { g.coeffs[0].clone() } else { BigRational::zero() });
    for (k, a) in g.coeffs.iter().enumerate().skip(1) {
        let denom = BigInt::from(k).pow(m as u32);
        coeffs.push(a * &sign / big_to_rat(denom));
    }
    let series = PowerSeriesInvX::from_parts(coeffs, g.conv_abscissa.clone());
    if m == 0 || g.coeffs[0].is_zero() {
        return LogSeries::from_series(series);
    }
    let mut parts = vec![PowerSeriesInvX::zero(order).with_abscissa(g.conv_abscissa.clone()); m + 1];
    parts[0] = series;
    parts[m] = PowerSeriesInvX::constant(&g.coeffs[0] / big_to_rat(factorial(m)), order);
    LogSeries { parts }
}

/// `H` on a log series, term by term:
/// `H[c ln^j] = c ln^{j+1} / (j+1)` and, for `k >= 1`,
/// `H[x^{-k} ln^j] = -Σ_{i=0}^{j} j!/(j-i)! · ln^{j-i} x^{-k} / k^{i+1}`.
pub fn harmonic_h_log(g: &LogSeries) -> Result<LogSeries> {
    let order = g.order();
    let d = g.parts.len();
    let mut parts: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); order + 1]; d + 1];
    let mut abscissa = g.parts[0].conv_abscissa.clone();
    for (j, p) in g.parts.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        if p.conv_abscissa > abscissa {
            abscissa = p.conv_abscissa.clone();
        }
        parts[j + 1][0] += &p.coeffs[0] / rat(j as i64 + 1);
        for (k, a) in p.coeffs.iter().enumerate().skip(1) {
            if a.is_zero() {
                continue;
            }
            let kb = BigInt::from(k);
            let mut w = a / big_to_rat(kb.clone());
            for i in 0..=j {
                parts[j - i][k] -= &w;
                // next weight: multiply by (j-i)/k
                w = w * rat((j - i) as i64) / big_to_rat(kb.clone());
            }
        }
    }
    let parts = parts
        .into_iter()
        .map(|c| PowerSeriesInvX::from_parts(c, abscissa.clone()))
        .collect();
    Ok(LogSeries { parts }.trimmed())
}

/// `∇[g]` on a pure series.
pub fn backward_diff(g: &PowerSeriesInvX) -> PowerSeriesInvX {
    g.backward_diff()
}

/// `∇[ln](x) = Li_1(1/x)`.
pub fn nabla_ln(order: usize) -> PowerSeriesInvX {
    PowerSeriesInvX::polylog(1, order)
}

/// `Li_1(1/x)^n / n! = Σ_{k>=n} [k n] / k! · x^{-k}` with unsigned Stirling
/// numbers of the first kind.
pub fn li1_power(n: usize, order: usize) -> PowerSeriesInvX {
    PowerSeriesInvX::from_fn(order, |k| {
        if k < n {
            BigRational::zero()
        } else {
            BigRational::new(stirling1_unsigned(k, n as i64), factorial(k))
        }
    })
}

/// `S[g](x) = g(x-1)`, using `ln(x-1) = ln(x) - Li_1(1/x)`:
/// `S[Σ_j P_j ln^j] = Σ_j S[P_j] Σ_i C(j,i) ln^i (-Li_1)^{j-i}`.
pub fn shift_s(g: &LogSeries) -> Result<LogSeries> {
    let d = g.degree();
    let order = g.order();
    // (-Li_1)^r = (-1)^r r! · li1_power(r)
    let neg_li1_pow: Vec<PowerSeriesInvX> = (0..=d)
        .map(|r| {
            let mut c = big_to_rat(factorial(r));
            if r % 2 == 1 {
                c = -c;
            }
            li1_power(r, order).scale(&c)
        })
        .collect();
    let mut parts = vec![PowerSeriesInvX::zero(order); d + 1];
    for j in 0..=d {
        let pj = g.part(j);
        if pj.is_zero() {
            continue;
        }
        let sj = pj.shift();
        for i in 0..=j {
            let c = big_to_rat(binomial(j, i as i64));
            let term = if i == j {
                sj.clone()
            } else {
                sj.mul(&neg_li1_pow[j - i])?
            };
            parts[i] = parts[i].add(&term.scale(&c))?;
        }
    }
    Ok(LogSeries { parts }.trimmed())
}

/// `J[g] = H[S[g]]`.
pub fn apply_j(g: &LogSeries) -> Result<LogSeries> {
    harmonic_h_log(&shift_s(g)?)
}

pub fn series_eval(g: &PowerSeriesInvX, x: f64) -> Result<EvalResult> {
    g.eval(x)
}

pub fn logseries_eval(g: &LogSeries, x: f64) -> Result<EvalResult> {
    g.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn mul_identity_and_truncation() {
        let one = PowerSeriesInvX::one(6);
        assert_eq!(one.mul(&one).unwrap(), one);
        let a = PowerSeriesInvX::monomial(1, rat(1), 6);
        let b = PowerSeriesInvX::monomial(6, rat(1), 6);
        assert!(a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn mul_li1_squared() {
        let li1 = nabla_ln(4);
        let sq = li1.mul(&li1).unwrap();
        assert_eq!(sq.coeffs(), &[rat(0), rat(0), rat(1), rat(1), q(11, 12)]);
    }

    #[test]
    fn mismatched_orders_rejected() {
        let a = PowerSeriesInvX::one(4);
        let b = PowerSeriesInvX::one(5);
        assert!(matches!(a.mul(&b), Err(Error::OrderMismatch { left: 4, right: 5 })));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn harmonic_basic() {
        let h = harmonic_h(&PowerSeriesInvX::one(5));
        assert_eq!(h, LogSeries::log_power(1, rat(1), 5));

        let h = harmonic_h(&PowerSeriesInvX::monomial(1, rat(1), 5));
        assert_eq!(h.degree(), 0);
        assert_eq!(h.part(0).coeff(1), rat(-1));

        let h = harmonic_h(&nabla_ln(6));
        for k in 1..=6 {
            assert_eq!(h.part(0).coeff(k), q(-1, (k * k) as i64));
        }
    }

    #[test]
    fn harmonic_power_cases() {
        let g = PowerSeriesInvX::from_fn(5, |k| q(k as i64 + 1, 3));
        assert_eq!(harmonic_h_power(&g, 0), LogSeries::from_series(g.clone()));

        let h = harmonic_h_power(&PowerSeriesInvX::one(5), 2);
        assert_eq!(h, LogSeries::log_power(2, q(1, 2), 5));

        let h = harmonic_h_power(&PowerSeriesInvX::monomial(2, rat(1), 5), 3);
        assert_eq!(h.part(0).coeff(2), q(-1, 8));
    }

    #[test]
    fn backward_diff_cases() {
        assert!(PowerSeriesInvX::one(6).backward_diff().is_zero());

        let d = PowerSeriesInvX::monomial(1, rat(1), 6).backward_diff();
        assert_eq!(d.coeff(0), rat(0));
        assert_eq!(d.coeff(1), rat(0));
        for k in 2..=6 {
            assert_eq!(d.coeff(k), rat(-1));
        }

        let d = PowerSeriesInvX::polylog(2, 4).backward_diff();
        assert_eq!(&d.coeffs()[2..], &[rat(-1), q(-3, 2), q(-25, 12)]);
        assert_eq!(d.conv_abscissa(), &rat(2));
    }

    // g(x-1) = Σ_j a_j (x-1)^{-j} with (x-1)^{-j} = Σ_{m>=j} C(m-1, j-1) x^{-m}
    fn shifted_by_expansion(g: &PowerSeriesInvX) -> Vec<BigRational> {
        let n = g.order();
        let mut out = vec![g.coeff(0); 1];
        out.resize(n + 1, BigRational::zero());
        for j in 1..=n {
            for m in j..=n {
                out[m] += g.coeff(j) * big_to_rat(binomial(m - 1, j as i64 - 1));
            }
        }
        out
    }

    #[test]
    fn backward_diff_matches_direct_expansion() {
        for g in [
            PowerSeriesInvX::polylog(2, 12),
            PowerSeriesInvX::polylog(3, 12),
            PowerSeriesInvX::from_fn(12, |k| q((k * k) as i64 - 3, k as i64 + 2)),
        ] {
            let shifted = shifted_by_expansion(&g);
            let d = g.backward_diff();
            for k in 0..=12 {
                assert_eq!(d.coeff(k), g.coeff(k) - &shifted[k], "k={k}");
            }
        }
    }

    #[test]
    fn li1_and_powers() {
        let l = nabla_ln(3);
        assert_eq!(l.coeffs(), &[rat(0), rat(1), q(1, 2), q(1, 3)]);
        assert_eq!(li1_power(1, 3), l);
        assert_eq!(li1_power(0, 3), PowerSeriesInvX::one(3));
        assert_eq!(li1_power(2, 5).coeff(3), q(1, 2));
        let half_sq = nabla_ln(12).mul(&nabla_ln(12)).unwrap().scale(&q(1, 2));
        assert_eq!(li1_power(2, 12), half_sq);
    }

    #[test]
    fn shift_cases() {
        let one = LogSeries::from_series(PowerSeriesInvX::one(5));
        assert_eq!(shift_s(&one).unwrap().part(0).coeffs(), PowerSeriesInvX::one(5).coeffs());

        let ln = LogSeries::log_power(1, rat(1), 5);
        let s = shift_s(&ln).unwrap();
        assert_eq!(s.part(1).coeffs(), PowerSeriesInvX::one(5).coeffs());
        assert_eq!(s.part(0).coeffs(), nabla_ln(5).neg().coeffs());

        let inv = LogSeries::from_series(PowerSeriesInvX::monomial(1, rat(1), 5));
        let s = shift_s(&inv).unwrap();
        assert_eq!(s.part(0).coeffs(), &[rat(0), rat(1), rat(1), rat(1), rat(1), rat(1)]);

        // (ln - Li_1)^2 = ln^2 - 2 Li_1 ln + Li_1^2
        let ln2 = LogSeries::log_power(2, rat(1), 6);
        let s = shift_s(&ln2).unwrap();
        assert_eq!(s.part(2).coeffs(), PowerSeriesInvX::one(6).coeffs());
        assert_eq!(s.part(1).coeffs(), nabla_ln(6).scale(&rat(-2)).coeffs());
        assert_eq!(s.part(0).coeffs(), li1_power(2, 6).scale(&rat(2)).coeffs());
    }

    #[test]
    fn j_twice_gives_log_square_plus_dilog() {
        let n = 10;
        let one = LogSeries::from_series(PowerSeriesInvX::one(n));
        let j1 = apply_j(&one).unwrap();
        assert_eq!(j1.degree(), 1);
        assert!(j1.part(0).is_zero());
        assert_eq!(j1.part(1).coeffs(), PowerSeriesInvX::one(n).coeffs());
        let j2 = apply_j(&j1).unwrap();
        assert_eq!(j2.part(2).coeffs(), PowerSeriesInvX::constant(q(1, 2), n).coeffs());
        assert_eq!(j2.part(0).coeffs(), PowerSeriesInvX::polylog(2, n).coeffs());
    }

    #[test]
    fn harmonic_of_log_terms() {
        // H[x^{-2} ln] = -(ln/2 + 1/4) x^{-2}
        let mut parts = vec![PowerSeriesInvX::zero(4); 2];
        parts[1] = PowerSeriesInvX::monomial(2, rat(1), 4);
        let h = harmonic_h_log(&LogSeries::new(parts).unwrap()).unwrap();
        assert_eq!(h.part(1).coeffs(), PowerSeriesInvX::monomial(2, q(-1, 2), 4).coeffs());
        assert_eq!(h.part(0).coeffs(), PowerSeriesInvX::monomial(2, q(-1, 4), 4).coeffs());
        // H[3 ln^2] = ln^3
        let h = harmonic_h_log(&LogSeries::log_power(2, rat(3), 4)).unwrap();
        assert_eq!(h.degree(), 3);
        assert_eq!(h.part(3).coeff(0), rat(1));
    }

    #[test]
    fn evaluation() {
        let r = PowerSeriesInvX::one(8).eval(5.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.tail_estimate, 0.0);

        let ln2 = std::f64::consts::LN_2;
        let li2_half = std::f64::consts::PI.powi(2) / 12.0 - ln2 * ln2 / 2.0;
        let r = PowerSeriesInvX::polylog(2, 64).eval(2.0).unwrap();
        assert!((r.value - li2_half).abs() <= 1e-15, "{r:?}");
        let r = PowerSeriesInvX::polylog(1, 64).eval(2.0).unwrap();
        assert!((r.value - ln2).abs() <= 1e-15, "{r:?}");
        let r = PowerSeriesInvX::polylog(1, 64).eval_rational(&rat(2)).unwrap();
        assert!((r.value - ln2).abs() <= 1e-15, "{r:?}");
    }

    #[test]
    fn evaluation_domain() {
        let s = PowerSeriesInvX::polylog(2, 8).backward_diff();
        assert!(matches!(s.eval(1.5), Err(Error::Domain { .. })));
        assert!(s.eval_exact(&q(3, 2)).is_err());
        assert!(LogSeries::log_power(1, rat(1), 8).eval(0.5).is_err());
    }

    #[test]
    fn unreliable_tail_flagged() {
        // coefficients 2^k at x = 1.5: ρ = 2/1.5 > 1
        let s = PowerSeriesInvX::from_fn(10, |k| big_to_rat(BigInt::from(2).pow(k as u32)));
        let r = s.eval(1.5).unwrap();
        assert!(!r.reliable);
        assert!(r.tail_estimate.is_finite());
    }

    #[test]
    fn log_eval() {
        let j0 = LogSeries::from_series(PowerSeriesInvX::one(16));
        assert_eq!(j0.eval(7.3).unwrap().value, 1.0);
        let j1 = LogSeries::log_power(1, rat(1), 16);
        assert_eq!(j1.eval(1.0).unwrap().value, 0.0);
        let j2 = LogSeries::new(vec![
            PowerSeriesInvX::polylog(2, 64),
            PowerSeriesInvX::zero(64),
            PowerSeriesInvX::constant(q(1, 2), 64),
        ])
        .unwrap();
        let v = j2.eval(2.0).unwrap();
        assert!((v.value - std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-14, "{v:?}");
    }
}
