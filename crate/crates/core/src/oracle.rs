//! Purely numerical ground truth: convolution powers of the cut-off function
//! `φ(x) = 1/(x+a)` for `x >= λ` (zero below) by nested adaptive quadrature,
//! the change of variables between `φ^{*n}` and `f_{n-1}`, and `f_n` from the
//! integral recurrence `f_k(y) = ∫_0^y f_{k-1}(s)/(s+k) ds` on a grid.
//!
//! None of this touches the exact series machinery except
//! [`reconstruct_from_f`], which is the bridge being tested.

use crate::arith::factorial;
use crate::decomposition::FEvaluator;
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::series::rat_to_f64;

use num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvParams {
    lambda: f64,
    a: f64,
}

impl ConvParams {
    /// Requires `λ + a > 0`.
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        let sum = lambda + a;
        if !(sum > 0.0) || !lambda.is_finite() || !a.is_finite() {
            return Err(Error::InvalidParams(sum));
        }
        Ok(ConvParams { lambda, a })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `λ + a`
    pub fn scale(&self) -> f64 {
        self.lambda + self.a
    }
}

pub fn varphi(p: &ConvParams, x: f64) -> f64 {
    if x < p.lambda {
        0.0
    } else {
        1.0 / (x + p.a)
    }
}

/// Nested-quadrature evaluator for `φ^{*n}`.
#[derive(Clone, Debug)]
pub struct ConvolutionOracle {
    pub params: ConvParams,
    pub quad: QuadOptions,
    /// Largest `n` accepted; cost grows exponentially with nesting.
    pub max_depth: usize,
    /// Tolerance factor applied per nesting level.
    pub inner_tol_factor: f64,
}

impl ConvolutionOracle {
    pub fn new(params: ConvParams) -> Self {
        ConvolutionOracle {
            params,
            quad: QuadOptions::default(),
            max_depth: 4,
            inner_tol_factor: 0.1,
        }
    }

    pub fn with_tolerance(mut self, abs_tol: f64) -> Self {
        self.quad.abs_tol = abs_tol;
        self
    }

    /// `φ^{*n}(x)`, zero for `x < nλ`.
    pub fn conv_power(&self, n: usize, x: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::IndexRange("convolution power needs n >= 1".into()));
        }
        if n > self.max_depth {
            return Err(Error::DepthExceeded {
                n,
                max: self.max_depth,
            });
        }
        self.conv_inner(n, x, self.quad)
    }

    fn conv_inner(&self, n: usize, x: f64, opts: QuadOptions) -> Result<f64> {
        let p = &self.params;
        if n == 1 {
            return Ok(varphi(p, x));
        }
        if x < n as f64 * p.lambda {
            return Ok(0.0);
        }
        // support of φ(x-t)·φ^{*(n-1)}(t): t >= (n-1)λ and x - t >= λ
        let lo = (n - 1) as f64 * p.lambda;
        let hi = x - p.lambda;
        let inner = QuadOptions {
            abs_tol: opts.abs_tol * self.inner_tol_factor,
            ..opts
        };
        let mut failure = None;
        let r = integrate(
            |t| match self.conv_inner(n - 1, t, inner) {
                Ok(v) => v / (x - t + p.a),
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            &opts,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(r?.value)
    }

    /// `f_{n-1}(y) = (y+n)/n! · (λ+a) · φ^{*n}((λ+a) y + nλ)`.
    pub fn f_from_conv(&self, n: usize, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::Domain { x: y, min: 0.0 });
        }
        let p = &self.params;
        let x = p.scale() * y + n as f64 * p.lambda;
        let conv = self.conv_power(n, x)?;
        let nf = rat_to_f64(&BigRational::from_integer(factorial(n)));
        Ok((y + n as f64) / nf * p.scale() * conv)
    }
}

pub fn conv_power_quadrature(p: &ConvParams, n: usize, x: f64) -> Result<f64> {
    ConvolutionOracle::new(*p).conv_power(n, x)
}

pub fn f_from_conv(p: &ConvParams, n: usize, y: f64) -> Result<f64> {
    ConvolutionOracle::new(*p).f_from_conv(n, y)
}

/// `φ^{*n}(x) = n!/(x + na) · f_{n-1}((x - nλ)/(λ+a))` using the series
/// evaluator for `f_{n-1}`.
pub fn reconstruct_from_f(p: &ConvParams, n: usize, x: f64, order: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::IndexRange("convolution power needs n >= 1".into()));
    }
    let min = n as f64 * p.lambda;
    if !(x >= min) {
        return Err(Error::Domain { x, min });
    }
    let y = (x - min) / p.scale();
    let f = FEvaluator::cached(n - 1, order)?.eval(y)?;
    let nf = rat_to_f64(&BigRational::from_integer(factorial(n)));
    Ok(nf / (x + n as f64 * p.a) * f.value)
}

/// `f_n` by repeated cumulative integration on a uniform grid.
///
/// Each level integrates `f_{k-1}(s)/(s+k)` with a fourth-order composite
/// rule (cubic through four neighbouring nodes per panel). The panel count is
/// doubled until two successive results agree within `tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CumulativeOracle {
    pub panels: usize,
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for CumulativeOracle {
    fn default() -> Self {
        CumulativeOracle {
            panels: 4096,
            tol: 1e-10,
            max_panels: 1 << 20,
        }
    }
}

/// Result of a refinement study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridValue {
    pub value: f64,
    pub panels: usize,
    /// Change against the previous (half as fine) grid.
    pub change: f64,
}

impl CumulativeOracle {
    /// `f_n(y)` on a grid with exactly `panels` panels.
    pub fn on_grid(&self, n: usize, y: f64, panels: usize) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let panels = panels.max(3);
        let h = y / panels as f64;
        let mut values = vec![1.0; panels + 1];
        let mut integrand = vec![0.0; panels + 1];
        for k in 1..=n {
            for (i, g) in integrand.iter_mut().enumerate() {
                let s = i as f64 * h;
                *g = values[i] / (s + k as f64);
            }
            values[0] = 0.0;
            for i in 0..panels {
                let w = &integrand;
                let piece = if i == 0 {
                    9.0 * w[0] + 19.0 * w[1] - 5.0 * w[2] + w[3]
                } else if i == panels - 1 {
                    w[i - 2] - 5.0 * w[i - 1] + 19.0 * w[i] + 9.0 * w[i + 1]
                } else {
                    -w[i - 1] + 13.0 * w[i] + 13.0 * w[i + 1] - w[i + 2]
                };
                values[i + 1] = values[i] + piece * h / 24.0;
            }
        }
        values[panels]
    }

    pub fn eval(&self, n: usize, y: f64) -> Result<GridValue> {
        if !(y >= 0.0) {
            return Err(Error::Domain { x: y, min: 0.0 });
        }
        if n == 0 || y == 0.0 {
            let value = if n == 0 { 1.0 } else { 0.0 };
            return Ok(GridValue {
                value,
                panels: 0,
                change: 0.0,
            });
        }
        let mut panels = self.panels.max(3);
        let mut prev = self.on_grid(n, y, panels);
        loop {
            let next_panels = panels * 2;
            if next_panels > self.max_panels {
                return Err(Error::GridTooCoarse {
                    panels,
                    change: f64::NAN,
                    tol: self.tol,
                });
            }
            let next = self.on_grid(n, y, next_panels);
            let change = (next - prev).abs();
            if change <= self.tol {
                return Ok(GridValue {
                    value: next,
                    panels: next_panels,
                    change,
                });
            }
            if next_panels * 2 > self.max_panels {
                return Err(Error::GridTooCoarse {
                    panels: next_panels,
                    change,
                    tol: self.tol,
                });
            }
            panels = next_panels;
            prev = next;
        }
    }
}

pub fn f_quadrature_oracle(n: usize, y: f64) -> Result<f64> {
    Ok(CumulativeOracle::default().eval(n, y)?.value)
}

/// Upper end of the `J`-iterate integrals; the neglected tail is
/// `O(ln(T)^{m-2} / T)`.
pub const J_ORACLE_CUTOFF: f64 = 1e15;

/// `J^m[1](x)` by nested quadrature, independent of the series code.
///
/// With `D_m = J^m[1] - ln^m/m!`, which vanishes at infinity,
///
/// ```text
/// D_m(x) = -∫_x^∞ [D_{m-1}(t-1) + (ln(t-1)^{m-1} - ln(t)^{m-1})/(m-1)!] dt/t
/// ```
///
/// and `D_0 = D_1 = 0`. The integral is taken in `u = ln t`. Cost grows
/// like `evals^(m-1)`.
pub fn j_iterate_quadrature(m: usize, x: f64, opts: &QuadOptions) -> Result<f64> {
    let min = m.max(1) as f64;
    if !(x >= min) {
        return Err(Error::Domain { x, min });
    }
    let mf = rat_to_f64(&BigRational::from_integer(factorial(m)));
    Ok(x.ln().powi(m as i32) / mf + j_remainder(m, x, opts)?)
}

fn j_remainder(m: usize, x: f64, opts: &QuadOptions) -> Result<f64> {
    if m < 2 {
        return Ok(0.0);
    }
    let inner = QuadOptions {
        abs_tol: opts.abs_tol * 0.1,
        ..*opts
    };
    let kf = rat_to_f64(&BigRational::from_integer(factorial(m - 1)));
    let mut failure = None;
    let r = integrate(
        |u| {
            let t = u.exp();
            match j_remainder(m - 1, t - 1.0, &inner) {
                Ok(d) => d + log_power_gap(m - 1, t) / kf,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        x.ln(),
        J_ORACLE_CUTOFF.ln(),
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(-r?.value)
}

/// `ln(t-1)^k - ln(t)^k` without cancellation.
fn log_power_gap(k: usize, t: f64) -> f64 {
    let b = t.ln();
    let a = b + (-1.0 / t).ln_1p();
    let mut sum = 0.0;
    for i in 0..k {
        sum += a.powi(i as i32) * b.powi((k - 1 - i) as i32);
    }
    (a - b) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::DEFAULT_ORDER;

    #[test]
    fn params_validated() {
        assert!(ConvParams::new(0.0, 1.0).is_ok());
        assert!(ConvParams::new(-1.0, 1.0).is_err());
        assert!(ConvParams::new(2.0, -3.0).is_err());
        assert!(ConvParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn varphi_values() {
        let p = ConvParams::new(0.0, 1.0).unwrap();
        assert_eq!(varphi(&p, -1.0), 0.0);
        assert_eq!(varphi(&p, 1.0), 0.5);
        let p = ConvParams::new(1.0, 0.0).unwrap();
        assert_eq!(varphi(&p, 1.0), 1.0);
    }

    #[test]
    fn second_power_closed_form() {
        let p = ConvParams::new(0.0, 1.0).unwrap();
        let v = conv_power_quadrature(&p, 2, 1.0).unwrap();
        assert!((v - 2.0 * 2f64.ln() / 3.0).abs() < 1e-10);
        assert_eq!(conv_power_quadrature(&p, 2, -0.5).unwrap(), 0.0);
        assert!(matches!(
            conv_power_quadrature(&p, 5, 3.0),
            Err(Error::DepthExceeded { n: 5, max: 4 })
        ));
    }

    #[test]
    fn reconstruction() {
        let p = ConvParams::new(0.0, 1.0).unwrap();
        let v = reconstruct_from_f(&p, 1, 2.0, DEFAULT_ORDER).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let v = reconstruct_from_f(&p, 2, 1.0, DEFAULT_ORDER).unwrap();
        assert!((v - 2.0 * 2f64.ln() / 3.0).abs() < 1e-14);
        let p = ConvParams::new(1.0, 0.5).unwrap();
        assert!(reconstruct_from_f(&p, 2, 1.5, DEFAULT_ORDER).is_err());
    }

    #[test]
    fn f_from_conv_low_orders() {
        let p = ConvParams::new(1.0, 0.5).unwrap();
        assert!((f_from_conv(&p, 1, 0.7).unwrap() - 1.0).abs() < 1e-12);
        let p = ConvParams::new(0.0, 1.0).unwrap();
        assert!((f_from_conv(&p, 2, 1.0).unwrap() - 2f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn j_quadrature_low_orders() {
        let opts = QuadOptions::with_abs_tol(1e-12);
        assert_eq!(j_iterate_quadrature(0, 3.0, &opts).unwrap(), 1.0);
        assert!((j_iterate_quadrature(1, 3.0, &opts).unwrap() - 3f64.ln()).abs() < 1e-15);
        // J^2[1](x) = ln(x)^2/2 + Li_2(1/x); Li_2(1/2) = π²/12 - ln(2)²/2
        let l2 = std::f64::consts::LN_2;
        let want = l2 * l2 / 2.0 + std::f64::consts::PI.powi(2) / 12.0 - l2 * l2 / 2.0;
        assert!((j_iterate_quadrature(2, 2.0, &opts).unwrap() - want).abs() < 1e-10);
        assert!(j_iterate_quadrature(3, 2.5, &opts).is_err());
    }

    #[test]
    fn grid_oracle() {
        assert_eq!(f_quadrature_oracle(0, 3.3).unwrap(), 1.0);
        assert_eq!(f_quadrature_oracle(2, 0.0).unwrap(), 0.0);
        assert!((f_quadrature_oracle(1, 3.0).unwrap() - 4f64.ln()).abs() < 1e-9);
        let coarse = CumulativeOracle {
            panels: 4,
            tol: 1e-15,
            max_panels: 32,
        };
        assert!(matches!(coarse.eval(2, 5.0), Err(Error::GridTooCoarse { .. })));
    }
}
