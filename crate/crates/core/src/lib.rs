//! Exact series engine for convolution powers of `1/x`.
//!
//! The `n`-fold convolution powers of `φ(x) = 1/(x+a)` (cut off below `λ`)
//! reduce to parameter-free functions `f_n` with `f_0 = 1`, `f_n(0) = 0` and
//! `(y+n) f_n'(y) = f_{n-1}(y)`. This crate computes `f_n` as a combination of
//! iterated log/series operators whose coefficients are exact rationals, and
//! checks every transcendental value against independent quadrature.
//!
//! * [`arith`]: binomials, Stirling numbers of the first kind, factorials.
//! * [`series`]: truncated series in `1/x`, log-power series, `H`, `∇`, `S`, `J`.
//! * [`amatrix`]: the integer triangles `A^s`.
//! * [`qcoeff`]: `Q_n` coefficients by recurrence and by closed form.
//! * [`decomposition`]: `β_k`, J-iterates and evaluation of `f_n`.
//! * [`oracle`]: nested-quadrature convolution powers and grid integration.
//! * [`cli`]: the report-producing commands behind the `convpow` binary.

// `!(x >= min)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amatrix;
pub mod arith;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod oracle;
pub mod qcoeff;
pub mod quad;
pub mod series;

pub use amatrix::{compute_a_matrix, AMatrix};
pub use decomposition::{beta_table, f_eval, BetaTable, FEvaluator, JIterate};
pub use error::{Error, Result};
pub use oracle::{ConvParams, ConvolutionOracle, CumulativeOracle};
pub use qcoeff::{q_closed_form, q_via_recurrence, QSeries};
pub use series::{EvalResult, LogSeries, PowerSeriesInvX, DEFAULT_ORDER};
