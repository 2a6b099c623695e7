//! Commands behind the `convpow` binary. Each command returns a [`Report`]
//! that serializes to a stable JSON object
//! (`command`, `config`, `results`, `checks`, `elapsed_ms`) or to CSV.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or domain error.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amatrix::{best_alignment, AMatrix, BFile};
use crate::arith::rational_string;
use crate::decomposition::{beta_table, derivative_residual, f_eval, reflection, JIterate};
use crate::error::{Error, Result};
use crate::oracle::{
    f_quadrature_oracle, j_iterate_quadrature, reconstruct_from_f, ConvParams, ConvolutionOracle,
};
use crate::qcoeff::{dual_path_check, q_closed_form, q_sequence, q_sequence_full};
use crate::quad::QuadOptions;
use crate::series::{li1_power, nabla_ln, PowerSeriesInvX, DEFAULT_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the default truncation order.
pub const ORDER_ENV: &str = "CONVPOW_N";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    /// Truncation order of every `1/x` series.
    pub order: usize,
    /// Mantissa bits of the working float type (f64 only, so at most 53).
    pub precision_bits: u32,
    pub quad_tol: f64,
    /// Agreement threshold between numerical paths in `eval`.
    pub check_tol: f64,
    pub format: OutputFormat,
    pub bfile: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: DEFAULT_ORDER,
            precision_bits: 53,
            quad_tol: 1e-10,
            check_tol: 1e-6,
            format: OutputFormat::Json,
            bfile: None,
        }
    }
}

impl RunConfig {
    /// Defaults, with the truncation order taken from `CONVPOW_N` if set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Ok(v) = std::env::var(ORDER_ENV) {
            cfg.order = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{ORDER_ENV}={v:?} is not an integer")))?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 8 {
            return Err(Error::Config(format!("truncation order must be >= 8, got {}", self.order)));
        }
        if !(self.quad_tol > 0.0) || !(self.check_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.precision_bits == 0 || self.precision_bits > 53 {
            return Err(Error::Config(format!(
                "precision of {} bits unavailable; the float type has 53",
                self.precision_bits
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn within(name: impl Into<String>, diff: f64, tol: f64) -> Self {
        Check::new(name, diff <= tol, format!("|diff| = {diff:.3e} <= {tol:.1e}"))
    }

    fn from_result(name: impl Into<String>, r: Result<Check>) -> Self {
        let name = name.into();
        r.unwrap_or_else(|e| Check::new(name, false, format!("error: {e}")))
    }
}

/// A flat table for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    fn new(command: impl Into<String>, config: &RunConfig, started: Instant) -> Self {
        Report {
            command: command.into(),
            config: config.clone(),
            results: Value::Null,
            checks: Vec::new(),
            elapsed_ms: started.elapsed().as_millis() as u64,
            table: Table::default(),
        }
    }

    fn finish(mut self, started: Instant) -> Self {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Result table, or the check list when the command has no table.
    pub fn to_csv(&self) -> String {
        let table = if self.table.headers.is_empty() {
            let mut t = Table::new(&["check", "passed", "detail"]);
            for c in &self.checks {
                t.rows.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
            }
            t
        } else {
            self.table.clone()
        };
        let mut out = String::new();
        let line = |cells: &[String]| {
            cells
                .iter()
                .map(|c| {
                    if c.contains([',', '"', '\n']) {
                        format!("\"{}\"", c.replace('"', "\"\""))
                    } else {
                        c.clone()
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&line(&table.headers));
        out.push('\n');
        for r in &table.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
fn int_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

fn float_json(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Published reference triangles `A^0 .. A^6`, row-major.
pub fn table1_reference() -> Vec<Vec<Vec<u64>>> {
    vec![
        vec![vec![1]],
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 2]],
        vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 2, 2, 0], vec![0, 2, 9, 6]],
        vec![
            vec![1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0],
            vec![0, 3, 2, 0, 0],
            vec![0, 6, 15, 6, 0],
            vec![0, 6, 50, 72, 24],
        ],
        vec![
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 4, 2, 0, 0, 0],
            vec![0, 12, 21, 6, 0, 0],
            vec![0, 24, 120, 108, 24, 0],
            vec![0, 24, 350, 850, 600, 120],
        ],
        vec![
            vec![1, 0, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0, 0],
            vec![0, 5, 2, 0, 0, 0, 0],
            vec![0, 20, 27, 6, 0, 0, 0],
            vec![0, 60, 218, 144, 24, 0, 0],
            vec![0, 120, 1120, 1750, 840, 120, 0],
            vec![0, 120, 3014, 11250, 12900, 5400, 720],
        ],
    ]
}

fn bfile_check(a: &AMatrix, path: &PathBuf) -> Check {
    let name = format!("last_row_in_bfile[s={}]", a.s());
    let result = BFile::read(path).map(|b| best_alignment(a.last_row(), &b.values()));
    match result {
        Ok(Some(al)) => Check::new(
            name,
            al.complete,
            format!(
                "offset {} skipped {} matched {} of {}",
                al.offset,
                al.skipped,
                al.matched,
                a.last_row().len()
            ),
        ),
        Ok(None) => Check::new(name, false, "no common value found"),
        Err(e) => Check::new(name, false, format!("error: {e}")),
    }
}

pub fn cmd_amatrix(s: usize, check: bool, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let a = AMatrix::compute(s);
    let mut report = Report::new("amatrix", cfg, started);
    let dense = a.to_dense();
    let rows: Vec<Value> = dense
        .iter()
        .map(|r| Value::Array(r.iter().map(int_json).collect()))
        .collect();
    report.results = json!({
        "s": s,
        "rows": rows,
        "last_row": a.last_row().iter().map(int_json).collect::<Vec<_>>(),
        "determinant": int_json(&a.determinant()),
    });
    let mut headers: Vec<String> = vec!["m".into()];
    headers.extend((0..=s).map(|j| format!("j{j}")));
    report.table = Table {
        headers,
        rows: dense
            .iter()
            .enumerate()
            .map(|(m, r)| {
                std::iter::once(m.to_string())
                    .chain(r.iter().map(ToString::to_string))
                    .collect()
            })
            .collect(),
    };
    if check {
        let sv = a.check_special_values();
        use crate::amatrix::Identity::*;
        for id in [KroneckerColumn, FallingFactorialColumn, FactorialDiagonal] {
            let fails: Vec<_> = sv.failures.iter().filter(|f| f.identity == id).collect();
            report.checks.push(Check::new(
                format!("{}[s={s}]", serde_json::to_value(id).unwrap().as_str().unwrap()),
                fails.is_empty(),
                format!("{} mismatches", fails.len()),
            ));
        }
        report.checks.push(Check::new(
            format!("determinant_superfactorial[s={s}]"),
            sv.determinant_ok,
            format!("det = {}", sv.determinant),
        ));
        if let Some(reference) = table1_reference().get(s) {
            let ok = dense
                .iter()
                .zip(reference)
                .all(|(r, e)| r.iter().map(|v| v.to_u64()).eq(e.iter().map(|&x| Some(x))));
            report.checks.push(Check::new(format!("table1[s={s}]"), ok, "byte-exact comparison"));
        }
        if let Some(path) = &cfg.bfile {
            report.checks.push(bfile_check(&a, path));
        }
    }
    Ok(report.finish(started))
}

pub fn cmd_qcoeff(n: usize, s_max: usize, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if n < 2 {
        return Err(Error::IndexRange(format!("qcoeff needs n >= 2, got {n}")));
    }
    let started = Instant::now();
    let order = s_max.max(1);
    let rec = q_sequence(n, order)?.pop().expect("non-empty");
    let full = q_sequence_full(n, order)?.pop().expect("non-empty");
    let mut coefficients = Vec::new();
    let mut table = Table::new(&["s", "q", "recurrence", "full_relation"]);
    let mut agree = true;
    let mut matches_full = true;
    for s in 1..=s_max {
        let cf = q_closed_form(n, s)?;
        let r = rec.coeff(s);
        let f = full.coeff(s);
        agree &= cf == r;
        matches_full &= cf == f;
        coefficients.push(json!({
            "s": s,
            "value": rational_string(&cf),
            "recurrence": rational_string(&r),
            "full_relation": rational_string(&f),
        }));
        table
            .rows
            .push(vec![s.to_string(), rational_string(&cf), rational_string(&r), rational_string(&f)]);
    }
    let mut report = Report::new("qcoeff", cfg, started);
    report.results = json!({
        "n": n,
        "s_max": s_max,
        "coefficients": coefficients,
        "paths_agree": agree,
        "matches_full_relation": matches_full,
    });
    report.table = table;
    report.checks.push(Check::new(
        format!("dual_path[n={n},s<={s_max}]"),
        agree,
        "closed form vs operator recurrence, exact",
    ));
    Ok(report.finish(started))
}

pub fn cmd_beta(n_max: usize, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let t = beta_table(n_max, cfg.order)?;
    let mut report = Report::new("beta", cfg, started);
    report.results = Value::Array(
        t.entries()
            .iter()
            .map(|e| json!({ "n": e.n, "value": float_json(e.value), "tail": float_json(e.tail) }))
            .collect(),
    );
    let mut table = Table::new(&["n", "value", "tail"]);
    for e in t.entries() {
        table
            .rows
            .push(vec![e.n.to_string(), format!("{:.16e}", e.value), format!("{:.3e}", e.tail)]);
    }
    report.table = table;
    Ok(report.finish(started))
}

fn max_pairwise(values: &[f64]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            m = m.max((a - b).abs());
        }
    }
    m
}

/// `f_n(y)` from the series, the grid integration and (when the nesting depth
/// allows) the convolution quadrature at `λ = 0, a = 1`.
pub fn cmd_eval(n: usize, y: f64, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let series = f_eval(n, y, cfg.order)?;
    let quadrature = f_quadrature_oracle(n, y)?;
    let oracle = ConvolutionOracle::new(ConvParams::new(0.0, 1.0)?).with_tolerance(cfg.quad_tol);
    let reconstruction = if n < oracle.max_depth {
        Some(oracle.f_from_conv(n + 1, y)?)
    } else {
        None
    };
    let mut values = vec![series.value, quadrature];
    values.extend(reconstruction);
    let diff = max_pairwise(&values);
    let mut report = Report::new("eval", cfg, started);
    report.results = json!({
        "n": n,
        "y": float_json(y),
        "series": float_json(series.value),
        "series_tail": float_json(series.tail_estimate),
        "quadrature": float_json(quadrature),
        "reconstruction": reconstruction.map_or(Value::Null, float_json),
        "max_pairwise_diff": float_json(diff),
    });
    report.table = Table {
        headers: ["n", "y", "series", "quadrature", "reconstruction", "max_pairwise_diff"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            n.to_string(),
            y.to_string(),
            format!("{:.16e}", series.value),
            format!("{quadrature:.16e}"),
            reconstruction.map_or(String::new(), |v| format!("{v:.16e}")),
            format!("{diff:.3e}"),
        ]],
    };
    report.checks.push(Check::within("paths_agree", diff, cfg.check_tol));
    Ok(report.finish(started))
}

/// `φ^{*n}(x)` by nested quadrature and by reconstruction from `f_{n-1}`.
pub fn cmd_eval_conv(n: usize, x: f64, lambda: f64, a: f64, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let p = ConvParams::new(lambda, a)?;
    let quadrature = ConvolutionOracle::new(p).with_tolerance(cfg.quad_tol).conv_power(n, x)?;
    let reconstruction = if x >= n as f64 * lambda {
        reconstruct_from_f(&p, n, x, cfg.order)?
    } else {
        0.0
    };
    let diff = (quadrature - reconstruction).abs();
    let mut report = Report::new("eval", cfg, started);
    report.results = json!({
        "n": n,
        "x": float_json(x),
        "lambda": float_json(lambda),
        "a": float_json(a),
        "quadrature": float_json(quadrature),
        "reconstruction": float_json(reconstruction),
        "max_pairwise_diff": float_json(diff),
    });
    report.table = Table {
        headers: ["n", "x", "lambda", "a", "quadrature", "reconstruction", "max_pairwise_diff"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            n.to_string(),
            x.to_string(),
            lambda.to_string(),
            a.to_string(),
            format!("{quadrature:.16e}"),
            format!("{reconstruction:.16e}"),
            format!("{diff:.3e}"),
        ]],
    };
    report.checks.push(Check::within("paths_agree", diff, cfg.check_tol));
    Ok(report.finish(started))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Table1,
    Special,
    DualPath,
    Stirling,
    ClosedForms,
    Beta,
    Triangle,
    Reflection,
    Derivative,
    Elimination,
    SeriesTail,
    JIterates,
    BFile,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "table1" => Suite::Table1,
            "special" => Suite::Special,
            "dualpath" => Suite::DualPath,
            "stirling" => Suite::Stirling,
            "closed-forms" => Suite::ClosedForms,
            "beta" => Suite::Beta,
            "triangle" => Suite::Triangle,
            "reflection" => Suite::Reflection,
            "derivative" => Suite::Derivative,
            "elimination" => Suite::Elimination,
            "series-tail" => Suite::SeriesTail,
            "j-iterates" => Suite::JIterates,
            "bfile" => Suite::BFile,
            "all" => Suite::All,
            other => return Err(Error::Config(format!("unknown suite {other:?}"))),
        })
    }
}

impl Suite {
    pub const NAMES: [&'static str; 14] = [
        "table1",
        "special",
        "dualpath",
        "stirling",
        "closed-forms",
        "beta",
        "triangle",
        "reflection",
        "derivative",
        "elimination",
        "series-tail",
        "j-iterates",
        "bfile",
        "all",
    ];
}

/// Optional knobs of `verify`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyArgs {
    pub n: Option<usize>,
    pub y: Option<f64>,
    pub nmax: Option<usize>,
    pub smax: Option<usize>,
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

fn suite_table1() -> Vec<Check> {
    table1_reference()
        .iter()
        .enumerate()
        .map(|(s, block)| {
            let got = AMatrix::compute(s).to_dense();
            let ok = got
                .iter()
                .zip(block)
                .all(|(r, e)| r.iter().map(|v| v.to_u64()).eq(e.iter().map(|&x| Some(x))));
            Check::new(format!("table1[s={s}]"), ok, "byte-exact comparison")
        })
        .collect()
}

fn suite_special(s_max: usize) -> Vec<Check> {
    (0..=s_max)
        .into_par_iter()
        .map(|s| {
            let r = AMatrix::compute(s).check_special_values();
            Check::new(
                format!("special_values[s={s}]"),
                r.all_ok(),
                format!("{} identities, {} failures, det = {}", r.checked, r.failures.len(), r.determinant),
            )
        })
        .collect()
}

fn suite_dualpath(n_max: usize, s_max: usize) -> Vec<Check> {
    vec![Check::from_result(
        "dualpath",
        dual_path_check(n_max, s_max).map(|bad| {
            let detail = match bad.first() {
                None => format!("2 <= n <= {n_max}, s <= {s_max}: exact equality"),
                Some(b) => format!(
                    "first mismatch n={} s={}: {} vs {}",
                    b.n,
                    b.s,
                    rational_string(&b.recurrence),
                    rational_string(&b.closed_form)
                ),
            };
            Check::new(format!("dualpath[n<={n_max},s<={s_max}]"), bad.is_empty(), detail)
        }),
    )]
}

fn suite_stirling() -> Vec<Check> {
    let order = 30;
    let li1 = nabla_ln(order);
    let mut power = PowerSeriesInvX::one(order);
    let mut fact = BigRational::from_integer(BigInt::from(1));
    let mut out = Vec::new();
    for n in 0..=6usize {
        if n > 0 {
            power = power.mul(&li1).expect("equal orders");
            fact *= BigRational::from_integer(BigInt::from(n));
        }
        let ok = li1_power(n, order).coeffs() == power.scale(&fact.recip()).coeffs();
        out.push(Check::new(format!("stirling_polylog[n={n}]"), ok, "exact, order 30"));
    }
    out
}

fn suite_closed_forms(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for y in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        out.push(Check::from_result(
            format!("f1_log[y={y}]"),
            f_eval(1, y, cfg.order)
                .map(|r| Check::within(format!("f1_log[y={y}]"), (r.value - (y + 1.0).ln()).abs(), 1e-12)),
        ));
    }
    let p = ConvParams::new(0.0, 1.0).expect("valid");
    let oracle = ConvolutionOracle::new(p).with_tolerance(cfg.quad_tol);
    for x in [0.5, 1.0, 2.0, 10.0] {
        let name = format!("conv2_closed_form[x={x}]");
        out.push(Check::from_result(
            name.clone(),
            oracle
                .conv_power(2, x)
                .map(|v| Check::within(name, (v - 2.0 * (x + 1.0).ln() / (x + 2.0)).abs(), 1e-9)),
        ));
    }
    out
}

fn suite_beta(cfg: &RunConfig) -> Vec<Check> {
    let name = "beta_0_1_2";
    vec![Check::from_result(
        name,
        beta_table(2, cfg.order).map(|t| {
            let target = -std::f64::consts::PI.powi(2) / 12.0;
            let ok = t.value(0) == 1.0 && t.value(1) == 0.0 && (t.value(2) - target).abs() <= 1e-10;
            Check::new(
                name,
                ok,
                format!("beta_2 = {:.16e}, -pi^2/12 = {target:.16e}", t.value(2)),
            )
        }),
    )]
}

pub const PARAM_SET: [(f64, f64); 4] = [(0.0, 1.0), (1.0, 0.5), (-0.25, 1.0), (2.0, -1.5)];
pub const Y_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

fn suite_triangle(cfg: &RunConfig) -> Vec<Check> {
    let mut jobs: Vec<(String, Box<dyn Fn() -> Result<f64> + Send + Sync>)> = Vec::new();
    let order = cfg.order;
    for n in 0..=4usize {
        for y in Y_GRID {
            jobs.push((
                format!("series_vs_grid[n={n},y={y}]"),
                Box::new(move || Ok((f_eval(n, y, order)?.value - f_quadrature_oracle(n, y)?).abs())),
            ));
        }
    }
    let tol = cfg.quad_tol;
    for (lambda, a) in PARAM_SET {
        for n in 1..=3usize {
            for y in Y_GRID {
                jobs.push((
                    format!("reconstruction_vs_conv[n={n},y={y},lambda={lambda},a={a}]"),
                    Box::new(move || {
                        let p = ConvParams::new(lambda, a)?;
                        let x = p.scale() * y + n as f64 * lambda;
                        let q = ConvolutionOracle::new(p).with_tolerance(tol).conv_power(n, x)?;
                        Ok((reconstruct_from_f(&p, n, x, order)? - q).abs())
                    }),
                ));
            }
        }
    }
    jobs.par_iter()
        .map(|(name, job)| Check::from_result(name.clone(), job().map(|d| Check::within(name.clone(), d, 1e-6))))
        .collect()
}

fn suite_reflection(cfg: &RunConfig, ns: Vec<usize>, ys: Vec<f64>) -> Vec<Check> {
    let opts = QuadOptions::with_abs_tol(cfg.quad_tol.min(1e-11));
    let order = cfg.order;
    let grid: Vec<(usize, f64)> = ns.iter().flat_map(|&n| ys.iter().map(move |&y| (n, y))).collect();
    grid.par_iter()
        .map(|&(n, y)| {
            let name = format!("reflection[n={n},y={y}]");
            Check::from_result(
                name.clone(),
                reflection(n, y, order, &opts).map(|r| Check::within(name, r.residual(), 1e-7)),
            )
        })
        .collect()
}

fn suite_derivative(cfg: &RunConfig) -> Vec<Check> {
    let order = cfg.order;
    let mut out = Vec::new();
    for n in 1..=4usize {
        for y in Y_GRID {
            let name = format!("derivative[n={n},y={y}]");
            out.push(Check::from_result(
                name.clone(),
                derivative_residual(n, y, 1e-4, order).map(|r| Check::within(name, r, 1e-6)),
            ));
        }
        let name = format!("derivative_h2_scaling[n={n},y=1]");
        out.push(Check::from_result(
            name.clone(),
            (|| {
                let coarse = derivative_residual(n, 1.0, 2e-4, order)?;
                let fine = derivative_residual(n, 1.0, 1e-4, order)?;
                let ratio = coarse / fine;
                Ok(Check::new(
                    name,
                    (3.0..=5.0).contains(&ratio),
                    format!("residual(2h)/residual(h) = {ratio:.3}"),
                ))
            })(),
        ));
    }
    out
}

fn suite_elimination(cfg: &RunConfig) -> Vec<Check> {
    let tol = cfg.quad_tol;
    let mut grid = Vec::new();
    for n in 1..=3usize {
        for y in [0.5, 1.0, 2.0] {
            grid.push((n, y));
        }
    }
    grid.par_iter()
        .map(|&(n, y)| {
            let name = format!("parameter_elimination[n={n},y={y}]");
            let values: Result<Vec<f64>> = PARAM_SET
                .iter()
                .map(|&(l, a)| ConvolutionOracle::new(ConvParams::new(l, a)?).with_tolerance(tol).f_from_conv(n, y))
                .collect();
            Check::from_result(name.clone(), values.map(|v| Check::within(name, max_pairwise(&v), 2e-7)))
        })
        .collect()
}

fn suite_series_tail() -> Vec<Check> {
    [16usize, 32, 64]
        .iter()
        .map(|&n| {
            let short = PowerSeriesInvX::polylog(2, n).eval(3.0);
            let long = PowerSeriesInvX::polylog(2, 2 * n).eval(3.0);
            let name = format!("li2_tail_doubling[N={n},x=3]");
            Check::from_result(
                name.clone(),
                short.and_then(|s| {
                    let l = long?;
                    let diff = (s.value - l.value).abs();
                    Ok(Check::new(
                        name,
                        diff <= s.tail_estimate,
                        format!("diff {diff:.3e} <= tail {:.3e}", s.tail_estimate),
                    ))
                }),
            )
        })
        .collect()
}

/// `J^m[1](4)` assembled from `Q_0..Q_m` against nested quadrature, m <= 4.
fn suite_j_iterates(cfg: &RunConfig) -> Vec<Check> {
    let opts = QuadOptions::with_abs_tol(1e-11);
    let qs = match q_sequence_full(4, cfg.order) {
        Ok(q) => q,
        Err(e) => return vec![Check::new("j_iterates", false, e.to_string())],
    };
    (0..=4usize)
        .into_par_iter()
        .map(|m| {
            let name = format!("j_iterate_vs_quadrature[m={m},x=4]");
            let r = JIterate::from_q(m, &qs)
                .and_then(|j| j.eval(4.0))
                .and_then(|v| Ok((v.value, j_iterate_quadrature(m, 4.0, &opts)?)));
            Check::from_result(name.clone(), r.map(|(a, b)| Check::within(name, (a - b).abs(), 1e-8)))
        })
        .collect()
}

pub fn cmd_verify(suite: Suite, args: &VerifyArgs, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let started = Instant::now();
    let nmax = args.nmax.unwrap_or(8);
    let smax = args.smax.unwrap_or(40);
    let refl_ns = args.n.map_or_else(|| (0..=4).collect(), |n| vec![n]);
    let refl_ys = args.y.map_or_else(|| Y_GRID.to_vec(), |y| vec![y]);
    let bfile_job = || -> Vec<Check> {
        match &cfg.bfile {
            None => vec![Check::new("bfile", false, "no --bfile given")],
            Some(path) => (0..=args.smax.unwrap_or(6))
                .map(|s| bfile_check(&AMatrix::compute(s), path))
                .collect(),
        }
    };
    let mut jobs: Vec<Job> = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Table1) {
        jobs.push(Box::new(suite_table1));
    }
    if want(Suite::Special) {
        jobs.push(Box::new(|| suite_special(12)));
    }
    if want(Suite::DualPath) {
        jobs.push(Box::new(move || suite_dualpath(nmax, smax)));
    }
    if want(Suite::Stirling) {
        jobs.push(Box::new(suite_stirling));
    }
    if want(Suite::ClosedForms) {
        jobs.push(Box::new(|| suite_closed_forms(cfg)));
    }
    if want(Suite::Beta) {
        jobs.push(Box::new(|| suite_beta(cfg)));
    }
    if want(Suite::Triangle) {
        jobs.push(Box::new(|| suite_triangle(cfg)));
    }
    if want(Suite::Reflection) {
        let (ns, ys) = (refl_ns.clone(), refl_ys.clone());
        jobs.push(Box::new(move || suite_reflection(cfg, ns.clone(), ys.clone())));
    }
    if want(Suite::Derivative) {
        jobs.push(Box::new(|| suite_derivative(cfg)));
    }
    if want(Suite::Elimination) {
        jobs.push(Box::new(|| suite_elimination(cfg)));
    }
    if want(Suite::SeriesTail) {
        jobs.push(Box::new(suite_series_tail));
    }
    if want(Suite::JIterates) {
        jobs.push(Box::new(|| suite_j_iterates(cfg)));
    }
    if suite == Suite::BFile || (suite == Suite::All && cfg.bfile.is_some()) {
        jobs.push(Box::new(bfile_job));
    }
    let checks: Vec<Check> = jobs.par_iter().flat_map(|job| job()).collect();
    let mut report = Report::new("verify", cfg, started);
    let passed = checks.iter().filter(|c| c.passed).count();
    report.results = json!({ "checks_run": checks.len(), "passed": passed, "failed": checks.len() - passed });
    report.checks = checks;
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig {
            order: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = RunConfig {
            quad_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = RunConfig {
            precision_bits: 128,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn suite_names_parse() {
        for name in Suite::NAMES {
            assert!(name.parse::<Suite>().is_ok(), "{name}");
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn csv_quoting() {
        let cfg = RunConfig {
            format: OutputFormat::Csv,
            ..Default::default()
        };
        let mut r = Report::new("x", &cfg, Instant::now());
        r.checks.push(Check::new("a,b", true, "say \"hi\""));
        assert_eq!(r.render(), "check,passed,detail\n\"a,b\",true,\"say \"\"hi\"\"\"\n");
    }

    #[test]
    fn pairwise() {
        assert_eq!(max_pairwise(&[1.0, 1.5, 0.75]), 0.75);
        assert_eq!(max_pairwise(&[2.0]), 0.0);
    }
}
