//! Adaptive Gauss–Kronrod (7/15) quadrature by recursive interval halving.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    /// Absolute tolerance on the whole interval.
    pub abs_tol: f64,
    /// Relative tolerance; the effective target is `max(abs_tol, rel_tol·|I|)`.
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_evals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_depth: 40,
            max_evals: 2_000_000,
        }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evals: usize,
}

struct Panel {
    kronrod: f64,
    error: f64,
    /// rounding floor: ε·50·∫|f|
    floor: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.abs() * WGK[7];
    for i in 0..7 {
        let dx = half * XGK[i];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[i] * (f1 + f2);
        abs_k += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    Panel {
        kronrod: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        floor: 50.0 * f64::EPSILON * abs_k * half.abs(),
    }
}

struct State {
    evals: usize,
    failed: bool,
    worst_error: f64,
}

fn recurse(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    opts: &QuadOptions,
    state: &mut State,
) -> (f64, f64) {
    let p = gk15(f, a, b);
    state.evals += 15;
    let err = p.error;
    if err <= tol.max(p.floor) || !p.kronrod.is_finite() {
        return (p.kronrod, err);
    }
    if depth >= opts.max_depth || state.evals >= opts.max_evals {
        state.failed = true;
        state.worst_error = state.worst_error.max(err);
        return (p.kronrod, err);
    }
    let mid = 0.5 * (a + b);
    let (v1, e1) = recurse(f, a, mid, 0.5 * tol, depth + 1, opts, state);
    let (v2, e2) = recurse(f, mid, b, 0.5 * tol, depth + 1, opts, state);
    (v1 + v2, e1 + e2)
}

/// `∫_a^b f(x) dx`. An empty or reversed interval integrates to zero.
///
/// Fails with diagnostics when some panel could not be refined below its
/// share of the tolerance and the accumulated error exceeds the target.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    if !(b > a) {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evals: 0,
        });
    }
    let first = gk15(&mut f, a, b);
    let target = opts.abs_tol.max(opts.rel_tol * first.kronrod.abs());
    let mut state = State {
        evals: 0,
        failed: false,
        worst_error: 0.0,
    };
    let (value, abs_error) = recurse(&mut f, a, b, target, 0, opts, &mut state);
    let evals = state.evals + 15;
    if !value.is_finite() || (state.failed && abs_error > target) {
        return Err(Error::Quadrature {
            a,
            b,
            value,
            error: abs_error,
            tol: target,
            evals,
        });
    }
    Ok(QuadResult {
        value,
        abs_error,
        evals,
    })
}
