//! J-iterates assembled from Q-series, checked against nested quadrature.
//!
//! Prints, for each m, the value from the full shift relation, the value from
//! the truncated recurrence, and the quadrature reference at x = 4.

use convpow::decomposition::JIterate;
use convpow::oracle::j_iterate_quadrature;
use convpow::qcoeff::{q_sequence, q_sequence_full};
use convpow::quad::QuadOptions;

fn main() -> convpow::Result<()> {
    let order = 64;
    let m_max = 4;
    let x = 4.0;
    let full = q_sequence_full(m_max, order)?;
    let short = q_sequence(m_max, order)?;
    let opts = QuadOptions::with_abs_tol(1e-11);
    println!("{:>2} {:>22} {:>22} {:>22} {:>10} {:>10}", "m", "full", "truncated", "quadrature", "err_full", "err_trunc");
    for m in 0..=m_max {
        let a = JIterate::from_q(m, &full)?.eval(x)?.value;
        let b = JIterate::from_q(m, &short)?.eval(x)?.value;
        let q = j_iterate_quadrature(m, x, &opts)?;
        println!("{m:>2} {a:>22.15} {b:>22.15} {q:>22.15} {:>10.2e} {:>10.2e}", (a - q).abs(), (b - q).abs());
    }
    Ok(())
}
