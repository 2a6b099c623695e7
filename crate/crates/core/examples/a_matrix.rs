//! Prints the triangles A^0 .. A^s (default 6) with their special-value checks.
//!
//! ```text
//! cargo run --example a_matrix -- 8
//! ```

use convpow::amatrix::AMatrix;
use convpow::arith::superfactorial;

fn main() {
    let s_max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    for s in 0..=s_max {
        let a = AMatrix::compute(s);
        let report = a.check_special_values();
        println!(
            "A^{s}  det = {} (superfactorial {}), {} identities checked, {} failures",
            report.determinant,
            superfactorial(s),
            report.checked,
            report.failures.len()
        );
        println!("{a}");
    }
}
