//! q_{n,s} by the operator recurrence and by the A^s closed form, side by side.
//!
//! ```text
//! cargo run --example q_coefficients -- 5 8
//! ```

use convpow::arith::rational_string;
use convpow::qcoeff::{dual_path_check, q_closed_form, q_sequence, q_sequence_full};

fn main() -> convpow::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().ok());
    let n_max = args.next().flatten().unwrap_or(5);
    let s_max = args.next().flatten().unwrap_or(8);
    let rec = q_sequence(n_max, s_max)?;
    let full = q_sequence_full(n_max, s_max)?;
    for n in 2..=n_max {
        println!("n = {n}");
        println!("  {:>3} {:>24} {:>24} {:>24}", "s", "closed form", "recurrence", "full relation");
        for s in 1..=s_max {
            println!(
                "  {s:>3} {:>24} {:>24} {:>24}",
                rational_string(&q_closed_form(n, s)?),
                rational_string(&rec[n].coeff(s)),
                rational_string(&full[n].coeff(s))
            );
        }
    }
    let bad = dual_path_check(n_max, s_max)?;
    println!("closed form vs recurrence mismatches: {}", bad.len());
    Ok(())
}
