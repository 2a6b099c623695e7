//! Residuals of the derivative identity (y+n) f_n' = f_{n-1} and of the
//! reflection identity, evaluated on the series decomposition.

use convpow::decomposition::{derivative_residual, reflection};
use convpow::quad::QuadOptions;
use convpow::DEFAULT_ORDER;

fn main() -> convpow::Result<()> {
    let opts = QuadOptions::with_abs_tol(1e-11);
    println!("{:>2} {:>4} {:>12} {:>12} {:>8} {:>12}", "n", "y", "deriv(h)", "deriv(2h)", "ratio", "reflection");
    for n in 1..=5 {
        for y in [0.5, 1.0, 2.0, 5.0] {
            let fine = derivative_residual(n, y, 1e-4, DEFAULT_ORDER)?;
            let coarse = derivative_residual(n, y, 2e-4, DEFAULT_ORDER)?;
            let r = reflection(n, y, DEFAULT_ORDER, &opts)?;
            println!(
                "{n:>2} {y:>4} {fine:>12.3e} {coarse:>12.3e} {:>8.3} {:>12.3e}",
                coarse / fine,
                r.residual()
            );
        }
    }
    Ok(())
}
