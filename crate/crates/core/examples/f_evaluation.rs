//! f_n(y) from the series decomposition next to the grid-integration oracle.

use convpow::decomposition::f_eval;
use convpow::oracle::f_quadrature_oracle;
use convpow::DEFAULT_ORDER;

fn main() -> convpow::Result<()> {
    println!("{:>2} {:>5} {:>20} {:>20} {:>10} {:>10}", "n", "y", "series", "grid", "diff", "tail");
    for n in 0..=5 {
        for y in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let s = f_eval(n, y, DEFAULT_ORDER)?;
            let g = f_quadrature_oracle(n, y)?;
            println!(
                "{n:>2} {y:>5} {:>20.15} {g:>20.15} {:>10.2e} {:>10.2e}",
                s.value,
                (s.value - g).abs(),
                s.tail_estimate
            );
        }
    }
    Ok(())
}
