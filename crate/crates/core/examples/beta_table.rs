//! β_0 .. β_n with propagated error bars, at two truncation orders.

use convpow::decomposition::beta_table;

fn main() -> convpow::Result<()> {
    let n_max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let lo = beta_table(n_max, 64)?;
    let hi = beta_table(n_max, 96)?;
    println!("{:>3} {:>24} {:>10} {:>10}", "n", "beta_n (N=96)", "tail", "|N64-N96|");
    for n in 0..=n_max {
        println!(
            "{n:>3} {:>24.16e} {:>10.2e} {:>10.2e}",
            hi.value(n),
            hi.tail(n),
            (lo.value(n) - hi.value(n)).abs()
        );
    }
    println!("-pi^2/12 = {:.16e}", -std::f64::consts::PI.powi(2) / 12.0);
    Ok(())
}
