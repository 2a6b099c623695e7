//! φ^{*n}(x) by nested quadrature and by reconstruction from f_{n-1}, for
//! several cut-off parameters (λ, a).

use convpow::oracle::{reconstruct_from_f, ConvParams, ConvolutionOracle};
use convpow::DEFAULT_ORDER;

fn main() -> convpow::Result<()> {
    let params = [(0.0, 1.0), (1.0, 0.5), (-0.25, 1.0), (2.0, -1.5)];
    println!("{:>6} {:>6} {:>2} {:>7} {:>20} {:>20} {:>10}", "lambda", "a", "n", "x", "quadrature", "reconstructed", "diff");
    for (lambda, a) in params {
        let p = ConvParams::new(lambda, a)?;
        let oracle = ConvolutionOracle::new(p);
        for n in 1..=3 {
            for y in [0.5, 2.0] {
                let x = p.scale() * y + n as f64 * lambda;
                let q = oracle.conv_power(n, x)?;
                let r = reconstruct_from_f(&p, n, x, DEFAULT_ORDER)?;
                println!("{lambda:>6} {a:>6} {n:>2} {x:>7.3} {q:>20.15} {r:>20.15} {:>10.2e}", (q - r).abs());
            }
        }
    }
    Ok(())
}
