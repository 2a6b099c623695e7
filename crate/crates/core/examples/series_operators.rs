//! The operators H, ∇, S and J on small truncated series.

use num_rational::BigRational;

use convpow::arith::rational_string;
use convpow::series::{apply_j, harmonic_h, li1_power, nabla_ln, shift_s, LogSeries, PowerSeriesInvX};

fn show(label: &str, s: &PowerSeriesInvX) {
    let c: Vec<String> = s.coeffs().iter().map(rational_string).collect();
    println!("{label:<28} [{}]", c.join(", "));
}

fn show_log(label: &str, g: &LogSeries) {
    println!("{label}");
    for (j, p) in g.parts().iter().enumerate() {
        show(&format!("  ln^{j}"), p);
    }
}

fn main() -> convpow::Result<()> {
    let n = 6;
    let li2 = PowerSeriesInvX::polylog(2, n);
    show("Li_1(1/x)", &nabla_ln(n));
    show("Li_2(1/x)", &li2);
    show("backward diff of Li_2", &li2.backward_diff());
    show("Li_1^2 / 2", &li1_power(2, n));
    show_log("H[Li_1]", &harmonic_h(&nabla_ln(n)));
    show_log("S[ln^2]", &shift_s(&LogSeries::log_power(2, BigRational::from_integer(1.into()), n))?);

    let mut j = LogSeries::from_series(PowerSeriesInvX::one(n));
    for m in 1..=3 {
        j = apply_j(&j)?;
        show_log(&format!("J^{m}[1]"), &j);
    }
    println!("J^3[1](4) = {:.15}", j.eval(4.0)?.value);
    Ok(())
}
