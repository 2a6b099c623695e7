//! Quadrature ground truth and the bridges to the series evaluator.

use convpow::decomposition::f_eval;
use convpow::oracle::{
    conv_power_quadrature, f_from_conv, f_quadrature_oracle, reconstruct_from_f, varphi, ConvParams,
    ConvolutionOracle, CumulativeOracle,
};
use convpow::{Error, DEFAULT_ORDER};

const PARAMS: [(f64, f64); 4] = [(0.0, 1.0), (1.0, 0.5), (-0.25, 1.0), (2.0, -1.5)];

#[test]
fn cut_off_below_n_lambda() {
    for (lambda, a) in PARAMS {
        let p = ConvParams::new(lambda, a).unwrap();
        for n in 1..=3 {
            let edge = n as f64 * lambda;
            for dx in [1e-3, 0.1, 0.5, 2.0] {
                assert_eq!(conv_power_quadrature(&p, n, edge - dx).unwrap(), 0.0, "n={n} p={p:?}");
            }
        }
        assert_eq!(varphi(&p, lambda - 1e-12), 0.0);
        assert!(varphi(&p, lambda) > 0.0);
    }
}

#[test]
fn worked_values() {
    let p = ConvParams::new(0.0, 1.0).unwrap();
    let v = conv_power_quadrature(&p, 2, 1.0).unwrap();
    assert!((v - 2.0 * 2f64.ln() / 3.0).abs() < 1e-10);
    assert!((reconstruct_from_f(&p, 1, 2.0, DEFAULT_ORDER).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((reconstruct_from_f(&p, 2, 1.0, DEFAULT_ORDER).unwrap() - 2.0 * 2f64.ln() / 3.0).abs() < 1e-14);
    assert!((f_from_conv(&p, 2, 1.0).unwrap() - 2f64.ln()).abs() < 1e-7);

    let p = ConvParams::new(1.0, 0.5).unwrap();
    let q = conv_power_quadrature(&p, 2, 3.0).unwrap();
    assert!((q - reconstruct_from_f(&p, 2, 3.0, DEFAULT_ORDER).unwrap()).abs() < 1e-6);
    for y in [0.0, 0.7, 4.0] {
        assert!((f_from_conv(&p, 1, y).unwrap() - 1.0).abs() < 1e-12);
    }

    let p = ConvParams::new(-0.25, 1.0).unwrap();
    let q = conv_power_quadrature(&p, 2, 0.0).unwrap();
    assert!((q - reconstruct_from_f(&p, 2, 0.0, DEFAULT_ORDER).unwrap()).abs() < 1e-6);
}

#[test]
fn rejected_inputs() {
    assert!(matches!(ConvParams::new(-1.0, 1.0), Err(Error::InvalidParams(_))));
    let p = ConvParams::new(0.0, 1.0).unwrap();
    assert!(matches!(conv_power_quadrature(&p, 5, 2.0), Err(Error::DepthExceeded { .. })));
    assert!(conv_power_quadrature(&p, 0, 2.0).is_err());
    assert!(matches!(reconstruct_from_f(&p, 2, -0.5, DEFAULT_ORDER), Err(Error::Domain { .. })));
    assert!(f_from_conv(&p, 2, -1.0).is_err());
    assert!(f_quadrature_oracle(2, -1.0).is_err());
}

#[test]
fn grid_integration() {
    assert!((f_quadrature_oracle(1, 3.0).unwrap() - 4f64.ln()).abs() < 1e-9);
    assert_eq!(f_quadrature_oracle(0, 2.5).unwrap(), 1.0);
    let f2 = f_eval(2, 2.0, DEFAULT_ORDER).unwrap().value;
    assert!((f_quadrature_oracle(2, 2.0).unwrap() - f2).abs() < 1e-7);
    // fourth-order rule: doubling the panels cuts the error by about 16
    let g = CumulativeOracle::default();
    let exact = 4f64.ln();
    let e1 = (g.on_grid(1, 3.0, 64) - exact).abs();
    let e2 = (g.on_grid(1, 3.0, 128) - exact).abs();
    assert!((10.0..=22.0).contains(&(e1 / e2)), "ratio {}", e1 / e2);
}

#[test]
fn parameters_eliminated() {
    for n in 1..=3 {
        for y in [0.5, 1.0, 2.0] {
            let values: Vec<f64> = PARAMS
                .iter()
                .map(|&(l, a)| ConvolutionOracle::new(ConvParams::new(l, a).unwrap()).f_from_conv(n, y).unwrap())
                .collect();
            let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread <= 2e-10, "n={n} y={y}: {values:?}");
        }
    }
}

#[test]
fn three_way_agreement() {
    let p = ConvParams::new(0.0, 1.0).unwrap();
    for n in 0..=3 {
        for y in [0.5, 1.0, 2.0, 5.0] {
            let s = f_eval(n, y, DEFAULT_ORDER).unwrap().value;
            let g = f_quadrature_oracle(n, y).unwrap();
            let c = f_from_conv(&p, n + 1, y).unwrap();
            assert!((s - g).abs() <= 1e-6 && (s - c).abs() <= 1e-6 && (g - c).abs() <= 1e-6, "n={n} y={y}");
        }
    }
}
