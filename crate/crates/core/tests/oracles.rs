//! Operator values against closed forms computed here, independently of the
//! library's gamma function.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use fracvar_core::frac1d::{caputo_deriv, gamma_fn, gl_weights, rl_deriv, rl_integral};
use fracvar_core::{Direction, FracOrder, Samples1D, Scheme, TimeGrid};
use proptest::prelude::*;

fn unit(n: usize) -> TimeGrid {
    TimeGrid::new(0.0, 1.0, n).unwrap()
}

// Γ(1/2) = √π, Γ(3/2) = √π/2, Γ(5/2) = 3√π/4
const SQRT_PI: f64 = 1.772_453_850_905_516;

#[test]
fn gamma_at_half_integers() {
    assert_relative_eq!(gamma_fn(0.5).unwrap(), SQRT_PI, max_relative = 1e-12);
    assert_relative_eq!(gamma_fn(1.5).unwrap(), SQRT_PI / 2.0, max_relative = 1e-12);
    assert_relative_eq!(gamma_fn(2.5).unwrap(), 0.75 * SQRT_PI, max_relative = 1e-12);
    assert_relative_eq!(gamma_fn(6.0).unwrap(), 120.0, max_relative = 1e-12);
    assert!(gamma_fn(0.0).is_err());
}

#[test]
fn gl_weights_by_hand() {
    let w = gl_weights(FracOrder::HALF, 4);
    let expect = [1.0, -0.5, -0.125, -0.0625, -0.0390625];
    for (a, b) in w.w().iter().zip(expect) {
        assert_relative_eq!(*a, b, max_relative = 1e-15);
    }
}

#[test]
fn half_integral_of_one() {
    // I^{1/2} 1 = t^{1/2} / Γ(3/2)
    let f = Samples1D::from_fn(unit(512), |_| 1.0).unwrap();
    let i = rl_integral(&f, 0.5, Direction::Forward).unwrap();
    assert_eq!(i.values()[0], 0.0);
    assert_relative_eq!(i.values()[512], 2.0 / SQRT_PI, max_relative = 1e-10);
    let g = Samples1D::from_fn(unit(512), |t| t).unwrap();
    let i1 = rl_integral(&g, 1.0, Direction::Forward).unwrap();
    for (j, v) in i1.values().iter().enumerate() {
        let t = j as f64 / 512.0;
        assert!((v - t * t / 2.0).abs() < 1e-6);
    }
}

#[test]
fn caputo_power_values_at_one() {
    let g = unit(2048);
    let lin = Samples1D::from_fn(g, |t| t).unwrap();
    let sq = Samples1D::from_fn(g, |t| t * t).unwrap();
    let c1 = caputo_deriv(&lin, FracOrder::HALF, Direction::Forward, Scheme::L1);
    let c2 = caputo_deriv(&sq, FracOrder::HALF, Direction::Forward, Scheme::L1);
    assert!((c1.values()[2048] - 2.0 / SQRT_PI).abs() < 1e-3);
    assert!((c2.values()[2048] - 8.0 / (3.0 * SQRT_PI)).abs() < 1e-3);
    // GL is first order, still close at this resolution
    let g1 = caputo_deriv(&lin, FracOrder::HALF, Direction::Forward, Scheme::Gl);
    assert!((g1.values()[2048] - 2.0 / SQRT_PI).abs() < 2e-3);
}

#[test]
fn rl_of_constant_is_boundary_term() {
    let f = Samples1D::from_fn(unit(256), |_| 1.0).unwrap();
    let d = rl_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::L1);
    assert_relative_eq!(d.values()[256], 1.0 / PI.sqrt(), max_relative = 1e-12);
    assert_eq!(d.flagged(), Some(0));
    assert!(!d.values()[0].is_finite());
}

#[test]
fn backward_is_reflected_forward() {
    let g = TimeGrid::new(-1.0, 2.0, 300).unwrap();
    let f = Samples1D::from_fn(g, |t| (t * 1.3).sin() + t * t).unwrap();
    for scheme in [Scheme::L1, Scheme::Gl] {
        let alpha = FracOrder::new(0.35).unwrap();
        let back = caputo_deriv(&f, alpha, Direction::Backward, scheme);
        let fwd = caputo_deriv(&f.reflect(), alpha, Direction::Forward, scheme).reflect();
        assert_eq!(back.values(), fwd.values());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operators_are_linear(
        a in proptest::collection::vec(-1.0f64..1.0, 33),
        b in proptest::collection::vec(-1.0f64..1.0, 33),
        s in -3.0f64..3.0,
        alpha in 0.05f64..0.95,
    ) {
        let g = unit(32);
        let alpha = FracOrder::new(alpha).unwrap();
        let fa = Samples1D::new(g, a.clone()).unwrap();
        let fb = Samples1D::new(g, b.clone()).unwrap();
        let comb = Samples1D::new(g, a.iter().zip(&b).map(|(x, y)| x + s * y).collect()).unwrap();
        for scheme in [Scheme::L1, Scheme::Gl] {
            for dir in [Direction::Forward, Direction::Backward] {
                let ca = caputo_deriv(&fa, alpha, dir, scheme);
                let cb = caputo_deriv(&fb, alpha, dir, scheme);
                let cc = caputo_deriv(&comb, alpha, dir, scheme);
                for j in 0..=32 {
                    let lin = ca.values()[j] + s * cb.values()[j];
                    prop_assert!((cc.values()[j] - lin).abs() <= 1e-11 * (1.0 + lin.abs()) * 32f64.powf(alpha.value()));
                }
            }
        }
    }
}
