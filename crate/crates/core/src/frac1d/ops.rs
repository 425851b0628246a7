use super::gamma::gamma;
use super::grid::{Direction, FracOrder, Samples1D, Scheme};
use super::kernel::CaputoKernel;
use crate::{Error, Result};

/// Riemann-Liouville fractional integral `I^β f` of order `β > 0`.
///
/// `f` is interpolated piecewise-linearly and the kernel `(t − τ)^{β−1}`
/// is integrated exactly on each cell (product trapezoid rule). The value
/// at the originating endpoint is 0.
pub fn rl_integral(f: &Samples1D, beta: f64, dir: Direction) -> Result<Samples1D> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Precondition(format!("integral order must be positive, got {beta}")));
    }
    let grid = *f.grid();
    let values = match dir {
        Direction::Forward => rl_integral_fwd(f.values(), beta, grid.h()),
        Direction::Backward => {
            let mut v = rl_integral_fwd(f.reflect().values(), beta, grid.h());
            v.reverse();
            v
        }
    };
    Samples1D::new(grid, values)
}

fn rl_integral_fwd(f: &[f64], beta: f64, h: f64) -> Vec<f64> {
    let n1 = f.len();
    let c = h.powf(beta) / gamma(beta + 2.0);
    let p = beta + 1.0;
    let pw = |m: f64| if m <= 0.0 { 0.0 } else { m.powf(p) };
    let mut out = vec![0.0; n1];
    for j in 1..n1 {
        let jf = j as f64;
        let mut acc = (pw(jf - 1.0) - (jf - 1.0 - beta) * jf.powf(beta)) * f[0];
        for k in 1..j {
            let m = (j - k) as f64;
            acc += (pw(m + 1.0) - 2.0 * pw(m) + pw(m - 1.0)) * f[k];
        }
        acc += f[j];
        out[j] = c * acc;
    }
    out
}

/// Caputo derivative `ᶜD^α f`. The value at the originating endpoint is 0.
///
/// The GL variant is the Grünwald-Letnikov Riemann-Liouville derivative of
/// `f − f(a)` (resp. `f − f(b)`), which coincides with Caputo for `0 < α < 1`.
pub fn caputo_deriv(f: &Samples1D, alpha: FracOrder, dir: Direction, scheme: Scheme) -> Samples1D {
    let grid = *f.grid();
    let kernel = CaputoKernel::new(alpha, scheme, grid.h(), grid.n());
    let mut out = vec![0.0; grid.len()];
    kernel.caputo(dir, f.values(), &mut out);
    Samples1D::with_flag(grid, out, None)
}

/// Boundary term `(t − a)^{−α}/Γ(1−α) · f(a)` (forward) or
/// `(b − t)^{−α}/Γ(1−α) · f(b)` (backward) at node `j`, linking the
/// Riemann-Liouville and Caputo derivatives.
pub fn rl_boundary_term(f: &Samples1D, alpha: FracOrder, dir: Direction, j: usize) -> f64 {
    let grid = f.grid();
    let (dist, end) = match dir {
        Direction::Forward => (grid.node(j) - grid.a(), f.values()[0]),
        Direction::Backward => (grid.b() - grid.node(j), f.values()[grid.n()]),
    };
    if end == 0.0 {
        return 0.0;
    }
    dist.powf(-alpha.value()) / gamma(1.0 - alpha.value()) * end
}

/// Riemann-Liouville derivative `D^α f`.
///
/// `Scheme::L1` evaluates the L1 Caputo derivative plus the closed-form
/// boundary term; `Scheme::Gl` is the direct convolution
/// `h^{−α} Σ_k w_k f(t − kh)`. When `f` does not vanish at the originating
/// endpoint the exact derivative is singular there; that node is flagged and
/// holds `±∞`.
pub fn rl_deriv(f: &Samples1D, alpha: FracOrder, dir: Direction, scheme: Scheme) -> Samples1D {
    let grid = *f.grid();
    let origin = match dir {
        Direction::Forward => 0,
        Direction::Backward => grid.n(),
    };
    let f_origin = f.values()[origin];
    let mut values = match scheme {
        Scheme::L1 => {
            let caputo = caputo_deriv(f, alpha, dir, Scheme::L1).into_values();
            caputo
                .into_iter()
                .enumerate()
                .map(|(j, c)| if j == origin { c } else { c + rl_boundary_term(f, alpha, dir, j) })
                .collect::<Vec<_>>()
        }
        Scheme::Gl => {
            let kernel = CaputoKernel::new(alpha, Scheme::Gl, grid.h(), grid.n());
            let mut out = vec![0.0; grid.len()];
            kernel.convolve(dir, f.values(), &mut out);
            out
        }
    };
    let flagged = if f_origin != 0.0 {
        values[origin] = f64::INFINITY.copysign(f_origin);
        Some(origin)
    } else {
        values[origin] = 0.0;
        None
    };
    Samples1D::with_flag(grid, values, flagged)
}

/// Exact `ᶜD_+^α (t − a)^μ = Γ(μ+1)/Γ(μ+1−α) (t − a)^{μ−α}` (valid for the
/// Caputo derivative when μ ≥ 1 or μ = 0 gives 0 there, and for the
/// Riemann-Liouville derivative for every μ ≥ 0).
pub fn power_rule_oracle(mu: f64, alpha: FracOrder, t: f64, a: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::Precondition(format!("exponent must be non-negative, got {mu}")));
    }
    if !(t > a) {
        return Err(Error::Precondition(format!("need t > a, got t = {t}, a = {a}")));
    }
    let denom_arg = mu + 1.0 - alpha.value();
    if denom_arg <= 0.0 && denom_arg.fract() == 0.0 {
        return Err(Error::GammaDomain(denom_arg));
    }
    Ok(gamma(mu + 1.0) / gamma(denom_arg) * (t - a).powf(mu - alpha.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac1d::TimeGrid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit(n: usize) -> TimeGrid {
        TimeGrid::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn integral_of_zero_is_zero() {
        let f = Samples1D::zeros(unit(16));
        for dir in [Direction::Forward, Direction::Backward] {
            let out = rl_integral(&f, 0.5, dir).unwrap();
            assert!(out.values().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn half_integral_of_one() {
        let f = Samples1D::from_fn(unit(64), |_| 1.0).unwrap();
        let out = rl_integral(&f, 0.5, Direction::Forward).unwrap();
        // I^{1/2} 1 = t^{1/2}/Γ(3/2); exact for constants
        assert!((out.values()[64] - 2.0 / PI.sqrt()).abs() < 1e-13);
        assert!((out.values()[64] - 1.128_379_167_1).abs() < 1e-10);
        assert_eq!(out.values()[0], 0.0);
    }

    #[test]
    fn first_order_integral_is_ordinary_integral() {
        let g = unit(20);
        let f = Samples1D::from_fn(g, |t| t).unwrap();
        let out = rl_integral(&f, 1.0, Direction::Forward).unwrap();
        for (j, v) in out.values().iter().enumerate() {
            let t = g.node(j);
            assert!((v - t * t / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn backward_integral_by_reflection() {
        let g = TimeGrid::new(0.0, 2.0, 40).unwrap();
        let f = Samples1D::from_fn(g, |t| t * t + 1.0).unwrap();
        let back = rl_integral(&f, 0.3, Direction::Backward).unwrap();
        let fwd = rl_integral(&f.reflect(), 0.3, Direction::Forward).unwrap();
        assert_eq!(back.values(), fwd.reflect().values());
        assert_eq!(back.values()[40], 0.0);
    }

    #[test]
    fn caputo_kills_constants() {
        let f = Samples1D::from_fn(unit(32), |_| -2.75).unwrap();
        for scheme in [Scheme::L1, Scheme::Gl] {
            for dir in [Direction::Forward, Direction::Backward] {
                let out = caputo_deriv(&f, FracOrder::HALF, dir, scheme);
                assert!(out.values().iter().all(|v| v.abs() < 1e-12), "{scheme:?} {dir:?}");
            }
        }
    }

    #[test]
    fn caputo_l1_exact_on_linear() {
        let f = Samples1D::from_fn(unit(128), |t| t).unwrap();
        let out = caputo_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::L1);
        assert!((out.values()[128] - 2.0 / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn caputo_l1_on_square() {
        let f = Samples1D::from_fn(unit(2048), |t| t * t).unwrap();
        let out = caputo_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::L1);
        let exact = 8.0 / (3.0 * PI.sqrt());
        assert!((exact - 1.504_505_556_1).abs() < 1e-9);
        assert!((out.values()[2048] - exact).abs() < 1e-3);
    }

    #[test]
    fn rl_of_one_is_boundary_term() {
        let f = Samples1D::from_fn(unit(64), |_| 1.0).unwrap();
        for scheme in [Scheme::L1, Scheme::Gl] {
            let out = rl_deriv(&f, FracOrder::HALF, Direction::Forward, scheme);
            assert_eq!(out.flagged(), Some(0));
            assert!(out.values()[0].is_infinite());
            let tol = if scheme == Scheme::L1 { 1e-13 } else { 1e-2 };
            assert!((out.values()[64] - 1.0 / PI.sqrt()).abs() < tol, "{scheme:?}: {}", out.values()[64]);
        }
    }

    #[test]
    fn rl_equals_caputo_when_vanishing_at_origin() {
        let f = Samples1D::from_fn(unit(256), |t| (3.0 * t).sin()).unwrap();
        let rl = rl_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::L1);
        let c = caputo_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::L1);
        assert_eq!(rl.flagged(), None);
        assert_eq!(rl.values(), c.values());
        let gl = rl_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::Gl);
        let cgl = caputo_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::Gl);
        for (a, b) in gl.values().iter().zip(cgl.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn rl_of_zero() {
        let f = Samples1D::zeros(unit(16));
        for scheme in [Scheme::L1, Scheme::Gl] {
            let out = rl_deriv(&f, FracOrder::HALF, Direction::Backward, scheme);
            assert_eq!(out.flagged(), None);
            assert!(out.values().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn power_rule_values() {
        let h = FracOrder::HALF;
        assert!((power_rule_oracle(1.0, h, 1.0, 0.0).unwrap() - 2.0 / PI.sqrt()).abs() < 1e-14);
        assert!((power_rule_oracle(2.0, h, 1.0, 0.0).unwrap() - 8.0 / (3.0 * PI.sqrt())).abs() < 1e-14);
        assert!(power_rule_oracle(1.0, h, 0.0, 0.0).is_err());
        assert!(power_rule_oracle(-1.0, h, 1.0, 0.0).is_err());
    }

    #[test]
    fn half_derivative_of_oracle_recovers_derivative() {
        // ᶜD^{1/2} applied to 2√(t/π) (= ᶜD^{1/2} t) gives d t/dt = 1 away from 0
        let g = unit(2048);
        let inner = Samples1D::from_fn(g, |t| if t > 0.0 { power_rule_oracle(1.0, FracOrder::HALF, t, 0.0).unwrap() } else { 0.0 }).unwrap();
        let out = caputo_deriv(&inner, FracOrder::HALF, Direction::Forward, Scheme::L1);
        assert!((out.values()[2048] - 1.0).abs() < 5e-3);
        assert!((out.values()[1024] - 1.0).abs() < 5e-3);
    }

    #[test]
    fn regularity_first_nodes_vanish() {
        let mut prev = f64::INFINITY;
        for n in [64, 128, 256, 512] {
            let f = Samples1D::from_fn(unit(n), |t| t.exp()).unwrap();
            let c = caputo_deriv(&f, FracOrder::HALF, Direction::Forward, Scheme::L1);
            let v = c.values()[1].abs().max(c.values()[2].abs());
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 0.1);
    }

    proptest! {
        #[test]
        fn reflection_duality(vals in proptest::collection::vec(-5.0f64..5.0, 3..40), a in 0.05f64..0.95) {
            let n = vals.len() - 1;
            let g = TimeGrid::new(-1.0, 3.0, n.max(2)).unwrap();
            let mut vals = vals;
            vals.resize(g.len(), 0.5);
            let f = Samples1D::new(g, vals).unwrap();
            let alpha = FracOrder::new(a).unwrap();
            for scheme in [Scheme::L1, Scheme::Gl] {
                let back = caputo_deriv(&f, alpha, Direction::Backward, scheme);
                let fwd = caputo_deriv(&f.reflect(), alpha, Direction::Forward, scheme).reflect();
                prop_assert_eq!(back.values(), fwd.values());
                let back = rl_deriv(&f, alpha, Direction::Backward, scheme);
                let fwd = rl_deriv(&f.reflect(), alpha, Direction::Forward, scheme).reflect();
                prop_assert_eq!(back.flagged(), fwd.flagged());
                for (x, y) in back.values().iter().zip(fwd.values()) {
                    prop_assert!(x == y || (x - y).abs() <= 1e-13 * x.abs().max(1.0));
                }
            }
        }

        #[test]
        fn linearity(u in proptest::collection::vec(-1.0f64..1.0, 17), v in proptest::collection::vec(-1.0f64..1.0, 17), s in -3.0f64..3.0) {
            let g = TimeGrid::new(0.0, 1.0, 16).unwrap();
            let fu = Samples1D::new(g, u.clone()).unwrap();
            let fv = Samples1D::new(g, v.clone()).unwrap();
            let comb = Samples1D::new(g, u.iter().zip(&v).map(|(a, b)| s * a + b).collect()).unwrap();
            for scheme in [Scheme::L1, Scheme::Gl] {
                for dir in [Direction::Forward, Direction::Backward] {
                    let cu = caputo_deriv(&fu, FracOrder::HALF, dir, scheme);
                    let cv = caputo_deriv(&fv, FracOrder::HALF, dir, scheme);
                    let cc = caputo_deriv(&comb, FracOrder::HALF, dir, scheme);
                    for j in 0..17 {
                        let lin = s * cu.values()[j] + cv.values()[j];
                        prop_assert!((cc.values()[j] - lin).abs() < 1e-11);
                    }
                }
            }
            let iu = rl_integral(&fu, 0.7, Direction::Forward).unwrap();
            let iv = rl_integral(&fv, 0.7, Direction::Forward).unwrap();
            let ic = rl_integral(&comb, 0.7, Direction::Forward).unwrap();
            for j in 0..17 {
                prop_assert!((ic.values()[j] - (s * iu.values()[j] + iv.values()[j])).abs() < 1e-12);
            }
        }

        #[test]
        fn caputo_rl_relation(vals in proptest::collection::vec(-2.0f64..2.0, 3..60), a in 0.05f64..0.95) {
            let g = TimeGrid::new(0.0, 1.5, vals.len() - 1).unwrap();
            let f = Samples1D::new(g, vals).unwrap();
            let alpha = FracOrder::new(a).unwrap();
            let rl = rl_deriv(&f, alpha, Direction::Forward, Scheme::L1);
            let c = caputo_deriv(&f, alpha, Direction::Forward, Scheme::L1);
            for j in 1..g.len() {
                let diff = rl.values()[j] - c.values()[j];
                let term = rl_boundary_term(&f, alpha, Direction::Forward, j);
                let ulp = f64::EPSILON * rl.values()[j].abs().max(c.values()[j].abs()).max(term.abs());
                prop_assert!((diff - term).abs() <= 2.0 * ulp);
            }
        }
    }
}
