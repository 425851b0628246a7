use ndarray::Dimension;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::domain::{BoundaryClass, BoxDomain, SpaceTimeField};
use crate::fracfield::{classical_div, DiffScheme, VectorField};
use crate::domain::SpatialField;
use crate::frac1d::{caputo_deriv, Direction, FracOrder, Samples1D, Scheme, TimeGrid};

fn grids(nt: usize, n: &[usize]) -> (TimeGrid, BoxDomain) {
    let d = n.len();
    (TimeGrid::new(0.0, 1.0, nt).unwrap(), BoxDomain::new(vec![0.0; d], vec![1.0; d], n.to_vec()).unwrap())
}

fn smooth(tg: TimeGrid, dom: &BoxDomain, phase: f64) -> SpaceTimeField {
    SpaceTimeField::from_fn(tg, dom.clone(), BoundaryClass::None, |t, x| {
        (1.0 + t) * x.iter().enumerate().map(|(i, xi)| (phase + (i + 1) as f64 * xi).sin()).product::<f64>() + 0.3 * t * t
    })
    .unwrap()
}

fn configs() -> Vec<VarConfig> {
    let alpha = FracOrder::new(0.4).unwrap();
    vec![VarConfig::new(alpha, Scheme::L1), VarConfig::new(alpha, Scheme::Gl), VarConfig::new(FracOrder::HALF, Scheme::Gl)]
}

#[test]
fn zero_state_gives_zero_slots() {
    let (tg, dom) = grids(6, &[5, 4]);
    let z = SpaceTimeField::zeros(tg, dom.clone(), BoundaryClass::None);
    let s = assemble_slots(&AsymmetricState::causal(z), &configs()[0]).unwrap();
    for f in [&s.y, &s.v].into_iter().chain(&s.w).chain(&s.z) {
        assert!(f.values().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn one_sided_states_slot_structure() {
    let (tg, dom) = grids(8, &[6]);
    let u = smooth(tg, &dom, 0.2);
    let cfg = VarConfig::new(FracOrder::HALF, Scheme::L1);
    let plus = assemble_slots(&AsymmetricState::causal(u.clone()), &cfg).unwrap();
    let minus = assemble_slots(&AsymmetricState::anticausal(u.clone()), &cfg).unwrap();
    assert_eq!(plus.y, u.with_class(BoundaryClass::None).unwrap());
    assert_eq!(minus.y.values(), u.values());
    for k in 0..=6 {
        let line = u.time_line(&[k]);
        let fwd = caputo_deriv(&line, FracOrder::HALF, Direction::Forward, Scheme::L1);
        let bwd = caputo_deriv(&line, FracOrder::HALF, Direction::Backward, Scheme::L1);
        for j in 0..=8 {
            assert!((plus.v.values()[[j, k]] - fwd.values()[j]).abs() < 1e-13);
            assert!((minus.v.values()[[j, k]] + bwd.values()[j]).abs() < 1e-13);
        }
    }
    for j in 0..=8 {
        let line = Samples1D::new(dom.axis_grid(0), u.slice(j).values().iter().copied().collect()).unwrap();
        let fwd = caputo_deriv(&line, FracOrder::HALF, Direction::Forward, Scheme::L1);
        let bwd = caputo_deriv(&line, FracOrder::HALF, Direction::Backward, Scheme::L1);
        for k in 0..=6 {
            assert!((plus.w[0].values()[[j, k]] - fwd.values()[k]).abs() < 1e-13);
            assert!((minus.w[0].values()[[j, k]] + bwd.values()[k]).abs() < 1e-13);
            assert_eq!(plus.z[0].values()[[j, k]], minus.z[0].values()[[j, k]]);
        }
    }
}

/// `L = y`: the action is the integral of `u`.
struct Source;
impl Lagrangian for Source {
    fn eval(&self, _: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        s.y
    }
    fn dy(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
        1.0
    }
    fn dv(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
        0.0
    }
    fn dw(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
        out.fill(0.0);
    }
    fn dz(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
        out.fill(0.0);
    }
}

#[test]
fn action_simple_values() {
    let (tg, dom) = grids(10, &[10]);
    let one = SpaceTimeField::from_fn(tg, dom.clone(), BoundaryClass::None, |_, _| 1.0).unwrap();
    let state = AsymmetricState::causal(one);
    for cfg in configs() {
        assert_eq!(action(&ZeroLagrangian, &state, &cfg).unwrap(), 0.0);
        let trap = cfg.with_rule(ActionRule { time: crate::QuadRule::Trapezoid, space: crate::QuadRule::Trapezoid });
        assert!((action(&Source, &state, &trap).unwrap() - 1.0).abs() < 1e-14);
        assert!((action(&Source, &state, &cfg).unwrap() - 1.0).abs() < 1e-14);
    }
}

/// Quadratic Lagrangian plus `c·y⁴`.
struct Quartic {
    base: QuadraticLagrangian,
    c: f64,
}
impl Lagrangian for Quartic {
    fn eval(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        self.base.eval(p, s) + self.c * s.y.powi(4)
    }
    fn dy(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        self.base.dy(p, s) + 4.0 * self.c * s.y.powi(3)
    }
    fn dv(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        self.base.dv(p, s)
    }
    fn dw(&self, p: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        self.base.dw(p, s, out)
    }
    fn dz(&self, p: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        self.base.dz(p, s, out)
    }
}

fn random_state(tg: TimeGrid, dom: &BoxDomain, seed: u64) -> AsymmetricState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let like = SpaceTimeField::zeros(tg, dom.clone(), BoundaryClass::None);
    let a = random_direction(&like, &mut rng).unwrap();
    let b = random_direction(&like, &mut rng).unwrap();
    let s1 = smooth(tg, dom, 0.1);
    let s2 = smooth(tg, dom, 0.9);
    let mix = |r: &SpaceTimeField, s: &SpaceTimeField| {
        SpaceTimeField::new(tg, dom.clone(), r.values() * 0.3 + s.values(), BoundaryClass::None).unwrap()
    };
    AsymmetricState::new(mix(&a, &s1), mix(&b, &s2)).unwrap()
}

#[test]
fn first_variation_duality() {
    for (dims, seed) in [(vec![7], 1u64), (vec![5, 4], 2)] {
        let (tg, dom) = grids(9, &dims);
        let l = QuadraticLagrangian::random(dims.len(), seed);
        let u = random_state(tg, &dom, seed + 10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 20);
        for cfg in configs() {
            let (plus, minus) = el_residual_pair(&l, &u, &cfg).unwrap();
            let hp = random_direction(u.u_plus(), &mut rng).unwrap();
            let hm = random_direction(u.u_plus(), &mut rng).unwrap();
            let zero = SpaceTimeField::zeros(tg, dom.clone(), BoundaryClass::SpacetimeZero);
            let dp = action_derivative(&l, &u, &AsymmetricState::new(hp.clone(), zero.clone()).unwrap(), &cfg).unwrap();
            let dm = action_derivative(&l, &u, &AsymmetricState::new(zero, hm.clone()).unwrap(), &cfg).unwrap();
            assert!((residual_pairing(&plus, &hp).unwrap() - dp).abs() <= 1e-10 * dp.abs().max(1.0), "{cfg:?}");
            assert!((residual_pairing(&minus, &hm).unwrap() - dm).abs() <= 1e-10 * dm.abs().max(1.0), "{cfg:?}");
        }
    }
}

#[test]
fn derivative_matches_central_difference_and_is_linear() {
    let (tg, dom) = grids(8, &[6, 5]);
    let l = QuadraticLagrangian::random(2, 5);
    let u = random_state(tg, &dom, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = configs()[0];
    let h1 = AsymmetricState::new(random_direction(u.u_plus(), &mut rng).unwrap(), random_direction(u.u_plus(), &mut rng).unwrap()).unwrap();
    let h2 = AsymmetricState::new(random_direction(u.u_plus(), &mut rng).unwrap(), random_direction(u.u_plus(), &mut rng).unwrap()).unwrap();
    let eps = 1e-3;
    let fd = (action(&l, &u.axpy(eps, &h1).unwrap(), &cfg).unwrap() - action(&l, &u.axpy(-eps, &h1).unwrap(), &cfg).unwrap()) / (2.0 * eps);
    let der = action_derivative(&l, &u, &h1, &cfg).unwrap();
    assert!((fd - der).abs() <= 1e-9 * der.abs(), "{fd} vs {der}");

    let combo = |a: &SpaceTimeField, b: &SpaceTimeField| {
        SpaceTimeField::new(tg, dom.clone(), a.values() * 2.0 - b.values() * 0.7, BoundaryClass::SpacetimeZero).unwrap()
    };
    let h3 = AsymmetricState::new(combo(h1.u_plus(), h2.u_plus()), combo(h1.u_minus(), h2.u_minus())).unwrap();
    let d2 = action_derivative(&l, &u, &h2, &cfg).unwrap();
    let d3 = action_derivative(&l, &u, &h3, &cfg).unwrap();
    assert!((d3 - (2.0 * der - 0.7 * d2)).abs() < 1e-12 * d3.abs().max(1.0));

    let zero = SpaceTimeField::zeros(tg, dom.clone(), BoundaryClass::SpacetimeZero);
    let hz = AsymmetricState::new(zero.clone(), zero).unwrap();
    assert_eq!(action_derivative(&l, &u, &hz, &cfg).unwrap(), 0.0);
    let bad = AsymmetricState::new(u.u_plus().clone(), u.u_minus().clone()).unwrap();
    assert!(matches!(action_derivative(&l, &u, &bad, &cfg), Err(crate::Error::Precondition(_))));
}

#[test]
fn gradient_check_examples() {
    let (tg, dom) = grids(8, &[6]);
    let u = random_state(tg, &dom, 3);
    for cfg in configs() {
        let quad = QuadraticLagrangian::random(1, 9);
        let r = gradient_check(&quad, &u, &cfg, 4, 17, 1e-4, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        let quartic = Quartic { base: quad, c: 0.25 };
        let r = gradient_check(&quartic, &u, &cfg, 4, 17, 1e-4, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.norms[0] > 0.0);
        let r = gradient_check(&ZeroLagrangian, &u, &cfg, 2, 1, 1e-4, 1e-9).unwrap();
        assert_eq!(r.norms[0], 0.0);
        assert_eq!(r.details["max_abs_error"], 0.0);
    }
}

/// `L = ½|z|² + ½ y² − y f` with `f = sin(3x)`: no fractional slots.
struct Classical;
impl Classical {
    fn f(x: &[f64]) -> f64 {
        x.iter().map(|xi| (3.0 * xi).sin()).sum()
    }
}
impl Lagrangian for Classical {
    fn eval(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        0.5 * s.z.iter().map(|z| z * z).sum::<f64>() + 0.5 * s.y * s.y - s.y * Self::f(p.x)
    }
    fn dy(&self, p: &NodePoint<'_>, s: &SlotValues<'_>) -> f64 {
        s.y - Self::f(p.x)
    }
    fn dv(&self, _: &NodePoint<'_>, _: &SlotValues<'_>) -> f64 {
        0.0
    }
    fn dw(&self, _: &NodePoint<'_>, _: &SlotValues<'_>, out: &mut [f64]) {
        out.fill(0.0);
    }
    fn dz(&self, _: &NodePoint<'_>, s: &SlotValues<'_>, out: &mut [f64]) {
        out.copy_from_slice(s.z);
    }
}

#[test]
fn classical_lagrangian_reduces_to_classical_first_variation() {
    let (tg, dom) = grids(5, &[9, 7]);
    let u = smooth(tg, &dom, 0.4);
    let ustate = AsymmetricState::causal(u.clone());
    let cfg = configs()[1];
    let (_, minus) = el_residual_pair(&Classical, &ustate, &cfg).unwrap();
    let restricted = restricted_el_residual(&Classical, &u, &cfg).unwrap();
    assert_eq!(minus, restricted);
    for j in 1..5 {
        let slice = SpatialField::new(dom.clone(), u.slice(j).into_values(), false).unwrap();
        let grad = crate::fracfield::classical_grad(&slice, DiffScheme::Forward).unwrap();
        let div = classical_div(&VectorField::new(grad.into_components()).unwrap(), DiffScheme::Backward).unwrap();
        for (idx, &dv) in div.values().indexed_iter() {
            let idx = idx.slice();
            if dom.is_boundary(idx) {
                continue;
            }
            let mut full = vec![j];
            full.extend_from_slice(idx);
            let uval = u.values()[full.as_slice()];
            let expect = uval - Classical::f(&dom.coords(idx)) - dv;
            let got = minus.values()[full.as_slice()];
            assert!((got - expect).abs() <= 1e-12 * expect.abs().max(1.0), "{got} vs {expect}");
        }
    }
}
