use ndarray::{ArrayD, Dimension, IxDyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lagrangian::{Lagrangian, NodePoint, SlotValues};
use super::state::{assemble_with, Discretisation};
use super::{AsymmetricState, SlotFields, VarConfig};
use crate::domain::{BoundaryClass, SpaceTimeField};
use crate::frac1d::Direction;
use crate::report::CheckReport;
use crate::{Error, Result};

/// Slot partial derivatives of `L` evaluated at every node.
struct Partials {
    ly: ArrayD<f64>,
    lv: ArrayD<f64>,
    lw: Vec<ArrayD<f64>>,
    lz: Vec<ArrayD<f64>>,
}

/// Calls `f(idx, point, slots)` at every space-time node, in lexicographic
/// order.
fn for_each_node(slots: &SlotFields, mut f: impl FnMut(&[usize], &NodePoint<'_>, &SlotValues<'_>)) {
    let tgrid = slots.y.tgrid();
    let domain = slots.y.domain();
    let d = domain.dim();
    let mut w = vec![0.0; d];
    let mut z = vec![0.0; d];
    for (idx, &y) in slots.y.values().indexed_iter() {
        let idx = idx.slice();
        for i in 0..d {
            w[i] = slots.w[i].values()[idx];
            z[i] = slots.z[i].values()[idx];
        }
        let x = domain.coords(&idx[1..]);
        let p = NodePoint { t: tgrid.node(idx[0]), x: &x, time_index: idx[0], space_index: &idx[1..] };
        let s = SlotValues { y, v: slots.v.values()[idx], w: &w, z: &z };
        f(idx, &p, &s);
    }
}

fn partials<L: Lagrangian + ?Sized>(l: &L, slots: &SlotFields) -> Partials {
    let shape = slots.y.values().raw_dim();
    let d = slots.w.len();
    let mut out = Partials {
        ly: ArrayD::zeros(shape.clone()),
        lv: ArrayD::zeros(shape.clone()),
        lw: vec![ArrayD::zeros(shape.clone()); d],
        lz: vec![ArrayD::zeros(shape); d],
    };
    let mut dw = vec![0.0; d];
    let mut dz = vec![0.0; d];
    for_each_node(slots, |idx, p, s| {
        out.ly[idx] = l.dy(p, s);
        out.lv[idx] = l.dv(p, s);
        l.dw(p, s, &mut dw);
        l.dz(p, s, &mut dz);
        for i in 0..d {
            out.lw[i][idx] = dw[i];
            out.lz[i][idx] = dz[i];
        }
    });
    out
}

/// Discrete asymmetric action: tensor quadrature of `L` at the slot fields
/// of `U`.
pub fn action<L: Lagrangian + ?Sized>(l: &L, u: &AsymmetricState, cfg: &VarConfig) -> Result<f64> {
    let disc = Discretisation::new(u.tgrid(), u.domain(), cfg);
    let slots = assemble_with(&disc, u)?;
    let mut total = 0.0;
    let mut bad = None;
    for_each_node(&slots, |idx, p, s| {
        let q = disc.weight(idx);
        if q == 0.0 {
            return;
        }
        let val = l.eval(p, s);
        if !val.is_finite() && bad.is_none() {
            bad = Some(idx.to_vec());
        }
        total += q * val;
    });
    if let Some(idx) = bad {
        return Err(Error::NonFinite(format!("Lagrangian is not finite at node {idx:?}")));
    }
    Ok(total)
}

/// First variation of the action at `U` in direction `H`, in the form
/// before integration by parts:
///
/// ```text
/// ∫∫ ∂_yL·y(H) + ∂_vL·v(H) + ∂_wL·w(H) + ∂_zL·z(H)
/// ```
///
/// Both components of `H` must vanish on the whole space-time boundary.
pub fn action_derivative<L: Lagrangian + ?Sized>(
    l: &L,
    u: &AsymmetricState,
    h: &AsymmetricState,
    cfg: &VarConfig,
) -> Result<f64> {
    for (name, c) in [("h_plus", h.u_plus()), ("h_minus", h.u_minus())] {
        if c.boundary_class() != BoundaryClass::SpacetimeZero {
            return Err(Error::Precondition(format!("direction {name} must vanish on the space-time boundary")));
        }
    }
    u.u_plus().check_same_grid(h.u_plus())?;
    let disc = Discretisation::new(u.tgrid(), u.domain(), cfg);
    let su = assemble_with(&disc, u)?;
    let sh = assemble_with(&disc, h)?;
    let p = partials(l, &su);
    let mut total = 0.0;
    for (idx, &q) in weights(&disc, &su).indexed_iter() {
        if q == 0.0 {
            continue;
        }
        let idx = idx.slice();
        let mut acc = p.ly[idx] * sh.y.values()[idx] + p.lv[idx] * sh.v.values()[idx];
        for i in 0..sh.w.len() {
            acc += p.lw[i][idx] * sh.w[i].values()[idx] + p.lz[i][idx] * sh.z[i].values()[idx];
        }
        total += q * acc;
    }
    Ok(total)
}

fn weights(disc: &Discretisation, slots: &SlotFields) -> ArrayD<f64> {
    ArrayD::from_shape_fn(slots.y.values().raw_dim(), |idx| disc.weight(idx.slice()))
}

/// Euler-Lagrange residuals `(plus, minus)` of the action at `U`:
///
/// ```text
/// plus  = ∂_yL + ᶜD_+^{α*}(∂_vL) + Σ_i ᶜ∂_{i,+}^{α*}(∂_{w_i}L) + Σ_i F_i^*(∂_{z_i}L)
/// minus = ∂_yL − ᶜD_−^{α*}(∂_vL) − Σ_i ᶜ∂_{i,−}^{α*}(∂_{w_i}L) + Σ_i F_i^*(∂_{z_i}L)
/// ```
///
/// where `*` denotes the quadrature-weighted transpose of the operator used
/// in the slots. `F^*` is `−div_b` at interior nodes and `C_+^*` plays the
/// role of the backward Riemann-Liouville derivative. Each residual is the
/// gradient of the discrete action with respect to the interior values of
/// the corresponding component, divided by the interior quadrature weight.
/// Boundary entries are zero.
pub fn el_residual_pair<L: Lagrangian + ?Sized>(
    l: &L,
    u: &AsymmetricState,
    cfg: &VarConfig,
) -> Result<(SpaceTimeField, SpaceTimeField)> {
    let disc = Discretisation::new(u.tgrid(), u.domain(), cfg);
    let slots = assemble_with(&disc, u)?;
    let p = partials(l, &slots);
    let plus = residual(&disc, &p, Direction::Forward);
    let minus = residual(&disc, &p, Direction::Backward);
    Ok((finish(u, plus)?, finish(u, minus)?))
}

/// `Forward` gives the plus residual, `Backward` the minus residual.
fn residual(disc: &Discretisation, p: &Partials, dir: Direction) -> ArrayD<f64> {
    let sign = match dir {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let mut r = p.ly.clone();
    r.scaled_add(sign, &disc.time_caputo_adjoint(&p.lv.view(), dir));
    for i in 0..p.lw.len() {
        r.scaled_add(sign, &disc.space_caputo_adjoint(&p.lw[i].view(), i, dir));
        r += &disc.forward_diff_adjoint(&p.lz[i].view(), i);
    }
    r
}

fn finish(u: &AsymmetricState, mut values: ArrayD<f64>) -> Result<SpaceTimeField> {
    let nt = u.tgrid().n();
    let domain = u.domain();
    for (idx, v) in values.indexed_iter_mut() {
        let idx = idx.slice();
        if idx[0] == 0 || idx[0] == nt || domain.is_boundary(&idx[1..]) {
            *v = 0.0;
        }
    }
    SpaceTimeField::new(*u.tgrid(), domain.clone(), values, BoundaryClass::SpacetimeZero)
}

/// Minus residual at `U = (u_+, 0)`: only forward operators act inside the
/// slots, giving the causal Euler-Lagrange equation.
pub fn restricted_el_residual<L: Lagrangian + ?Sized>(
    l: &L,
    u_plus: &SpaceTimeField,
    cfg: &VarConfig,
) -> Result<SpaceTimeField> {
    let state = AsymmetricState::causal(u_plus.clone());
    Ok(el_residual_pair(l, &state, cfg)?.1)
}

/// `Σ_interior ω r h` with the nominal interior weight `ω`; the pairing
/// under which residuals represent the first variation.
pub fn residual_pairing(r: &SpaceTimeField, h: &SpaceTimeField) -> Result<f64> {
    r.check_same_grid(h)?;
    let domain = r.domain();
    let w = r.tgrid().h() * (0..domain.dim()).map(|i| domain.spacing(i)).product::<f64>();
    Ok(w * (r.values() * h.values()).sum())
}

/// Seeded random direction vanishing on the space-time boundary, scaled to
/// unit maximum.
pub fn random_direction(like: &SpaceTimeField, rng: &mut ChaCha8Rng) -> Result<SpaceTimeField> {
    let nt = like.tgrid().n();
    let domain = like.domain();
    let values = ArrayD::from_shape_fn(IxDyn(like.values().shape()), |idx| {
        let r: f64 = rng.random_range(-1.0..1.0);
        let idx = idx.slice();
        if idx[0] == 0 || idx[0] == nt || domain.is_boundary(&idx[1..]) {
            0.0
        } else {
            r
        }
    });
    let max = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let values = if max > 0.0 { values / max } else { values };
    SpaceTimeField::new(*like.tgrid(), domain.clone(), values, BoundaryClass::SpacetimeZero)
}

/// Compares the residual pairing `⟨plus, h_+⟩ + ⟨minus, h_−⟩` with the
/// central difference `(𝓛(U+εH) − 𝓛(U−εH))/2ε` over `n_directions`
/// seeded random directions. The headline norm is the largest relative
/// error `|pairing − fd| / max(|fd|, 1e-300)`; it is zero when both vanish.
#[allow(clippy::too_many_arguments)]
pub fn gradient_check<L: Lagrangian + ?Sized>(
    l: &L,
    u: &AsymmetricState,
    cfg: &VarConfig,
    n_directions: usize,
    seed: u64,
    epsilon: f64,
    tol: f64,
) -> Result<CheckReport> {
    if n_directions == 0 {
        return Err(Error::Precondition("gradient check needs at least one direction".into()));
    }
    let (plus, minus) = el_residual_pair(l, u, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut worst_abs: f64 = 0.0;
    for _ in 0..n_directions {
        let h = AsymmetricState::new(random_direction(u.u_plus(), &mut rng)?, random_direction(u.u_minus(), &mut rng)?)?;
        let pairing = residual_pairing(&plus, h.u_plus())? + residual_pairing(&minus, h.u_minus())?;
        let fd = (action(l, &u.axpy(epsilon, &h)?, cfg)? - action(l, &u.axpy(-epsilon, &h)?, cfg)?) / (2.0 * epsilon);
        let diff = (pairing - fd).abs();
        worst_abs = worst_abs.max(diff);
        if diff > 0.0 {
            worst = worst.max(diff / fd.abs().max(1e-300));
        }
    }
    let mut sizes = vec![u.tgrid().n()];
    sizes.extend_from_slice(u.domain().n());
    Ok(CheckReport::new("gradient_check", sizes, vec![worst], worst <= tol)
        .with_detail("max_abs_error", worst_abs)
        .with_detail("epsilon", epsilon)
        .with_detail("tolerance", tol)
        .with_detail("directions", n_directions as f64)
        .with_detail("seed", seed as f64))
}
