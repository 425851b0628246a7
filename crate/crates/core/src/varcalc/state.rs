use ndarray::{ArrayD, ArrayViewD};
use serde::{Deserialize, Serialize};

use crate::domain::{quad_weights, BoundaryClass, BoxDomain, QuadRule, SpaceTimeField};
use crate::exec::map_lanes;
use crate::fracfield::{caputo_adjoint_lanes, caputo_lanes};
use crate::frac1d::{CaputoKernel, Direction, FracOrder, Scheme, TimeGrid};
use crate::Result;

/// Quadrature used for the action: a 1D rule in time and one shared by all
/// space axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRule {
    pub time: QuadRule,
    pub space: QuadRule,
}

impl ActionRule {
    /// Left rectangles in time for GL (the rectangle nodes coincide with
    /// the convolution support) and trapezoid for L1; left rectangles in
    /// space, which turn forward differences into the standard 3-point
    /// diffusion stencil at every interior node.
    pub fn default_for(scheme: Scheme) -> Self {
        let time = match scheme {
            Scheme::Gl => QuadRule::LeftRectangle,
            Scheme::L1 => QuadRule::Trapezoid,
        };
        ActionRule { time, space: QuadRule::LeftRectangle }
    }
}

/// Discretisation choices for the action and its Euler-Lagrange residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarConfig {
    pub alpha: FracOrder,
    pub scheme: Scheme,
    pub rule: ActionRule,
}

impl VarConfig {
    pub fn new(alpha: FracOrder, scheme: Scheme) -> Self {
        VarConfig { alpha, scheme, rule: ActionRule::default_for(scheme) }
    }

    pub fn with_rule(self, rule: ActionRule) -> Self {
        VarConfig { rule, ..self }
    }
}

/// The pair `U = (u_+, u_−)` on a common space-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricState {
    u_plus: SpaceTimeField,
    u_minus: SpaceTimeField,
}

impl AsymmetricState {
    pub fn new(u_plus: SpaceTimeField, u_minus: SpaceTimeField) -> Result<Self> {
        u_plus.check_same_grid(&u_minus)?;
        Ok(AsymmetricState { u_plus, u_minus })
    }

    /// `(u, 0)`.
    pub fn causal(u: SpaceTimeField) -> Self {
        let zero = SpaceTimeField::zeros(*u.tgrid(), u.domain().clone(), BoundaryClass::SpacetimeZero);
        AsymmetricState { u_plus: u, u_minus: zero }
    }

    /// `(0, u)`.
    pub fn anticausal(u: SpaceTimeField) -> Self {
        let zero = SpaceTimeField::zeros(*u.tgrid(), u.domain().clone(), BoundaryClass::SpacetimeZero);
        AsymmetricState { u_plus: zero, u_minus: u }
    }

    pub fn u_plus(&self) -> &SpaceTimeField {
        &self.u_plus
    }

    pub fn u_minus(&self) -> &SpaceTimeField {
        &self.u_minus
    }

    pub fn tgrid(&self) -> &TimeGrid {
        self.u_plus.tgrid()
    }

    pub fn domain(&self) -> &BoxDomain {
        self.u_plus.domain()
    }

    /// `U + s·H`, with the boundary class of the result dropped.
    pub fn axpy(&self, s: f64, h: &AsymmetricState) -> Result<AsymmetricState> {
        self.u_plus.check_same_grid(&h.u_plus)?;
        let comb = |a: &SpaceTimeField, b: &SpaceTimeField| {
            let mut v = a.values().clone();
            v.scaled_add(s, b.values());
            SpaceTimeField::new(*a.tgrid(), a.domain().clone(), v, BoundaryClass::None)
        };
        Ok(AsymmetricState { u_plus: comb(&self.u_plus, &h.u_plus)?, u_minus: comb(&self.u_minus, &h.u_minus)? })
    }
}

/// Slot fields `y, v, w, z` of the asymmetric Lagrangian:
///
/// ```text
/// y = u_+ + u_−
/// v = ᶜD_+^α u_+ − ᶜD_−^α u_−          (along t)
/// w = ᶜ∇^α u_+ − ᶜ∇̄^α u_−              (along each x_i)
/// z = ∇u_+ + ∇u_−                      (forward differences)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SlotFields {
    pub y: SpaceTimeField,
    pub v: SpaceTimeField,
    pub w: Vec<SpaceTimeField>,
    pub z: Vec<SpaceTimeField>,
}

/// Kernels and quadrature weights shared by the action and the residuals.
pub(crate) struct Discretisation {
    pub kt: CaputoKernel,
    pub kx: Vec<CaputoKernel>,
    pub qt: Vec<f64>,
    pub qx: Vec<Vec<f64>>,
    pub ht: f64,
    pub hx: Vec<f64>,
}

impl Discretisation {
    pub fn new(tgrid: &TimeGrid, domain: &BoxDomain, cfg: &VarConfig) -> Self {
        let d = domain.dim();
        let hx: Vec<f64> = (0..d).map(|i| domain.spacing(i)).collect();
        Discretisation {
            kt: CaputoKernel::new(cfg.alpha, cfg.scheme, tgrid.h(), tgrid.n()),
            kx: (0..d).map(|i| CaputoKernel::new(cfg.alpha, cfg.scheme, hx[i], domain.n()[i])).collect(),
            qt: quad_weights(tgrid.n(), tgrid.h(), cfg.rule.time),
            qx: (0..d).map(|i| quad_weights(domain.n()[i], hx[i], cfg.rule.space)).collect(),
            ht: tgrid.h(),
            hx,
        }
    }

    /// Full tensor weight at a space-time multi-index.
    pub fn weight(&self, idx: &[usize]) -> f64 {
        self.qt[idx[0]] * idx[1..].iter().enumerate().map(|(i, &k)| self.qx[i][k]).product::<f64>()
    }

    pub fn time_caputo(&self, u: &ArrayViewD<'_, f64>, dir: Direction) -> ArrayD<f64> {
        caputo_lanes(u, 0, &self.kt, dir)
    }

    pub fn space_caputo(&self, u: &ArrayViewD<'_, f64>, i: usize, dir: Direction) -> ArrayD<f64> {
        caputo_lanes(u, i + 1, &self.kx[i], dir)
    }

    pub fn forward_diff(&self, u: &ArrayViewD<'_, f64>, i: usize) -> ArrayD<f64> {
        let h = self.hx[i];
        map_lanes(u, i + 1, |u, out| {
            let n = u.len() - 1;
            for k in 0..n {
                out[k] = (u[k + 1] - u[k]) / h;
            }
            out[n] = 0.0;
        })
    }

    pub fn time_caputo_adjoint(&self, g: &ArrayViewD<'_, f64>, dir: Direction) -> ArrayD<f64> {
        caputo_adjoint_lanes(g, 0, &self.kt, dir, &self.qt, self.ht)
    }

    pub fn space_caputo_adjoint(&self, g: &ArrayViewD<'_, f64>, i: usize, dir: Direction) -> ArrayD<f64> {
        caputo_adjoint_lanes(g, i + 1, &self.kx[i], dir, &self.qx[i], self.hx[i])
    }

    /// Weighted adjoint of [`forward_diff`](Self::forward_diff):
    /// `out_k = (q_{k−1} g_{k−1} − q_k g_k)/(ω h)`, which is `−div_b g` at
    /// nodes with full weight.
    pub fn forward_diff_adjoint(&self, g: &ArrayViewD<'_, f64>, i: usize) -> ArrayD<f64> {
        let h = self.hx[i];
        let q = &self.qx[i];
        map_lanes(g, i + 1, |g, out| {
            let n = g.len() - 1;
            for k in 0..=n {
                let left = if k > 0 { q[k - 1] * g[k - 1] } else { 0.0 };
                let here = if k < n { q[k] * g[k] } else { 0.0 };
                out[k] = (left - here) / (h * h);
            }
        })
    }
}

/// Builds the slot fields of `U`.
pub fn assemble_slots(u: &AsymmetricState, cfg: &VarConfig) -> Result<SlotFields> {
    let disc = Discretisation::new(u.tgrid(), u.domain(), cfg);
    assemble_with(&disc, u)
}

pub(crate) fn assemble_with(disc: &Discretisation, u: &AsymmetricState) -> Result<SlotFields> {
    let tgrid = *u.tgrid();
    let domain = u.domain().clone();
    let p = u.u_plus().values().view();
    let m = u.u_minus().values().view();
    let field = |values: ArrayD<f64>| SpaceTimeField::new(tgrid, domain.clone(), values, BoundaryClass::None);

    let y = field(&p + &m)?;
    let v = field(disc.time_caputo(&p, Direction::Forward) - disc.time_caputo(&m, Direction::Backward))?;
    let mut w = Vec::with_capacity(domain.dim());
    let mut z = Vec::with_capacity(domain.dim());
    for i in 0..domain.dim() {
        w.push(field(disc.space_caputo(&p, i, Direction::Forward) - disc.space_caputo(&m, i, Direction::Backward))?);
        z.push(field(disc.forward_diff(&p, i) + disc.forward_diff(&m, i))?);
    }
    Ok(SlotFields { y, v, w, z })
}
