use ndarray::Dimension;

use super::vector::product;
use super::{classical_grad, frac_divergence, frac_gradient, DiffScheme, FracVecKind, VectorField};
use crate::domain::{QuadRule, SpatialField};
use crate::frac1d::{FracOrder, Scheme};
use crate::report::CheckReport;
use crate::{Error, Result};

/// Absolute tolerance on `|lhs − rhs|` for a single Green-Riemann check.
pub const GREEN_RIEMANN_TOL: f64 = 1e-3;

/// Tolerance for the GL div-grad identity, relative to the size of the
/// backward-difference directional derivative.
const DIV_GRAD_GL_TOL: f64 = 1e-12;

/// Compares `div^{1/2}(γ × ᶜ∇^{1/2} u)` with `γ·∇u` on interior nodes.
///
/// The inner gradient is forward Caputo and the outer divergence forward
/// Riemann-Liouville. With `Scheme::L1` the reference is the centered
/// classical gradient and the norm only decreases under refinement. With
/// `Scheme::Gl` the two half-order kernels compose to the backward
/// difference, so the reference is the backward-difference gradient and the
/// identity holds to roundoff.
pub fn check_div_grad(field: &SpatialField, gamma: &[f64], scheme: Scheme) -> Result<CheckReport> {
    let domain = field.domain();
    if gamma.len() != domain.dim() {
        return Err(Error::Shape(format!("{} velocity components on a {}-dimensional domain", gamma.len(), domain.dim())));
    }
    let half = FracOrder::HALF;
    let inner = frac_gradient(field, half, FracVecKind::CAPUTO_FORWARD, scheme)?.componentwise(gamma)?;
    let lhs = frac_divergence(&inner, half, FracVecKind::RL_FORWARD, scheme)?;
    let (grad, name) = match scheme {
        Scheme::L1 => (classical_grad(field, DiffScheme::Centered)?, "div_grad_l1"),
        Scheme::Gl => (classical_grad(field, DiffScheme::Backward)?, "div_grad_gl"),
    };
    let mut rhs = ndarray::ArrayD::<f64>::zeros(lhs.values().raw_dim());
    for (g, c) in gamma.iter().zip(grad.components()) {
        rhs.scaled_add(*g, c.values());
    }
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for ((idx, l), r) in lhs.values().indexed_iter().zip(rhs.iter()) {
        if domain.is_boundary(idx.slice()) {
            continue;
        }
        err = err.max((l - r).abs());
        scale = scale.max(r.abs());
    }
    let pass = match scheme {
        Scheme::L1 => err.is_finite(),
        Scheme::Gl => err <= DIV_GRAD_GL_TOL * scale.max(1.0),
    };
    Ok(CheckReport::new(name, domain.n().to_vec(), vec![err], pass).with_detail("reference_sup", scale))
}

/// Fractional Green-Riemann check
/// `∫ v·ᶜ∇̄^α u = ∫ div^α(v) u` for `u` vanishing on the boundary.
///
/// The left side uses the backward Caputo gradient, the right side the
/// forward Riemann-Liouville divergence. Nodes on faces where the
/// divergence is singular are left out of the right-hand quadrature; `u`
/// vanishes there, so the excluded integrand is a `0·∞` boundary artefact.
pub fn check_green_riemann(u: &SpatialField, v: &VectorField, alpha: FracOrder, scheme: Scheme) -> Result<CheckReport> {
    if !u.dirichlet_zero() {
        return Err(Error::Precondition("Green-Riemann check needs u vanishing on the boundary".into()));
    }
    if u.domain() != v.domain() {
        return Err(Error::Shape("u and v live on different grids".into()));
    }
    let grad = frac_gradient(u, alpha, FracVecKind::CAPUTO_BACKWARD, scheme)?;
    let lhs = v.dot_integral(&grad, QuadRule::Trapezoid)?;
    let div = frac_divergence(v, alpha, FracVecKind::RL_FORWARD, scheme)?;
    let rhs = product(&div, u)?.integrate(QuadRule::Trapezoid);
    let diff = (lhs - rhs).abs();
    Ok(CheckReport::new("green_riemann", u.domain().n().to_vec(), vec![diff], diff <= GREEN_RIEMANN_TOL)
        .with_detail("lhs", lhs)
        .with_detail("rhs", rhs)
        .with_detail("singular_faces", div.singular_faces().len() as f64))
}
