use ndarray::{ArrayD, ArrayViewD};
use serde::{Deserialize, Serialize};

use super::VectorField;
use crate::domain::{Face, Side, SpatialField};
use crate::exec::map_lanes;
use crate::frac1d::{gamma, CaputoKernel, Direction, FracOrder, Scheme};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FracKind {
    #[serde(rename = "RL")]
    Rl,
    #[serde(rename = "caputo")]
    Caputo,
}

/// Operator family of a fractional partial derivative: Riemann-Liouville or
/// Caputo, forward or backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracVecKind {
    pub kind: FracKind,
    pub direction: Direction,
}

impl FracVecKind {
    pub const CAPUTO_FORWARD: FracVecKind = FracVecKind { kind: FracKind::Caputo, direction: Direction::Forward };
    pub const CAPUTO_BACKWARD: FracVecKind = FracVecKind { kind: FracKind::Caputo, direction: Direction::Backward };
    pub const RL_FORWARD: FracVecKind = FracVecKind { kind: FracKind::Rl, direction: Direction::Forward };
    pub const RL_BACKWARD: FracVecKind = FracVecKind { kind: FracKind::Rl, direction: Direction::Backward };
}

/// Caputo derivative along every lane of `values` parallel to `axis`.
pub(crate) fn caputo_lanes(
    values: &ArrayViewD<'_, f64>,
    axis: usize,
    kernel: &CaputoKernel,
    dir: Direction,
) -> ArrayD<f64> {
    map_lanes(values, axis, |u, out| kernel.caputo(dir, u, out))
}

/// Weighted adjoint of [`caputo_lanes`] with lane quadrature weights `q`.
pub(crate) fn caputo_adjoint_lanes(
    values: &ArrayViewD<'_, f64>,
    axis: usize,
    kernel: &CaputoKernel,
    dir: Direction,
    q: &[f64],
    nominal: f64,
) -> ArrayD<f64> {
    map_lanes(values, axis, |g, out| kernel.caputo_adjoint(dir, g, q, nominal, out))
}

/// Fractional partial derivative along `axis`.
///
/// For the Riemann-Liouville kind, lanes that do not vanish at their
/// originating node produce `±∞` there and the originating face is
/// recorded as singular.
pub fn partial_frac(
    field: &SpatialField,
    axis: usize,
    alpha: FracOrder,
    kind: FracVecKind,
    scheme: Scheme,
) -> Result<SpatialField> {
    let domain = field.domain();
    if axis >= domain.dim() {
        return Err(Error::Shape(format!("axis {axis} out of range for dimension {}", domain.dim())));
    }
    if field.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("fractional derivative of a field with singular values".into()));
    }
    let grid = domain.axis_grid(axis);
    let kernel = CaputoKernel::new(alpha, scheme, grid.h(), grid.n());
    let dir = kind.direction;
    let values = match kind.kind {
        FracKind::Caputo => caputo_lanes(&field.values().view(), axis, &kernel, dir),
        FracKind::Rl => {
            let a = alpha.value();
            let g1 = gamma(1.0 - a);
            map_lanes(&field.values().view(), axis, |u, out| {
                let n = u.len() - 1;
                let origin = match dir {
                    Direction::Forward => 0,
                    Direction::Backward => n,
                };
                match scheme {
                    Scheme::L1 => {
                        kernel.caputo(dir, u, out);
                        if u[origin] != 0.0 {
                            for (j, o) in out.iter_mut().enumerate() {
                                let dist = (grid.node(j) - grid.node(origin)).abs();
                                if j != origin {
                                    *o += dist.powf(-a) / g1 * u[origin];
                                }
                            }
                        }
                    }
                    Scheme::Gl => kernel.convolve(dir, u, out),
                }
                out[origin] = if u[origin] != 0.0 { f64::INFINITY.copysign(u[origin]) } else { 0.0 };
            })
        }
    };
    let mut singular = Vec::new();
    if values.iter().any(|v| !v.is_finite()) {
        let side = match dir {
            Direction::Forward => Side::Lo,
            Direction::Backward => Side::Hi,
        };
        singular.push(Face { axis, side });
    }
    SpatialField::with_singular(domain.clone(), values, false, singular)
}

/// Fractional gradient: component `i` is the partial derivative along axis
/// `i`.
pub fn frac_gradient(field: &SpatialField, alpha: FracOrder, kind: FracVecKind, scheme: Scheme) -> Result<VectorField> {
    let components = (0..field.domain().dim())
        .map(|i| partial_frac(field, i, alpha, kind, scheme))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(components)
}

/// Fractional divergence `Σ_i ∂_i^α v_i`.
pub fn frac_divergence(vfield: &VectorField, alpha: FracOrder, kind: FracVecKind, scheme: Scheme) -> Result<SpatialField> {
    let domain = vfield.domain().clone();
    let mut values = ArrayD::<f64>::zeros(ndarray::IxDyn(&domain.shape()));
    let mut singular = Vec::new();
    for (i, v) in vfield.components().iter().enumerate() {
        let p = partial_frac(v, i, alpha, kind, scheme)?;
        singular.extend_from_slice(p.singular_faces());
        values += p.values();
    }
    SpatialField::with_singular(domain, values, false, singular)
}
