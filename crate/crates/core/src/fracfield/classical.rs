use ndarray::{ArrayD, IxDyn};
use serde::{Deserialize, Serialize};

use super::VectorField;
use crate::domain::SpatialField;
use crate::exec::map_lanes;
use crate::Result;

/// Finite-difference stencils for classical gradients and divergences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffScheme {
    /// `(u_{k+1} − u_k)/h`, zero at the last node.
    Forward,
    /// `(u_k − u_{k−1})/h`. For gradients the first node is zero; for
    /// divergences the field is extended by zero, giving `u_0/h`.
    Backward,
    /// Central differences, second-order one-sided at the ends.
    Centered,
}

fn diff_lane(u: &[f64], out: &mut [f64], h: f64, scheme: DiffScheme, zero_extend: bool) {
    let n = u.len() - 1;
    match scheme {
        DiffScheme::Forward => {
            for k in 0..n {
                out[k] = (u[k + 1] - u[k]) / h;
            }
            out[n] = if zero_extend { -u[n] / h } else { 0.0 };
        }
        DiffScheme::Backward => {
            out[0] = if zero_extend { u[0] / h } else { 0.0 };
            for k in 1..=n {
                out[k] = (u[k] - u[k - 1]) / h;
            }
        }
        DiffScheme::Centered => {
            out[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
            for k in 1..n {
                out[k] = (u[k + 1] - u[k - 1]) / (2.0 * h);
            }
            out[n] = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
        }
    }
}

pub fn classical_grad(field: &SpatialField, scheme: DiffScheme) -> Result<VectorField> {
    let domain = field.domain();
    let components = (0..domain.dim())
        .map(|i| {
            let h = domain.spacing(i);
            let values = map_lanes(&field.values().view(), i, |u, out| diff_lane(u, out, h, scheme, false));
            SpatialField::new(domain.clone(), values, false)
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(components)
}

/// Classical divergence. With [`DiffScheme::Backward`] (and
/// [`DiffScheme::Forward`]) the field is extended by zero outside the box,
/// which makes `−div_b` the exact transpose of the forward-difference
/// gradient on fields vanishing on the boundary.
pub fn classical_div(vfield: &VectorField, scheme: DiffScheme) -> Result<SpatialField> {
    let domain = vfield.domain().clone();
    let mut values = ArrayD::<f64>::zeros(IxDyn(&domain.shape()));
    for (i, v) in vfield.components().iter().enumerate() {
        let h = domain.spacing(i);
        values += &map_lanes(&v.values().view(), i, |u, out| diff_lane(u, out, h, scheme, true));
    }
    SpatialField::new(domain, values, false)
}
