//! Shared fixtures for the criterion benches.

use fracvar_core::cdsolve::{case, Case};
use fracvar_core::{BoxDomain, FracOrder, Samples1D, Scheme, SpatialField, TimeGrid, VarConfig};

/// `t^{5/2}` on `[0, 1]` with `n` intervals.
pub fn power_samples(n: usize) -> Samples1D {
    Samples1D::from_fn(TimeGrid::new(0.0, 1.0, n).expect("grid"), |t| t.powf(2.5)).expect("samples")
}

/// A smooth field on the unit box vanishing on the lower faces.
pub fn box_field(dim: usize, n: usize) -> SpatialField {
    let domain = BoxDomain::unit(dim, n).expect("domain");
    SpatialField::from_fn(domain, false, |x| x.iter().map(|xi| xi * (1.0 - xi) + xi * xi * xi).product())
        .expect("field")
}

/// A catalog case with its grids at `n` intervals per axis.
pub struct Problem {
    pub case: Case,
    pub tgrid: TimeGrid,
    pub domain: BoxDomain,
    pub var: VarConfig,
}

pub fn problem(id: &str, n: usize) -> Problem {
    let case = case(id).expect("known case");
    let tgrid = case.tgrid(n).expect("grid");
    let domain = case.domain(n).expect("domain");
    Problem { case, tgrid, domain, var: VarConfig::new(FracOrder::HALF, Scheme::Gl) }
}
