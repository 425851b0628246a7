use ndarray::{ArrayD, ArrayViewD, Axis, Dimension, IxDyn};
use serde::{Deserialize, Serialize};

use super::{quad_weights, BoxDomain, QuadRule};
use crate::frac1d::{Samples1D, TimeGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lo,
    Hi,
}

/// One face of the box: all nodes whose `axis` index is `0` (lo) or `n`
/// (hi).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    pub axis: usize,
    pub side: Side,
}

impl Face {
    pub fn contains(&self, domain: &BoxDomain, idx: &[usize]) -> bool {
        match self.side {
            Side::Lo => idx[self.axis] == 0,
            Side::Hi => idx[self.axis] == domain.n()[self.axis],
        }
    }
}

/// Scalar field on the nodes of a box grid.
///
/// Non-finite values are allowed only on declared singular faces; these
/// come from Riemann-Liouville derivatives of fields that do not vanish on
/// the originating face.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField {
    domain: BoxDomain,
    values: ArrayD<f64>,
    dirichlet_zero: bool,
    singular: Vec<Face>,
}

impl SpatialField {
    pub fn new(domain: BoxDomain, values: ArrayD<f64>, dirichlet_zero: bool) -> Result<Self> {
        SpatialField::with_singular(domain, values, dirichlet_zero, Vec::new())
    }

    pub fn with_singular(
        domain: BoxDomain,
        values: ArrayD<f64>,
        dirichlet_zero: bool,
        singular: Vec<Face>,
    ) -> Result<Self> {
        if values.shape() != domain.shape().as_slice() {
            return Err(Error::Shape(format!(
                "field shape {:?} does not match grid {:?}",
                values.shape(),
                domain.shape()
            )));
        }
        for (idx, &v) in values.indexed_iter() {
            let idx = idx.slice();
            if !v.is_finite() && !singular.iter().any(|f| f.contains(&domain, idx)) {
                return Err(Error::NonFinite(format!("value {v} at node {idx:?}")));
            }
            if dirichlet_zero && domain.is_boundary(idx) && v != 0.0 {
                return Err(Error::Precondition(format!(
                    "dirichlet-zero field has value {v} at boundary node {idx:?}"
                )));
            }
        }
        Ok(SpatialField { domain, values, dirichlet_zero, singular })
    }

    /// Samples `f` at every node. With `dirichlet_zero` the boundary nodes
    /// are set to exactly zero instead of sampled.
    pub fn from_fn(domain: BoxDomain, dirichlet_zero: bool, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = ArrayD::from_shape_fn(IxDyn(&domain.shape()), |idx| {
            let idx = idx.slice();
            if dirichlet_zero && domain.is_boundary(idx) {
                0.0
            } else {
                f(&domain.coords(idx))
            }
        });
        SpatialField::new(domain, values, dirichlet_zero)
    }

    pub fn zeros(domain: BoxDomain) -> Self {
        let values = ArrayD::zeros(IxDyn(&domain.shape()));
        SpatialField { domain, values, dirichlet_zero: true, singular: Vec::new() }
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    pub fn into_values(self) -> ArrayD<f64> {
        self.values
    }

    pub fn dirichlet_zero(&self) -> bool {
        self.dirichlet_zero
    }

    pub fn singular_faces(&self) -> &[Face] {
        &self.singular
    }

    pub fn is_singular_node(&self, idx: &[usize]) -> bool {
        self.singular.iter().any(|f| f.contains(&self.domain, idx))
    }

    /// Same values with the Dirichlet class dropped.
    pub fn unconstrained(&self) -> SpatialField {
        SpatialField { dirichlet_zero: false, ..self.clone() }
    }

    /// Samples along the grid line parallel to `axis` through the off-axis
    /// multi-index `base` (length `dim - 1`, axes in order with `axis`
    /// skipped).
    pub fn line_extract(&self, axis: usize, base: &[usize]) -> Result<Samples1D> {
        let full = self.line_index(axis, base)?;
        let grid = self.domain.axis_grid(axis);
        let mut idx = full;
        let mut values = Vec::with_capacity(grid.len());
        let mut flagged = None;
        for k in 0..grid.len() {
            idx[axis] = k;
            let v = self.values[IxDyn(&idx)];
            if !v.is_finite() {
                if (k == 0 || k == grid.n()) && flagged.is_none() {
                    flagged = Some(k);
                } else {
                    return Err(Error::NonFinite(format!("line along axis {axis} at {base:?} lies in a singular face")));
                }
            }
            values.push(v);
        }
        Ok(Samples1D::with_flag(grid, values, flagged))
    }

    /// Returns a new field with the given grid line replaced by `line`.
    pub fn line_insert(&self, axis: usize, base: &[usize], line: &Samples1D) -> Result<SpatialField> {
        let mut idx = self.line_index(axis, base)?;
        if line.grid() != &self.domain.axis_grid(axis) {
            return Err(Error::Shape(format!(
                "line grid {:?} does not match axis {axis} grid",
                line.grid()
            )));
        }
        let mut values = self.values.clone();
        for (k, &v) in line.values().iter().enumerate() {
            idx[axis] = k;
            values[IxDyn(&idx)] = v;
        }
        let singular = self.singular.clone();
        SpatialField::with_singular(self.domain.clone(), values, self.dirichlet_zero, singular)
    }

    fn line_index(&self, axis: usize, base: &[usize]) -> Result<Vec<usize>> {
        let d = self.domain.dim();
        if axis >= d {
            return Err(Error::Shape(format!("axis {axis} out of range for dimension {d}")));
        }
        if base.len() != d - 1 {
            return Err(Error::Shape(format!("base index needs {} entries, got {}", d - 1, base.len())));
        }
        let mut full = Vec::with_capacity(d);
        let mut it = base.iter();
        for i in 0..d {
            if i == axis {
                full.push(0);
            } else {
                let k = *it.next().unwrap();
                if k > self.domain.n()[i] {
                    return Err(Error::Shape(format!("index {k} out of range on axis {i}")));
                }
                full.push(k);
            }
        }
        Ok(full)
    }

    /// Tensor-product quadrature. Nodes on singular faces are skipped.
    pub fn integrate(&self, rule: QuadRule) -> f64 {
        let w: Vec<Vec<f64>> = (0..self.domain.dim())
            .map(|i| quad_weights(self.domain.n()[i], self.domain.spacing(i), rule))
            .collect();
        integrate_tensor(&self.values.view(), &w, |idx| !self.is_singular_node(idx))
    }

    /// Largest absolute value over interior nodes.
    pub fn max_abs_interior(&self) -> f64 {
        self.values
            .indexed_iter()
            .filter(|(idx, _)| !self.domain.is_boundary(idx.slice()))
            .fold(0.0, |m, (_, v)| m.max(v.abs()))
    }
}

/// Which boundary nodes of a space-time field are pinned to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryClass {
    None,
    /// Zero on the spatial boundary at every time.
    SpaceZero,
    /// Zero on the spatial boundary and at the initial and final times.
    SpacetimeZero,
}

/// Scalar field `u(t, x)` on a time grid times a box grid; axis 0 is time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    tgrid: TimeGrid,
    domain: BoxDomain,
    values: ArrayD<f64>,
    class: BoundaryClass,
}

impl SpaceTimeField {
    pub fn new(tgrid: TimeGrid, domain: BoxDomain, values: ArrayD<f64>, class: BoundaryClass) -> Result<Self> {
        let shape = st_shape(&tgrid, &domain);
        if values.shape() != shape.as_slice() {
            return Err(Error::Shape(format!(
                "space-time field shape {:?} does not match grid {:?}",
                values.shape(),
                shape
            )));
        }
        let nt = tgrid.n();
        for (idx, &v) in values.indexed_iter() {
            let idx = idx.slice();
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("value {v} at node {idx:?}")));
            }
            let pinned = match class {
                BoundaryClass::None => false,
                BoundaryClass::SpaceZero => domain.is_boundary(&idx[1..]),
                BoundaryClass::SpacetimeZero => idx[0] == 0 || idx[0] == nt || domain.is_boundary(&idx[1..]),
            };
            if pinned && v != 0.0 {
                return Err(Error::Precondition(format!(
                    "{class:?} field has value {v} at boundary node {idx:?}"
                )));
            }
        }
        Ok(SpaceTimeField { tgrid, domain, values, class })
    }

    /// Samples `f(t, x)`; nodes pinned by `class` are set to exactly zero.
    pub fn from_fn(
        tgrid: TimeGrid,
        domain: BoxDomain,
        class: BoundaryClass,
        f: impl Fn(f64, &[f64]) -> f64,
    ) -> Result<Self> {
        let nt = tgrid.n();
        let values = ArrayD::from_shape_fn(IxDyn(&st_shape(&tgrid, &domain)), |idx| {
            let idx = idx.slice();
            let pinned = match class {
                BoundaryClass::None => false,
                BoundaryClass::SpaceZero => domain.is_boundary(&idx[1..]),
                BoundaryClass::SpacetimeZero => idx[0] == 0 || idx[0] == nt || domain.is_boundary(&idx[1..]),
            };
            if pinned {
                0.0
            } else {
                f(tgrid.node(idx[0]), &domain.coords(&idx[1..]))
            }
        });
        SpaceTimeField::new(tgrid, domain, values, class)
    }

    pub fn zeros(tgrid: TimeGrid, domain: BoxDomain, class: BoundaryClass) -> Self {
        let values = ArrayD::zeros(IxDyn(&st_shape(&tgrid, &domain)));
        SpaceTimeField { tgrid, domain, values, class }
    }

    /// Stacks spatial slices, one per time node.
    pub fn from_slices(tgrid: TimeGrid, slices: &[SpatialField], class: BoundaryClass) -> Result<Self> {
        if slices.len() != tgrid.len() {
            return Err(Error::Shape(format!("{} slices for {} time nodes", slices.len(), tgrid.len())));
        }
        let domain = slices[0].domain().clone();
        if slices.iter().any(|s| s.domain() != &domain) {
            return Err(Error::Shape("slices live on different grids".into()));
        }
        let views: Vec<_> = slices.iter().map(|s| s.values().view().insert_axis(Axis(0))).collect();
        let values = ndarray::concatenate(Axis(0), &views).map_err(|e| Error::Shape(e.to_string()))?;
        SpaceTimeField::new(tgrid, domain, values, class)
    }

    pub fn tgrid(&self) -> &TimeGrid {
        &self.tgrid
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    pub fn into_values(self) -> ArrayD<f64> {
        self.values
    }

    pub fn boundary_class(&self) -> BoundaryClass {
        self.class
    }

    /// Rebuilds the field under another boundary class, re-checking it.
    pub fn with_class(&self, class: BoundaryClass) -> Result<SpaceTimeField> {
        SpaceTimeField::new(self.tgrid, self.domain.clone(), self.values.clone(), class)
    }

    /// The spatial field at time node `j`.
    pub fn slice(&self, j: usize) -> SpatialField {
        let values = self.values.index_axis(Axis(0), j).to_owned();
        let dirichlet_zero = self.class != BoundaryClass::None;
        SpatialField { domain: self.domain.clone(), values, dirichlet_zero, singular: Vec::new() }
    }

    /// Time series at one spatial node.
    pub fn time_line(&self, space_idx: &[usize]) -> Samples1D {
        let values = (0..self.tgrid.len())
            .map(|j| {
                let mut idx = vec![j];
                idx.extend_from_slice(space_idx);
                self.values[IxDyn(&idx)]
            })
            .collect();
        Samples1D::new(self.tgrid, values).expect("finite by construction")
    }

    pub fn integrate(&self, time_rule: QuadRule, space_rule: QuadRule) -> f64 {
        let mut w = vec![quad_weights(self.tgrid.n(), self.tgrid.h(), time_rule)];
        for i in 0..self.domain.dim() {
            w.push(quad_weights(self.domain.n()[i], self.domain.spacing(i), space_rule));
        }
        integrate_tensor(&self.values.view(), &w, |_| true)
    }

    /// Largest absolute difference to another field on the same grids.
    pub fn max_abs_diff(&self, other: &SpaceTimeField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.values.iter().zip(other.values.iter()).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Discrete space-time L2 norm of the difference (trapezoid weights).
    pub fn l2_diff(&self, other: &SpaceTimeField) -> Result<f64> {
        self.check_same_grid(other)?;
        let diff = &self.values - &other.values;
        let sq = diff.mapv(|v| v * v);
        let field = SpaceTimeField { values: sq, class: BoundaryClass::None, ..self.clone() };
        Ok(field.integrate(QuadRule::Trapezoid, QuadRule::Trapezoid).sqrt())
    }

    pub fn check_same_grid(&self, other: &SpaceTimeField) -> Result<()> {
        if self.tgrid != other.tgrid || self.domain != other.domain {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        Ok(())
    }
}

pub(crate) fn st_shape(tgrid: &TimeGrid, domain: &BoxDomain) -> Vec<usize> {
    let mut shape = vec![tgrid.len()];
    shape.extend(domain.shape());
    shape
}

fn integrate_tensor(values: &ArrayViewD<'_, f64>, w: &[Vec<f64>], keep: impl Fn(&[usize]) -> bool) -> f64 {
    let mut sum = 0.0;
    for (idx, &v) in values.indexed_iter() {
        let idx = idx.slice();
        if !keep(idx) {
            continue;
        }
        let weight: f64 = idx.iter().enumerate().map(|(i, &k)| w[i][k]).product();
        if weight != 0.0 {
            sum += weight * v;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn unit2(n: usize) -> BoxDomain {
        BoxDomain::unit(2, n).unwrap()
    }

    #[test]
    fn box_validation() {
        assert!(BoxDomain::new(vec![0.0], vec![1.0], vec![2]).is_err());
        assert!(BoxDomain::new(vec![1.0], vec![0.0], vec![4]).is_err());
        assert!(BoxDomain::new(vec![0.0, 0.0], vec![1.0], vec![4, 4]).is_err());
        assert!(BoxDomain::new(vec![], vec![], vec![]).is_err());
        let d = BoxDomain::new(vec![0.0, -1.0], vec![1.0, 1.0], vec![4, 8]).unwrap();
        assert_eq!(d.shape(), vec![5, 9]);
        assert_eq!(d.spacing(1), 0.25);
        assert_eq!(d.coord(1, 8), 1.0);
    }

    #[test]
    fn line_extract_projections() {
        let d = unit2(8);
        let c = SpatialField::from_fn(d.clone(), false, |_| 3.0).unwrap();
        assert!(c.line_extract(0, &[2]).unwrap().values().iter().all(|&v| v == 3.0));

        let x1 = SpatialField::from_fn(d.clone(), false, |x| x[0]).unwrap();
        let line = x1.line_extract(0, &[5]).unwrap();
        assert_eq!(line.values(), d.axis_grid(0).nodes().as_slice());

        let prod = SpatialField::from_fn(d.clone(), false, |x| x[0] * x[1]).unwrap();
        // axis 0 line at x_2 = 0.5 (index 4)
        let line = prod.line_extract(0, &[4]).unwrap();
        for (j, &v) in line.values().iter().enumerate() {
            assert_eq!(v, 0.5 * d.coord(0, j));
        }
    }

    #[test]
    fn line_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = BoxDomain::new(vec![0.0; 3], vec![1.0, 2.0, 3.0], vec![4, 5, 6]).unwrap();
        let values = ArrayD::from_shape_fn(IxDyn(&d.shape()), |_| rng.random_range(-1.0..1.0));
        let f = SpatialField::new(d.clone(), values, false).unwrap();
        for axis in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&i| i != axis).collect();
            for p in 0..=d.n()[others[0]] {
                for q in 0..=d.n()[others[1]] {
                    let line = f.line_extract(axis, &[p, q]).unwrap();
                    assert_eq!(f.line_insert(axis, &[p, q], &line).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn line_insert_enforces_dirichlet() {
        let d = unit2(4);
        let z = SpatialField::zeros(d.clone());
        let zero_line = Samples1D::zeros(d.axis_grid(1));
        assert_eq!(z.line_insert(1, &[2], &zero_line).unwrap(), z);
        let ones = Samples1D::from_fn(d.axis_grid(1), |_| 1.0).unwrap();
        assert!(matches!(z.line_insert(1, &[2], &ones), Err(Error::Precondition(_))));
        assert!(z.line_extract(2, &[0]).is_err());
        assert!(z.line_extract(0, &[9]).is_err());
    }

    #[test]
    fn integrate_examples() {
        let tg = TimeGrid::new(0.0, 1.0, 8).unwrap();
        let d = BoxDomain::unit(1, 8).unwrap();
        let one = SpaceTimeField::from_fn(tg, d.clone(), BoundaryClass::None, |_, _| 1.0).unwrap();
        assert!((one.integrate(QuadRule::Trapezoid, QuadRule::Trapezoid) - 1.0).abs() < 1e-15);
        let z = SpaceTimeField::zeros(tg, d, BoundaryClass::SpacetimeZero);
        assert_eq!(z.integrate(QuadRule::Trapezoid, QuadRule::LeftRectangle), 0.0);

        let d = BoxDomain::unit(1, 1024).unwrap();
        let s = SpatialField::from_fn(d, false, |x| (PI * x[0]).sin()).unwrap();
        assert!((s.integrate(QuadRule::Trapezoid) - 2.0 / PI).abs() < 1e-5);
    }

    #[test]
    fn trapezoid_exact_for_affine() {
        let d = BoxDomain::new(vec![-1.0, 0.0], vec![2.0, 0.5], vec![7, 3]).unwrap();
        let f = SpatialField::from_fn(d, false, |x| 2.0 + 3.0 * x[0] - x[1]).unwrap();
        // volume 1.5, centroid (0.5, 0.25)
        let exact = 1.5 * (2.0 + 1.5 - 0.25);
        assert!((f.integrate(QuadRule::Trapezoid) - exact).abs() < 1e-13);
    }

    #[test]
    fn boundary_classes_checked() {
        let tg = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let d = BoxDomain::unit(1, 4).unwrap();
        let f = SpaceTimeField::from_fn(tg, d.clone(), BoundaryClass::SpaceZero, |t, x| 1.0 + t + x[0]).unwrap();
        assert_eq!(f.values()[[2, 0]], 0.0);
        assert_ne!(f.values()[[0, 2]], 0.0);
        assert!(f.with_class(BoundaryClass::SpacetimeZero).is_err());
        assert!(f.with_class(BoundaryClass::None).is_ok());
        let g = SpaceTimeField::from_fn(tg, d, BoundaryClass::SpacetimeZero, |_, _| 1.0).unwrap();
        assert_eq!(g.values()[[4, 2]], 0.0);
        assert_eq!(g.values()[[2, 2]], 1.0);
        assert!(g.slice(2).dirichlet_zero());
    }

    #[test]
    fn non_finite_rejected_outside_singular_faces() {
        let d = BoxDomain::unit(1, 4).unwrap();
        let mut v = ArrayD::zeros(IxDyn(&[5]));
        v[[0]] = f64::INFINITY;
        assert!(SpatialField::new(d.clone(), v.clone(), false).is_err());
        let f = SpatialField::with_singular(d, v, false, vec![Face { axis: 0, side: Side::Lo }]).unwrap();
        assert_eq!(f.line_extract(0, &[]).unwrap().flagged(), Some(0));
        assert_eq!(f.integrate(QuadRule::Trapezoid), 0.0);
    }
}
