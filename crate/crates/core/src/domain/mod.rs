//! Axis-aligned boxes, tensor grids and the scalar fields that live on them.
//!
//! Grids are node-centred and uniform per axis, boundary nodes included.
//! Every grid line parallel to axis `i` spans the full segment
//! `[lo_i, hi_i]`, so 1D fractional operators apply to each line with the
//! same endpoints. Fields are immutable; operations build new fields.
//!
//! Multi-indices are ordered lexicographically (axis 0 slowest). Space-time
//! arrays carry time as their leading axis.

mod csv_io;
mod field;
mod quad;

use serde::{Deserialize, Serialize};

pub use csv_io::{read_field_csv, write_field_csv, read_field_csv_path, write_field_csv_path};
pub use field::{BoundaryClass, Face, Side, SpaceTimeField, SpatialField};
pub use quad::{quad_weights, QuadRule};

use crate::frac1d::TimeGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
    n: Vec<usize>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, n: Vec<usize>) -> Result<Self> {
        let d = lo.len();
        if d == 0 {
            return Err(Error::InvalidGrid("box needs at least one axis".into()));
        }
        if hi.len() != d || n.len() != d {
            return Err(Error::InvalidGrid(format!(
                "lo/hi/n lengths differ: {}/{}/{}",
                d,
                hi.len(),
                n.len()
            )));
        }
        for i in 0..d {
            if !(lo[i].is_finite() && hi[i].is_finite()) || lo[i] >= hi[i] {
                return Err(Error::InvalidGrid(format!("axis {i}: need lo < hi, got [{}, {}]", lo[i], hi[i])));
            }
            if n[i] < 3 {
                return Err(Error::InvalidGrid(format!("axis {i}: need at least 3 intervals, got {}", n[i])));
            }
        }
        Ok(BoxDomain { lo, hi, n })
    }

    /// `[0, 1]^dim` with `n` intervals per axis.
    pub fn unit(dim: usize, n: usize) -> Result<Self> {
        BoxDomain::new(vec![0.0; dim], vec![1.0; dim], vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    /// Intervals per axis.
    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.axis_grid(axis).h()
    }

    /// The grid along one axis as a 1D grid on `[lo_i, hi_i]`.
    pub fn axis_grid(&self, axis: usize) -> TimeGrid {
        TimeGrid::new(self.lo[axis], self.hi[axis], self.n[axis]).expect("validated at construction")
    }

    pub fn coord(&self, axis: usize, k: usize) -> f64 {
        self.axis_grid(axis).node(k)
    }

    pub fn coords(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().enumerate().map(|(i, &k)| self.coord(i, k)).collect()
    }

    /// Node counts per axis (`n_i + 1`).
    pub fn shape(&self) -> Vec<usize> {
        self.n.iter().map(|n| n + 1).collect()
    }

    pub fn node_count(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_boundary(&self, idx: &[usize]) -> bool {
        idx.iter().zip(&self.n).any(|(&k, &n)| k == 0 || k == n)
    }

    /// Product of the spacings: the volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.spacing(i)).product()
    }
}
