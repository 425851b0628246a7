use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Fractional order α with 0 < α < 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub const HALF: FracOrder = FracOrder(0.5);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        FracOrder::new(v)
    }
}

impl From<FracOrder> for f64 {
    fn from(a: FracOrder) -> f64 {
        a.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Integration from the left endpoint (`D_+`).
    Forward,
    /// Integration toward the right endpoint (`D_−`).
    Backward,
}

/// Discretisation scheme. For Riemann-Liouville derivatives, `L1` means the
/// L1 Caputo value plus the closed-form boundary term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    L1,
    #[serde(rename = "GL")]
    Gl,
}

/// Uniform grid `t_j = a + j h`, `h = (b − a)/n`, `j = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    a: f64,
    b: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidGrid(format!("need finite a < b, got [{a}, {b}]")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 intervals, got {n}")));
        }
        Ok(TimeGrid { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Node `j`; the last node is `b` exactly.
    pub fn node(&self, j: usize) -> f64 {
        if j == self.n {
            self.b
        } else {
            self.a + j as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.node(j)).collect()
    }

    /// The grid mirrored about its midpoint is the same grid; this maps a
    /// node index to its mirror image.
    pub fn mirror(&self, j: usize) -> usize {
        self.n - j
    }
}

/// Samples of a scalar function at the nodes of a [`TimeGrid`].
///
/// Values are finite, except that a Riemann-Liouville derivative may carry a
/// flagged non-finite value at its originating endpoint (where the exact
/// derivative is singular because `f` does not vanish there).
#[derive(Debug, Clone, PartialEq)]
pub struct Samples1D {
    grid: TimeGrid,
    values: Vec<f64>,
    flagged: Option<usize>,
}

impl Samples1D {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for {} nodes", values.len(), grid.len())));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sample {j} is {}", values[j])));
        }
        Ok(Samples1D { grid, values, flagged: None })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Samples1D::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Samples1D { grid, values: vec![0.0; grid.len()], flagged: None }
    }

    /// Values with an optional flagged endpoint; only the flagged node may
    /// be non-finite.
    pub(crate) fn with_flag(grid: TimeGrid, values: Vec<f64>, flagged: Option<usize>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        debug_assert!(values.iter().enumerate().all(|(j, v)| v.is_finite() || Some(j) == flagged));
        Samples1D { grid, values, flagged }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Index of the flagged singular endpoint, if any.
    pub fn flagged(&self) -> Option<usize> {
        self.flagged
    }

    /// `f(a + b − t)`: the samples in reverse order.
    pub fn reflect(&self) -> Samples1D {
        let mut values = self.values.clone();
        values.reverse();
        Samples1D { grid: self.grid, values, flagged: self.flagged.map(|j| self.grid.mirror(j)) }
    }

    /// Maximum absolute value over the nodes `lo..=hi`, skipping a flagged
    /// node.
    pub fn max_abs_on(&self, lo: usize, hi: usize) -> f64 {
        (lo..=hi)
            .filter(|&j| Some(j) != self.flagged)
            .map(|j| self.values[j].abs())
            .fold(0.0, f64::max)
    }

    /// Composite trapezoid integral. A flagged node is excluded (its weight
    /// is dropped), which is the documented treatment of the integrable
    /// endpoint singularity.
    pub fn trapezoid(&self) -> f64 {
        let h = self.grid.h();
        let n = self.grid.n();
        self.values
            .iter()
            .enumerate()
            .filter(|(j, _)| Some(*j) != self.flagged)
            .map(|(j, v)| if j == 0 || j == n { 0.5 * h * v } else { h * v })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_order_bounds() {
        assert!(FracOrder::new(0.5).is_ok());
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.0).is_err());
        assert!(FracOrder::new(1.5).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn grid_nodes_uniform_and_exact_endpoints() {
        let g = TimeGrid::new(0.3, 1.7, 7).unwrap();
        let nodes = g.nodes();
        assert_eq!(nodes[0], 0.3);
        assert_eq!(nodes[7], 1.7);
        for w in nodes.windows(2) {
            assert!((w[1] - w[0] - g.h()).abs() < 1e-15);
        }
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn samples_reject_bad_input() {
        let g = TimeGrid::new(0.0, 1.0, 4).unwrap();
        assert!(Samples1D::new(g, vec![0.0; 4]).is_err());
        assert!(Samples1D::new(g, vec![0.0, 1.0, f64::INFINITY, 0.0, 0.0]).is_err());
    }

    #[test]
    fn trapezoid_exact_for_affine() {
        let g = TimeGrid::new(-1.0, 2.0, 9).unwrap();
        let s = Samples1D::from_fn(g, |t| 3.0 * t - 1.0).unwrap();
        // ∫_{-1}^{2} (3t − 1) dt = 1.5
        assert!((s.trapezoid() - 1.5).abs() < 1e-14);
    }
}
