use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use ndarray::{ArrayD, Dimension, IxDyn};

use crate::domain::{BoxDomain, SpaceTimeField, SpatialField};
use crate::frac1d::TimeGrid;
use crate::{Error, Result};

pub type SpaceTimeFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
pub type SpaceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Source term `f(t, x)`: a closed form or values on a specific grid.
#[derive(Clone)]
pub enum Source {
    Function(SpaceTimeFn),
    Sampled(SpaceTimeField),
}

impl Source {
    pub fn zero() -> Self {
        Source::Function(Arc::new(|_, _| 0.0))
    }

    pub fn constant(c: f64) -> Self {
        Source::Function(Arc::new(move |_, _| c))
    }

    pub fn function(f: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Source::Function(Arc::new(f))
    }

    /// Values at every node of `tgrid × domain`, time axis first.
    pub fn sample(&self, tgrid: &TimeGrid, domain: &BoxDomain) -> Result<ArrayD<f64>> {
        let values = match self {
            Source::Function(f) => {
                let mut shape = vec![tgrid.len()];
                shape.extend(domain.shape());
                ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
                    let idx = idx.slice();
                    f(tgrid.node(idx[0]), &domain.coords(&idx[1..]))
                })
            }
            Source::Sampled(s) => {
                if s.tgrid() != tgrid || s.domain() != domain {
                    return Err(Error::Shape("sampled source lives on a different grid than the solve".into()));
                }
                s.values().clone()
            }
        };
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("source value {v}")));
        }
        Ok(values)
    }
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Function(_) => f.write_str("Source::Function"),
            Source::Sampled(s) => write!(f, "Source::Sampled({:?})", s.values().shape()),
        }
    }
}

/// Initial condition `u0(x)`: a closed form or values on a specific grid.
#[derive(Clone)]
pub enum Initial {
    Function(SpaceFn),
    Sampled(SpatialField),
}

impl Initial {
    pub fn zero() -> Self {
        Initial::Function(Arc::new(|_| 0.0))
    }

    pub fn function(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Initial::Function(Arc::new(f))
    }

    /// Values on `domain` with boundary nodes set to zero.
    pub fn sample(&self, domain: &BoxDomain) -> Result<SpatialField> {
        match self {
            Initial::Function(f) => SpatialField::from_fn(domain.clone(), true, |x| f(x)),
            Initial::Sampled(s) => {
                if s.domain() != domain {
                    return Err(Error::Shape("sampled initial condition lives on a different grid".into()));
                }
                let mut values = s.values().clone();
                for (idx, v) in values.indexed_iter_mut() {
                    if domain.is_boundary(idx.slice()) {
                        *v = 0.0;
                    }
                }
                SpatialField::new(domain.clone(), values, true)
            }
        }
    }
}

impl fmt::Debug for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Initial::Function(_) => f.write_str("Initial::Function"),
            Initial::Sampled(s) => write!(f, "Initial::Sampled({:?})", s.values().shape()),
        }
    }
}

/// Constant coefficients of `u_t + γ·∇u − div(K∇u) + βu = f`.
#[derive(Debug, Clone)]
pub struct CDCoefficients {
    gamma: Vec<f64>,
    k: Vec<Vec<f64>>,
    beta: f64,
    source: Source,
    u0: Initial,
}

impl CDCoefficients {
    /// Validates the coefficients: `K` must be symmetric to 1e-14 and
    /// positive definite (the zero matrix is also accepted, giving a pure
    /// transport or reaction problem); `β ≥ 0`.
    pub fn new(gamma: Vec<f64>, k: Vec<Vec<f64>>, beta: f64, source: Source, u0: Initial) -> Result<Self> {
        let d = gamma.len();
        let bad = |field: &str, reason: String| Error::Coefficients { field: field.into(), reason };
        if d == 0 {
            return Err(bad("gamma", "needs at least one component".into()));
        }
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(bad("gamma", "components must be finite".into()));
        }
        if k.len() != d || k.iter().any(|r| r.len() != d) {
            return Err(bad("K", format!("must be {d}x{d} to match gamma")));
        }
        if k.iter().flatten().any(|v| !v.is_finite()) {
            return Err(bad("K", "entries must be finite".into()));
        }
        for i in 0..d {
            for j in 0..d {
                if (k[i][j] - k[j][i]).abs() > 1e-14 {
                    return Err(bad("K", format!("not symmetric: K[{i}][{j}] = {} but K[{j}][{i}] = {}", k[i][j], k[j][i])));
                }
            }
        }
        let is_zero = k.iter().flatten().all(|&v| v == 0.0);
        if !is_zero {
            let m = DMatrix::from_fn(d, d, |i, j| k[i][j]);
            if m.cholesky().is_none() {
                return Err(bad("K", "not positive definite".into()));
            }
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(bad("beta", format!("must be finite and non-negative, got {beta}")));
        }
        Ok(CDCoefficients { gamma, k, beta, source, u0 })
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn k(&self) -> &[Vec<f64>] {
        &self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn u0(&self) -> &Initial {
        &self.u0
    }

    pub fn with_source(&self, source: Source) -> Self {
        CDCoefficients { source, ..self.clone() }
    }

    pub(crate) fn check_domain(&self, domain: &BoxDomain) -> Result<()> {
        if domain.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "coefficients are {}-dimensional but the domain is {}-dimensional",
                self.dim(),
                domain.dim()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn make(k: Vec<Vec<f64>>, beta: f64) -> Result<CDCoefficients> {
        CDCoefficients::new(vec![1.0, 0.0], k, beta, Source::zero(), Initial::zero())
    }

    #[test]
    fn validation() {
        assert!(make(vec![vec![0.1, 0.0], vec![0.0, 0.1]], 0.0).is_ok());
        assert!(make(vec![vec![0.0, 0.0], vec![0.0, 0.0]], 0.0).is_ok());
        let e = make(vec![vec![0.1, 0.02], vec![0.0, 0.1]], 0.0).unwrap_err();
        assert!(e.to_string().contains('K'), "{e}");
        assert!(make(vec![vec![0.1, 0.2], vec![0.2, 0.1]], 0.0).is_err());
        assert!(make(vec![vec![-0.1, 0.0], vec![0.0, -0.1]], 0.0).is_err());
        assert!(make(vec![vec![0.1, 0.0], vec![0.0, 0.1]], -1.0).unwrap_err().to_string().contains("beta"));
        assert!(make(vec![vec![0.1]], 0.0).is_err());
    }

    #[test]
    fn sampling() {
        let tg = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let d = BoxDomain::unit(1, 4).unwrap();
        let s = Source::function(|t, x| t + x[0]).sample(&tg, &d).unwrap();
        assert_eq!(s[[2, 1]], 0.75);
        let u0 = Initial::function(|_| 1.0).sample(&d).unwrap();
        assert_eq!(u0.values()[[0]], 0.0);
        assert_eq!(u0.values()[[2]], 1.0);
        assert!(Source::constant(f64::NAN).sample(&tg, &d).is_err());
    }
}
