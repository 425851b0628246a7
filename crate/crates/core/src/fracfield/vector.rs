use crate::domain::{BoxDomain, QuadRule, SpatialField};
use crate::{Error, Result};

/// A `d`-component vector field on a box grid, one [`SpatialField`] per
/// axis.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<SpatialField>,
}

impl VectorField {
    pub fn new(components: Vec<SpatialField>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Shape("vector field needs at least one component".into()));
        };
        let domain = first.domain();
        if components.len() != domain.dim() {
            return Err(Error::Shape(format!(
                "{} components on a {}-dimensional domain",
                components.len(),
                domain.dim()
            )));
        }
        if components.iter().any(|c| c.domain() != domain) {
            return Err(Error::Shape("components live on different grids".into()));
        }
        Ok(VectorField { components })
    }

    pub fn zeros(domain: &BoxDomain) -> Self {
        VectorField { components: (0..domain.dim()).map(|_| SpatialField::zeros(domain.clone())).collect() }
    }

    /// Component `i` sampled from `f(i, x)`.
    pub fn from_fn(domain: &BoxDomain, f: impl Fn(usize, &[f64]) -> f64) -> Result<Self> {
        let components = (0..domain.dim())
            .map(|i| SpatialField::from_fn(domain.clone(), false, |x| f(i, x)))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn domain(&self) -> &BoxDomain {
        self.components[0].domain()
    }

    pub fn components(&self) -> &[SpatialField] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SpatialField {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<SpatialField> {
        self.components
    }

    /// Componentwise product `γ × v = (γ_1 v_1, …, γ_d v_d)`.
    pub fn componentwise(&self, gamma: &[f64]) -> Result<VectorField> {
        if gamma.len() != self.dim() {
            return Err(Error::Shape(format!("{} factors for {} components", gamma.len(), self.dim())));
        }
        let components = self
            .components
            .iter()
            .zip(gamma)
            .map(|(c, &g)| {
                let values = c.values().mapv(|v| g * v);
                SpatialField::with_singular(c.domain().clone(), values, false, c.singular_faces().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { components })
    }

    /// Quadrature of the pointwise dot product. Nodes on a singular face of
    /// either operand are skipped.
    pub fn dot_integral(&self, other: &VectorField, rule: QuadRule) -> Result<f64> {
        if self.domain() != other.domain() {
            return Err(Error::Shape("vector fields live on different grids".into()));
        }
        let mut total = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            total += product(a, b)?.integrate(rule);
        }
        Ok(total)
    }
}

/// Pointwise product; singular faces of both factors carry over.
pub(crate) fn product(a: &SpatialField, b: &SpatialField) -> Result<SpatialField> {
    let values = a.values() * b.values();
    let mut faces = a.singular_faces().to_vec();
    faces.extend_from_slice(b.singular_faces());
    SpatialField::with_singular(a.domain().clone(), values, false, faces)
}
