use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::coeffs::{Initial, Source, SpaceTimeFn};
use super::CDCoefficients;
use crate::domain::{BoundaryClass, BoxDomain, SpaceTimeField};
use crate::frac1d::TimeGrid;
use crate::{Error, Result};

/// Ids of the built-in cases, in catalog order.
pub const CASE_IDS: [&str; 6] = ["zero", "sep-sine", "manu-cd-1d", "manu-cd-2d", "pure-time", "affine-time"];

/// A convection-diffusion problem on a fixed box and time interval, with an
/// optional closed-form solution.
#[derive(Clone)]
pub struct Case {
    pub id: String,
    pub coeffs: CDCoefficients,
    pub a: f64,
    pub b: f64,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Exact solution; compared at interior nodes only.
    pub exact: Option<SpaceTimeFn>,
}

impl fmt::Debug for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Case")
            .field("id", &self.id)
            .field("coeffs", &self.coeffs)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl Case {
    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn tgrid(&self, n: usize) -> Result<TimeGrid> {
        TimeGrid::new(self.a, self.b, n)
    }

    /// Box with `n` intervals per axis.
    pub fn domain(&self, n: usize) -> Result<BoxDomain> {
        BoxDomain::new(self.lo.clone(), self.hi.clone(), vec![n; self.dim()])
    }

    /// Exact solution sampled with the boundary pinned to zero.
    pub fn exact_field(&self, tgrid: &TimeGrid, domain: &BoxDomain) -> Option<Result<SpaceTimeField>> {
        let f = self.exact.clone()?;
        Some(SpaceTimeField::from_fn(*tgrid, domain.clone(), BoundaryClass::SpaceZero, move |t, x| f(t, x)))
    }
}

fn sines(x: &[f64], k: f64) -> f64 {
    x.iter().map(|x| (k * PI * x).sin()).product()
}

/// Looks up a built-in case by id.
pub fn case(id: &str) -> Result<Case> {
    let unit = |d: usize| (vec![0.0; d], vec![1.0; d]);
    let build = |gamma: Vec<f64>, k: Vec<Vec<f64>>, beta: f64, source: Source, u0: Initial, exact: Option<SpaceTimeFn>| {
        let (lo, hi) = unit(gamma.len());
        Ok::<_, Error>(Case {
            id: id.to_string(),
            coeffs: CDCoefficients::new(gamma, k, beta, source, u0)?,
            a: 0.0,
            b: 1.0,
            lo,
            hi,
            exact,
        })
    };
    match id {
        "zero" => build(vec![1.0], vec![vec![0.1]], 0.5, Source::zero(), Initial::zero(), Some(Arc::new(|_, _| 0.0))),
        "sep-sine" => {
            let kappa = 0.1;
            build(
                vec![0.0],
                vec![vec![kappa]],
                0.0,
                Source::zero(),
                Initial::function(|x| sines(x, 1.0)),
                Some(Arc::new(move |t, x| (-kappa * PI * PI * t).exp() * sines(x, 1.0))),
            )
        }
        "manu-cd-1d" => {
            let (g, k, beta) = (1.0, 0.1, 0.5);
            let f = move |t: f64, x: &[f64]| {
                let e = (-t).exp();
                (-1.0 + k * PI * PI + beta) * e * (PI * x[0]).sin() + g * PI * e * (PI * x[0]).cos()
            };
            build(
                vec![g],
                vec![vec![k]],
                beta,
                Source::function(f),
                Initial::function(|x| sines(x, 1.0)),
                Some(Arc::new(|t, x| (-t).exp() * sines(x, 1.0))),
            )
        }
        "manu-cd-2d" => {
            let (g1, g2) = (1.0, 0.5);
            let (k11, k12, k22) = (0.1, 0.02, 0.05);
            let beta = 0.5;
            let f = move |t: f64, x: &[f64]| {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                (-t).exp()
                    * ((-1.0 + PI * PI * (k11 + k22) + beta) * sx * sy + PI * (g1 * cx * sy + g2 * sx * cy)
                        - 2.0 * k12 * PI * PI * cx * cy)
            };
            build(
                vec![g1, g2],
                vec![vec![k11, k12], vec![k12, k22]],
                beta,
                Source::function(f),
                Initial::function(|x| sines(x, 1.0)),
                Some(Arc::new(|t, x| (-t).exp() * sines(x, 1.0))),
            )
        }
        // u' + u/2 = cos t, u(0) = 1 at the single interior node of a
        // collapsed domain
        "pure-time" => build(
            vec![0.0],
            vec![vec![0.0]],
            0.5,
            Source::function(|t, _| t.cos()),
            Initial::function(|_| 1.0),
            Some(Arc::new(|t, _| 0.4 * t.cos() + 0.8 * t.sin() + 0.6 * (-0.5 * t).exp())),
        ),
        "affine-time" => build(
            vec![0.0],
            vec![vec![0.0]],
            0.5,
            Source::function(|t, x| sines(x, 1.0) * (1.0 + 0.5 * (1.0 + t))),
            Initial::function(|x| sines(x, 1.0)),
            Some(Arc::new(|t, x| (1.0 + t) * sines(x, 1.0))),
        ),
        other => Err(Error::Config {
            field: "case".into(),
            reason: format!("unknown case id `{other}`; known: {}", CASE_IDS.join(", ")),
        }),
    }
}

/// `u* + 0.1 Π sin(2πx_i)`: a field that does not solve the equation.
pub(crate) fn perturbed(exact: SpaceTimeFn) -> SpaceTimeFn {
    Arc::new(move |t, x| exact(t, x) + 0.1 * sines(x, 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `u_t + γ·∇u − div(K∇u) + βu − f` of the exact solution by centered
    /// finite differences with step `e`.
    fn pde_defect(c: &Case, t: f64, x: &[f64], e: f64) -> f64 {
        let u = c.exact.as_ref().unwrap();
        let k = c.coeffs.k();
        let d = x.len();
        let at = |dx: &[(usize, f64)]| {
            let mut y = x.to_vec();
            for &(i, s) in dx {
                y[i] += s;
            }
            u(t, &y)
        };
        let ut = (u(t + e, x) - u(t - e, x)) / (2.0 * e);
        let mut lhs = ut + c.coeffs.beta() * u(t, x);
        for i in 0..d {
            lhs += c.coeffs.gamma()[i] * (at(&[(i, e)]) - at(&[(i, -e)])) / (2.0 * e);
            for l in 0..d {
                let second = if i == l {
                    (at(&[(i, e)]) - 2.0 * u(t, x) + at(&[(i, -e)])) / (e * e)
                } else {
                    (at(&[(i, e), (l, e)]) - at(&[(i, e), (l, -e)]) - at(&[(i, -e), (l, e)]) + at(&[(i, -e), (l, -e)]))
                        / (4.0 * e * e)
                };
                lhs -= k[i][l] * second;
            }
        }
        let f = match c.coeffs.source() {
            Source::Function(f) => f(t, x),
            Source::Sampled(_) => unreachable!(),
        };
        lhs - f
    }

    #[test]
    fn catalog_solutions_satisfy_the_equation() {
        for id in CASE_IDS {
            let c = case(id).unwrap();
            let pts: &[&[f64]] = if c.dim() == 1 { &[&[0.3], &[0.71]] } else { &[&[0.3, 0.6], &[0.8, 0.15]] };
            for x in pts {
                for t in [0.2, 0.65] {
                    let r = pde_defect(&c, t, x, 1e-4);
                    assert!(r.abs() < 1e-5, "{id} at t={t} x={x:?}: {r}");
                }
            }
        }
    }

    #[test]
    fn initial_values_match_exact() {
        for id in CASE_IDS {
            let c = case(id).unwrap();
            let u = c.exact.as_ref().unwrap();
            let u0 = match c.coeffs.u0() {
                Initial::Function(f) => f.clone(),
                Initial::Sampled(_) => unreachable!(),
            };
            let x = vec![0.37; c.dim()];
            assert!((u(0.0, &x) - u0(&x)).abs() < 1e-15, "{id}");
        }
    }

    #[test]
    fn unknown_case_is_a_config_error() {
        match case("nope") {
            Err(Error::Config { field, .. }) => assert_eq!(field, "case"),
            other => panic!("{other:?}"),
        }
    }
}
