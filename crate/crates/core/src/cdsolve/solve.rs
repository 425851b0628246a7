use nalgebra::DMatrix;
use ndarray::{ArrayD, Axis, Dimension, IxDyn};
use serde::{Deserialize, Serialize};

use super::classical::Convection;
use super::linalg::{bicgstab, DenseLu, IterStats};
use super::CDCoefficients;
use crate::domain::{BoundaryClass, BoxDomain, SpaceTimeField};
use crate::frac1d::{Direction, Scheme, TimeGrid};
use crate::varcalc::{Discretisation, VarConfig};
use crate::{Error, Result};

/// How the per-step linear systems were solved.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearDiagnostics {
    pub method: String,
    /// `true` when one factorisation was reused for every step.
    pub factorized: bool,
    pub steps: usize,
    pub max_iterations: usize,
    pub max_relative_residual: f64,
}

impl LinearDiagnostics {
    pub(crate) fn new(method: &str, factorized: bool) -> Self {
        LinearDiagnostics { method: method.into(), factorized, steps: 0, max_iterations: 0, max_relative_residual: 0.0 }
    }

    pub(crate) fn record(&mut self, s: IterStats) {
        self.max_iterations = self.max_iterations.max(s.iterations);
        self.max_relative_residual = self.max_relative_residual.max(s.relative_residual);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveMeta {
    pub solver: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convection: Option<Convection>,
    pub linear: LinearDiagnostics,
}

/// Solution field (zero on the spatial boundary, initial slice `u0`) with
/// solver metadata.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u: SpaceTimeField,
    pub meta: SolveMeta,
}

/// Interior spatial multi-indices in lexicographic order.
pub(crate) fn interior_nodes(domain: &BoxDomain) -> Vec<Vec<usize>> {
    let probe = ArrayD::<u8>::zeros(IxDyn(&domain.shape()));
    probe
        .indexed_iter()
        .map(|(idx, _)| idx.slice().to_vec())
        .filter(|idx| !domain.is_boundary(idx))
        .collect()
}

/// Builds a space-zero field from interior vectors, one per time node.
pub(crate) fn stack(tgrid: &TimeGrid, domain: &BoxDomain, nodes: &[Vec<usize>], history: &[Vec<f64>]) -> Result<SpaceTimeField> {
    let mut shape = vec![tgrid.len()];
    shape.extend(domain.shape());
    let mut values = ArrayD::<f64>::zeros(IxDyn(&shape));
    for (j, u) in history.iter().enumerate() {
        let mut slice = values.index_axis_mut(Axis(0), j);
        for (p, &v) in nodes.iter().zip(u) {
            slice[p.as_slice()] = v;
        }
    }
    SpaceTimeField::new(*tgrid, domain.clone(), values, BoundaryClass::SpaceZero)
}

/// Spatial part `S` of the variational step operator on interior unknowns:
///
/// ```text
/// S u = βu + Σ_i γ_i C_{i,−}^* C_{i,+} u + Σ_i F_i^* (K F u)_i
/// ```
///
/// built from exactly the operators the Euler-Lagrange residual uses.
pub(crate) struct SpatialOperator<'a> {
    disc: &'a Discretisation,
    c: &'a CDCoefficients,
    domain: &'a BoxDomain,
    nodes: &'a [Vec<usize>],
}

impl SpatialOperator<'_> {
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut full = ArrayD::<f64>::zeros(IxDyn(&self.domain.shape()));
        for (p, &v) in self.nodes.iter().zip(x) {
            full[p.as_slice()] = v;
        }
        let s = self.apply_full(&full);
        for (o, p) in out.iter_mut().zip(self.nodes) {
            *o = s[p.as_slice()];
        }
    }

    fn apply_full(&self, u: &ArrayD<f64>) -> ArrayD<f64> {
        let d = self.domain.dim();
        let st = u.view().insert_axis(Axis(0));
        let mut s = u.mapv(|v| self.c.beta() * v).insert_axis(Axis(0));
        let fd: Vec<ArrayD<f64>> = (0..d).map(|l| self.disc.forward_diff(&st, l)).collect();
        for i in 0..d {
            let g = self.c.gamma()[i];
            if g != 0.0 {
                let inner = self.disc.space_caputo(&st, i, Direction::Forward);
                s.scaled_add(g, &self.disc.space_caputo_adjoint(&inner.view(), i, Direction::Backward));
            }
            let mut flux = ArrayD::<f64>::zeros(st.raw_dim());
            for (l, fl) in fd.iter().enumerate() {
                let k = self.c.k()[i][l];
                if k != 0.0 {
                    flux.scaled_add(k, fl);
                }
            }
            s += &self.disc.forward_diff_adjoint(&flux.view(), i);
        }
        s.index_axis_move(Axis(0), 0)
    }
}

/// Variational time-marching solver: finds `u` with `u(a) = u0`, `u = 0` on
/// the spatial boundary, whose restricted Euler-Lagrange residual for the
/// convection-diffusion Lagrangian vanishes at every interior time node.
///
/// Writing `V_j = (ᶜD_+ u)_j` (the time slot) and `κ` for the time kernel,
/// the residual at node `j` reads
///
/// ```text
/// f_j − β u_j − Σ_{i ≤ j} κ_{j−i} V_i − (spatial terms) = 0
/// ```
///
/// which is causal, so each step solves `(κ_0² I + S) u_j = rhs_j` with the
/// memory of all previous steps on the right. The final time node uses the
/// same causal formula. With the GL scheme at `α = 1/2` this is backward
/// Euler in time with upwind convection and the standard diffusion stencil.
pub fn variational_solve(c: &CDCoefficients, tgrid: &TimeGrid, domain: &BoxDomain, cfg: &VarConfig) -> Result<SolveResult> {
    c.check_domain(domain)?;
    let f = c.source().sample(tgrid, domain)?;
    let u0field = c.u0().sample(domain)?;
    let disc = Discretisation::new(tgrid, domain, cfg);
    let nodes = interior_nodes(domain);
    let n = nodes.len();
    let op = SpatialOperator { disc: &disc, c, domain, nodes: &nodes };
    let kappa = disc.kt.kappa().to_vec();
    let k0 = kappa[0];
    let shift = k0 * k0;

    enum Step {
        Lu(DenseLu),
        Iter(Vec<f64>),
    }
    let step = if domain.dim() == 1 {
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for k in 0..n {
            e[k] = 1.0;
            op.apply(&e, &mut col);
            e[k] = 0.0;
            for (i, &v) in col.iter().enumerate() {
                m[(i, k)] = v;
            }
            m[(k, k)] += shift;
        }
        Step::Lu(DenseLu::new(m)?)
    } else {
        Step::Iter(jacobi_diagonal(c, &disc, domain, shift, n))
    };
    let mut diag = match &step {
        Step::Lu(_) => LinearDiagnostics::new("dense_lu", true),
        Step::Iter(_) => LinearDiagnostics::new("bicgstab", false),
    };

    let u0: Vec<f64> = nodes.iter().map(|p| u0field.values()[p.as_slice()]).collect();
    let mut us: Vec<Vec<f64>> = vec![u0.clone()];
    let mut vs: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for j in 1..=tgrid.n() {
        // P_j = Σ_{m=1}^{j−1} κ_m (u_{j−m} − u_0) − κ_0 u_0
        let mut p: Vec<f64> = u0.iter().map(|v| -k0 * v).collect();
        for m in 1..j {
            let km = kappa[m];
            for ((pi, a), b) in p.iter_mut().zip(&us[j - m]).zip(&u0) {
                *pi += km * (a - b);
            }
        }
        // H_j = Σ_{i=1}^{j−1} κ_{j−i} V_i
        let mut h = vec![0.0; n];
        for i in 1..j {
            let ki = kappa[j - i];
            for (hh, v) in h.iter_mut().zip(&vs[i]) {
                *hh += ki * v;
            }
        }
        let fj = f.index_axis(Axis(0), j);
        let rhs: Vec<f64> = (0..n).map(|k| fj[nodes[k].as_slice()] - k0 * p[k] - h[k]).collect();
        let u = match &step {
            Step::Lu(lu) => lu.solve(&rhs)?,
            Step::Iter(dg) => {
                let mut x = us[j - 1].clone();
                let apply = |v: &[f64], o: &mut [f64]| {
                    op.apply(v, o);
                    for (oo, vv) in o.iter_mut().zip(v) {
                        *oo += shift * vv;
                    }
                };
                let stats = bicgstab(apply, dg, &rhs, &mut x, 1e-12, 20 * n + 200)
                    .map_err(|e| Error::Solver(format!("time step {j}: {e}")))?;
                diag.record(stats);
                x
            }
        };
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver(format!("non-finite solution at time step {j}")));
        }
        let v: Vec<f64> = u.iter().zip(&p).map(|(a, b)| k0 * a + b).collect();
        us.push(u);
        vs.push(v);
    }
    diag.steps = tgrid.n();
    let field = stack(tgrid, domain, &nodes, &us)?;
    Ok(SolveResult {
        u: field,
        meta: SolveMeta {
            solver: "variational".into(),
            scheme: Some(cfg.scheme),
            alpha: Some(cfg.alpha.value()),
            theta: None,
            convection: None,
            linear: diag,
        },
    })
}

/// Diagonal of `κ_0² I + S` at a node away from the boundary, used as a
/// Jacobi preconditioner.
fn jacobi_diagonal(c: &CDCoefficients, disc: &Discretisation, domain: &BoxDomain, shift: f64, n: usize) -> Vec<f64> {
    let d = domain.dim();
    let mut diag = shift + c.beta();
    for i in 0..d {
        let h = domain.spacing(i);
        let kx0 = disc.kx[i].kappa()[0];
        diag += c.gamma()[i].abs() * kx0 * kx0;
        diag += (c.k()[i][i] / h + (0..d).map(|l| c.k()[i][l] / domain.spacing(l)).sum::<f64>()) / h;
    }
    vec![diag; n]
}

#[cfg(test)]
pub(crate) fn spatial_matrix(c: &CDCoefficients, tgrid: &TimeGrid, domain: &BoxDomain, cfg: &VarConfig) -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    let disc = Discretisation::new(tgrid, domain, cfg);
    let nodes = interior_nodes(domain);
    let n = nodes.len();
    let op = SpatialOperator { disc: &disc, c, domain, nodes: &nodes };
    let mut cols = Vec::with_capacity(n);
    let mut e = vec![0.0; n];
    for k in 0..n {
        e[k] = 1.0;
        let mut col = vec![0.0; n];
        op.apply(&e, &mut col);
        e[k] = 0.0;
        cols.push(col);
    }
    (cols, nodes)
}
