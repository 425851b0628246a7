use ndarray::{ArrayD, Dimension, IxDyn};
use serde::{Deserialize, Serialize};

use super::linalg::{bicgstab, thomas, Csr};
use super::solve::{interior_nodes, LinearDiagnostics, SolveMeta, SolveResult};
use super::CDCoefficients;
use crate::domain::{BoundaryClass, BoxDomain, SpaceTimeField};
use crate::frac1d::TimeGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convection {
    /// Backward difference for `γ_i ≥ 0`, forward difference otherwise.
    Upwind,
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDiff {
    Backward,
    Central,
}

/// Stencil of `γ·∇u − div(K∇u) + βu` at interior node `p`, as
/// `(neighbour index, coefficient)` pairs. Diffusion uses the 3-point
/// second difference per axis and the 4-corner centered mixed difference for
/// off-diagonal entries of `K`.
pub(crate) fn stencil(c: &CDCoefficients, domain: &BoxDomain, p: &[usize], conv: Convection) -> Vec<(Vec<usize>, f64)> {
    let d = domain.dim();
    let shifted = |moves: &[(usize, isize)]| {
        let mut q = p.to_vec();
        for &(axis, s) in moves {
            q[axis] = (q[axis] as isize + s) as usize;
        }
        q
    };
    let mut out = vec![(p.to_vec(), c.beta())];
    for i in 0..d {
        let h = domain.spacing(i);
        let g = c.gamma()[i];
        match conv {
            Convection::Upwind if g >= 0.0 => {
                out.push((p.to_vec(), g / h));
                out.push((shifted(&[(i, -1)]), -g / h));
            }
            Convection::Upwind => {
                out.push((shifted(&[(i, 1)]), g / h));
                out.push((p.to_vec(), -g / h));
            }
            Convection::Centered => {
                out.push((shifted(&[(i, 1)]), g / (2.0 * h)));
                out.push((shifted(&[(i, -1)]), -g / (2.0 * h)));
            }
        }
        let kii = c.k()[i][i];
        out.push((shifted(&[(i, 1)]), -kii / (h * h)));
        out.push((shifted(&[(i, -1)]), -kii / (h * h)));
        out.push((p.to_vec(), 2.0 * kii / (h * h)));
        for l in i + 1..d {
            let kil = c.k()[i][l];
            if kil == 0.0 {
                continue;
            }
            let w = -2.0 * kil / (4.0 * h * domain.spacing(l));
            out.push((shifted(&[(i, 1), (l, 1)]), w));
            out.push((shifted(&[(i, 1), (l, -1)]), -w));
            out.push((shifted(&[(i, -1), (l, 1)]), -w));
            out.push((shifted(&[(i, -1), (l, -1)]), w));
        }
    }
    out
}

/// `L u` at interior nodes of a spatial slice, zero elsewhere.
fn apply_stencil(c: &CDCoefficients, domain: &BoxDomain, u: &ndarray::ArrayViewD<'_, f64>, conv: Convection) -> ArrayD<f64> {
    let mut out = ArrayD::zeros(u.raw_dim());
    for (idx, o) in out.indexed_iter_mut() {
        let idx = idx.slice();
        if domain.is_boundary(idx) {
            continue;
        }
        *o = stencil(c, domain, idx, conv).iter().map(|(q, w)| w * u[q.as_slice()]).sum();
    }
    out
}

/// Classical residual `u_t + γ·∇u − div(K∇u) + βu − f` at interior nodes,
/// zero elsewhere. The time derivative is a backward difference (nodes
/// `1..=n_t`) or a central difference (nodes `1..n_t`).
pub fn cd_classical_residual(u: &SpaceTimeField, c: &CDCoefficients, time: TimeDiff, conv: Convection) -> Result<SpaceTimeField> {
    let tgrid = *u.tgrid();
    let domain = u.domain();
    c.check_domain(domain)?;
    let f = c.source().sample(&tgrid, domain)?;
    let nt = tgrid.n();
    let dt = tgrid.h();
    let mut res = ArrayD::<f64>::zeros(u.values().raw_dim());
    let last = match time {
        TimeDiff::Backward => nt,
        TimeDiff::Central => nt - 1,
    };
    for j in 1..=last {
        let uj = u.values().index_axis(ndarray::Axis(0), j);
        let lu = apply_stencil(c, domain, &uj, conv);
        let prev = u.values().index_axis(ndarray::Axis(0), j - 1);
        let mut slot = res.index_axis_mut(ndarray::Axis(0), j);
        for (idx, r) in slot.indexed_iter_mut() {
            let idx = idx.slice();
            if domain.is_boundary(idx) {
                continue;
            }
            let ut = match time {
                TimeDiff::Backward => (uj[idx] - prev[idx]) / dt,
                TimeDiff::Central => (u.values().index_axis(ndarray::Axis(0), j + 1)[idx] - prev[idx]) / (2.0 * dt),
            };
            let mut full = vec![j];
            full.extend_from_slice(idx);
            *r = ut + lu[idx] - f[full.as_slice()];
        }
    }
    SpaceTimeField::new(tgrid, domain.clone(), res, BoundaryClass::None)
}

/// Sparse matrix of `L` on the interior unknowns.
pub(crate) fn assemble_operator(c: &CDCoefficients, domain: &BoxDomain, conv: Convection) -> (Csr, Vec<Vec<usize>>) {
    let nodes = interior_nodes(domain);
    let shape = domain.shape();
    // flat position of every interior node in the unknown vector
    let mut position = ArrayD::<usize>::from_elem(IxDyn(&shape), usize::MAX);
    for (k, p) in nodes.iter().enumerate() {
        position[p.as_slice()] = k;
    }
    let rows = nodes
        .iter()
        .map(|p| {
            stencil(c, domain, p, conv)
                .into_iter()
                .filter(|(q, _)| !domain.is_boundary(q))
                .map(|(q, w)| (position[q.as_slice()], w))
                .collect()
        })
        .collect();
    (Csr::from_rows(rows), nodes)
}

/// Theta scheme `(u^k − u^{k−1})/Δt + θ L u^k + (1 − θ) L u^{k−1} =
/// θ f^k + (1 − θ) f^{k−1}` with the chosen convection stencil.
pub fn reference_solve(
    c: &CDCoefficients,
    tgrid: &TimeGrid,
    domain: &BoxDomain,
    theta: f64,
    conv: Convection,
) -> Result<SolveResult> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Precondition(format!("theta must lie in [0, 1], got {theta}")));
    }
    c.check_domain(domain)?;
    let f = c.source().sample(tgrid, domain)?;
    let u0 = c.u0().sample(domain)?;
    let (l, nodes) = assemble_operator(c, domain, conv);
    let n = nodes.len();
    let dt = tgrid.h();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            let mut r: Vec<(usize, f64)> =
                (l.indptr[i]..l.indptr[i + 1]).map(|p| (l.indices[p], theta * l.data[p])).collect();
            r.push((i, 1.0 / dt));
            r
        })
        .collect();
    let a = Csr::from_rows(rows);
    let tri = if domain.dim() == 1 { a.tridiagonal() } else { None };
    let diag = a.diagonal();

    let fslice = |j: usize| -> Vec<f64> {
        nodes
            .iter()
            .map(|p| {
                let mut full = vec![j];
                full.extend_from_slice(p);
                f[full.as_slice()]
            })
            .collect()
    };
    let mut u: Vec<f64> = nodes.iter().map(|p| u0.values()[p.as_slice()]).collect();
    let mut history = vec![u.clone()];
    let mut diag_out = LinearDiagnostics::new(if tri.is_some() { "thomas" } else { "bicgstab" }, tri.is_some());
    let mut lu = vec![0.0; n];
    let mut f_prev = fslice(0);
    for j in 1..=tgrid.n() {
        let f_now = fslice(j);
        l.matvec(&u, &mut lu);
        let mut rhs: Vec<f64> = (0..n)
            .map(|i| u[i] / dt - (1.0 - theta) * lu[i] + theta * f_now[i] + (1.0 - theta) * f_prev[i])
            .collect();
        match &tri {
            Some((lo, di, up)) => {
                thomas(lo, di, up, &mut rhs)?;
                u = rhs;
            }
            None => {
                let mut x = u.clone();
                let stats = bicgstab(|v, o| a.matvec(v, o), &diag, &rhs, &mut x, 1e-12, 10 * n + 100)
                    .map_err(|e| Error::Solver(format!("time step {j}: {e}")))?;
                diag_out.record(stats);
                u = x;
            }
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver(format!("non-finite solution at time step {j}")));
        }
        history.push(u.clone());
        f_prev = f_now;
    }
    diag_out.steps = tgrid.n();
    let field = super::solve::stack(tgrid, domain, &nodes, &history)?;
    Ok(SolveResult {
        u: field,
        meta: SolveMeta {
            solver: "reference".into(),
            scheme: None,
            alpha: None,
            theta: Some(theta),
            convection: Some(conv),
            linear: diag_out,
        },
    })
}
