use serde::{Deserialize, Serialize};

use super::cases::{perturbed, Case};
use super::classical::{cd_classical_residual, reference_solve, Convection, TimeDiff};
use super::lagrangian::cd_lagrangian;
use super::solve::{variational_solve, SolveResult};
use super::CDCoefficients;
use crate::domain::{BoundaryClass, BoxDomain, SpaceTimeField};
use crate::frac1d::{FracOrder, Scheme, TimeGrid};
use crate::report::{CheckReport, ConvergenceReport, ConvergenceRow, Trend};
use crate::varcalc::{restricted_el_residual, VarConfig};
use crate::{Error, Result};

/// Errors at or below this count as exact reproduction.
pub const EXACT_TOL: f64 = 1e-12;

/// Minimum shrink factor per grid doubling for residual trends.
pub const TREND_FACTOR: f64 = 1.3;

/// Observed order below which a convergence study fails.
pub const MIN_ORDER: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "snake_case")]
pub enum SolverChoice {
    Variational { cfg: VarConfig },
    Reference { theta: f64, convection: Convection },
}

impl SolverChoice {
    /// GL at `α = 1/2` with the default action rule.
    pub fn variational() -> Self {
        SolverChoice::Variational { cfg: VarConfig::new(FracOrder::HALF, Scheme::Gl) }
    }

    /// Implicit Euler with upwind convection.
    pub fn implicit_upwind() -> Self {
        SolverChoice::Reference { theta: 1.0, convection: Convection::Upwind }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverChoice::Variational { .. } => "variational",
            SolverChoice::Reference { .. } => "reference",
        }
    }

    pub fn solve(&self, c: &CDCoefficients, tgrid: &TimeGrid, domain: &BoxDomain) -> Result<SolveResult> {
        match *self {
            SolverChoice::Variational { cfg } => variational_solve(c, tgrid, domain, &cfg),
            SolverChoice::Reference { theta, convection } => reference_solve(c, tgrid, domain, theta, convection),
        }
    }
}

fn exact_on(case: &Case, tgrid: &TimeGrid, domain: &BoxDomain) -> Result<SpaceTimeField> {
    case.exact_field(tgrid, domain)
        .ok_or_else(|| Error::Precondition(format!("case `{}` has no exact solution", case.id)))?
}

/// Interior maximum of a residual field.
fn interior_max(r: &SpaceTimeField) -> f64 {
    r.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Runs `solver` on the case with `n_t = n_x = n` for every level and
/// records L2 and L∞ errors against the exact solution with observed orders
/// `log(e_{k−1}/e_k) / log(n_k/n_{k−1})`.
///
/// When every error is at most [`EXACT_TOL`] the report is marked `"exact"`
/// and passes. Otherwise it passes when the errors decrease monotonically
/// and every L2 order is at least [`MIN_ORDER`].
pub fn convergence_study(case: &Case, levels: &[usize], solver: &SolverChoice) -> Result<ConvergenceReport> {
    if levels.len() < 3 {
        return Err(Error::Precondition(format!("convergence study needs at least 3 levels, got {}", levels.len())));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("levels must be strictly increasing".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    for &n in levels {
        let tgrid = case.tgrid(n)?;
        let domain = case.domain(n)?;
        let exact = exact_on(case, &tgrid, &domain)?;
        let sol = solver.solve(&case.coeffs, &tgrid, &domain)?;
        let l2 = sol.u.l2_diff(&exact)?;
        let linf = sol.u.max_abs_diff(&exact)?;
        let order = |prev: f64, now: f64, prev_n: usize| {
            (prev > EXACT_TOL && now > EXACT_TOL).then(|| (prev / now).ln() / (n as f64 / prev_n as f64).ln())
        };
        let (order_l2, order_linf) = match rows.last() {
            Some(p) => (order(p.l2_error, l2, p.n), order(p.linf_error, linf, p.n)),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            n,
            h: domain.spacing(0),
            dt: tgrid.h(),
            l2_error: l2,
            linf_error: linf,
            order_l2,
            order_linf,
        });
    }
    let exact = rows.iter().all(|r| r.l2_error <= EXACT_TOL && r.linf_error <= EXACT_TOL);
    let min_order = rows.iter().filter_map(|r| r.order_l2).reduce(f64::min);
    let pass = if exact {
        true
    } else {
        let monotone = rows.windows(2).all(|w| w[1].l2_error < w[0].l2_error);
        let all_orders = rows.iter().skip(1).all(|r| r.order_l2.is_some());
        monotone && all_orders && min_order.is_some_and(|o| o >= MIN_ORDER)
    };
    Ok(ConvergenceReport {
        case_id: case.id.clone(),
        solver: solver.name().into(),
        rows,
        order_kind: if exact { "exact" } else { "observed" }.into(),
        min_order,
        pass,
    })
}

/// Numerical certificate that solving the restricted Euler-Lagrange
/// equation of the convection-diffusion Lagrangian is the same as solving
/// the PDE. Over the given levels (`n_t = n_x = n`) it tracks
///
/// - (a) the classical residual (central time difference, centered
///   convection) of the variational GL solution,
/// - (b) the restricted Euler-Lagrange residual of the exact solution,
/// - a negative control: the classical residual of `u* + 0.1 Π sin(2πx_i)`.
///
/// Norms are interior maxima. The check passes when (a) and (b) shrink by
/// at least [`TREND_FACTOR`] per level and the control does not.
pub fn equivalence_check(case: &Case, levels: &[usize]) -> Result<CheckReport> {
    let name = "equivalence";
    if levels.len() < 2 {
        return Ok(CheckReport::insufficient(name, levels.to_vec(), "a trend needs at least two levels"));
    }
    let cfg = VarConfig::new(FracOrder::HALF, Scheme::Gl);
    let lag = cd_lagrangian(&case.coeffs);
    let exact_fn = case
        .exact
        .clone()
        .ok_or_else(|| Error::Precondition(format!("case `{}` has no exact solution", case.id)))?;
    let control_fn = perturbed(exact_fn);
    let (mut a, mut b, mut ctrl) = (Vec::new(), Vec::new(), Vec::new());
    for &n in levels {
        let tgrid = case.tgrid(n)?;
        let domain = case.domain(n)?;
        let sol = variational_solve(&case.coeffs, &tgrid, &domain, &cfg)?;
        let ra = cd_classical_residual(&sol.u, &case.coeffs, TimeDiff::Central, Convection::Centered)?;
        a.push(interior_max(&ra));
        let exact = exact_on(case, &tgrid, &domain)?;
        b.push(interior_max(&restricted_el_residual(&lag, &exact, &cfg)?));
        let f = control_fn.clone();
        let control = SpaceTimeField::from_fn(tgrid, domain.clone(), BoundaryClass::SpaceZero, move |t, x| f(t, x))?;
        let rc = cd_classical_residual(&control, &case.coeffs, TimeDiff::Central, Convection::Centered)?;
        ctrl.push(interior_max(&rc));
    }
    let ta = Trend::evaluate(levels.to_vec(), a, TREND_FACTOR);
    let tb = Trend::evaluate(levels.to_vec(), b.clone(), TREND_FACTOR);
    let tc = Trend::evaluate(levels.to_vec(), ctrl.clone(), TREND_FACTOR);
    let pass = ta.pass && tb.pass && !tc.pass;
    let mut report = CheckReport::new(name, ta.levels.clone(), ta.norms.clone(), pass)
        .with_detail("classical_trend_pass", f64::from(u8::from(ta.pass)))
        .with_detail("restricted_trend_pass", f64::from(u8::from(tb.pass)))
        .with_detail("control_trend_pass", f64::from(u8::from(tc.pass)))
        .with_note(format!("case {}: norms are (a) classical residual of the variational solution", case.id));
    for (i, r) in ta.ratios.iter().enumerate() {
        report.details.insert(format!("classical_ratio_{i}"), *r);
    }
    for (i, v) in b.iter().enumerate() {
        report.details.insert(format!("restricted_norm_{i}"), *v);
    }
    for (i, v) in ctrl.iter().enumerate() {
        report.details.insert(format!("control_norm_{i}"), *v);
    }
    Ok(report)
}
