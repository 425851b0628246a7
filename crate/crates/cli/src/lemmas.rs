//! The lemma suite behind `fracvar lemmas`.

use fracvar_core::domain::{BoxDomain, SpatialField};
use fracvar_core::frac1d::{
    binomial_weights, caputo_deriv, check_composition, check_ibp, convolve_truncated, gamma_fn, power_rule_oracle,
    rl_boundary_term, rl_deriv, CompositionVariant, IbpVariant,
};
use fracvar_core::fracfield::{check_div_grad, check_green_riemann};
use fracvar_core::report::Trend;
use fracvar_core::{CheckReport, CheckStatus, Direction, FracOrder, Result, Samples1D, Scheme, TimeGrid, VectorField};
use serde::Serialize;

/// Shrink factor per doubling required of refinement trends.
pub const TREND_FACTOR: f64 = 1.3;
/// Absolute tolerance of the integration-by-parts and Green-Riemann values.
pub const VALUE_TOL: f64 = 1e-3;
/// Tolerance of the GL weight identities.
pub const SEMIGROUP_TOL: f64 = 1e-12;
/// Smallest finest level for which four levels `n/8 .. n` are meaningful.
pub const MIN_SUITE_N: usize = 64;
/// Largest per-axis size used by the two-dimensional checks.
pub const MAX_FIELD_N: usize = 128;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub alpha: f64,
    pub n: usize,
    pub dim: usize,
    pub levels: Vec<usize>,
    pub field_levels: Vec<usize>,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl SuiteReport {
    /// Any check that ran and failed (as opposed to being skipped for lack
    /// of levels).
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }
}

fn unit(n: usize) -> Result<TimeGrid> {
    TimeGrid::new(0.0, 1.0, n)
}

/// `n/8, n/4, n/2, n`.
fn levels_to(n: usize) -> Vec<usize> {
    [8, 4, 2, 1].iter().map(|k| n / k).collect()
}

fn trend(name: &str, levels: &[usize], factor: f64, mut norm: impl FnMut(usize) -> Result<f64>) -> Result<CheckReport> {
    let norms = levels.iter().map(|&n| norm(n)).collect::<Result<Vec<_>>>()?;
    Ok(Trend::evaluate(levels.to_vec(), norms, factor).into_report(name))
}

/// `∫₀¹ (ᶜD_+^α t)·t(1−t) dt`, the common value of both sides of the
/// canonical integration-by-parts pair.
pub fn ibp_canonical_value(alpha: FracOrder) -> Result<f64> {
    let a = alpha.value();
    Ok((1.0 / (3.0 - a) - 1.0 / (4.0 - a)) / gamma_fn(2.0 - a)?)
}

pub fn run(alpha: FracOrder, n: usize, dim: usize) -> Result<SuiteReport> {
    let enough = n >= MIN_SUITE_N;
    let levels = if enough { levels_to(n) } else { vec![n] };
    let m = n.min(MAX_FIELD_N);
    let field_levels = if enough { levels_to(m) } else { vec![m] };
    let short = |name: &str| CheckReport::insufficient(name, vec![n], format!("needs n >= {MIN_SUITE_N}"));

    let mut checks = Vec::new();
    let trend_or_skip = |name: &str, lv: &[usize], factor: f64, norm: &mut dyn FnMut(usize) -> Result<f64>| {
        if enough {
            trend(name, lv, factor, norm)
        } else {
            Ok(short(name))
        }
    };

    for (label, p) in [("t2", 2.0), ("t3", 3.0)] {
        for variant in [CompositionVariant::CaputoCaputo, CompositionVariant::RlCaputo] {
            let name = format!("composition_{}_{label}", variant.name());
            checks.push(trend_or_skip(&name, &levels, TREND_FACTOR, &mut |k| {
                let f = Samples1D::from_fn(unit(k)?, |t| t.powf(p))?;
                Ok(check_composition(&f, variant)?.norms[0])
            })?);
        }
    }
    checks.push(if enough { riewe_control(&levels)? } else { short("riewe_mixed_control") });
    checks.push(if enough { ibp(alpha, n)? } else { short("ibp_canonical") });
    checks.push(caputo_rl_relation(alpha, n.max(2))?);
    let reg_factor = TREND_FACTOR.min(0.9 * 2f64.powf(1.0 - alpha.value()));
    checks.push(trend_or_skip("regularity_endpoint", &levels, reg_factor, &mut |k| {
        let f = Samples1D::from_fn(unit(k)?, |t| 1.0 + t.sin())?;
        let c = caputo_deriv(&f, alpha, Direction::Forward, Scheme::L1);
        Ok(c.values()[1].abs().max(c.values()[2.min(k)].abs()))
    })?);
    checks.push(if enough { power_rule(alpha, &levels)? } else { short("power_rule_l1") });
    checks.push(gl_semigroup(alpha, n.clamp(1, 512)));

    let gamma: Vec<f64> = (1..=dim).map(|i| i as f64).collect();
    let square = |x: &[f64]| x.iter().map(|v| v * v).product::<f64>();
    {
        let d = BoxDomain::unit(dim, m.max(3))?;
        let u = SpatialField::from_fn(d, false, |x| square(x) + x.iter().map(|v| v.sin()).sum::<f64>())?;
        checks.push(check_div_grad(&u, &gamma, Scheme::Gl)?);
    }
    checks.push(trend_or_skip("div_grad_l1", &field_levels, TREND_FACTOR, &mut |k| {
        let u = SpatialField::from_fn(BoxDomain::unit(dim, k)?, false, square)?;
        Ok(check_div_grad(&u, &gamma, Scheme::L1)?.norms[0])
    })?);
    checks.push(if enough { green_riemann_1d(alpha, n)? } else { short("green_riemann_1d") });
    for d in 1..=dim.min(2) {
        let lv = if d == 1 { &levels } else { &field_levels };
        checks.push(trend_or_skip(&format!("green_riemann_trend_{d}d"), lv, TREND_FACTOR, &mut |k| {
            let domain = BoxDomain::unit(d, k)?;
            let u = SpatialField::from_fn(domain.clone(), true, |x| x.iter().map(|v| v * (1.0 - v)).product())?;
            let v = VectorField::from_fn(&domain, |i, x| x[i])?;
            Ok(check_green_riemann(&u, &v, alpha, Scheme::L1)?.norms[0])
        })?);
    }

    let pass = checks.iter().all(|c| c.status == CheckStatus::Pass);
    Ok(SuiteReport { alpha: alpha.value(), n, dim, levels, field_levels, checks, pass })
}

/// The mixed-direction composition applied to `f(t) = t` must miss `f′ ≡ 1`
/// by more than 0.1 at every level, with a stable midpoint discrepancy.
pub fn riewe_control(levels: &[usize]) -> Result<CheckReport> {
    let mut norms = Vec::new();
    let mut mids = Vec::new();
    for &k in levels {
        let f = Samples1D::from_fn(unit(k)?, |t| t)?;
        let r = check_composition(&f, CompositionVariant::RieweMixed)?;
        norms.push(r.norms[0]);
        mids.push(r.details["discrepancy_at_midpoint"]);
    }
    let spread = mids.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - mids.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let pass = mids.iter().all(|&d| d > 0.1) && spread < 0.01;
    Ok(CheckReport::new("riewe_mixed_control", levels.to_vec(), norms, pass)
        .with_detail("midpoint_discrepancy_min", mids.iter().copied().fold(f64::INFINITY, f64::min))
        .with_detail("midpoint_spread", spread))
}

fn ibp(alpha: FracOrder, n: usize) -> Result<CheckReport> {
    let g = unit(n)?;
    let f = Samples1D::from_fn(g, |t| t)?;
    let w = Samples1D::from_fn(g, |t| t * (1.0 - t))?;
    let expect = ibp_canonical_value(alpha)?;
    let mut worst: f64 = 0.0;
    let mut report = CheckReport::new("ibp_canonical", vec![n], vec![], true).with_detail("expected", expect);
    for variant in [IbpVariant::CaputoCaputo, IbpVariant::RlCaputo] {
        let r = check_ibp(&f, &w, alpha, variant)?;
        let (lhs, rhs) = (r.details["lhs"], r.details["rhs"]);
        worst = worst.max((lhs - rhs).abs()).max((lhs - expect).abs()).max((rhs - expect).abs());
        report.norms.push(r.norms[0]);
        report.details.insert(format!("{}_lhs", r.name), lhs);
        report.details.insert(format!("{}_rhs", r.name), rhs);
    }
    report.set_pass(worst <= VALUE_TOL);
    Ok(report.with_detail("worst_deviation", worst))
}

/// `D^α f − ᶜD^α f` equals the boundary term at every interior node to a
/// few ulps, in both directions.
fn caputo_rl_relation(alpha: FracOrder, n: usize) -> Result<CheckReport> {
    let f = Samples1D::from_fn(unit(n)?, |t| 1.0 + t + (3.0 * t).sin())?;
    let mut worst: f64 = 0.0;
    for dir in [Direction::Forward, Direction::Backward] {
        let rl = rl_deriv(&f, alpha, dir, Scheme::L1);
        let c = caputo_deriv(&f, alpha, dir, Scheme::L1);
        for j in 1..n {
            let bt = rl_boundary_term(&f, alpha, dir, j);
            let scale = rl.values()[j].abs().max(c.values()[j].abs()).max(1.0);
            worst = worst.max((rl.values()[j] - c.values()[j] - bt).abs() / (scale * f64::EPSILON));
        }
    }
    Ok(CheckReport::new("caputo_rl_relation", vec![n], vec![worst], worst <= 8.0).with_detail("max_ulps", worst))
}

/// L1 Caputo of `t^μ` against the power rule: observed order at least
/// `2 − α − 0.1` for `μ ∈ {2, 2.5}`, exact for `μ = 1`, and point values at
/// `t = 1` within [`VALUE_TOL`] on the finest level.
pub fn power_rule(alpha: FracOrder, levels: &[usize]) -> Result<CheckReport> {
    let min_order = 2.0 - alpha.value() - 0.1;
    let finest = *levels.last().unwrap_or(&0);
    let mut report = CheckReport::new("power_rule_l1", levels.to_vec(), vec![], true).with_detail("min_order", min_order);
    let mut pass = true;
    for mu in [1.0, 2.0, 2.5] {
        let mut errs = Vec::new();
        for &k in levels {
            let g = unit(k)?;
            let f = Samples1D::from_fn(g, |t| t.powf(mu))?;
            let c = caputo_deriv(&f, alpha, Direction::Forward, Scheme::L1);
            let mut e: f64 = 0.0;
            for j in 1..=k {
                e = e.max((c.values()[j] - power_rule_oracle(mu, alpha, g.node(j), 0.0)?).abs());
            }
            errs.push(e);
            if k == finest {
                let dev = (c.values()[k] - power_rule_oracle(mu, alpha, 1.0, 0.0)?).abs();
                report.details.insert(format!("endpoint_error_mu{mu}"), dev);
                pass &= dev <= VALUE_TOL;
            }
        }
        let orders: Vec<f64> = errs
            .windows(2)
            .zip(levels.windows(2))
            .filter(|(e, _)| e[1] > 1e-13)
            .map(|(e, l)| (e[0] / e[1]).ln() / (l[1] as f64 / l[0] as f64).ln())
            .collect();
        let worst = orders.iter().copied().fold(f64::INFINITY, f64::min);
        if worst.is_finite() {
            report.details.insert(format!("min_order_mu{mu}"), worst);
        }
        pass &= orders.iter().all(|&o| o >= min_order);
        report.norms.push(*errs.last().unwrap_or(&0.0));
    }
    report.set_pass(pass);
    Ok(report)
}

/// `w(α) * w(β) = w(α+β)` for the binomial weights, on `(α/2, α/2)` and
/// `(α, 1−α)`; the latter is the backward difference `(1, −1, 0, …)`.
pub fn gl_semigroup(alpha: FracOrder, n: usize) -> CheckReport {
    let a = alpha.value();
    let mut worst: f64 = 0.0;
    for (p, q) in [(a / 2.0, a / 2.0), (a, 1.0 - a), (0.5 * a, 1.0 - a)] {
        let conv = convolve_truncated(&binomial_weights(p, n), &binomial_weights(q, n), n + 1);
        let direct = binomial_weights(p + q, n);
        for (x, y) in conv.iter().zip(&direct) {
            worst = worst.max((x - y).abs());
        }
    }
    CheckReport::new("gl_semigroup", vec![n], vec![worst], worst <= SEMIGROUP_TOL)
}

fn green_riemann_1d(alpha: FracOrder, n: usize) -> Result<CheckReport> {
    let d = BoxDomain::unit(1, n)?;
    let u = SpatialField::from_fn(d.clone(), true, |x| x[0] * (1.0 - x[0]))?;
    let v = VectorField::from_fn(&d, |_, x| x[0])?;
    let mut r = check_green_riemann(&u, &v, alpha, Scheme::L1)?;
    let expect = ibp_canonical_value(alpha)?;
    let worst = (r.details["lhs"] - expect).abs().max((r.details["rhs"] - expect).abs()).max(r.norms[0]);
    r.name = "green_riemann_1d".into();
    r.set_pass(worst <= VALUE_TOL);
    Ok(r.with_detail("expected", expect))
}
