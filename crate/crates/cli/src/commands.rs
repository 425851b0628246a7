use std::path::{Path, PathBuf};
use std::time::Instant;

use fracvar_core::cdsolve::{
    case, cd_lagrangian, convergence_study, equivalence_check, Convection, SolverChoice,
};
use fracvar_core::config::{CaseConfig, ResolvedCase};
use fracvar_core::domain::{read_field_csv_path, write_field_csv_path};
use fracvar_core::varcalc::gradient_check;
use fracvar_core::{AsymmetricState, BoundaryClass, FracOrder, SpaceTimeField, VarConfig};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::{lemmas as suite, ConvectionArg, NormArg, SolverArg};

/// Relative tolerance of the action-gradient check.
pub const GRADIENT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 1,
        }
    }
}

impl From<fracvar_core::Error> for Failure {
    fn from(e: fracvar_core::Error) -> Self {
        use fracvar_core::Error as E;
        match e {
            E::Solver(_) | E::NonFinite(_) | E::GammaDomain(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(CaseConfig, ResolvedCase), Failure> {
    let cfg = CaseConfig::load(path)?;
    let resolved = cfg.resolve()?;
    Ok((cfg, resolved))
}

fn convection(c: ConvectionArg) -> Convection {
    match c {
        ConvectionArg::Upwind => Convection::Upwind,
        ConvectionArg::Centered => Convection::Centered,
    }
}

fn choice(solver: SolverArg, var: VarConfig, theta: f64, conv: ConvectionArg) -> Result<SolverChoice, Failure> {
    match solver {
        SolverArg::Variational => Ok(SolverChoice::Variational { cfg: var }),
        SolverArg::Reference => {
            if !(0.0..=1.0).contains(&theta) {
                return Err(Failure::Usage(format!("--theta must lie in [0, 1], got {theta}")));
            }
            Ok(SolverChoice::Reference { theta, convection: convection(conv) })
        }
        SolverArg::Exact => Err(Failure::Usage("`exact` is only available for `solve`".into())),
    }
}

pub fn lemmas(alpha: f64, n: usize, dim: usize, out: Option<&Path>) -> Result<bool, Failure> {
    let alpha = FracOrder::new(alpha).map_err(|e| Failure::Usage(format!("--alpha: {e}")))?;
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {n}")));
    }
    let start = Instant::now();
    let report = suite::run(alpha, n, dim)?;
    for c in &report.checks {
        let status = serde_json::to_value(c.status).unwrap_or(Value::Null);
        eprintln!("{:<40} {}", c.name, status.as_str().unwrap_or("?"));
    }
    let body = json!({
        "command": "lemmas",
        "elapsed_seconds": start.elapsed().as_secs_f64(),
        "report": report,
    });
    emit(&body, out)?;
    Ok(!report.has_failures())
}

pub fn elcheck(
    config: &Path,
    directions: usize,
    seed: u64,
    epsilon: f64,
    levels: &[usize],
    out: Option<&Path>,
) -> Result<bool, Failure> {
    if directions == 0 {
        return Err(Failure::Usage("--directions must be at least 1".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Failure::Usage(format!("--epsilon must be positive, got {epsilon}")));
    }
    let (cfg, r) = load(config)?;
    let start = Instant::now();
    let lag = cd_lagrangian(&r.case.coeffs);
    let sol = SolverChoice::Variational { cfg: r.var }.solve(&r.case.coeffs, &r.tgrid, &r.domain)?;
    // a non-trivial anticausal component exercises both residuals
    let minus = SpaceTimeField::new(r.tgrid, r.domain.clone(), sol.u.values() * 0.5, BoundaryClass::SpaceZero)?;
    let state = AsymmetricState::new(sol.u, minus)?;
    let grad = gradient_check(&lag, &state, &r.var, directions, seed, epsilon, GRADIENT_TOL)?;
    let equivalence = if r.case.exact.is_some() && cfg.is_regriddable() {
        Some(equivalence_check(&r.case, levels)?)
    } else {
        None
    };
    let pass = grad.pass && equivalence.as_ref().map_or(true, |e| e.pass);
    let body = json!({
        "command": "elcheck",
        "config": cfg,
        "seed": seed,
        "directions": directions,
        "epsilon": epsilon,
        "levels": levels,
        "gradient_check": grad,
        "equivalence": equivalence,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
        "pass": pass,
    });
    emit(&body, out)?;
    Ok(pass)
}

fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn solve(
    config: &Path,
    solver: SolverArg,
    theta: f64,
    conv: ConvectionArg,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    let (cfg, r) = load(config)?;
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.outputs.field.clone())
        .ok_or_else(|| Failure::Usage("no output path: pass --out or set outputs.field".into()))?;
    let start = Instant::now();
    let (field, meta) = match solver {
        SolverArg::Exact => {
            let f = r
                .case
                .exact_field(&r.tgrid, &r.domain)
                .ok_or_else(|| Failure::Usage("config has no `exact` entry".into()))??;
            (f, json!({ "solver": "exact" }))
        }
        _ => {
            let res = choice(solver, r.var, theta, conv)?.solve(&r.case.coeffs, &r.tgrid, &r.domain)?;
            let meta = serde_json::to_value(&res.meta).map_err(|e| Failure::Usage(e.to_string()))?;
            (res.u, meta)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    write_field_csv_path(&field, &out)?;
    let side = json!({
        "command": "solve",
        "field": out,
        "meta": meta,
        "config": cfg,
        "grid": {
            "time": { "a": r.tgrid.a(), "b": r.tgrid.b(), "n": r.tgrid.n() },
            "box": { "lo": r.domain.lo(), "hi": r.domain.hi(), "n": r.domain.n() },
        },
        "timing_seconds": elapsed,
    });
    emit(&side, Some(&sidecar_path(&out)))?;
    eprintln!("wrote {}", out.display());
    Ok(true)
}

pub fn compare(a: &Path, b: &Path, norm: NormArg, tol: f64) -> Result<bool, Failure> {
    let read = |p: &Path| {
        read_field_csv_path(p, BoundaryClass::None).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
    };
    let (fa, fb) = (read(a)?, read(b)?);
    fa.check_same_grid(&fb).map_err(|e| Failure::Usage(format!("grid mismatch: {e}")))?;
    let (name, value) = match norm {
        NormArg::L2 => ("l2", fa.l2_diff(&fb)?),
        NormArg::Linf => ("linf", fa.max_abs_diff(&fb)?),
    };
    let pass = value <= tol;
    println!("{name} {value:.16e} tol {tol:.16e} {}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

pub fn converge(
    target: &str,
    levels: &[usize],
    solver: SolverArg,
    theta: f64,
    conv: ConvectionArg,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    if levels.len() < 3 {
        return Err(Failure::Usage(format!("--levels needs at least 3 entries, got {}", levels.len())));
    }
    let path = Path::new(target);
    let (the_case, var, config) = if path.is_file() {
        let (cfg, r) = load(path)?;
        if !cfg.is_regriddable() {
            return Err(Failure::Usage("tabulated data cannot be re-gridded for a convergence study".into()));
        }
        if r.case.exact.is_none() {
            return Err(Failure::Usage("config has no `exact` entry".into()));
        }
        let value = serde_json::to_value(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
        (r.case, r.var, Some(value))
    } else {
        (case(target)?, VarConfig::new(FracOrder::HALF, fracvar_core::Scheme::Gl), None)
    };
    let chosen = choice(solver, var, theta, conv)?;
    let start = Instant::now();
    let report = convergence_study(&the_case, levels, &chosen).map_err(|e| match e {
        fracvar_core::Error::Precondition(m) => Failure::Usage(m),
        other => other.into(),
    })?;
    for row in &report.rows {
        eprintln!(
            "n={:<5} l2={:.6e} linf={:.6e} order_l2={}",
            row.n,
            row.l2_error,
            row.linf_error,
            row.order_l2.map_or("-".into(), |o| format!("{o:.3}"))
        );
    }
    let body = json!({
        "command": "converge",
        "target": target,
        "config": config,
        "solver": chosen,
        "levels": levels,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
        "report": report,
    });
    emit(&body, out)?;
    Ok(report.pass)
}
