//! JSON case configurations.
//!
//! ```json
//! {
//!   "alpha": 0.5,
//!   "scheme": "GL",
//!   "time": { "a": 0.0, "b": 1.0, "n": 64 },
//!   "box": { "lo": [0.0], "hi": [1.0], "n": [64] },
//!   "coefficients": { "gamma": [1.0], "K": [[0.1]], "beta": 0.5 },
//!   "source": { "kind": "named", "id": "manu-cd-1d" },
//!   "u0": { "kind": "named", "id": "manu-cd-1d" },
//!   "exact": { "kind": "named", "id": "manu-cd-1d" },
//!   "outputs": { "field": "u.csv" }
//! }
//! ```
//!
//! Data entries are `named` (taken from the case catalog), `constant`
//! (`value`) or `table` (`path` to a field CSV on the configured grid;
//! relative paths resolve against the config file). For `u0` a table's
//! first time slice is used.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cdsolve::{case, Case, Initial, Source, SpaceTimeFn};
use crate::domain::{read_field_csv_path, BoundaryClass, BoxDomain, SpaceTimeField};
use crate::frac1d::{FracOrder, Scheme, TimeGrid};
use crate::varcalc::VarConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefSpec {
    pub gamma: Vec<f64>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Named { id: String },
    Constant { value: f64 },
    Table { path: PathBuf },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

fn default_alpha() -> f64 {
    0.5
}

fn default_scheme() -> Scheme {
    Scheme::Gl
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    pub time: TimeSpec,
    #[serde(rename = "box")]
    pub box_: BoxSpec,
    pub coefficients: CoefSpec,
    pub source: DataSpec,
    pub u0: DataSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<DataSpec>,
    #[serde(default)]
    pub outputs: Outputs,
}

/// A validated configuration bound to its grids.
#[derive(Debug, Clone)]
pub struct ResolvedCase {
    pub case: Case,
    pub tgrid: TimeGrid,
    pub domain: BoxDomain,
    pub var: VarConfig,
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config { field: field.into(), reason: reason.into() }
}

impl CaseConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_err("json", e.to_string()))
    }

    /// Reads a config file; relative table paths are made relative to its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err("path", format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = CaseConfig::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for spec in [Some(&mut cfg.source), Some(&mut cfg.u0), cfg.exact.as_mut()].into_iter().flatten() {
            if let DataSpec::Table { path } = spec {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        Ok(cfg)
    }

    /// Configuration of a catalog case with `n_t = n_x = n`.
    pub fn for_case(id: &str, n: usize) -> Result<Self> {
        let c = case(id)?;
        let named = || DataSpec::Named { id: id.into() };
        Ok(CaseConfig {
            alpha: 0.5,
            scheme: Scheme::Gl,
            time: TimeSpec { a: c.a, b: c.b, n },
            box_: BoxSpec { lo: c.lo.clone(), hi: c.hi.clone(), n: vec![n; c.dim()] },
            coefficients: CoefSpec { gamma: c.coeffs.gamma().to_vec(), k: c.coeffs.k().to_vec(), beta: c.coeffs.beta() },
            source: named(),
            u0: named(),
            exact: Some(named()),
            outputs: Outputs::default(),
        })
    }

    pub fn resolve(&self) -> Result<ResolvedCase> {
        let alpha = FracOrder::new(self.alpha).map_err(|e| config_err("alpha", e.to_string()))?;
        let tgrid = TimeGrid::new(self.time.a, self.time.b, self.time.n).map_err(|e| config_err("time", e.to_string()))?;
        let b = &self.box_;
        let domain =
            BoxDomain::new(b.lo.clone(), b.hi.clone(), b.n.clone()).map_err(|e| config_err("box", e.to_string()))?;
        let d = domain.dim();
        let co = &self.coefficients;
        if co.gamma.len() != d {
            return Err(config_err("gamma", format!("{} entries for a {d}-dimensional box", co.gamma.len())));
        }
        if co.k.len() != d || co.k.iter().any(|r| r.len() != d) {
            return Err(config_err("K", format!("must be {d}×{d}")));
        }
        let source = match &self.source {
            DataSpec::Named { id } => Source::Function(named_source(id, "source.id")?),
            DataSpec::Constant { value } => Source::constant(*value),
            DataSpec::Table { path } => Source::Sampled(table(path, &tgrid, &domain, BoundaryClass::None, "source.path")?),
        };
        let u0 = match &self.u0 {
            DataSpec::Named { id } => {
                let c = lookup(id, "u0.id")?;
                let f = c.coeffs.u0().clone();
                if matches!(f, Initial::Sampled(_)) {
                    return Err(config_err("u0.id", "catalog case has no closed-form initial value"));
                }
                f
            }
            DataSpec::Constant { value } => {
                let v = *value;
                Initial::function(move |_| v)
            }
            DataSpec::Table { path } => {
                let field = table(path, &tgrid, &domain, BoundaryClass::None, "u0.path")?;
                Initial::Sampled(field.slice(0))
            }
        };
        let exact: Option<SpaceTimeFn> = match &self.exact {
            None => None,
            Some(DataSpec::Named { id }) => Some(
                lookup(id, "exact.id")?
                    .exact
                    .ok_or_else(|| config_err("exact.id", format!("case `{id}` has no exact solution")))?,
            ),
            Some(DataSpec::Constant { value }) => {
                let v = *value;
                Some(Arc::new(move |_, _| v))
            }
            Some(DataSpec::Table { path }) => {
                let field = table(path, &tgrid, &domain, BoundaryClass::None, "exact.path")?;
                let (t0, h) = (tgrid.a(), tgrid.h());
                let dom = domain.clone();
                // nodal lookup; only meaningful on the configured grid
                Some(Arc::new(move |t: f64, x: &[f64]| {
                    let mut idx = vec![((t - t0) / h).round() as usize];
                    idx.extend((0..x.len()).map(|i| ((x[i] - dom.lo()[i]) / dom.spacing(i)).round() as usize));
                    field.values()[idx.as_slice()]
                }))
            }
        };
        let coeffs = crate::cdsolve::CDCoefficients::new(co.gamma.clone(), co.k.clone(), co.beta, source, u0)?;
        Ok(ResolvedCase {
            case: Case {
                id: self.id(),
                coeffs,
                a: self.time.a,
                b: self.time.b,
                lo: b.lo.clone(),
                hi: b.hi.clone(),
                exact,
            },
            tgrid,
            domain,
            var: VarConfig::new(alpha, self.scheme),
        })
    }

    /// Catalog id when the source is named, `"custom"` otherwise.
    pub fn id(&self) -> String {
        match &self.source {
            DataSpec::Named { id } => id.clone(),
            _ => "custom".into(),
        }
    }

    /// `true` when every datum is grid independent, so the case can be
    /// re-gridded for refinement studies.
    pub fn is_regriddable(&self) -> bool {
        [Some(&self.source), Some(&self.u0), self.exact.as_ref()]
            .into_iter()
            .flatten()
            .all(|s| !matches!(s, DataSpec::Table { .. }))
    }
}

fn lookup(id: &str, field: &str) -> Result<Case> {
    case(id).map_err(|e| match e {
        Error::Config { reason, .. } => config_err(field, reason),
        other => other,
    })
}

fn named_source(id: &str, field: &str) -> Result<SpaceTimeFn> {
    match lookup(id, field)?.coeffs.source() {
        Source::Function(f) => Ok(f.clone()),
        Source::Sampled(_) => Err(config_err(field, "catalog case has no closed-form source")),
    }
}

fn table(path: &Path, tgrid: &TimeGrid, domain: &BoxDomain, class: BoundaryClass, field: &str) -> Result<SpaceTimeField> {
    let f = read_field_csv_path(path, class).map_err(|e| config_err(field, format!("{}: {e}", path.display())))?;
    let (ft, fd) = (f.tgrid(), f.domain());
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    let same = ft.n() == tgrid.n()
        && close(ft.a(), tgrid.a())
        && close(ft.b(), tgrid.b())
        && fd.n() == domain.n()
        && (0..domain.dim()).all(|i| close(fd.lo()[i], domain.lo()[i]) && close(fd.hi()[i], domain.hi()[i]));
    if !same {
        return Err(config_err(field, format!("{} does not match the configured grid", path.display())));
    }
    SpaceTimeField::new(*tgrid, domain.clone(), f.into_values(), class)
}
