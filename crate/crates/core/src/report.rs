//! Plain report records produced by the checks and studies, serialisable to
//! JSON for the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Too few refinement levels were available to evaluate a trend.
    InsufficientLevels,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Number of intervals per axis for every level that was evaluated.
    pub grid_sizes: Vec<usize>,
    /// One norm per grid size (the check's headline discrepancy).
    pub norms: Vec<f64>,
    pub status: CheckStatus,
    pub pass: bool,
    /// Named scalar side results (lhs/rhs values, ratios, tolerances).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, grid_sizes: Vec<usize>, norms: Vec<f64>, pass: bool) -> Self {
        CheckReport {
            name: name.into(),
            grid_sizes,
            norms,
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            pass,
            details: BTreeMap::new(),
            note: None,
        }
    }

    pub fn insufficient(name: impl Into<String>, grid_sizes: Vec<usize>, note: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            grid_sizes,
            norms: Vec::new(),
            status: CheckStatus::InsufficientLevels,
            pass: false,
            details: BTreeMap::new(),
            note: Some(note.into()),
        }
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn set_pass(&mut self, pass: bool) {
        self.pass = pass;
        self.status = if pass { CheckStatus::Pass } else { CheckStatus::Fail };
    }
}

/// Result of a grid-refinement trend: the norm must shrink by at least
/// `min_factor` between consecutive levels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trend {
    pub levels: Vec<usize>,
    pub norms: Vec<f64>,
    pub ratios: Vec<f64>,
    pub min_factor: f64,
    pub pass: bool,
}

/// Norms below this are treated as exact zeros when forming ratios.
pub const TREND_FLOOR: f64 = 1e-13;

impl Trend {
    pub fn evaluate(levels: Vec<usize>, norms: Vec<f64>, min_factor: f64) -> Trend {
        let ratios: Vec<f64> = norms
            .windows(2)
            .map(|w| if w[1] <= TREND_FLOOR { f64::INFINITY } else { w[0] / w[1] })
            .collect();
        let all_zero = norms.iter().all(|&e| e <= TREND_FLOOR);
        let pass = norms.len() >= 2
            && norms.iter().all(|e| e.is_finite())
            && (all_zero || ratios.iter().all(|&r| r >= min_factor));
        Trend { levels, norms, ratios, min_factor, pass }
    }

    pub fn into_report(self, name: &str) -> CheckReport {
        let mut r = CheckReport::new(name, self.levels, self.norms, self.pass).with_detail("min_factor", self.min_factor);
        for (i, ratio) in self.ratios.iter().enumerate() {
            r.details.insert(format!("ratio_{i}"), *ratio);
        }
        r
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub dt: f64,
    pub l2_error: f64,
    pub linf_error: f64,
    /// Observed order against the previous row (absent on the first row and
    /// for exact levels).
    pub order_l2: Option<f64>,
    pub order_linf: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub case_id: String,
    pub solver: String,
    pub rows: Vec<ConvergenceRow>,
    /// `"exact"` when every level reproduces the solution to roundoff,
    /// otherwise `"observed"`.
    pub order_kind: String,
    pub min_order: Option<f64>,
    pub pass: bool,
}
