use serde::{Deserialize, Serialize};

/// One-dimensional quadrature rule on a uniform grid; tensor products of
/// these give the space and space-time rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadRule {
    Trapezoid,
    /// Weight `h` on nodes `0..n`, zero on the last node.
    LeftRectangle,
}

/// Weights for `n + 1` nodes with spacing `h`.
pub fn quad_weights(n: usize, h: f64, rule: QuadRule) -> Vec<f64> {
    (0..=n)
        .map(|j| match rule {
            QuadRule::Trapezoid if j == 0 || j == n => 0.5 * h,
            QuadRule::Trapezoid => h,
            QuadRule::LeftRectangle if j == n => 0.0,
            QuadRule::LeftRectangle => h,
        })
        .collect()
}
