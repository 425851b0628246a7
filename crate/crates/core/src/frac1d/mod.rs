//! One-dimensional fractional integrals and derivatives on uniform grids.
//!
//! Naming follows the direction of integration: *forward* operators
//! integrate from the left endpoint `a` up to `t` (the causal `D_+`
//! family), *backward* operators integrate from `t` to the right endpoint
//! `b` (`D_−`). Only orders `0 < α < 1` are supported.
//!
//! Two discretisations are provided:
//!
//! - **L1**: `f` is replaced by its piecewise-linear interpolant and the
//!   singular kernel is integrated exactly on each cell. Caputo accuracy is
//!   `O(h^{2−α})` for smooth `f`.
//! - **Grünwald-Letnikov (GL)**: convolution with the binomial weights of
//!   `(1 − z)^α`. First order, but discrete GL operators compose exactly,
//!   `(1 − z)^α (1 − z)^β = (1 − z)^{α+β}`, which the variational solver
//!   relies on.

mod checks;
mod gamma;
mod grid;
mod kernel;
mod ops;
mod weights;

pub use checks::{check_composition, check_ibp, CompositionVariant, IbpVariant};
pub use gamma::gamma_fn;
pub(crate) use gamma::gamma;
pub use grid::{Direction, FracOrder, Samples1D, Scheme, TimeGrid};
pub use kernel::CaputoKernel;
pub use ops::{caputo_deriv, power_rule_oracle, rl_boundary_term, rl_deriv, rl_integral};
pub use weights::{binomial_weights, convolve_truncated, gl_weights, GLWeights};
