//! Fractional partial derivatives along grid lines, fractional gradients and
//! divergences, their classical finite-difference counterparts, and
//! numerical checks of the div-grad identity and the fractional
//! Green-Riemann formula.
//!
//! The operator `∂_i^α` applies the corresponding 1D operator to every grid
//! line parallel to axis `i`. On a box every such line spans `[lo_i, hi_i]`.

mod checks;
mod classical;
mod ops;
mod vector;

pub use checks::{check_div_grad, check_green_riemann, GREEN_RIEMANN_TOL};
pub use classical::{classical_div, classical_grad, DiffScheme};
pub use ops::{frac_divergence, frac_gradient, partial_frac, FracKind, FracVecKind};
pub(crate) use ops::{caputo_lanes, caputo_adjoint_lanes};
pub use vector::VectorField;
