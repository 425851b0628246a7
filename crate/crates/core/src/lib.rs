//! # fracvar-core
//!
//! Asymmetric fractional calculus of variations on uniform grids, and its
//! application to the constant-coefficient convection-diffusion equation
//!
//! ```text
//! u_t + γ·∇u − div(K∇u) + βu = f   in (a,b] × Ω,   u = 0 on ∂Ω,   u(a,·) = u0
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`frac1d`]: one-dimensional Riemann-Liouville and Caputo integrals and
//!   derivatives (forward from `a`, backward to `b`), discretised with the L1
//!   scheme and Grünwald-Letnikov convolutions, plus numerical checks of the
//!   classical 1D identities (composition, integration by parts).
//! - [`domain`]: axis-aligned boxes, spatial and space-time fields, line
//!   extraction, tensor quadrature and the field CSV format.
//! - [`fracfield`]: fractional partial derivatives, gradients and divergences
//!   along grid lines; the div-grad identity and fractional Green-Riemann checks.
//! - [`varcalc`]: Lagrangians, the asymmetric action, its first variation and
//!   the two coupled Euler-Lagrange residuals.
//! - [`cdsolve`]: the convection-diffusion Lagrangian, the variational
//!   time-marching solver, a theta-scheme reference solver and convergence
//!   studies.
//! - [`config`]: JSON case configurations consumed by the `fracvar` CLI.
//!
//! All operators are pure functions of immutable inputs. Line-wise work can be
//! spread over a thread pool with [`exec::set_threads`]; the serial path is the
//! reference and parallel results are bit-identical to it.

pub mod cdsolve;
pub mod config;
pub mod domain;
mod error;
pub mod exec;
pub mod frac1d;
pub mod fracfield;
pub mod report;
pub mod varcalc;

pub use error::{Error, Result};

pub use cdsolve::{CDCoefficients, SolveResult};
pub use domain::{BoundaryClass, BoxDomain, QuadRule, SpaceTimeField, SpatialField};
pub use frac1d::{Direction, FracOrder, GLWeights, Samples1D, Scheme, TimeGrid};
pub use fracfield::{FracVecKind, VectorField};
pub use report::{CheckReport, CheckStatus, ConvergenceReport};
pub use varcalc::{AsymmetricState, Lagrangian, SlotFields, VarConfig};
