//! The constant-coefficient convection-diffusion equation
//!
//! ```text
//! u_t + γ·∇u − div(K∇u) + βu = f,   u = 0 on ∂Ω,   u(a,·) = u0
//! ```
//!
//! as the restricted Euler-Lagrange equation of an asymmetric fractional
//! action at `α = 1/2`, a variational solver that zeroes that residual, a
//! theta-scheme reference solver, a catalog of cases with known solutions
//! and refinement studies.

mod cases;
mod classical;
mod coeffs;
mod lagrangian;
pub mod linalg;
mod solve;
mod study;

pub use cases::{case, Case, CASE_IDS};
pub use classical::{cd_classical_residual, reference_solve, Convection, TimeDiff};
pub use coeffs::{CDCoefficients, Initial, Source, SpaceFn, SpaceTimeFn};
pub use lagrangian::{cd_lagrangian, CdLagrangian};
pub use solve::{variational_solve, LinearDiagnostics, SolveMeta, SolveResult};
pub use study::{convergence_study, equivalence_check, SolverChoice, EXACT_TOL, MIN_ORDER, TREND_FACTOR};
