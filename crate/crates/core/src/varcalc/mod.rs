//! Lagrangians, the asymmetric fractional action and its Euler-Lagrange
//! residuals.
//!
//! A state is a pair `U = (u_+, u_−)` of space-time fields. The action
//! evaluates a Lagrangian `L(t, x, y, v, w, z)` at the slot fields of `U`
//! (see [`SlotFields`]) and integrates with a tensor quadrature rule.
//!
//! The outer operators of the residuals are the quadrature-weighted
//! transposes of the inner slot operators, so the discrete duality
//! `⟨residual, h⟩ = d𝓛(U)·H` holds to roundoff for directions `H`
//! vanishing on the space-time boundary. The continuous Euler-Lagrange
//! equations are recovered under refinement.

mod action;
mod lagrangian;
mod state;

pub use action::{
    action, action_derivative, el_residual_pair, gradient_check, random_direction, residual_pairing,
    restricted_el_residual,
};
pub use lagrangian::{check_partials, Lagrangian, NodePoint, QuadraticLagrangian, SlotValues, ZeroLagrangian};
pub use state::{assemble_slots, ActionRule, AsymmetricState, SlotFields, VarConfig};
pub(crate) use state::Discretisation;

#[cfg(test)]
mod tests;
