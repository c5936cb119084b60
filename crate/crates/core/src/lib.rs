//! Bound-state spectrum of the Dirac equation with a superposed Lorentz-vector
//! (−A₁/r) and Lorentz-scalar (−A₂/r) Coulomb coupling.
//!
//! The crate has three layers:
//!
//! * [`model`]: the closed-form spectrum, from γ and the effective principal
//!   quantum number ñ to the energy roots and the physicality filter.
//! * [`transform`]: the similarity transformation that decouples the radial
//!   system, together with symbolic checks of its algebraic identities and of
//!   the elimination down to a Coulomb-like second-order equation.
//! * [`shoot`], [`fd`], [`compare`], [`wavefunction`]: independent numerical
//!   oracles (a shooting solver on the original coupled system and a
//!   finite-difference eigensolver for the reduced equation), closed-form
//!   radial functions, and the bookkeeping that compares both sides.
//!
//! Energies are in the same units as the mass `m` (ħ = c = 1).

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` guards also reject NaN

pub mod compare;
pub mod error;
pub mod fd;
pub mod grid;
pub mod model;
mod ode;
pub mod parallel;
pub mod shoot;
pub mod transform;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
pub use grid::{RadialGrid, Spacing};
pub use model::{Branch, Channel, Couplings, LevelIndex, NtildeConvention, SpecialCase, SpecialEnergy, SpectrumLine};
pub use parallel::Execution;

/// `true` when `x` and `y` differ by at most `ulps` units in the last place of
/// `max(|x|, |y|, scale)`.
///
/// The `scale` floor keeps the comparison meaningful for values that cancel
/// towards zero (an energy near 0 is compared at the resolution of `m`).
pub fn within_ulps(x: f64, y: f64, ulps: f64, scale: f64) -> bool {
    let magnitude = x.abs().max(y.abs()).max(scale.abs());
    (x - y).abs() <= ulps * f64::EPSILON * magnitude
}
