//! One-dimensional viscous, heat-conducting gas dynamics in Lagrangian mass
//! coordinates, for an ideal polytropic gas with constant viscosity and
//! power-law heat conductivity, on truncated unbounded domains.
//!
//! The crate provides:
//! - the constitutive laws and the convex entropy potential ([`gas`]),
//! - the staggered mass mesh and boundary handling for the whole-line and
//!   the two half-line problems ([`grid`]),
//! - a semi-implicit, positivity-guarded time integrator ([`solver`]),
//! - the energy/dissipation/bound/decay observables ([`diagnostics`]),
//! - manufactured-solution and reference-integrator verification
//!   ([`verification`]),
//! - the acceptance suite the binary and the test harness share
//!   ([`acceptance`]).
//!
//! Everything numerical is generic over the scalar width through
//! [`scalar::Scalar`]; the `*64` aliases below fix `f64` for ordinary use.

// Guards are written `!(x > 0)` rather than `x <= 0` on purpose: the negated
// form rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod diagnostics;
pub mod error;
pub mod gas;
pub mod grid;
pub mod scalar;
pub mod solver;
pub mod tridiag;
pub mod verification;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type GasParams64 = gas::GasParams<f64>;
pub type Grid64 = grid::Grid<f64>;
pub type State64 = grid::State<f64>;
pub type SchemeConfig64 = solver::SchemeConfig<f64>;
pub type ProblemSetup64 = solver::ProblemSetup<f64>;
pub type InitialProfiles64 = solver::InitialProfiles<f64>;
pub type DiagnosticsCollector64 = diagnostics::DiagnosticsCollector<f64>;

pub type GasParams32 = gas::GasParams<f32>;
pub type Grid32 = grid::Grid<f32>;
pub type State32 = grid::State<f32>;
