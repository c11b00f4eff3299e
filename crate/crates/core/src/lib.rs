//! Numerical laboratory for planar curve shortening flow.
//!
//! The crate simulates the physical flow `d/dt v = g(v') k N` and its
//! self-similar rescaling `d/dtau v = v/2 + g(v') k N`, evaluates Huisken's
//! Gaussian functional and the star-shaped functionals along trajectories,
//! and checks every pointwise identity behind them (Hessian constraint,
//! residual equations, the first-order PDE for the weight, the profile ODE
//! and the gauge ODE).
//!
//! Module map:
//! - [`geometry`]: closed curves, per-node geometry, area/length, resampling.
//! - [`flow`]: right-hand sides, RK4/Euler stepping, rescaling, blow-up time.
//! - [`functionals`]: densities, functionals, dissipations, identity residuals.
//! - [`zelenjak`]: pointwise derivation checks and the characteristics explorer.
//! - [`cli`]: command-line front end.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod flow;
pub mod functionals;
pub mod geometry;
pub mod io;
pub mod vec2;
pub mod zelenjak;

pub use error::{Error, Result};
pub use vec2::Vec2;
