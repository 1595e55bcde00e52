//! Temperature estimation with a dissipative quantum Rabi probe.
//!
//! A two-level system (spin) sits in a thermal bath of unknown temperature
//! `T` and couples to a damped cavity mode. In the normal phase the cavity
//! relaxes to a zero-mean Gaussian state whose covariance depends on `T`;
//! this crate computes that covariance, its temperature derivative, and the
//! resulting precision limits (quantum Fisher information and the
//! error-propagation variances of photon counting, `Q²` and `P²`).
//!
//! Module map:
//!
//! - [`model`]: parameters, thermal occupations, critical and exceptional
//!   couplings, mean-field fixed points, linearised drift/diffusion.
//! - [`gaussian`]: single-mode Gaussian metrology kernel.
//! - [`steadystate`]: steady cavity covariance via closed forms or a
//!   Lyapunov solve, and its temperature sensitivity.
//! - [`thermometry`]: probes, precisions, near-critical asymptote, sweeps.

// `!(x >= 0.0)` rejects NaN alongside negatives.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod model;
pub mod quantity;
pub mod steadystate;
pub mod thermometry;

pub use error::{Error, Result};
pub use quantity::Quantity;
