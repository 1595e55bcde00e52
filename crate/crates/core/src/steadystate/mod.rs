//! Steady cavity covariance in the normal phase and its temperature
//! derivative.
//!
//! Three routes are available: closed forms for a fast spin (Γ ≫ κ), an
//! eliminated-cavity model for a fast cavity (κ ≫ Γ), and a direct
//! Lyapunov solve of the linearised four-mode system that is valid
//! throughout the stable normal phase. Dynamics use `(Q, P) = √2 (q, p)`;
//! results are returned in the `(q, p)` convention (vacuum = I/2).

mod covariance;
mod lyapunov;

pub use covariance::{
    covariance_normal_phase, covariance_sensitivity, finite_difference_sensitivity, spin_x_variance,
    spin_x_variance_closed_form, Regime, SteadyCovariance, REGIME_SEPARATION,
};
pub use lyapunov::lyapunov_solve;
