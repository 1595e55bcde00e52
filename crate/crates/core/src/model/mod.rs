//! Physical model: parameters, phase diagram, mean-field fixed points and
//! the linearised fluctuation dynamics around them.
//!
//! Dynamics run in the quadratures `Q = a + a†`, `P = i(a† − a)` and the
//! spin components `σx, σy, σz` (Pauli matrices divided by two).

mod fixed_point;
mod linear;
mod params;
pub(crate) mod phase;

pub use fixed_point::{mean_field_fixed_points, mean_field_flow, FixedPoint, FixedPointPhase};
pub use linear::{linearized_system, stability_spectrum, LinearSystem, StabilitySpectrum, DIFFUSION_SCALE};
pub use params::{occupation_sensitivity, thermal_occupation, BathScenario, SystemParams};
pub use phase::{
    characteristic_time, classify_regime, delta_squared, singular_couplings, AntiPtPhase, Phase, PhaseDiagnosis,
    SingularCouplings,
};
