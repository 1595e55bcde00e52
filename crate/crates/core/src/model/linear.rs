use nalgebra::{DMatrix, Matrix5};
use serde::{Deserialize, Serialize};

use super::fixed_point::{mean_field_flow, FixedPoint};
use super::params::SystemParams;
use crate::error::{Error, Result};

/// Global factor between symmetrised noise correlators and the diffusion
/// matrix in `Ċ = MC + CMᵀ + D`, with `C` the symmetrised covariance of
/// `(δQ, δP, δσx, δσy, δσz)`.
pub const DIFFUSION_SCALE: f64 = 0.5;

/// A real part below `-STABILITY_MARGIN` counts as decaying.
pub const STABILITY_MARGIN: f64 = 1e-10;

/// Linearised Langevin system `ḣ = M h + noise` around a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub drift: Matrix5<f64>,
    pub diffusion: Matrix5<f64>,
}

impl LinearSystem {
    /// Drift and diffusion restricted to `(δQ, δP, δσx, δσy)`.
    ///
    /// In the normal phase `δσz` neither drives nor is driven by the other
    /// fluctuations, so this block carries the full cavity statistics.
    pub fn without_sz(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let m = DMatrix::from_fn(4, 4, |i, j| self.drift[(i, j)]);
        let d = DMatrix::from_fn(4, 4, |i, j| self.diffusion[(i, j)]);
        (m, d)
    }
}

/// Drift (the Jacobian of [`mean_field_flow`]) and diffusion at `fp`.
///
/// Cavity quadratures receive `4κ(1+2n_c)·s`. Each transverse spin
/// component receives `2Γ(1+2n)|⟨σz⟩|·s`: the thermal noise strength times
/// the spin polarisation, which keeps the uncoupled spin at
/// `⟨δσx²⟩ = 1/4`. `δσz` is noiseless.
pub fn linearized_system(p: &SystemParams, fp: &FixedPoint) -> Result<LinearSystem> {
    p.validate()?;
    let state = fp.state();
    let scale = state.amax().max(1.0) + p.gamma;
    let res = mean_field_flow(&state, p).amax();
    if res > 1e-8 * scale {
        return Err(Error::ContractViolation(format!(
            "fixed point does not belong to these parameters (flow residual {res:e})"
        )));
    }
    let n = p.spin_occupation();
    let (k, w0, g, om, lam) = (p.kappa, p.omega0, p.gamma, p.omega, p.lambda);
    #[rustfmt::skip]
    let drift = Matrix5::new(
        -k,              w0,   0.0,        0.0,             0.0,
        -w0,             -k,   -2.0 * lam, 0.0,             0.0,
        0.0,             0.0,  -g,         -om,             0.0,
        -lam * fp.sz,    0.0,  om,         -g,              -lam * fp.q_mean,
        lam * fp.sy,     0.0,  0.0,        lam * fp.q_mean, -(2.0 + 4.0 * n) * g,
    );
    let cavity = 4.0 * k * (1.0 + 2.0 * p.cavity_occupation()) * DIFFUSION_SCALE;
    let spin = 2.0 * g * (1.0 + 2.0 * n) * fp.sz.abs() * DIFFUSION_SCALE;
    let diffusion = Matrix5::from_diagonal(&nalgebra::Vector5::new(cavity, cavity, spin, spin, 0.0));
    Ok(LinearSystem { drift, diffusion })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilitySpectrum {
    pub eigen_real_parts: Vec<f64>,
    pub stable: bool,
}

pub fn stability_spectrum(sys: &LinearSystem) -> Result<StabilitySpectrum> {
    let schur = sys
        .drift
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition of the drift did not converge".into()))?;
    let mut eigen_real_parts: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.re).collect();
    eigen_real_parts.sort_by(f64::total_cmp);
    let stable = eigen_real_parts.iter().all(|&re| re < -STABILITY_MARGIN);
    Ok(StabilitySpectrum {
        eigen_real_parts,
        stable,
    })
}
