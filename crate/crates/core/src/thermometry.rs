//! Temperature estimation with the steady cavity field as the probe.
//!
//! The estimated parameter is the spin-bath temperature `T`. Under
//! [`BathScenario::CommonBath`] the cavity occupation moves with `T` as well,
//! which is what makes the uncoupled cavity informative on its own.
//!
//! [`BathScenario::CommonBath`]: crate::model::BathScenario::CommonBath

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{cramer_rao_bound, estimator_precision, qfi_gaussian, Estimator, GaussianProbe, QfiVariant};
use crate::model::{classify_regime, delta_squared, Phase, SystemParams};
use crate::quantity::Quantity;
use crate::steadystate::{covariance_normal_phase, covariance_sensitivity, Regime};

/// Grid used when no explicit range is requested, in units of `λ_c`.
pub const DEFAULT_GRID: (f64, f64, usize) = (0.05, 0.9999, 200);

/// Normal-phase probe: zero displacement, steady covariance and its
/// temperature derivative.
pub fn probe(p: &SystemParams, regime: Regime) -> Result<GaussianProbe> {
    let cov = covariance_normal_phase(p, regime)?.cov;
    let dcov = covariance_sensitivity(p, regime)?;
    Ok(GaussianProbe::centered(cov, dcov))
}

/// How the temperature is read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measurement {
    /// Optimal measurement, bounded by the quantum Fisher information.
    Qfi,
    PhotonNumber,
    Q2,
    P2,
}

impl Measurement {
    pub const ALL: [Measurement; 4] = [
        Measurement::Qfi,
        Measurement::PhotonNumber,
        Measurement::Q2,
        Measurement::P2,
    ];

    fn estimator(self) -> Option<Estimator> {
        match self {
            Measurement::Qfi => None,
            Measurement::PhotonNumber => Some(Estimator::PhotonNumber),
            Measurement::Q2 => Some(Estimator::Q2),
            Measurement::P2 => Some(Estimator::P2),
        }
    }
}

/// `δ²T` after `repetitions` independent shots.
pub fn temperature_precision(
    p: &SystemParams,
    regime: Regime,
    measurement: Measurement,
    repetitions: u64,
) -> Result<Quantity> {
    let pr = probe(p, regime)?;
    precision_of(&pr, measurement, repetitions)
}

fn precision_of(pr: &GaussianProbe, measurement: Measurement, repetitions: u64) -> Result<Quantity> {
    if repetitions < 1 {
        return Err(Error::Domain("repetition count must be at least 1".into()));
    }
    match measurement.estimator() {
        None => cramer_rao_bound(qfi_gaussian(pr, QfiVariant::Consensus)?, repetitions),
        Some(e) => Ok(estimator_precision(pr, e)?.map(|v| v / repetitions as f64)),
    }
}

/// Leading near-critical behaviour of the QFI for the fast-spin probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpAsymptote {
    /// `Ω²n²(1+n)²(κ²+ω0²)²(Γ²+Ω²)²/(Δ⁴T⁴)`; diverges as `Δ⁻⁴`.
    pub f_lead: f64,
    /// `Ω²n²(1+n)²(κ²+ω0²)²/(4T⁴(1+2n)²κ²)`, independent of `λ`.
    pub f_coeff: f64,
}

impl CpAsymptote {
    /// `τ²·f_lead`, the literal product with an extra factor of `τ²`.
    /// It diverges as `Δ⁻⁸` and is kept only for comparison.
    pub fn with_tau_squared(&self, tau: f64) -> f64 {
        tau * tau * self.f_lead
    }
}

pub fn qfi_cp_asymptote(p: &SystemParams) -> Result<CpAsymptote> {
    p.validate()?;
    let n = p.spin_occupation();
    let t4 = p.temperature.powi(4);
    let s = p.kappa * p.kappa + p.omega0 * p.omega0;
    let common = p.omega.powi(2) * (n * (1.0 + n)).powi(2) * s * s / t4;
    let d4 = delta_squared(p).powi(2);
    Ok(CpAsymptote {
        f_lead: common * (p.gamma.powi(2) + p.omega.powi(2)).powi(2) / d4,
        f_coeff: common / (4.0 * (1.0 + 2.0 * n).powi(2) * p.kappa * p.kappa),
    })
}

/// One coupling value of a sweep. Precision fields are `None` when the row
/// could not be evaluated; `error` then says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub lambda_over_lambda_c: f64,
    pub tau: Quantity,
    pub phase: Phase,
    pub qfi: Option<f64>,
    pub var_qfi: Option<Quantity>,
    pub var_photon: Option<Quantity>,
    pub var_q2: Option<Quantity>,
    pub var_p2: Option<Quantity>,
    pub error: Option<String>,
}

/// Evaluate every grid point in parallel; the output keeps grid order.
///
/// Points at or beyond `λ_c` produce rows with `error` set instead of
/// aborting the sweep.
pub fn sweep(base: &SystemParams, lambda_grid: &[f64], regime: Regime, repetitions: u64) -> Result<Vec<SweepRow>> {
    if lambda_grid.is_empty() {
        return Err(Error::Domain("lambda grid is empty".into()));
    }
    if repetitions < 1 {
        return Err(Error::Domain("repetition count must be at least 1".into()));
    }
    base.validate()?;
    lambda_grid
        .par_iter()
        .map(|&l| sweep_row(&base.with_lambda(l), regime, repetitions))
        .collect()
}

fn sweep_row(p: &SystemParams, regime: Regime, repetitions: u64) -> Result<SweepRow> {
    p.validate()?;
    let diag = classify_regime(p)?;
    let mut row = SweepRow {
        lambda: p.lambda,
        lambda_over_lambda_c: p.lambda / diag.lambda_c,
        tau: diag.tau,
        phase: diag.phase,
        qfi: None,
        var_qfi: None,
        var_photon: None,
        var_q2: None,
        var_p2: None,
        error: None,
    };
    let filled = probe(p, regime).and_then(|pr| {
        let qfi = qfi_gaussian(&pr, QfiVariant::Consensus)?;
        Ok((
            qfi,
            cramer_rao_bound(qfi, repetitions)?,
            precision_of(&pr, Measurement::PhotonNumber, repetitions)?,
            precision_of(&pr, Measurement::Q2, repetitions)?,
            precision_of(&pr, Measurement::P2, repetitions)?,
        ))
    });
    match filled {
        Ok((qfi, v, ph, q2, p2)) => {
            row.qfi = Some(qfi);
            row.var_qfi = Some(v);
            row.var_photon = Some(ph);
            row.var_q2 = Some(q2);
            row.var_p2 = Some(p2);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    Ok(row)
}

/// `steps` points between `min` and `max` (fractions of `λ_c`), spaced
/// geometrically in the distance `1 − x` so that they crowd toward the
/// critical point.
pub fn critical_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(0.0 <= min && min <= max && max < 1.0) {
        return Err(Error::Domain(format!(
            "relative grid needs 0 <= min <= max < 1, got [{min}, {max}]"
        )));
    }
    let (a, b) = (1.0 - min, 1.0 - max);
    Ok(match steps {
        0 => vec![],
        1 => vec![min],
        _ => (0..steps)
            .map(|i| 1.0 - a * (b / a).powf(i as f64 / (steps - 1) as f64))
            .collect(),
    })
}

/// `steps` evenly spaced points on `[min, max]`.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min <= max) {
        return Err(Error::Domain(format!(
            "grid needs finite min <= max, got [{min}, {max}]"
        )));
    }
    Ok(match steps {
        0 => vec![],
        1 => vec![min],
        _ => (0..steps)
            .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
            .collect(),
    })
}
