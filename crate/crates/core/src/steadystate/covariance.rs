use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::lyapunov::lyapunov_solve;
use crate::error::{Error, Result};
use crate::model::phase::spin_scale;
use crate::model::{delta_squared, linearized_system, singular_couplings, FixedPoint, SystemParams};

/// Rate ratio at which one subsystem counts as adiabatically fast.
pub const REGIME_SEPARATION: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Fast spin (Γ ≫ κ): closed-form covariance.
    SpinEliminated,
    /// Fast cavity (κ ≫ Γ): eliminated-cavity spin model.
    CavityEliminated,
    /// Direct Lyapunov solve of the linearised system.
    Lyapunov,
}

impl Regime {
    /// Spin-eliminated if Γ ≥ 10κ, cavity-eliminated if κ ≥ 10Γ, otherwise
    /// Lyapunov.
    pub fn auto(p: &SystemParams) -> Self {
        if p.gamma >= REGIME_SEPARATION * p.kappa {
            Regime::SpinEliminated
        } else if p.kappa >= REGIME_SEPARATION * p.gamma {
            Regime::CavityEliminated
        } else {
            Regime::Lyapunov
        }
    }

    /// Whether the regime's approximations hold for `p`.
    pub fn is_valid_for(self, p: &SystemParams) -> bool {
        match self {
            Regime::SpinEliminated => p.gamma >= REGIME_SEPARATION * p.kappa,
            Regime::CavityEliminated => p.kappa >= REGIME_SEPARATION * p.gamma,
            Regime::Lyapunov => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SpinEliminated => "spin",
            Regime::CavityEliminated => "cavity",
            Regime::Lyapunov => "lyapunov",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin" => Ok(Regime::SpinEliminated),
            "cavity" => Ok(Regime::CavityEliminated),
            "lyapunov" => Ok(Regime::Lyapunov),
            other => Err(Error::Domain(format!("unknown regime `{other}`"))),
        }
    }
}

/// Cavity covariance in `(q, p)` plus the regime that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyCovariance {
    pub cov: Matrix2<f64>,
    pub regime: Regime,
    /// False when an asymptotic regime is used outside its validity range.
    pub within_validity: bool,
}

fn require_normal_phase(p: &SystemParams) -> Result<()> {
    p.validate()?;
    let lc = singular_couplings(p)?.lambda_c;
    if p.lambda >= lc {
        return Err(Error::NoSteadyState(format!(
            "lambda = {} is not below the critical coupling {lc}",
            p.lambda
        )));
    }
    Ok(())
}

pub fn covariance_normal_phase(p: &SystemParams, regime: Regime) -> Result<SteadyCovariance> {
    require_normal_phase(p)?;
    let cov = match regime {
        Regime::SpinEliminated => spin_eliminated(p),
        Regime::CavityEliminated => cavity_eliminated(p)?.0,
        Regime::Lyapunov => full_lyapunov(p)?,
    };
    Ok(SteadyCovariance {
        cov,
        regime,
        within_validity: regime.is_valid_for(p),
    })
}

/// Closed-form fast-spin covariance, with `X = ω0Γ(1+2n) + κΩ(1+n_c)` and
/// `Y = ω0Γ(1+2n) − κΩ(1+n_c)`:
///
/// ```text
/// C11 = ½[1 + 2n_c − ω0λ²X/(2κΔ²)]
/// C22 = ½[1 + 2n_c + λ²Y/(2κω0(Ω²+Γ²)(1+2n)) − κλ²X/(2ω0Δ²)]
/// C12 = −λ²X/(4Δ²)
/// ```
fn spin_eliminated(p: &SystemParams) -> Matrix2<f64> {
    let t = SpinTerms::new(p);
    let lam2 = p.lambda * p.lambda;
    let (k, w0) = (p.kappa, p.omega0);
    let c11 = 0.5 * (1.0 + 2.0 * t.nc - w0 * lam2 * t.x / (2.0 * k * t.d2));
    let c22 = 0.5 * (1.0 + 2.0 * t.nc + lam2 * t.y / (2.0 * k * w0 * t.spin) - k * lam2 * t.x / (2.0 * w0 * t.d2));
    let c12 = -lam2 * t.x / (4.0 * t.d2);
    Matrix2::new(c11, c12, c12, c22)
}

/// Temperature derivative of [`spin_eliminated`] by the chain rule through
/// `n(T)` and, for a common bath, `n_c(T)`.
fn spin_eliminated_rate(p: &SystemParams) -> Matrix2<f64> {
    let t = SpinTerms::new(p);
    let lam2 = p.lambda * p.lambda;
    let (k, w0, g, om) = (p.kappa, p.omega0, p.gamma, p.omega);
    let dn = p.spin_occupation_rate();
    let dnc = p.cavity_occupation_rate();

    let dspin = 2.0 * (g * g + om * om) * dn;
    let dd2 = -(w0 * w0 + k * k) * dspin;
    let dx = 2.0 * w0 * g * dn + k * om * dnc;
    let dy = 2.0 * w0 * g * dn - k * om * dnc;
    // d(X/Δ²) and d(Y/L)
    let x_over_d2 = (dx * t.d2 - t.x * dd2) / (t.d2 * t.d2);
    let y_over_l = (dy * t.spin - t.y * dspin) / (t.spin * t.spin);

    let c11 = dnc - w0 * lam2 / (4.0 * k) * x_over_d2;
    let c22 = dnc + lam2 / (4.0 * k * w0) * y_over_l - k * lam2 / (4.0 * w0) * x_over_d2;
    let c12 = -lam2 / 4.0 * x_over_d2;
    Matrix2::new(c11, c12, c12, c22)
}

struct SpinTerms {
    nc: f64,
    /// `(Γ²+Ω²)(1+2n)`
    spin: f64,
    d2: f64,
    x: f64,
    y: f64,
}

impl SpinTerms {
    fn new(p: &SystemParams) -> Self {
        let n = p.spin_occupation();
        let nc = p.cavity_occupation();
        let a = p.omega0 * p.gamma * (1.0 + 2.0 * n);
        let b = p.kappa * p.omega * (1.0 + nc);
        SpinTerms {
            nc,
            spin: spin_scale(p),
            d2: delta_squared(p),
            x: a + b,
            y: a - b,
        }
    }
}

/// `(δQ, δP)` block of the four-mode Lyapunov solution, in `(q, p)`.
fn full_lyapunov(p: &SystemParams) -> Result<Matrix2<f64>> {
    let sys = linearized_system(p, &FixedPoint::normal(p))?;
    let (m, d) = sys.without_sz();
    let c = lyapunov_solve(&m, &d)?;
    Ok(Matrix2::new(c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]) * 0.5)
}

/// Fast-cavity model. The cavity is slaved to the spin through
/// `δQ = −2λω0 δσx/(κ²+ω0²) + Q_free` (and `κ` in place of `ω0` for `δP`),
/// where `Q_free, P_free` are the bath fluctuations filtered by the bare
/// cavity. The spin obeys the eliminated drift
/// `[[−Γ, −Ω], [Ω − λ²ω0/((κ²+ω0²)(1+2n)), −Γ]]` and sees the cavity noise
/// through `λ(κA⁺ + ω0A⁻)/(2(κ²+ω0²)(1+2n))`. Spin and filtered cavity noise
/// are correlated, so both are solved as one four-dimensional Lyapunov
/// problem with block-diagonal drift.
///
/// Returns the cavity covariance in `(q, p)` and `⟨δσx²⟩`.
fn cavity_eliminated(p: &SystemParams) -> Result<(Matrix2<f64>, f64)> {
    let n = p.spin_occupation();
    let (k, w0, g, om, lam) = (p.kappa, p.omega0, p.gamma, p.omega, p.lambda);
    let s = k * k + w0 * w0;
    let shift = lam * lam * w0 / (s * (1.0 + 2.0 * n));

    let mut m = DMatrix::<f64>::zeros(4, 4);
    m[(0, 0)] = -g;
    m[(0, 1)] = -om;
    m[(1, 0)] = om - shift;
    m[(1, 1)] = -g;
    m[(2, 2)] = -k;
    m[(2, 3)] = w0;
    m[(3, 2)] = -w0;
    m[(3, 3)] = -k;

    // white-noise strengths shared with the full linearised system
    let sys = linearized_system(p, &FixedPoint::normal(p))?;
    let spin_noise = sys.diffusion[(2, 2)];
    let cavity_noise = sys.diffusion[(0, 0)];
    let c = lam / (2.0 * (1.0 + 2.0 * n) * s);
    let mut b = DMatrix::<f64>::identity(4, 4);
    b[(1, 2)] = c * k;
    b[(1, 3)] = c * w0;
    let noise = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        spin_noise,
        spin_noise,
        cavity_noise,
        cavity_noise,
    ]));
    let d = &b * noise * b.transpose();
    let z = lyapunov_solve(&m, &d)?;

    let resp = Matrix2::new(-2.0 * lam * w0 / s, 0.0, -2.0 * lam * k / s, 0.0);
    let spin_block = Matrix2::new(z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]);
    let cross = Matrix2::new(z[(0, 2)], z[(0, 3)], z[(1, 2)], z[(1, 3)]);
    let cav_block = Matrix2::new(z[(2, 2)], z[(2, 3)], z[(3, 2)], z[(3, 3)]);
    let cov = resp * spin_block * resp.transpose() + resp * cross + cross.transpose() * resp.transpose() + cav_block;
    let cov = (cov + cov.transpose()) * 0.25;
    Ok((cov, z[(0, 0)]))
}

/// `⟨δσx²⟩` of the fast-cavity model.
pub fn spin_x_variance(p: &SystemParams) -> Result<f64> {
    require_normal_phase(p)?;
    Ok(cavity_eliminated(p)?.1)
}

/// Closed-form fast-cavity spin variance
/// `(1+2n)/4 − Ωλ²[Ωκ(1+2n_c) + ω0Γ(1+2n)]/(8ΓΔ²)`.
pub fn spin_x_variance_closed_form(p: &SystemParams) -> Result<f64> {
    require_normal_phase(p)?;
    let n = p.spin_occupation();
    let nc = p.cavity_occupation();
    let lam2 = p.lambda * p.lambda;
    let bracket = p.omega * p.kappa * (1.0 + 2.0 * nc) + p.omega0 * p.gamma * (1.0 + 2.0 * n);
    Ok(0.25 * (1.0 + 2.0 * n) - p.omega * lam2 * bracket / (8.0 * p.gamma * delta_squared(p)))
}

/// `dC/dT`: analytic for [`Regime::SpinEliminated`], central finite
/// differences otherwise.
pub fn covariance_sensitivity(p: &SystemParams, regime: Regime) -> Result<Matrix2<f64>> {
    require_normal_phase(p)?;
    match regime {
        Regime::SpinEliminated => Ok(spin_eliminated_rate(p)),
        _ => finite_difference_sensitivity(p, regime),
    }
}

/// Central difference of the covariance in `T`, starting from step `1e-5·T`.
///
/// `λ_c` rises with `T`, so close to the critical point the lower step can
/// leave the normal phase or straddle the steep part of the divergence. The
/// step shrinks tenfold until two successive estimates agree to `1e-4`.
pub fn finite_difference_sensitivity(p: &SystemParams, regime: Regime) -> Result<Matrix2<f64>> {
    require_normal_phase(p)?;
    let t = p.temperature;
    let mut h = 1e-5 * t;
    let mut last: Option<Matrix2<f64>> = None;
    for step in 0..8 {
        let hi = covariance_normal_phase(&p.with_temperature(t + h), regime);
        let lo = covariance_normal_phase(&p.with_temperature(t - h), regime);
        match (hi, lo) {
            (Ok(hi), Ok(lo)) => {
                let est = (hi.cov - lo.cov) / (2.0 * h);
                if let Some(prev) = last {
                    if (est - prev).amax() <= 1e-4 * est.amax().max(f64::MIN_POSITIVE) {
                        return Ok(est);
                    }
                } else if step == 0 && !near_cp(p) {
                    return Ok(est);
                }
                last = Some(est);
            }
            (Err(Error::NoSteadyState(_)), _) | (_, Err(Error::NoSteadyState(_))) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
        h /= 10.0;
    }
    last.ok_or_else(|| {
        Error::NoSteadyState(format!(
            "finite-difference step cannot be resolved inside the normal phase at T = {t}, lambda = {}",
            p.lambda
        ))
    })
}

/// Within one percent of `λ_c`, where a single step is not trusted.
fn near_cp(p: &SystemParams) -> bool {
    singular_couplings(p)
        .map(|s| p.lambda > 0.99 * s.lambda_c)
        .unwrap_or(true)
}
