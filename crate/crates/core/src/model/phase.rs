use serde::{Deserialize, Serialize};

use super::params::SystemParams;
use crate::error::Result;
use crate::quantity::Quantity;

/// Relative band within which λ is tagged as sitting on the exceptional point.
pub const EP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularCouplings {
    /// Critical coupling of the normal/superradiant transition.
    pub lambda_c: f64,
    /// Exceptional point of the effective cavity generator.
    pub lambda_ep: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Normal,
    Superradiant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AntiPtPhase {
    /// Effective cavity eigenvalues purely imaginary (λ < λ_ep).
    SymmetryUnbroken,
    /// Complex eigenvalues (λ > λ_ep).
    Broken,
    AtExceptionalPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagnosis {
    pub lambda_c: f64,
    pub lambda_ep: f64,
    pub phase: Phase,
    pub anti_pt: AntiPtPhase,
    pub tau: Quantity,
}

/// `(Γ² + Ω²)(1 + 2n)`, the effective spin damping scale that recurs in
/// every closed form.
pub(crate) fn spin_scale(p: &SystemParams) -> f64 {
    (p.gamma * p.gamma + p.omega * p.omega) * (1.0 + 2.0 * p.spin_occupation())
}

/// `Δ² = λ²ω0Ω − (ω0² + κ²)(Γ² + Ω²)(1 + 2n)`; negative in the normal phase.
pub fn delta_squared(p: &SystemParams) -> f64 {
    p.lambda * p.lambda * p.omega0 * p.omega - (p.omega0 * p.omega0 + p.kappa * p.kappa) * spin_scale(p)
}

pub fn singular_couplings(p: &SystemParams) -> Result<SingularCouplings> {
    p.validate()?;
    let spin = spin_scale(p);
    let lambda_ep = (p.omega0 * spin / p.omega).sqrt();
    let lambda_c = ((p.omega0 * p.omega0 + p.kappa * p.kappa) * spin / (p.omega0 * p.omega)).sqrt();
    Ok(SingularCouplings { lambda_c, lambda_ep })
}

/// Relaxation time of the cavity toward its steady state, `Divergent` at
/// and beyond the critical coupling.
///
/// The slow rate is `κ − Re√(ω0·w)` with `w = λ²Ω/((Ω²+Γ²)(1+2n)) − ω0`;
/// for `w < 0` the root is imaginary and the rate is just κ.
pub fn characteristic_time(p: &SystemParams) -> Result<Quantity> {
    let sc = singular_couplings(p)?;
    if p.lambda >= sc.lambda_c {
        return Ok(Quantity::Divergent);
    }
    let w = p.lambda * p.lambda * p.omega / spin_scale(p) - p.omega0;
    let arg = p.omega0 * w;
    let re_root = if arg > 0.0 { arg.sqrt() } else { 0.0 };
    let rate = p.kappa - re_root;
    if rate <= 0.0 {
        return Ok(Quantity::Divergent);
    }
    Ok(Quantity::Finite(1.0 / rate))
}

pub fn classify_regime(p: &SystemParams) -> Result<PhaseDiagnosis> {
    let SingularCouplings { lambda_c, lambda_ep } = singular_couplings(p)?;
    let phase = if p.lambda < lambda_c {
        Phase::Normal
    } else {
        Phase::Superradiant
    };
    let anti_pt = if (p.lambda - lambda_ep).abs() <= EP_TOLERANCE * lambda_ep {
        AntiPtPhase::AtExceptionalPoint
    } else if p.lambda < lambda_ep {
        AntiPtPhase::SymmetryUnbroken
    } else {
        AntiPtPhase::Broken
    };
    Ok(PhaseDiagnosis {
        lambda_c,
        lambda_ep,
        phase,
        anti_pt,
        tau: characteristic_time(p)?,
    })
}

#[cfg(test)]
mod tests {
    use nalgebra::Matrix2;

    use super::*;
    use crate::model::BathScenario;

    /// Fast-spin family with a spin bath cold enough that `n` underflows to 0.
    fn cold(lambda: f64) -> SystemParams {
        SystemParams::new(
            1.0,
            10.0,
            lambda,
            1.0,
            10.0,
            0.1,
            BathScenario::IndependentBaths {
                cavity_temperature: 0.0,
            },
        )
        .unwrap()
    }

    #[test]
    fn couplings_at_zero_occupation() {
        let sc = singular_couplings(&cold(0.0)).unwrap();
        assert!((sc.lambda_c - 40f64.sqrt()).abs() < 1e-12);
        assert!((sc.lambda_ep - 20f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn couplings_at_t10() {
        let p = cold(0.0).with_temperature(10.0);
        let n = p.spin_occupation();
        let sc = singular_couplings(&p).unwrap();
        assert!((sc.lambda_c - (40.0 * (1.0 + 2.0 * n)).sqrt()).abs() < 1e-12);
        assert!((sc.lambda_c - 9.30367).abs() < 1e-5);
    }

    #[test]
    fn couplings_coincide_without_cavity_loss() {
        let p = SystemParams {
            kappa: 1e-300,
            ..cold(0.0)
        };
        let sc = singular_couplings(&p).unwrap();
        assert!((sc.lambda_c - sc.lambda_ep).abs() < 1e-12 * sc.lambda_c);
    }

    #[test]
    fn ratio_identity() {
        for &(w0, k) in &[(1.0, 1.0), (10.0, 100.0), (3.0, 0.2)] {
            let p = SystemParams {
                omega0: w0,
                kappa: k,
                ..cold(0.0)
            };
            let sc = singular_couplings(&p).unwrap();
            let expected = w0 / (w0 * w0 + k * k).sqrt();
            assert!((sc.lambda_ep / sc.lambda_c - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn classification_examples() {
        let d = classify_regime(&cold(0.0)).unwrap();
        assert_eq!(d.phase, Phase::Normal);
        assert_eq!(d.anti_pt, AntiPtPhase::SymmetryUnbroken);

        let d = classify_regime(&cold(5.0)).unwrap();
        assert_eq!(d.phase, Phase::Normal);
        assert_eq!(d.anti_pt, AntiPtPhase::Broken);

        let d = classify_regime(&cold(7.0)).unwrap();
        assert_eq!(d.phase, Phase::Superradiant);
        assert_eq!(d.tau, Quantity::Divergent);

        let lc = singular_couplings(&cold(0.0)).unwrap().lambda_c;
        let d = classify_regime(&cold(lc)).unwrap();
        assert_eq!(d.phase, Phase::Superradiant);

        let lep = 20f64.sqrt();
        let d = classify_regime(&cold(lep)).unwrap();
        assert_eq!(d.anti_pt, AntiPtPhase::AtExceptionalPoint);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(characteristic_time(&cold(0.0)).unwrap(), Quantity::Finite(1.0));
        let tau = characteristic_time(&cold(5.0)).unwrap().value();
        assert!((tau - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tau_grows_monotonically_toward_cp() {
        let lc = singular_couplings(&cold(0.0)).unwrap().lambda_c;
        let mut prev = 0.0;
        for i in 0..60 {
            let x = 1.0 - 10f64.powf(-(i as f64) / 10.0) * 0.9;
            let tau = characteristic_time(&cold(x * lc)).unwrap().value();
            assert!(tau >= prev, "{x}: {tau} < {prev}");
            prev = tau;
        }
        assert!(prev > 1e4);
    }

    fn cavity_drift(p: &SystemParams) -> Matrix2<f64> {
        let g = p.lambda * p.lambda * p.omega / spin_scale(p);
        Matrix2::new(-p.kappa, p.omega0, g - p.omega0, -p.kappa)
    }

    #[test]
    fn tau_is_inverse_slowest_rate_of_cavity_drift() {
        for &t in &[0.5, 10.0, 30.0] {
            let base = cold(0.0).with_temperature(t);
            let lc = singular_couplings(&base).unwrap().lambda_c;
            for i in 0..50 {
                let p = base.with_lambda(lc * i as f64 / 50.0);
                let max_re = cavity_drift(&p)
                    .complex_eigenvalues()
                    .iter()
                    .map(|z| z.re)
                    .fold(f64::NEG_INFINITY, f64::max);
                let tau = characteristic_time(&p).unwrap().value();
                let expected = -1.0 / max_re;
                assert!(
                    ((tau - expected) / expected).abs() < 1e-9,
                    "{t} {i}: {tau} vs {expected}"
                );
            }
        }
    }
}
