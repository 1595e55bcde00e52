//! Single-mode Gaussian metrology.
//!
//! Quadratures are `q = (a + a†)/√2`, `p = (a − a†)/(i√2)`; the covariance
//! `C_ij = ½⟨{X_i, X_j}⟩ − ⟨X_i⟩⟨X_j⟩` equals `I/2` for the vacuum. The
//! symplectic form is `K = [[0, 1], [−1, 0]]`.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantity::Quantity;

/// Relative agreement demanded of the three QFI formulas.
pub const QFI_CONSENSUS_TOLERANCE: f64 = 1e-8;
/// Below `1/4` by more than this, a determinant is unphysical.
pub const UNCERTAINTY_TOLERANCE: f64 = 1e-9;

pub fn symplectic_form() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// A single-mode Gaussian state together with its derivative with respect
/// to the estimated parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProbe {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
    pub dmean: Vector2<f64>,
    pub dcov: Matrix2<f64>,
}

impl GaussianProbe {
    /// Zero-mean probe with a parameter-independent first moment.
    pub fn centered(cov: Matrix2<f64>, dcov: Matrix2<f64>) -> Self {
        GaussianProbe {
            mean: Vector2::zeros(),
            cov,
            dmean: Vector2::zeros(),
            dcov,
        }
    }

    /// Thermal state of occupation `n` whose occupation moves at rate `dn`.
    pub fn thermal(n: f64, dn: f64) -> Self {
        Self::centered(Matrix2::identity() * (n + 0.5), Matrix2::identity() * dn)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticInvariant {
    /// `√det C`.
    pub d: f64,
    /// `1/(2d)`.
    pub purity: f64,
}

pub fn symplectic_invariant(cov: &Matrix2<f64>) -> Result<SymplecticInvariant> {
    let asym = (cov[(0, 1)] - cov[(1, 0)]).abs();
    if asym > 1e-12 * cov.amax().max(1.0) {
        return Err(Error::Domain(format!(
            "covariance is not symmetric (|C12 - C21| = {asym:e})"
        )));
    }
    let det = cov.determinant();
    if !(det >= 0.25 - UNCERTAINTY_TOLERANCE) {
        return Err(Error::UnphysicalState { det });
    }
    let d = det.max(0.25).sqrt();
    Ok(SymplecticInvariant { d, purity: 0.5 / d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QfiVariant {
    /// Purity form: `Tr[(C⁻¹C′)²]/(2(1+P²)) + 2P′²/(1−P⁴)`.
    V1,
    /// Symplectic form with `J = C/(4d²−1)`:
    /// `2(4d²−1)/(4d²+1)·Tr[K J′ K C′]`.
    V2,
    /// Determinant form:
    /// `8/(16d⁴−1)·(d⁴ Tr[(C⁻¹C′)²] − ¼Tr[(K C′)²])`.
    V3,
    /// Mean of the three after checking they agree.
    Consensus,
}

/// Quantum Fisher information of a single-mode Gaussian family.
///
/// Every variant adds the displacement term `⟨X⟩′ᵀ C⁻¹ ⟨X⟩′`.
pub fn qfi_gaussian(probe: &GaussianProbe, variant: QfiVariant) -> Result<f64> {
    match variant {
        QfiVariant::V1 => qfi_v1(probe),
        QfiVariant::V2 => qfi_v2(probe),
        QfiVariant::V3 => qfi_v3(probe),
        QfiVariant::Consensus => {
            let (v1, v2, v3) = (qfi_v1(probe)?, qfi_v2(probe)?, qfi_v3(probe)?);
            let scale = v1.abs().max(v2.abs()).max(v3.abs());
            let spread = (v1 - v2).abs().max((v1 - v3).abs()).max((v2 - v3).abs());
            if !(spread <= QFI_CONSENSUS_TOLERANCE * scale) {
                return Err(Error::InconsistentQfi { v1, v2, v3 });
            }
            Ok((v1 + v2 + v3) / 3.0)
        }
    }
}

struct Pieces {
    d: f64,
    /// `d′ = d·Tr[C⁻¹C′]/2`.
    dd: f64,
    cinv: Matrix2<f64>,
    displacement: f64,
    derivative_free: bool,
}

fn pieces(probe: &GaussianProbe) -> Result<Pieces> {
    let SymplecticInvariant { d, .. } = symplectic_invariant(&probe.cov)?;
    let cinv = probe
        .cov
        .try_inverse()
        .ok_or_else(|| Error::Numerical("covariance is not invertible".into()))?;
    let dd = 0.5 * d * (cinv * probe.dcov).trace();
    let displacement = (probe.dmean.transpose() * cinv * probe.dmean)[(0, 0)];
    Ok(Pieces {
        d,
        dd,
        cinv,
        displacement,
        derivative_free: probe.dcov == Matrix2::zeros(),
    })
}

fn singular(what: &str) -> Error {
    Error::SingularState(format!("{what} is singular for a pure state with varying covariance"))
}

fn qfi_v1(probe: &GaussianProbe) -> Result<f64> {
    let s = pieces(probe)?;
    if s.derivative_free {
        return Ok(s.displacement);
    }
    let purity = 0.5 / s.d;
    let p4 = purity.powi(4);
    if 1.0 - p4 <= 1e-12 {
        return Err(singular("the purity form"));
    }
    let dpurity = -s.dd / (2.0 * s.d * s.d);
    let a = s.cinv * probe.dcov;
    Ok((a * a).trace() / (2.0 * (1.0 + purity * purity)) + 2.0 * dpurity * dpurity / (1.0 - p4) + s.displacement)
}

fn qfi_v2(probe: &GaussianProbe) -> Result<f64> {
    let s = pieces(probe)?;
    if s.derivative_free {
        return Ok(s.displacement);
    }
    let d2 = s.d * s.d;
    let gap = 4.0 * d2 - 1.0;
    if gap <= 1e-12 {
        return Err(singular("the symplectic form"));
    }
    let dj = probe.dcov / gap - probe.cov * (8.0 * s.d * s.dd / (gap * gap));
    let k = symplectic_form();
    let tr = (k * dj * k * probe.dcov).trace();
    Ok(2.0 * gap / (4.0 * d2 + 1.0) * tr + s.displacement)
}

fn qfi_v3(probe: &GaussianProbe) -> Result<f64> {
    let s = pieces(probe)?;
    if s.derivative_free {
        return Ok(s.displacement);
    }
    let d4 = s.d.powi(4);
    let gap = 16.0 * d4 - 1.0;
    if gap <= 1e-12 {
        return Err(singular("the determinant form"));
    }
    let a = s.cinv * probe.dcov;
    let kc = symplectic_form() * probe.dcov;
    Ok(8.0 / gap * (d4 * (a * a).trace() - 0.25 * (kc * kc).trace()) + s.displacement)
}

/// Lower bound `1/(N F)` on the estimator variance.
pub fn cramer_rao_bound(fisher: f64, repetitions: u64) -> Result<Quantity> {
    if repetitions < 1 {
        return Err(Error::Domain("repetition count must be at least 1".into()));
    }
    if !(fisher >= 0.0) {
        return Err(Error::Domain(format!(
            "Fisher information must be non-negative, got {fisher}"
        )));
    }
    if fisher == 0.0 {
        return Ok(Quantity::Divergent);
    }
    Ok(Quantity::from_f64(1.0 / (repetitions as f64 * fisher)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Estimator {
    /// Direct photon counting, `a†a`.
    PhotonNumber,
    /// `Q²`, position-quadrature intensity.
    Q2,
    /// `P²`, momentum-quadrature intensity.
    P2,
}

/// Error-propagation variance `Var(O)/|∂⟨O⟩|²` for a single shot of a
/// zero-mean probe, with fourth moments from Wick decoupling.
pub fn estimator_precision(probe: &GaussianProbe, estimator: Estimator) -> Result<Quantity> {
    if probe.mean.amax() > 1e-12 {
        return Err(Error::Domain("estimator variances assume a zero-mean probe".into()));
    }
    let c = &probe.cov;
    let dc = &probe.dcov;
    let (num, slope) = match estimator {
        Estimator::PhotonNumber => (
            2.0 * c[(0, 0)].powi(2) + 2.0 * c[(1, 1)].powi(2) + 4.0 * c[(0, 1)].powi(2) - 1.0,
            dc[(0, 0)] + dc[(1, 1)],
        ),
        Estimator::Q2 => (2.0 * c[(0, 0)].powi(2), dc[(0, 0)]),
        Estimator::P2 => (2.0 * c[(1, 1)].powi(2), dc[(1, 1)]),
    };
    if slope == 0.0 {
        return Ok(Quantity::Divergent);
    }
    Ok(Quantity::from_f64(num / (slope * slope)))
}

/// Symmetrised second moments of four Gaussian operators `A, B, C, D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMoments {
    pub ab: f64,
    pub ac: f64,
    pub ad: f64,
    pub bc: f64,
    pub bd: f64,
    pub cd: f64,
}

/// `⟨ABCD⟩ = ⟨AB⟩⟨CD⟩ + ⟨AD⟩⟨BC⟩ + ⟨AC⟩⟨BD⟩ − 2⟨A⟩⟨B⟩⟨C⟩⟨D⟩`.
pub fn wick_fourth_moment(m: &PairMoments, means: [f64; 4]) -> f64 {
    m.ab * m.cd + m.ad * m.bc + m.ac * m.bd - 2.0 * means.iter().product::<f64>()
}
