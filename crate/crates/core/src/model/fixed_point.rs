use nalgebra::Vector5;
use serde::{Deserialize, Serialize};

use super::params::SystemParams;
use super::phase::{delta_squared, spin_scale};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointPhase {
    Normal,
    /// Superradiant branch with `⟨Q⟩ > 0`.
    SuperradiantPlus,
    /// Superradiant branch with `⟨Q⟩ < 0`.
    SuperradiantMinus,
}

/// Mean-field steady values `(⟨Q⟩, ⟨P⟩, ⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub q_mean: f64,
    pub p_mean: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub phase: FixedPointPhase,
}

impl FixedPoint {
    pub fn state(&self) -> Vector5<f64> {
        Vector5::new(self.q_mean, self.p_mean, self.sx, self.sy, self.sz)
    }

    /// The trivial point `(0, 0, 0, 0, −1/(2 + 4n))`.
    pub fn normal(p: &SystemParams) -> Self {
        FixedPoint {
            q_mean: 0.0,
            p_mean: 0.0,
            sx: 0.0,
            sy: 0.0,
            sz: -1.0 / (2.0 + 4.0 * p.spin_occupation()),
            phase: FixedPointPhase::Normal,
        }
    }
}

/// Noise-free Langevin flow `(Q̇, Ṗ, σ̇x, σ̇y, σ̇z)`.
pub fn mean_field_flow(state: &Vector5<f64>, p: &SystemParams) -> Vector5<f64> {
    let (q, pp, sx, sy, sz) = (state[0], state[1], state[2], state[3], state[4]);
    let n = p.spin_occupation();
    Vector5::new(
        -p.kappa * q + p.omega0 * pp,
        -p.kappa * pp - p.omega0 * q - 2.0 * p.lambda * sx,
        -p.omega * sy - p.gamma * sx,
        p.omega * sx - p.gamma * sy - p.lambda * q * sz,
        -(4.0 * p.gamma * n + 2.0 * p.gamma) * sz + p.lambda * q * sy - p.gamma,
    )
}

/// The normal point, plus both superradiant branches when `Δ² > 0`.
///
/// On the superradiant branches `|⟨Q⟩| = √2·Δ/(λ√(ω0²+κ²))`,
/// `⟨P⟩ = (κ/ω0)⟨Q⟩`, `⟨σx⟩ = −(ω0²+κ²)⟨Q⟩/(2λω0)`,
/// `⟨σy⟩ = −(Γ/Ω)⟨σx⟩` and `⟨σz⟩ = −(ω0²+κ²)(Γ²+Ω²)/(2λ²ω0Ω)`. At the
/// critical coupling `⟨σz⟩` joins the normal value `−1/(2+4n)`.
pub fn mean_field_fixed_points(p: &SystemParams) -> Result<Vec<FixedPoint>> {
    p.validate()?;
    let mut points = vec![FixedPoint::normal(p)];
    let d2 = delta_squared(p);
    if d2 > 0.0 && p.lambda > 0.0 {
        let delta = d2.sqrt();
        let s = p.omega0 * p.omega0 + p.kappa * p.kappa;
        let q_abs = std::f64::consts::SQRT_2 * delta / (p.lambda * s.sqrt());
        // σz from the σ̇y balance; Γ²+Ω² without the thermal factor
        let sz =
            -s * (spin_scale(p) / (1.0 + 2.0 * p.spin_occupation())) / (2.0 * p.lambda * p.lambda * p.omega0 * p.omega);
        for (sign, phase) in [
            (1.0, FixedPointPhase::SuperradiantPlus),
            (-1.0, FixedPointPhase::SuperradiantMinus),
        ] {
            let q = sign * q_abs;
            let sx = -s * q / (2.0 * p.lambda * p.omega0);
            points.push(FixedPoint {
                q_mean: q,
                p_mean: p.kappa / p.omega0 * q,
                sx,
                sy: -p.gamma / p.omega * sx,
                sz,
                phase,
            });
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{singular_couplings, BathScenario};

    fn params(lambda: f64, t: f64) -> SystemParams {
        SystemParams::new(
            1.0,
            10.0,
            lambda,
            1.0,
            10.0,
            t,
            BathScenario::IndependentBaths {
                cavity_temperature: 0.0,
            },
        )
        .unwrap()
    }

    fn residual(fp: &FixedPoint, p: &SystemParams) -> f64 {
        mean_field_flow(&fp.state(), p).amax()
    }

    #[test]
    fn flow_at_origin_is_constant_drive() {
        let p = params(3.0, 2.0);
        let f = mean_field_flow(&Vector5::zeros(), &p);
        assert_eq!(f, Vector5::new(0.0, 0.0, 0.0, 0.0, -p.gamma));
    }

    #[test]
    fn normal_point_only_below_cp() {
        let p = params(5.0, 10.0);
        let pts = mean_field_fixed_points(&p).unwrap();
        assert_eq!(pts.len(), 1);
        let n = p.spin_occupation();
        assert_eq!(pts[0].sz, -1.0 / (2.0 + 4.0 * n));
        assert_eq!(residual(&pts[0], &p), 0.0);
    }

    #[test]
    fn superradiant_branches_at_lambda_7() {
        let p = params(7.0, 0.1);
        let pts = mean_field_fixed_points(&p).unwrap();
        assert_eq!(pts.len(), 3);
        for fp in &pts[1..] {
            assert!((fp.sz - (-400.0 / 980.0)).abs() < 1e-14);
            assert!((fp.sz + 0.40816).abs() < 1e-5);
            assert!((fp.q_mean.abs() - 2f64.sqrt() * 90f64.sqrt() / (7.0 * 2f64.sqrt())).abs() < 1e-12);
            assert!((fp.sy + p.gamma / p.omega * fp.sx).abs() < 1e-15);
            assert!(residual(fp, &p) <= 1e-10);
        }
        assert!(pts[1].q_mean > 0.0 && pts[2].q_mean < 0.0);
    }

    #[test]
    fn superradiant_points_zero_the_flow_at_finite_temperature() {
        for &t in &[1.0, 10.0, 30.0] {
            let lc = singular_couplings(&params(0.0, t)).unwrap().lambda_c;
            for &x in &[1.001, 1.2, 2.0, 5.0] {
                let p = params(x * lc, t);
                let pts = mean_field_fixed_points(&p).unwrap();
                assert_eq!(pts.len(), 3);
                for fp in &pts {
                    assert!(residual(fp, &p) <= 1e-10, "T={t} x={x}: {}", residual(fp, &p));
                }
            }
        }
    }

    #[test]
    fn superradiant_sz_joins_normal_value_at_cp() {
        let base = params(0.0, 10.0);
        let lc = singular_couplings(&base).unwrap().lambda_c;
        let p = base.with_lambda(lc * (1.0 + 1e-9));
        let pts = mean_field_fixed_points(&p).unwrap();
        assert!((pts[1].sz - pts[0].sz).abs() < 1e-8);
    }
}
