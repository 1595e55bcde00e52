//! Single-point report: critical and exceptional couplings, phase, `τ`,
//! and every mean-field fixed point with its linear stability.

use std::fmt::Write;

use rabi_thermo::model::{
    classify_regime, linearized_system, mean_field_fixed_points, mean_field_flow, stability_spectrum, AntiPtPhase,
    FixedPointPhase,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{phase_name, Cell};
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub branch: &'static str,
    pub q_mean: f64,
    pub p_mean: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub flow_residual: f64,
    /// Real parts of the linearised spectrum, ascending.
    pub eigen_real_parts: Vec<f64>,
    pub stable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub lambda: f64,
    pub lambda_c: f64,
    pub lambda_ep: f64,
    pub phase: &'static str,
    pub anti_pt: &'static str,
    pub tau: Cell,
    pub regime: String,
    pub fixed_points: Vec<FixedPointReport>,
}

pub fn diagnose(cfg: &RunConfig) -> Result<Report, CliError> {
    if cfg.lambda.is_none() {
        return Err(CliError::Invalid("diagnose needs lambda".into()));
    }
    let p = cfg.params()?;
    let d = classify_regime(&p)?;
    let mut fixed_points = Vec::new();
    for fp in mean_field_fixed_points(&p)? {
        let spec = stability_spectrum(&linearized_system(&p, &fp)?)?;
        fixed_points.push(FixedPointReport {
            branch: match fp.phase {
                FixedPointPhase::Normal => "normal",
                FixedPointPhase::SuperradiantPlus => "superradiant+",
                FixedPointPhase::SuperradiantMinus => "superradiant-",
            },
            q_mean: fp.q_mean,
            p_mean: fp.p_mean,
            sx: fp.sx,
            sy: fp.sy,
            sz: fp.sz,
            flow_residual: mean_field_flow(&fp.state(), &p).amax(),
            eigen_real_parts: spec.eigen_real_parts,
            stable: spec.stable,
        });
    }
    Ok(Report {
        lambda: p.lambda,
        lambda_c: d.lambda_c,
        lambda_ep: d.lambda_ep,
        phase: phase_name(d.phase),
        anti_pt: match d.anti_pt {
            AntiPtPhase::SymmetryUnbroken => "unbroken",
            AntiPtPhase::Broken => "broken",
            AntiPtPhase::AtExceptionalPoint => "exceptional-point",
        },
        tau: d.tau.finite().map_or(Cell::Inf, Cell::Value),
        regime: cfg.regime.resolve(&p).to_string(),
        fixed_points,
    })
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let tau = match self.tau {
            Cell::Value(v) => format!("{v}"),
            _ => "inf".into(),
        };
        let _ = writeln!(s, "lambda      {}", self.lambda);
        let _ = writeln!(s, "lambda_c    {}", self.lambda_c);
        let _ = writeln!(s, "lambda_ep   {}", self.lambda_ep);
        let _ = writeln!(s, "phase       {}", self.phase);
        let _ = writeln!(s, "anti-PT     {}", self.anti_pt);
        let _ = writeln!(s, "tau         {tau}");
        let _ = writeln!(s, "regime      {}", self.regime);
        let _ = writeln!(s, "fixed points");
        for fp in &self.fixed_points {
            let _ = writeln!(
                s,
                "  {:<14} Q={:.6e} P={:.6e} sx={:.6e} sy={:.6e} sz={:.6e} residual={:.1e} {}",
                fp.branch,
                fp.q_mean,
                fp.p_mean,
                fp.sx,
                fp.sy,
                fp.sz,
                fp.flow_residual,
                if fp.stable { "stable" } else { "unstable" },
            );
            let re: Vec<String> = fp.eigen_real_parts.iter().map(|v| format!("{v:.6e}")).collect();
            let _ = writeln!(s, "  {:<14} Re(eig) = [{}]", "", re.join(", "));
        }
        s
    }
}
