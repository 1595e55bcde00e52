//! Run configuration: command-line flags layered over an optional config
//! file, resolved into a [`RunConfig`].
//!
//! Config files hold one `key = value` pair per line. Keys are the flag
//! names without the leading dashes (`lambda-min`, `common-bath`, ...);
//! underscores are accepted in place of hyphens. `#` starts a comment.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use rabi_thermo::model::{BathScenario, SystemParams};
use rabi_thermo::steadystate::Regime;
use rabi_thermo::thermometry::{Measurement, DEFAULT_GRID};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeChoice {
    Auto,
    Spin,
    Cavity,
    Lyapunov,
}

impl RegimeChoice {
    pub fn resolve(self, p: &SystemParams) -> Regime {
        match self {
            RegimeChoice::Auto => Regime::auto(p),
            RegimeChoice::Spin => Regime::SpinEliminated,
            RegimeChoice::Cavity => Regime::CavityEliminated,
            RegimeChoice::Lyapunov => Regime::Lyapunov,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorName {
    Qfi,
    Photon,
    Q2,
    P2,
}

impl EstimatorName {
    pub const ALL: [EstimatorName; 4] = [
        EstimatorName::Qfi,
        EstimatorName::Photon,
        EstimatorName::Q2,
        EstimatorName::P2,
    ];

    pub fn measurement(self) -> Measurement {
        match self {
            EstimatorName::Qfi => Measurement::Qfi,
            EstimatorName::Photon => Measurement::PhotonNumber,
            EstimatorName::Q2 => Measurement::Q2,
            EstimatorName::P2 => Measurement::P2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every setting as an optional value; one layer of configuration.
#[derive(Debug, Clone, Default, PartialEq, clap::Args)]
pub struct ConfigArgs {
    /// Cavity frequency ω0.
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Spin frequency Ω.
    #[arg(long = "Omega", allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Cavity decay rate κ.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Spin decay rate Γ.
    #[arg(long = "Gamma", allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Spin-bath temperature, the estimated parameter.
    #[arg(long = "T", allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Cavity-bath temperature (ignored with --common-bath).
    #[arg(long = "Tc", allow_negative_numbers = true)]
    pub cavity_temperature: Option<f64>,
    /// Cavity and spin share one bath at temperature T.
    #[arg(long = "common-bath", num_args = 0..=1, default_missing_value = "true")]
    pub common_bath: Option<bool>,
    /// Coupling for `diagnose`.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Lower end of the sweep grid.
    #[arg(long = "lambda-min", allow_negative_numbers = true)]
    pub lambda_min: Option<f64>,
    /// Upper end of the sweep grid.
    #[arg(long = "lambda-max", allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Read lambda-min/lambda-max as fractions of λ_c (default true).
    #[arg(long = "relative-grid", num_args = 0..=1, default_missing_value = "true")]
    pub relative_grid: Option<bool>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeChoice>,
    /// Comma-separated subset of qfi,photon,q2,p2.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub estimators: Option<Vec<EstimatorName>>,
    /// Number of repeated measurements.
    #[arg(long = "N")]
    pub repetitions: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Config file read before the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ConfigArgs {
    /// Values from `top` where set, `self` otherwise.
    pub fn overlay(self, top: ConfigArgs) -> ConfigArgs {
        ConfigArgs {
            omega0: top.omega0.or(self.omega0),
            omega: top.omega.or(self.omega),
            kappa: top.kappa.or(self.kappa),
            gamma: top.gamma.or(self.gamma),
            temperature: top.temperature.or(self.temperature),
            cavity_temperature: top.cavity_temperature.or(self.cavity_temperature),
            common_bath: top.common_bath.or(self.common_bath),
            lambda: top.lambda.or(self.lambda),
            lambda_min: top.lambda_min.or(self.lambda_min),
            lambda_max: top.lambda_max.or(self.lambda_max),
            steps: top.steps.or(self.steps),
            relative_grid: top.relative_grid.or(self.relative_grid),
            regime: top.regime.or(self.regime),
            estimators: top.estimators.or(self.estimators),
            repetitions: top.repetitions.or(self.repetitions),
            output: top.output.or(self.output),
            format: top.format.or(self.format),
            config: top.config.or(self.config),
        }
    }

    /// Parse config-file text.
    pub fn parse_file(text: &str) -> Result<ConfigArgs, CliError> {
        let mut c = ConfigArgs::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("config line {}: expected `key = value`", i + 1)))?;
            let key = key.trim().replace('_', "-");
            let v = value.trim();
            let at = |e: String| CliError::Invalid(format!("config line {}: `{key}`: {e}", i + 1));
            match key.as_str() {
                "omega0" => c.omega0 = Some(parsed(v).map_err(at)?),
                "Omega" => c.omega = Some(parsed(v).map_err(at)?),
                "kappa" => c.kappa = Some(parsed(v).map_err(at)?),
                "Gamma" => c.gamma = Some(parsed(v).map_err(at)?),
                "T" => c.temperature = Some(parsed(v).map_err(at)?),
                "Tc" => c.cavity_temperature = Some(parsed(v).map_err(at)?),
                "common-bath" => c.common_bath = Some(parsed(v).map_err(at)?),
                "lambda" => c.lambda = Some(parsed(v).map_err(at)?),
                "lambda-min" => c.lambda_min = Some(parsed(v).map_err(at)?),
                "lambda-max" => c.lambda_max = Some(parsed(v).map_err(at)?),
                "steps" => c.steps = Some(parsed(v).map_err(at)?),
                "relative-grid" => c.relative_grid = Some(parsed(v).map_err(at)?),
                "regime" => c.regime = Some(choice(v).map_err(at)?),
                "estimators" => {
                    c.estimators = Some(
                        v.split(',')
                            .map(|s| choice(s.trim()))
                            .collect::<Result<_, _>>()
                            .map_err(at)?,
                    )
                }
                "N" => c.repetitions = Some(parsed(v).map_err(at)?),
                "output" => c.output = Some(PathBuf::from(v)),
                "format" => c.format = Some(choice(v).map_err(at)?),
                _ => return Err(CliError::Invalid(format!("config line {}: unknown key `{key}`", i + 1))),
            }
        }
        Ok(c)
    }

    /// Read `--config` if given and apply `self` on top of it.
    pub fn load(self) -> Result<ConfigArgs, CliError> {
        match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Ok(ConfigArgs::parse_file(&text)?.overlay(self))
            }
            None => Ok(self),
        }
    }
}

fn parsed<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e: T::Err| format!("cannot parse `{v}`: {e}"))
}

fn choice<T: ValueEnum>(v: &str) -> Result<T, String> {
    T::from_str(v, false)
}

/// Fully resolved settings, echoed into sweep metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub omega0: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub kappa: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    #[serde(rename = "Tc")]
    pub cavity_temperature: f64,
    pub common_bath: bool,
    pub lambda: Option<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub steps: usize,
    pub relative_grid: bool,
    pub regime: RegimeChoice,
    pub estimators: Vec<EstimatorName>,
    #[serde(rename = "N")]
    pub repetitions: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Fill unset values with defaults (the first figure's parameters, a
    /// 200-point grid crowding toward `λ_c`).
    pub fn resolve(a: ConfigArgs) -> Result<RunConfig, CliError> {
        let relative_grid = a.relative_grid.unwrap_or(true);
        let (lambda_min, lambda_max) = if relative_grid {
            (
                a.lambda_min.unwrap_or(DEFAULT_GRID.0),
                a.lambda_max.unwrap_or(DEFAULT_GRID.1),
            )
        } else {
            let max = a
                .lambda_max
                .ok_or_else(|| CliError::Invalid("an absolute grid needs lambda-max".into()))?;
            (a.lambda_min.unwrap_or(0.0), max)
        };
        let mut estimators = a.estimators.unwrap_or_else(|| EstimatorName::ALL.to_vec());
        estimators.sort_by_key(|e| EstimatorName::ALL.iter().position(|x| x == e));
        estimators.dedup();
        let cfg = RunConfig {
            omega0: a.omega0.unwrap_or(1.0),
            omega: a.omega.unwrap_or(10.0),
            kappa: a.kappa.unwrap_or(1.0),
            gamma: a.gamma.unwrap_or(10.0),
            temperature: a.temperature.unwrap_or(10.0),
            cavity_temperature: a.cavity_temperature.unwrap_or(0.0),
            common_bath: a.common_bath.unwrap_or(false),
            lambda: a.lambda,
            lambda_min,
            lambda_max,
            steps: a.steps.unwrap_or(DEFAULT_GRID.2),
            relative_grid,
            regime: a.regime.unwrap_or(RegimeChoice::Auto),
            estimators,
            repetitions: a.repetitions.unwrap_or(1),
            output: a.output,
            format: a.format.unwrap_or(Format::Csv),
        };
        cfg.params()?;
        if cfg.steps == 0 {
            return Err(CliError::Invalid("steps must be at least 1".into()));
        }
        if cfg.repetitions == 0 {
            return Err(CliError::Invalid("N must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn scenario(&self) -> BathScenario {
        if self.common_bath {
            BathScenario::CommonBath
        } else {
            BathScenario::IndependentBaths {
                cavity_temperature: self.cavity_temperature,
            }
        }
    }

    /// Parameters at `lambda` (zero when unset).
    pub fn params(&self) -> Result<SystemParams, CliError> {
        Ok(SystemParams::new(
            self.omega0,
            self.omega,
            self.lambda.unwrap_or(0.0),
            self.kappa,
            self.gamma,
            self.temperature,
            self.scenario(),
        )?)
    }

    pub fn output_path(&self) -> Option<&Path> {
        self.output.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_mirror_flags() {
        let c = ConfigArgs::parse_file(
            "# comment\nomega0 = 2\nOmega=3\nlambda-min = 0.1 # trailing\nlambda_max = 0.5\ncommon-bath = true\n\
             estimators = qfi, q2\nregime = lyapunov\nN = 4\nformat = json\n",
        )
        .unwrap();
        assert_eq!(c.omega0, Some(2.0));
        assert_eq!(c.omega, Some(3.0));
        assert_eq!(c.lambda_min, Some(0.1));
        assert_eq!(c.lambda_max, Some(0.5));
        assert_eq!(c.common_bath, Some(true));
        assert_eq!(c.estimators, Some(vec![EstimatorName::Qfi, EstimatorName::Q2]));
        assert_eq!(c.regime, Some(RegimeChoice::Lyapunov));
        assert_eq!(c.repetitions, Some(4));
        assert_eq!(c.format, Some(Format::Json));
    }

    #[test]
    fn file_errors() {
        assert!(ConfigArgs::parse_file("kappa 1").is_err());
        assert!(ConfigArgs::parse_file("kappa = one").is_err());
        assert!(ConfigArgs::parse_file("colour = red").is_err());
        assert!(ConfigArgs::parse_file("regime = slow").is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let file = ConfigArgs {
            kappa: Some(2.0),
            steps: Some(9),
            ..Default::default()
        };
        let flags = ConfigArgs {
            kappa: Some(3.0),
            ..Default::default()
        };
        let c = file.overlay(flags);
        assert_eq!((c.kappa, c.steps), (Some(3.0), Some(9)));
    }

    #[test]
    fn defaults_and_validation() {
        let c = RunConfig::resolve(ConfigArgs::default()).unwrap();
        assert_eq!(
            (c.omega0, c.omega, c.kappa, c.gamma, c.temperature),
            (1.0, 10.0, 1.0, 10.0, 10.0)
        );
        assert!(c.relative_grid);
        assert_eq!((c.lambda_min, c.lambda_max, c.steps), (0.05, 0.9999, 200));
        assert_eq!(c.estimators, EstimatorName::ALL.to_vec());
        let absolute = ConfigArgs {
            relative_grid: Some(false),
            ..Default::default()
        };
        assert!(RunConfig::resolve(absolute).is_err());
        let bad = ConfigArgs {
            gamma: Some(0.0),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(bad).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn estimators_are_canonically_ordered() {
        let a = ConfigArgs {
            estimators: Some(vec![EstimatorName::P2, EstimatorName::Qfi, EstimatorName::P2]),
            ..Default::default()
        };
        assert_eq!(
            RunConfig::resolve(a).unwrap().estimators,
            vec![EstimatorName::Qfi, EstimatorName::P2]
        );
    }
}
