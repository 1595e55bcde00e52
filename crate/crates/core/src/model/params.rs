use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bose-Einstein occupation `1/(exp(freq/T) − 1)`; zero at `T = 0`.
pub fn thermal_occupation(freq: f64, temperature: f64) -> Result<f64> {
    if !(freq > 0.0) || !freq.is_finite() {
        return Err(Error::Domain(format!("frequency must be positive, got {freq}")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    Ok(occupation(freq, temperature))
}

/// Temperature derivative of [`thermal_occupation`].
pub fn occupation_sensitivity(freq: f64, temperature: f64) -> Result<f64> {
    if !(freq > 0.0) || !freq.is_finite() {
        return Err(Error::Domain(format!("frequency must be positive, got {freq}")));
    }
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "occupation sensitivity needs a positive temperature, got {temperature}"
        )));
    }
    Ok(occupation_rate(freq, temperature))
}

pub(crate) fn occupation(freq: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / (freq / temperature).exp_m1()
}

pub(crate) fn occupation_rate(freq: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let x = freq / temperature;
    // e^x/(e^x − 1)² = 1/(4 sinh²(x/2)), which stays finite for large x
    let s = (0.5 * x).sinh();
    (x / temperature) / (4.0 * s * s)
}

/// Which bath the cavity sees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BathScenario {
    /// The cavity bath has its own fixed temperature `T_c`.
    IndependentBaths { cavity_temperature: f64 },
    /// Cavity and spin share the bath, so `T_c ≡ T`.
    CommonBath,
}

/// All model constants (`ħ = k_B = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Cavity frequency ω0.
    pub omega0: f64,
    /// Spin frequency Ω.
    pub omega: f64,
    /// Spin-cavity coupling λ.
    pub lambda: f64,
    /// Cavity decay rate κ.
    pub kappa: f64,
    /// Spin decay rate Γ.
    pub gamma: f64,
    /// Temperature of the spin bath, the estimated parameter.
    pub temperature: f64,
    pub scenario: BathScenario,
}

impl SystemParams {
    pub fn new(
        omega0: f64,
        omega: f64,
        lambda: f64,
        kappa: f64,
        gamma: f64,
        temperature: f64,
        scenario: BathScenario,
    ) -> Result<Self> {
        let p = SystemParams {
            omega0,
            omega,
            lambda,
            kappa,
            gamma,
            temperature,
            scenario,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                })
            }
        }
        positive("omega0", self.omega0)?;
        positive("Omega", self.omega)?;
        positive("kappa", self.kappa)?;
        positive("Gamma", self.gamma)?;
        positive("T", self.temperature)?;
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParams {
                name: "lambda",
                reason: format!("must be non-negative and finite, got {}", self.lambda),
            });
        }
        if let BathScenario::IndependentBaths { cavity_temperature } = self.scenario {
            if !(cavity_temperature >= 0.0) || !cavity_temperature.is_finite() {
                return Err(Error::InvalidParams {
                    name: "Tc",
                    reason: format!("must be non-negative and finite, got {cavity_temperature}"),
                });
            }
        }
        Ok(())
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    /// Cavity bath temperature; equals `T` under [`BathScenario::CommonBath`].
    pub fn cavity_temperature(&self) -> f64 {
        match self.scenario {
            BathScenario::IndependentBaths { cavity_temperature } => cavity_temperature,
            BathScenario::CommonBath => self.temperature,
        }
    }

    /// Spin-bath occupation `n` at frequency Ω.
    pub fn spin_occupation(&self) -> f64 {
        occupation(self.omega, self.temperature)
    }

    /// Cavity-bath occupation `n_c` at frequency ω0.
    pub fn cavity_occupation(&self) -> f64 {
        occupation(self.omega0, self.cavity_temperature())
    }

    /// `dn/dT`.
    pub fn spin_occupation_rate(&self) -> f64 {
        occupation_rate(self.omega, self.temperature)
    }

    /// `dn_c/dT`; zero unless the cavity shares the probed bath.
    pub fn cavity_occupation_rate(&self) -> f64 {
        match self.scenario {
            BathScenario::IndependentBaths { .. } => 0.0,
            BathScenario::CommonBath => occupation_rate(self.omega0, self.temperature),
        }
    }
}
