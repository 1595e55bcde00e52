use std::fmt;

use serde::{Deserialize, Serialize};

/// A non-negative result that may diverge, e.g. a variance with zero
/// sensitivity or the relaxation time at the critical point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quantity {
    Finite(f64),
    Divergent,
}

impl Quantity {
    /// `Divergent` for infinite input, `Finite` otherwise.
    pub fn from_f64(v: f64) -> Self {
        if v.is_infinite() {
            Quantity::Divergent
        } else {
            Quantity::Finite(v)
        }
    }

    /// The value with `Divergent` mapped to `+inf`.
    pub fn value(self) -> f64 {
        match self {
            Quantity::Finite(v) => v,
            Quantity::Divergent => f64::INFINITY,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, Quantity::Divergent)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Quantity::Finite(v) => Some(v),
            Quantity::Divergent => None,
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Quantity::Finite(v) => Quantity::from_f64(f(v)),
            Quantity::Divergent => Quantity::Divergent,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Finite(v) => write!(f, "{v}"),
            Quantity::Divergent => f.write_str("inf"),
        }
    }
}
