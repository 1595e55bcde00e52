//! Sweep tables as CSV or JSON.

use std::fmt;

use rabi_thermo::model::Phase;
use rabi_thermo::thermometry::SweepRow;
use rabi_thermo::Quantity;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::{EstimatorName, RunConfig};

/// Fixed CSV columns; `error` is appended only when some row failed.
pub const COLUMNS: [&str; 9] = [
    "lambda",
    "lambda_over_lambda_c",
    "tau",
    "phase",
    "qfi",
    "var_qfi",
    "var_photon",
    "var_q2",
    "var_p2",
];

/// A table cell: a number, a divergence, or nothing (estimator not
/// requested or row not evaluated). Written as a number, `"inf"` and
/// `null` in JSON and as a number, `inf` and `nan` in CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Inf,
    Missing,
}

impl Cell {
    fn from_quantity(q: Option<Quantity>) -> Cell {
        match q {
            Some(Quantity::Finite(v)) => Cell::Value(v),
            Some(Quantity::Divergent) => Cell::Inf,
            None => Cell::Missing,
        }
    }

    fn csv(self) -> String {
        match self {
            Cell::Value(v) => number(v),
            Cell::Inf => "inf".into(),
            Cell::Missing => "nan".into(),
        }
    }
}

/// Shortest round-trip representation, identical to the JSON output.
fn number(v: f64) -> String {
    serde_json::to_string(&v).expect("finite float")
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Value(v) => s.serialize_f64(*v),
            Cell::Inf => s.serialize_str("inf"),
            Cell::Missing => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cell, D::Error> {
        struct CellVisitor;

        impl<'de> Visitor<'de> for CellVisitor {
            type Value = Cell;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number, \"inf\" or null")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Cell, E> {
                Ok(Cell::Value(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Cell, E> {
                Ok(Cell::Value(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Cell, E> {
                Ok(Cell::Value(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Cell, E> {
                match v {
                    "inf" => Ok(Cell::Inf),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }

            fn visit_unit<E: de::Error>(self) -> Result<Cell, E> {
                Ok(Cell::Missing)
            }

            fn visit_none<E: de::Error>(self) -> Result<Cell, E> {
                Ok(Cell::Missing)
            }
        }

        d.deserialize_any(CellVisitor)
    }
}

/// One output row, already filtered by the selected estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub lambda: f64,
    pub lambda_over_lambda_c: f64,
    pub tau: Cell,
    pub phase: String,
    pub qfi: Cell,
    pub var_qfi: Cell,
    pub var_photon: Cell,
    pub var_q2: Cell,
    pub var_p2: Cell,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Row {
    pub fn new(r: &SweepRow, estimators: &[EstimatorName]) -> Row {
        let pick = |e: EstimatorName, q: Option<Quantity>| {
            if estimators.contains(&e) {
                Cell::from_quantity(q)
            } else {
                Cell::Missing
            }
        };
        Row {
            lambda: r.lambda,
            lambda_over_lambda_c: r.lambda_over_lambda_c,
            tau: Cell::from_quantity(Some(r.tau)),
            phase: phase_name(r.phase).into(),
            qfi: pick(EstimatorName::Qfi, r.qfi.map(Quantity::from_f64)),
            var_qfi: pick(EstimatorName::Qfi, r.var_qfi),
            var_photon: pick(EstimatorName::Photon, r.var_photon),
            var_q2: pick(EstimatorName::Q2, r.var_q2),
            var_p2: pick(EstimatorName::P2, r.var_p2),
            error: r.error.clone(),
        }
    }

    fn cells(&self) -> [Cell; 6] {
        [
            self.tau,
            self.qfi,
            self.var_qfi,
            self.var_photon,
            self.var_q2,
            self.var_p2,
        ]
    }
}

pub fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Normal => "normal",
        Phase::Superradiant => "superradiant",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    /// Steady-state method actually used (never `auto`).
    pub regime: String,
    /// Critical coupling at the configured temperature.
    pub lambda_c: f64,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

impl SweepDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable document");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let with_error = self.rows.iter().any(|r| r.error.is_some());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = COLUMNS.to_vec();
        if with_error {
            header.push("error");
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let [tau, qfi, var_qfi, var_photon, var_q2, var_p2] = r.cells().map(Cell::csv);
            let mut rec = vec![
                number(r.lambda),
                number(r.lambda_over_lambda_c),
                tau,
                r.phase.clone(),
                qfi,
                var_qfi,
                var_photon,
                var_q2,
                var_p2,
            ];
            if with_error {
                rec.push(r.error.clone().unwrap_or_default());
            }
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("utf-8 records"))
    }
}
