//! JSON interchange format for scenarios and models.
//!
//! ```json
//! {
//!   "version": 1,
//!   "measurements": ["a", "b"],
//!   "outcomes": ["0", "1"],
//!   "contexts": [["a", "b"]],
//!   "semiring": "nonneg",
//!   "tables": [
//!     { "context": ["a", "b"],
//!       "entries": [ { "outcomes": ["0", "0"], "weight": "1/2" },
//!                    { "outcomes": ["1", "1"], "weight": "1/2" } ] }
//!   ]
//! }
//! ```
//!
//! Weights are `p/q` strings. Entries left out of a table weigh zero. A
//! document without `tables` describes a scenario only.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Distribution, Semiring, Weights};
use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::rational::{self, Rational};
use crate::scenario::Scenario;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    /// Unknown fields are errors.
    Strict,
    /// Unknown fields are ignored.
    Lenient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryDocument {
    pub outcomes: Vec<String>,
    pub weight: String,
    #[serde(flatten, skip_serializing)]
    unknown: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub context: Vec<String>,
    pub entries: Vec<EntryDocument>,
    #[serde(flatten, skip_serializing)]
    unknown: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub version: u32,
    pub measurements: Vec<String>,
    pub outcomes: Vec<String>,
    pub contexts: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiring: Option<Semiring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tables: Option<Vec<TableDocument>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, Value>,
    #[serde(flatten, skip_serializing)]
    unknown: BTreeMap<String, Value>,
}

impl ModelDocument {
    pub fn parse(text: &str, strictness: Strictness) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        if strictness == Strictness::Strict {
            doc.reject_unknown()?;
        }
        if doc.version != FORMAT_VERSION {
            return Err(Error::parse("version", format!("unsupported format version {}", doc.version)));
        }
        Ok(doc)
    }

    fn reject_unknown(&self) -> Result<()> {
        let unknown = |path: String, fields: &BTreeMap<String, Value>| match fields.keys().next() {
            Some(k) => Err(Error::parse(path, format!("unknown field `{k}`"))),
            None => Ok(()),
        };
        unknown("document".into(), &self.unknown)?;
        for (t, table) in self.tables.iter().flatten().enumerate() {
            unknown(format!("tables[{t}]"), &table.unknown)?;
            for (e, entry) in table.entries.iter().enumerate() {
                unknown(format!("tables[{t}].entries[{e}]"), &entry.unknown)?;
            }
        }
        Ok(())
    }

    pub fn from_scenario(scenario: &Scenario) -> Self {
        ModelDocument {
            version: FORMAT_VERSION,
            measurements: scenario.measurements().to_vec(),
            outcomes: scenario.outcomes().to_vec(),
            contexts: (0..scenario.cover().len())
                .map(|c| scenario.context_labels(c).into_iter().map(String::from).collect())
                .collect(),
            semiring: None,
            tables: None,
            metadata: BTreeMap::new(),
            unknown: BTreeMap::new(),
        }
    }

    /// Every section is written out, zero weights included.
    pub fn from_model(model: &EmpiricalModel) -> Self {
        let scenario = model.scenario();
        let mut doc = ModelDocument::from_scenario(scenario);
        doc.semiring = Some(model.semiring());
        doc.tables = Some(
            model
                .tables()
                .iter()
                .enumerate()
                .map(|(c, table)| TableDocument {
                    context: scenario.context_labels(c).into_iter().map(String::from).collect(),
                    entries: scenario
                        .sections(scenario.context(c))
                        .iter()
                        .enumerate()
                        .map(|(i, s)| EntryDocument {
                            outcomes: s.values().iter().map(|&o| scenario.outcomes()[o].clone()).collect(),
                            weight: rational::format(&table.weight(i)),
                            unknown: BTreeMap::new(),
                        })
                        .collect(),
                    unknown: BTreeMap::new(),
                })
                .collect(),
        );
        doc
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::new(&self.measurements, &self.outcomes, &self.contexts)
    }

    /// A normalized, compatible model.
    pub fn model(&self) -> Result<EmpiricalModel> {
        let (scenario, tables) = self.tables()?;
        EmpiricalModel::new(scenario, tables)
    }

    /// The tables as given; normalization and compatibility are not checked.
    pub fn raw_model(&self) -> Result<EmpiricalModel> {
        let (scenario, tables) = self.tables()?;
        EmpiricalModel::raw(scenario, tables)
    }

    fn tables(&self) -> Result<(Scenario, Vec<Distribution>)> {
        let scenario = self.scenario()?;
        let semiring = self.semiring.ok_or_else(|| Error::parse("semiring", "a model document needs a semiring"))?;
        let docs = self.tables.as_ref().ok_or_else(|| Error::parse("tables", "a model document needs tables"))?;
        let l = scenario.outcome_count();
        let mut slots: Vec<Option<Vec<Rational>>> = vec![None; scenario.cover().len()];
        for (t, table) in docs.iter().enumerate() {
            let at = |suffix: &str| format!("tables[{t}]{suffix}");
            let ids = scenario.indices(&table.context).map_err(|e| Error::parse(at(".context"), e.to_string()))?;
            let mut sorted = ids.clone();
            sorted.sort_unstable();
            let c = scenario
                .find_context(&sorted)
                .filter(|&c| scenario.context(c) == sorted.as_slice())
                .ok_or_else(|| Error::parse(at(".context"), format!("{:?} is not a context of the cover", table.context)))?;
            if slots[c].is_some() {
                return Err(Error::parse(at(".context"), format!("second table for context {:?}", table.context)));
            }
            let mut values = vec![Rational::zero(); l.pow(sorted.len() as u32)];
            let mut seen = vec![false; values.len()];
            for (e, entry) in table.entries.iter().enumerate() {
                let at = |suffix: &str| format!("tables[{t}].entries[{e}]{suffix}");
                if entry.outcomes.len() != ids.len() {
                    return Err(Error::parse(at(".outcomes"), format!("expected {} outcomes", ids.len())));
                }
                let mut by_measurement = BTreeMap::new();
                for (&m, o) in ids.iter().zip(&entry.outcomes) {
                    let o = scenario.outcome_index(o).ok_or_else(|| Error::parse(at(".outcomes"), format!("unknown outcome `{o}`")))?;
                    by_measurement.insert(m, o);
                }
                let index = sorted.iter().rev().fold(0, |acc, m| acc * l + by_measurement[m]);
                if std::mem::replace(&mut seen[index], true) {
                    return Err(Error::parse(at(".outcomes"), "duplicate entry"));
                }
                values[index] = rational::parse(&entry.weight).map_err(|e| Error::parse(at(".weight"), e.to_string()))?;
            }
            slots[c] = Some(values);
        }
        let mut tables = Vec::with_capacity(slots.len());
        for (c, slot) in slots.into_iter().enumerate() {
            let values = slot.ok_or_else(|| Error::parse("tables", format!("no table for context {:?}", scenario.context_labels(c))))?;
            let d = weights(semiring, values)
                .and_then(|w| Distribution::unnormalized(scenario.context(c).to_vec(), l, w))
                .map_err(|e| Error::parse(format!("tables for context {:?}", scenario.context_labels(c)), e.to_string()))?;
            tables.push(d);
        }
        Ok((scenario, tables))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn weights(semiring: Semiring, values: Vec<Rational>) -> Result<Weights> {
    Ok(match semiring {
        Semiring::Boolean => {
            if let Some(bad) = values.iter().find(|v| !v.is_zero() && !v.is_one()) {
                return Err(Error::InvalidDistribution(format!("boolean weight {bad}")));
            }
            Weights::Boolean(values.iter().map(|v| v.is_one()).collect())
        }
        Semiring::NonNegative => Weights::NonNegative(values),
        Semiring::Signed => Weights::Signed(values),
    })
}

/// Strict parse straight to a compatible model.
pub fn read_model(text: &str) -> Result<EmpiricalModel> {
    ModelDocument::parse(text, Strictness::Strict)?.model()
}

pub fn write_model(model: &EmpiricalModel) -> String {
    ModelDocument::from_model(model).to_json()
}
