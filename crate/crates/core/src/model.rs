//! Empirical models: one distribution per context of a cover.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{Distribution, Semiring, Weights};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scenario::{Scenario, Section};

/// Two contexts whose tables disagree on their overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignallingViolation {
    pub contexts: (usize, usize),
    pub overlap: Vec<usize>,
    pub section: Section,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub violations: Vec<SignallingViolation>,
}

impl CompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, scenario: &Scenario) -> String {
        if self.is_compatible() {
            return "compatible".into();
        }
        let lines: Vec<String> = self
            .violations
            .iter()
            .map(|v| {
                format!(
                    "contexts {:?} / {:?} disagree on {}: {} vs {}",
                    scenario.context_labels(v.contexts.0),
                    scenario.context_labels(v.contexts.1),
                    scenario.format_section(&v.section),
                    v.left,
                    v.right
                )
            })
            .collect();
        lines.join("\n")
    }
}

/// A family `{e_C}` over the cover of a scenario.
///
/// Models built with [`EmpiricalModel::new`] are normalized and compatible.
/// [`EmpiricalModel::raw`] skips both checks, so that signalling families can
/// still be fed to the solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalModel {
    scenario: Scenario,
    tables: Vec<Distribution>,
    raw: bool,
}

impl EmpiricalModel {
    pub fn new(scenario: Scenario, tables: Vec<Distribution>) -> Result<Self> {
        let model = EmpiricalModel::raw(scenario, tables)?;
        if let Some(t) = model.tables.iter().find(|t| !t.is_normalized()) {
            return Err(Error::InvalidDistribution(format!(
                "table over {:?} sums to {}",
                model.scenario.context_labels(model.context_of(t)),
                t.total()
            )));
        }
        let report = model.check_no_signalling();
        if !report.is_compatible() {
            return Err(Error::Incompatible(report.describe(&model.scenario)));
        }
        Ok(EmpiricalModel { raw: false, ..model })
    }

    /// Checks shapes and semiring agreement only.
    pub fn raw(scenario: Scenario, tables: Vec<Distribution>) -> Result<Self> {
        if tables.len() != scenario.cover().len() {
            return Err(Error::ScenarioMismatch(format!(
                "{} tables for {} contexts",
                tables.len(),
                scenario.cover().len()
            )));
        }
        for (c, t) in tables.iter().enumerate() {
            if t.context() != scenario.context(c) || t.outcome_count() != scenario.outcome_count() {
                return Err(Error::ScenarioMismatch(format!("table {c} is not over context {c}")));
            }
            if t.semiring() != tables[0].semiring() {
                return Err(Error::SemiringMismatch {
                    expected: tables[0].semiring().to_string(),
                    found: t.semiring().to_string(),
                });
            }
        }
        Ok(EmpiricalModel { scenario, tables, raw: true })
    }

    /// Tables given as rows of weights in canonical section order.
    pub fn from_rows(scenario: Scenario, semiring: Semiring, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let tables = EmpiricalModel::tables_from_rows(&scenario, semiring, rows)?;
        EmpiricalModel::new(scenario, tables)
    }

    pub fn raw_from_rows(scenario: Scenario, semiring: Semiring, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let tables = EmpiricalModel::tables_from_rows(&scenario, semiring, rows)?;
        EmpiricalModel::raw(scenario, tables)
    }

    fn tables_from_rows(scenario: &Scenario, semiring: Semiring, rows: Vec<Vec<Rational>>) -> Result<Vec<Distribution>> {
        if rows.len() != scenario.cover().len() {
            return Err(Error::ScenarioMismatch(format!("{} rows for {} contexts", rows.len(), scenario.cover().len())));
        }
        let l = scenario.outcome_count();
        rows.into_iter()
            .enumerate()
            .map(|(c, row)| {
                let context = scenario.context(c).to_vec();
                let weights = match semiring {
                    Semiring::Boolean => Weights::Boolean(row.iter().map(|v| !v.is_zero()).collect()),
                    Semiring::NonNegative => Weights::NonNegative(row),
                    Semiring::Signed => Weights::Signed(row),
                };
                Distribution::unnormalized(context, l, weights)
            })
            .collect()
    }

    /// Boolean model from 0/1 rows.
    pub fn from_support(scenario: Scenario, rows: &[&[u8]]) -> Result<Self> {
        let l = scenario.outcome_count();
        let tables = rows
            .iter()
            .enumerate()
            .map(|(c, row)| Distribution::from_bits(scenario.context(c).to_vec(), l, row.iter().map(|&b| b != 0)))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(scenario, tables)
    }

    /// The marginal family `{d|C}` of a distribution over all measurements.
    pub fn from_global(scenario: Scenario, global: &Distribution) -> Result<Self> {
        let all: Vec<usize> = (0..scenario.measurement_count()).collect();
        if global.context() != all.as_slice() {
            return Err(Error::ScenarioMismatch("global distribution must cover every measurement".into()));
        }
        let tables = scenario
            .cover()
            .iter()
            .map(|c| global.marginalize(c))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(scenario, tables)
    }

    /// The deterministic model `{δ_{t|C}}`.
    pub fn deterministic(scenario: Scenario, t: &Section, semiring: Semiring) -> Result<Self> {
        let d = Distribution::delta(t, scenario.outcome_count(), semiring);
        EmpiricalModel::from_global(scenario, &d)
    }

    /// Product model from one single-measurement distribution per measurement.
    pub fn product(scenario: Scenario, factors: &[Distribution]) -> Result<Self> {
        let tables = scenario
            .cover()
            .iter()
            .map(|c| Distribution::product_over_singletons(factors, c))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(scenario, tables)
    }

    /// Convex (or affine, for signed models) combination of models on one scenario.
    pub fn mixture(parts: &[(Rational, &EmpiricalModel)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let semiring = first.semiring();
        let mut tables = Vec::with_capacity(first.tables.len());
        for c in 0..first.tables.len() {
            let len = first.tables[c].len();
            let mut values = vec![Rational::zero(); len];
            for (w, m) in parts {
                if m.scenario != first.scenario {
                    return Err(Error::ScenarioMismatch("mixture over different scenarios".into()));
                }
                for (i, v) in values.iter_mut().enumerate() {
                    *v += w * m.tables[c].weight(i);
                }
            }
            tables.push(Distribution::from_rationals(semiring, first.scenario.context(c).to_vec(), first.scenario.outcome_count(), values)?);
        }
        EmpiricalModel::new(first.scenario.clone(), tables)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[Distribution] {
        &self.tables
    }

    pub fn table(&self, c: usize) -> &Distribution {
        &self.tables[c]
    }

    pub fn semiring(&self) -> Semiring {
        self.tables.first().map(|t| t.semiring()).unwrap_or(Semiring::NonNegative)
    }

    /// True when the family was built without the normalization and compatibility checks.
    pub fn is_raw(&self) -> bool {
        self.raw
    }

    fn context_of(&self, t: &Distribution) -> usize {
        self.scenario.find_context(t.context()).unwrap_or(0)
    }

    /// Compares marginals on every pairwise overlap, exactly.
    pub fn check_no_signalling(&self) -> CompatibilityReport {
        let mut violations = Vec::new();
        let cover = self.scenario.cover();
        for i in 0..cover.len() {
            for j in i + 1..cover.len() {
                let overlap: Vec<usize> = cover[i].iter().copied().filter(|m| cover[j].binary_search(m).is_ok()).collect();
                let left = self.tables[i].marginalize(&overlap).expect("overlap inside context");
                let right = self.tables[j].marginalize(&overlap).expect("overlap inside context");
                for k in 0..left.len() {
                    let (a, b) = (left.weight(k), right.weight(k));
                    if a != b {
                        violations.push(SignallingViolation {
                            contexts: (i, j),
                            overlap: overlap.clone(),
                            section: Section::from_index(&overlap, k, self.scenario.outcome_count()),
                            left: a,
                            right: b,
                        });
                    }
                }
            }
        }
        CompatibilityReport { violations }
    }

    /// The possibilistic collapse `{supp e_C}`.
    pub fn support_model(&self) -> Result<EmpiricalModel> {
        let tables = self.tables.iter().map(|t| t.to_boolean()).collect::<Result<Vec<_>>>()?;
        Ok(EmpiricalModel { scenario: self.scenario.clone(), tables, raw: self.raw })
    }

    /// Same weights read in the signed semiring.
    pub fn to_signed(&self) -> EmpiricalModel {
        EmpiricalModel {
            scenario: self.scenario.clone(),
            tables: self.tables.iter().map(|t| t.to_signed()).collect(),
            raw: self.raw,
        }
    }

    /// Marginal on a partial context, taken through the first context containing it.
    pub fn marginal(&self, u: &[usize]) -> Result<Distribution> {
        let c = self
            .scenario
            .cover()
            .iter()
            .position(|c| u.iter().all(|m| c.binary_search(m).is_ok()))
            .ok_or_else(|| Error::InvalidArgument(format!("{u:?} is not a partial context")))?;
        self.tables[c].marginalize(u)
    }

    /// Weights of all tables concatenated in cover order.
    pub fn flat_weights(&self) -> Vec<Rational> {
        self.tables.iter().flat_map(|t| t.rationals()).collect()
    }

    pub fn is_all_ones(&self) -> bool {
        self.tables.iter().all(|t| (0..t.len()).all(|i| t.is_supported(i)))
    }
}

impl fmt::Display for EmpiricalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, t) in self.tables.iter().enumerate() {
            let weights: Vec<String> = t.rationals().iter().map(|w| w.to_string()).collect();
            writeln!(f, "({})  {}", self.scenario.context_labels(c).join(", "), weights.join("  "))?;
        }
        Ok(())
    }
}
