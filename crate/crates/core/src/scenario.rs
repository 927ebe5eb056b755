//! Measurement scenarios: measurements, outcomes, covers and sections.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A violated scenario invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoOutcomes,
    DuplicateMeasurement(String),
    DuplicateOutcome(String),
    UnknownMeasurement { context: usize, label: String },
    RepeatedInContext { context: usize, label: String },
    Uncovered(String),
    /// Context `smaller` is contained in context `larger`.
    NotAntiChain { smaller: usize, larger: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoOutcomes => write!(f, "outcome set is empty"),
            Violation::DuplicateMeasurement(m) => write!(f, "duplicate measurement `{m}`"),
            Violation::DuplicateOutcome(o) => write!(f, "duplicate outcome `{o}`"),
            Violation::UnknownMeasurement { context, label } => {
                write!(f, "context {context} mentions unknown measurement `{label}`")
            }
            Violation::RepeatedInContext { context, label } => {
                write!(f, "context {context} repeats measurement `{label}`")
            }
            Violation::Uncovered(m) => write!(f, "measurement `{m}` is in no context (cover gap)"),
            Violation::NotAntiChain { smaller, larger } => {
                write!(f, "context {smaller} is contained in context {larger} (not an anti-chain)")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks raw labels against every scenario invariant.
pub fn validate<S: AsRef<str>>(
    measurements: &[S],
    outcomes: &[S],
    cover: &[Vec<S>],
) -> ValidationReport {
    let mut violations = Vec::new();
    if outcomes.is_empty() {
        violations.push(Violation::NoOutcomes);
    }
    let mut index = BTreeMap::new();
    for (i, m) in measurements.iter().enumerate() {
        if index.insert(m.as_ref(), i).is_some() {
            violations.push(Violation::DuplicateMeasurement(m.as_ref().to_string()));
        }
    }
    let mut seen = HashSet::new();
    for o in outcomes {
        if !seen.insert(o.as_ref()) {
            violations.push(Violation::DuplicateOutcome(o.as_ref().to_string()));
        }
    }
    let mut sets: Vec<BTreeSet<usize>> = Vec::with_capacity(cover.len());
    let mut covered = vec![false; measurements.len()];
    for (c, context) in cover.iter().enumerate() {
        let mut set = BTreeSet::new();
        for label in context {
            match index.get(label.as_ref()) {
                None => violations.push(Violation::UnknownMeasurement {
                    context: c,
                    label: label.as_ref().to_string(),
                }),
                Some(&m) => {
                    if !set.insert(m) {
                        violations.push(Violation::RepeatedInContext {
                            context: c,
                            label: label.as_ref().to_string(),
                        });
                    }
                    covered[m] = true;
                }
            }
        }
        sets.push(set);
    }
    for (m, hit) in covered.iter().enumerate() {
        if !hit {
            violations.push(Violation::Uncovered(measurements[m].as_ref().to_string()));
        }
    }
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if i == j {
                continue;
            }
            let subset = sets[i].is_subset(&sets[j]);
            if subset && (sets[i].len() < sets[j].len() || i < j) {
                violations.push(Violation::NotAntiChain { smaller: i, larger: j });
            }
        }
    }
    ValidationReport { violations }
}

/// Measurements `X`, outcomes `O` and a cover `M` of `X` by contexts.
///
/// Contexts are stored as sorted measurement indices. Global assignments are
/// numbered in mixed radix `|O|`: measurements outside the first context vary
/// fastest (in global order), followed by the first context's measurements.
/// For the two-party binary scenario this is the column order `a'`, `b'`, `a`,
/// `b` of the standard incidence matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    measurements: Vec<String>,
    outcomes: Vec<String>,
    cover: Vec<Vec<usize>>,
    digits: Vec<usize>,
}

impl Scenario {
    pub fn new<S: AsRef<str>>(measurements: &[S], outcomes: &[S], cover: &[Vec<S>]) -> Result<Self> {
        let report = validate(measurements, outcomes, cover);
        if !report.is_valid() {
            return Err(Error::InvalidScenario(report.to_string()));
        }
        let measurements: Vec<String> = measurements.iter().map(|m| m.as_ref().to_string()).collect();
        let index: BTreeMap<&str, usize> =
            measurements.iter().enumerate().map(|(i, m)| (m.as_str(), i)).collect();
        let cover: Vec<Vec<usize>> = cover
            .iter()
            .map(|c| {
                let mut ids: Vec<usize> = c.iter().map(|l| index[l.as_ref()]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        let digits = digit_order(measurements.len(), &cover);
        Ok(Scenario {
            outcomes: outcomes.iter().map(|o| o.as_ref().to_string()).collect(),
            measurements,
            cover,
            digits,
        })
    }

    /// Bell-type scenario: contexts are the transversals picking one
    /// measurement from each part, with the first part's choice varying fastest.
    pub fn bell<S: AsRef<str>>(parts: &[Vec<S>], outcomes: &[S]) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidScenario("every part needs a measurement".into()));
        }
        let measurements: Vec<&str> = parts.iter().flatten().map(|m| m.as_ref()).collect();
        let mut seen = HashSet::new();
        for m in &measurements {
            if !seen.insert(*m) {
                return Err(Error::InvalidScenario(format!("parts overlap at `{m}`")));
            }
        }
        let count: usize = parts.iter().map(|p| p.len()).product();
        let mut cover = Vec::with_capacity(count);
        for mut k in 0..count {
            let mut context = Vec::with_capacity(parts.len());
            for part in parts {
                context.push(part[k % part.len()].as_ref());
                k /= part.len();
            }
            cover.push(context);
        }
        let outcomes: Vec<&str> = outcomes.iter().map(|o| o.as_ref()).collect();
        Scenario::new(&measurements, &outcomes, &cover)
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn cover(&self) -> &[Vec<usize>] {
        &self.cover
    }

    pub fn context(&self, c: usize) -> &[usize] {
        &self.cover[c]
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn measurement_count(&self) -> usize {
        self.measurements.len()
    }

    pub fn measurement_index(&self, label: &str) -> Option<usize> {
        self.measurements.iter().position(|m| m == label)
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    /// Resolves labels to a sorted index list.
    pub fn indices<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut ids = labels
            .iter()
            .map(|l| {
                self.measurement_index(l.as_ref())
                    .ok_or_else(|| Error::UnknownMeasurement(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        ids.sort_unstable();
        Ok(ids)
    }

    pub fn context_labels(&self, c: usize) -> Vec<&str> {
        self.cover[c].iter().map(|&m| self.measurements[m].as_str()).collect()
    }

    /// Position of the context with exactly these measurements.
    pub fn find_context(&self, measurements: &[usize]) -> Option<usize> {
        let mut sorted = measurements.to_vec();
        sorted.sort_unstable();
        self.cover.iter().position(|c| *c == sorted)
    }

    /// Contexts containing measurement `m`.
    pub fn contexts_containing(&self, m: usize) -> Vec<usize> {
        (0..self.cover.len()).filter(|&c| self.cover[c].binary_search(&m).is_ok()).collect()
    }

    pub fn sections(&self, context: &[usize]) -> Vec<Section> {
        sections(context, self.outcome_count())
    }

    pub fn partial_contexts(&self) -> PartialContextFamily {
        PartialContextFamily::new(self)
    }

    /// `D = Σ_U (l−1)^|U|` over all partial contexts.
    pub fn dimension_d(&self) -> u128 {
        let family = self.partial_contexts();
        let base = (self.outcome_count() - 1) as u128;
        let d = family.subsets().iter().map(|u| base.pow(u.len() as u32)).sum();
        if family.homogeneity().is_some() {
            let closed = self.homogeneous_dimension_d().expect("homogeneous cover");
            assert_eq!(d, closed, "closed-form dimension disagrees with enumeration");
        }
        d
    }

    /// `D = Σ_j C(n,j)·p·(l−1)^j / N_j` for homogeneous covers.
    pub fn homogeneous_dimension_d(&self) -> Result<u128> {
        let family = self.partial_contexts();
        let h = family.homogeneity().ok_or(Error::NotHomogeneous)?;
        let base = (self.outcome_count() - 1) as u128;
        let mut total = 0u128;
        for j in 0..=h.context_size {
            let numer = binomial(h.context_size, j) * h.contexts as u128 * base.pow(j as u32);
            let n_j = h.containing[j] as u128;
            if !numer.is_multiple_of(n_j) {
                return Err(Error::Internal(format!("N_{j} does not divide the subset count")));
            }
            total += numer / n_j;
        }
        Ok(total)
    }

    /// `|O|^|X|` if it fits in a `u128`.
    pub fn global_count(&self) -> Option<u128> {
        (self.outcome_count() as u128).checked_pow(self.measurements.len() as u32)
    }

    /// Measurement carried by each mixed-radix digit of a column index, fastest first.
    pub fn digit_order(&self) -> &[usize] {
        &self.digits
    }

    /// The global assignment numbered `column`.
    pub fn global_assignment(&self, mut column: usize) -> Section {
        let l = self.outcome_count();
        let mut values = vec![0; self.measurements.len()];
        for &m in &self.digits {
            values[m] = column % l;
            column /= l;
        }
        Section { context: (0..self.measurements.len()).collect(), values }
    }

    /// Inverse of [`Scenario::global_assignment`].
    pub fn global_column(&self, t: &Section) -> usize {
        let l = self.outcome_count();
        self.digits.iter().rev().fold(0, |acc, &m| acc * l + t.values[m])
    }

    pub fn format_section(&self, s: &Section) -> String {
        let parts: Vec<String> = s
            .context
            .iter()
            .zip(&s.values)
            .map(|(&m, &o)| format!("{}={}", self.measurements[m], self.outcomes[o]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn digit_order(count: usize, cover: &[Vec<usize>]) -> Vec<usize> {
    let first: &[usize] = cover.first().map(|c| c.as_slice()).unwrap_or(&[]);
    let mut digits: Vec<usize> = (0..count).filter(|m| !first.contains(m)).collect();
    digits.extend_from_slice(first);
    digits
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// An assignment of outcome indices to a sorted list of measurement indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    context: Vec<usize>,
    values: Vec<usize>,
}

impl Section {
    /// `context` must be strictly increasing and as long as `values`.
    pub fn new(context: Vec<usize>, values: Vec<usize>) -> Self {
        assert_eq!(context.len(), values.len(), "section length mismatch");
        assert!(context.windows(2).all(|w| w[0] < w[1]), "section context must be sorted");
        Section { context, values }
    }

    pub fn empty() -> Self {
        Section { context: Vec::new(), values: Vec::new() }
    }

    /// Section numbered `index` among the sections over `context`.
    pub fn from_index(context: &[usize], mut index: usize, outcome_count: usize) -> Self {
        let values = context
            .iter()
            .map(|_| {
                let v = index % outcome_count;
                index /= outcome_count;
                v
            })
            .collect();
        Section { context: context.to_vec(), values }
    }

    /// Canonical position: the first measurement's outcome varies fastest.
    pub fn index(&self, outcome_count: usize) -> usize {
        self.values.iter().rev().fold(0, |acc, &v| acc * outcome_count + v)
    }

    pub fn context(&self) -> &[usize] {
        &self.context
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.context.len()
    }

    pub fn is_empty(&self) -> bool {
        self.context.is_empty()
    }

    pub fn value_of(&self, m: usize) -> Option<usize> {
        self.context.binary_search(&m).ok().map(|i| self.values[i])
    }

    pub fn restrict(&self, target: &[usize]) -> Result<Section> {
        let mut sorted = target.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let values = sorted
            .iter()
            .map(|&m| {
                self.value_of(m).ok_or_else(|| Error::NotSubset {
                    target: sorted.clone(),
                    context: self.context.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Section { context: sorted, values })
    }

    /// Index of `self|target` among the sections over `target`, which must be sorted and contained.
    pub(crate) fn restricted_index(&self, target: &[usize], outcome_count: usize) -> usize {
        target.iter().rev().fold(0, |acc, &m| {
            acc * outcome_count + self.value_of(m).expect("target inside context")
        })
    }
}

/// All `|O|^|C|` sections over `context` in canonical order.
pub fn sections(context: &[usize], outcome_count: usize) -> Vec<Section> {
    let count = outcome_count.pow(context.len() as u32);
    (0..count).map(|i| Section::from_index(context, i, outcome_count)).collect()
}

/// Counts describing a homogeneous cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneity {
    /// `p`
    pub contexts: usize,
    /// `n`
    pub context_size: usize,
    /// `N_j` for `j = 0..=n`.
    pub containing: Vec<usize>,
}

/// Every subset of every context, ordered by size then lexicographically.
#[derive(Clone, Debug)]
pub struct PartialContextFamily {
    subsets: Vec<Vec<usize>>,
    homogeneity: Option<Homogeneity>,
}

impl PartialContextFamily {
    fn new(scenario: &Scenario) -> Self {
        let mut all = BTreeSet::new();
        for context in scenario.cover() {
            assert!(context.len() < 64, "context too large to enumerate subsets");
            for mask in 0u64..(1u64 << context.len()) {
                let subset: Vec<usize> = context
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &m)| m)
                    .collect();
                all.insert((subset.len(), subset));
            }
        }
        let subsets: Vec<Vec<usize>> = all.into_iter().map(|(_, s)| s).collect();
        let homogeneity = homogeneity(scenario, &subsets);
        PartialContextFamily { subsets, homogeneity }
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn of_size(&self, j: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.subsets.iter().filter(move |u| u.len() == j)
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn contains(&self, u: &[usize]) -> bool {
        let mut sorted = u.to_vec();
        sorted.sort_unstable();
        self.subsets.contains(&sorted)
    }

    pub fn homogeneity(&self) -> Option<&Homogeneity> {
        self.homogeneity.as_ref()
    }
}

fn homogeneity(scenario: &Scenario, subsets: &[Vec<usize>]) -> Option<Homogeneity> {
    let cover = scenario.cover();
    let n = cover.first()?.len();
    if cover.iter().any(|c| c.len() != n) {
        return None;
    }
    let mut containing: Vec<Option<usize>> = vec![None; n + 1];
    for u in subsets {
        let count = cover.iter().filter(|c| u.iter().all(|m| c.binary_search(m).is_ok())).count();
        match containing[u.len()] {
            None => containing[u.len()] = Some(count),
            Some(k) if k != count => return None,
            Some(_) => {}
        }
    }
    Some(Homogeneity {
        contexts: cover.len(),
        context_size: n,
        containing: containing.into_iter().map(|c| c.expect("every size occurs")).collect(),
    })
}
