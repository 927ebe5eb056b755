//! Finite hidden-variable models with a context-independent prior.

use num_traits::{One, Signed as _, Zero};
use rand::Rng;

use crate::algebra::{Distribution, Semiring};
use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::rational::{self, Rational};
use crate::scenario::{Scenario, Section};

/// `(Λ, h_Λ, {h^λ_C})`. Each `h^λ` is a compatible family, which is parameter
/// independence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenVariableModel {
    scenario: Scenario,
    lambdas: Vec<String>,
    prior: Vec<Rational>,
    tables: Vec<EmpiricalModel>,
}

/// A cell where `h^λ_C(s)` differs from the product of its single-measurement marginals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationFailure {
    pub lambda: usize,
    pub context: usize,
    pub section: Section,
    pub weight: Rational,
    pub product: Rational,
}

impl HiddenVariableModel {
    pub fn new(lambdas: Vec<String>, prior: Vec<Rational>, tables: Vec<EmpiricalModel>) -> Result<Self> {
        let invalid = |m: &str| Err(Error::InvalidHiddenVariableModel(m.into()));
        if lambdas.is_empty() {
            return invalid("Λ is empty");
        }
        if lambdas.len() != prior.len() || lambdas.len() != tables.len() {
            return invalid("one prior weight and one table family per λ");
        }
        if prior.iter().any(|p| p.is_negative()) || prior.iter().sum::<Rational>() != Rational::one() {
            return invalid("prior must be a probability distribution");
        }
        let scenario = tables[0].scenario().clone();
        for t in &tables {
            if t.scenario() != &scenario {
                return invalid("all λ share one scenario");
            }
            if t.semiring() != Semiring::NonNegative {
                return invalid("tables must be probabilistic");
            }
            if t.is_raw() {
                return invalid("each λ must give a compatible family");
            }
        }
        Ok(HiddenVariableModel { scenario, lambdas, prior, tables })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn lambdas(&self) -> &[String] {
        &self.lambdas
    }

    pub fn prior(&self) -> &[Rational] {
        &self.prior
    }

    /// `h^λ` as an empirical model.
    pub fn tables(&self, lambda: usize) -> &EmpiricalModel {
        &self.tables[lambda]
    }
}

pub fn factorization_counterexample(h: &HiddenVariableModel) -> Option<FactorizationFailure> {
    for (lambda, family) in h.tables.iter().enumerate() {
        for (c, table) in family.tables().iter().enumerate() {
            let context = table.context();
            let marginals: Vec<Distribution> = context
                .iter()
                .map(|&m| table.marginalize(&[m]).expect("singleton of the context"))
                .collect();
            for (i, section) in h.scenario.sections(context).into_iter().enumerate() {
                let product: Rational = marginals.iter().zip(section.values()).map(|(d, &o)| d.weight(o)).product();
                let weight = table.weight(i);
                if weight != product {
                    return Some(FactorizationFailure { lambda, context: c, section, weight, product });
                }
            }
        }
    }
    None
}

pub fn is_factorizable(h: &HiddenVariableModel) -> bool {
    factorization_counterexample(h).is_none()
}

/// `e_C(s) = Σ_λ h^λ_C(s) h_Λ(λ)`.
pub fn realize(h: &HiddenVariableModel) -> EmpiricalModel {
    let parts: Vec<(Rational, &EmpiricalModel)> = h.prior.iter().cloned().zip(&h.tables).collect();
    EmpiricalModel::mixture(&parts).expect("mixtures of compatible families are compatible")
}

/// Deterministic hidden variables: one λ per global assignment in the support of `d`.
pub fn hv_from_global_section(scenario: &Scenario, d: &Distribution) -> Result<HiddenVariableModel> {
    let all: Vec<usize> = (0..scenario.measurement_count()).collect();
    if d.context() != all.as_slice() || d.outcome_count() != scenario.outcome_count() {
        return Err(Error::ScenarioMismatch("global distribution must cover every measurement".into()));
    }
    if d.semiring() != Semiring::NonNegative {
        return Err(Error::SemiringMismatch { expected: Semiring::NonNegative.to_string(), found: d.semiring().to_string() });
    }
    let (mut lambdas, mut prior, mut tables) = (Vec::new(), Vec::new(), Vec::new());
    for (i, t) in scenario.sections(&all).into_iter().enumerate() {
        let w = d.weight(i);
        if w.is_zero() {
            continue;
        }
        lambdas.push(scenario.format_section(&t));
        prior.push(w);
        tables.push(EmpiricalModel::deterministic(scenario.clone(), &t, Semiring::NonNegative)?);
    }
    HiddenVariableModel::new(lambdas, prior, tables)
}

/// `d(s) = Σ_λ Π_m h^λ_m(s|m) h_Λ(λ)`, a global section for `realize(h)`.
pub fn global_section_from_factorizable(h: &HiddenVariableModel) -> Result<Distribution> {
    if !is_factorizable(h) {
        return Err(Error::NotFactorizable);
    }
    let scenario = &h.scenario;
    let all: Vec<usize> = (0..scenario.measurement_count()).collect();
    let l = scenario.outcome_count();
    let mut values = vec![Rational::zero(); l.pow(all.len() as u32)];
    for (family, p) in h.tables.iter().zip(&h.prior) {
        let factors = all
            .iter()
            .map(|&m| {
                let c = scenario.contexts_containing(m)[0];
                family.table(c).marginalize(&[m])
            })
            .collect::<Result<Vec<_>>>()?;
        let joint = Distribution::product_over_singletons(&factors, &all)?;
        for (v, w) in values.iter_mut().zip(joint.rationals()) {
            *v += w * p;
        }
    }
    Distribution::from_rationals(Semiring::NonNegative, all, l, values)
}

/// A distribution on `parts` points with denominator at most `max_denominator`.
pub fn random_rational_distribution<R: Rng + ?Sized>(rng: &mut R, parts: usize, max_denominator: u64) -> Vec<Rational> {
    assert!(parts > 0 && max_denominator > 0);
    let q = rng.random_range(1..=max_denominator);
    let mut cuts: Vec<u64> = (0..parts - 1).map(|_| rng.random_range(0..=q)).collect();
    cuts.push(0);
    cuts.push(q);
    cuts.sort_unstable();
    cuts.windows(2).map(|w| rational::rat((w[1] - w[0]) as i64, q as i64)).collect()
}

/// Factorizable model with independent random single-measurement tables per λ.
pub fn random_factorizable<R: Rng + ?Sized>(
    rng: &mut R,
    scenario: &Scenario,
    lambdas: usize,
    max_denominator: u64,
) -> Result<HiddenVariableModel> {
    let l = scenario.outcome_count();
    let mut tables = Vec::with_capacity(lambdas);
    for _ in 0..lambdas {
        let factors = (0..scenario.measurement_count())
            .map(|m| Distribution::from_rationals(Semiring::NonNegative, vec![m], l, random_rational_distribution(rng, l, max_denominator)))
            .collect::<Result<Vec<_>>>()?;
        tables.push(EmpiricalModel::product(scenario.clone(), &factors)?);
    }
    let prior = random_rational_distribution(rng, lambdas, max_denominator);
    HiddenVariableModel::new((0..lambdas).map(|i| format!("λ{i}")).collect(), prior, tables)
}

/// Random distribution over all measurements, supported on at most `points` assignments.
pub fn random_global_distribution<R: Rng + ?Sized>(
    rng: &mut R,
    scenario: &Scenario,
    points: usize,
    max_denominator: u64,
) -> Result<Distribution> {
    let all: Vec<usize> = (0..scenario.measurement_count()).collect();
    let l = scenario.outcome_count();
    let size = l.pow(all.len() as u32);
    let mut values = vec![Rational::zero(); size];
    for w in random_rational_distribution(rng, points, max_denominator) {
        values[rng.random_range(0..size)] += w;
    }
    Distribution::from_rationals(Semiring::NonNegative, all, l, values)
}
