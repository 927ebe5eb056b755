//! Distributions over the sections of a context, valued in one of three semirings.

use std::fmt;

use bitvec::prelude::*;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scenario::Section;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Semiring {
    /// `({0,1}, ∨, 0, ∧, 1)`
    #[serde(rename = "boolean")]
    Boolean,
    /// Non-negative rationals.
    #[serde(rename = "nonneg")]
    NonNegative,
    /// All rationals.
    #[serde(rename = "signed")]
    Signed,
}

impl Semiring {
    pub fn name(self) -> &'static str {
        match self {
            Semiring::Boolean => "boolean",
            Semiring::NonNegative => "nonneg",
            Semiring::Signed => "signed",
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boolean" => Ok(Semiring::Boolean),
            "nonneg" => Ok(Semiring::NonNegative),
            "signed" => Ok(Semiring::Signed),
            other => Err(Error::InvalidArgument(format!("unknown semiring `{other}`"))),
        }
    }
}

/// Dense weights over the canonical section order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    Boolean(BitVec),
    NonNegative(Vec<Rational>),
    Signed(Vec<Rational>),
}

impl Weights {
    pub fn semiring(&self) -> Semiring {
        match self {
            Weights::Boolean(_) => Semiring::Boolean,
            Weights::NonNegative(_) => Semiring::NonNegative,
            Weights::Signed(_) => Semiring::Signed,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Weights::Boolean(b) => b.len(),
            Weights::NonNegative(w) | Weights::Signed(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn zeros(semiring: Semiring, len: usize) -> Weights {
        match semiring {
            Semiring::Boolean => Weights::Boolean(bitvec![0; len]),
            Semiring::NonNegative => Weights::NonNegative(vec![Rational::zero(); len]),
            Semiring::Signed => Weights::Signed(vec![Rational::zero(); len]),
        }
    }

    fn from_rationals(semiring: Semiring, values: Vec<Rational>) -> Weights {
        match semiring {
            Semiring::Boolean => Weights::Boolean(values.iter().map(|v| !v.is_zero()).collect()),
            Semiring::NonNegative => Weights::NonNegative(values),
            Semiring::Signed => Weights::Signed(values),
        }
    }

    fn is_zero(&self, i: usize) -> bool {
        match self {
            Weights::Boolean(b) => !b[i],
            Weights::NonNegative(w) | Weights::Signed(w) => w[i].is_zero(),
        }
    }

    /// `self[i] += other` where `other` is taken from `source[j]`.
    fn accumulate(&mut self, i: usize, source: &Weights, j: usize) {
        match (self, source) {
            (Weights::Boolean(a), Weights::Boolean(b)) => {
                let v = a[i] | b[j];
                a.set(i, v);
            }
            (Weights::NonNegative(a), Weights::NonNegative(b)) | (Weights::Signed(a), Weights::Signed(b)) => {
                if !b[j].is_zero() {
                    a[i] += &b[j];
                }
            }
            _ => unreachable!("accumulate across semirings"),
        }
    }
}

/// A weight for each section of one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    context: Vec<usize>,
    outcome_count: usize,
    weights: Weights,
}

impl Distribution {
    /// Checks shape, carrier and normalization.
    pub fn new(context: Vec<usize>, outcome_count: usize, weights: Weights) -> Result<Self> {
        let d = Distribution::unnormalized(context, outcome_count, weights)?;
        if !d.is_normalized() {
            return Err(Error::InvalidDistribution(format!(
                "weights over context {:?} do not sum to one (total {})",
                d.context,
                d.total()
            )));
        }
        Ok(d)
    }

    /// Checks shape and carrier only; used for raw model tables.
    pub fn unnormalized(context: Vec<usize>, outcome_count: usize, weights: Weights) -> Result<Self> {
        if !context.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidDistribution(format!("context {context:?} is not sorted")));
        }
        let expected = outcome_count.pow(context.len() as u32);
        if weights.len() != expected {
            return Err(Error::InvalidDistribution(format!(
                "expected {expected} weights over context {context:?}, found {}",
                weights.len()
            )));
        }
        if let Weights::NonNegative(w) = &weights {
            if let Some(bad) = w.iter().find(|v| v.is_negative()) {
                return Err(Error::InvalidDistribution(format!("negative weight {bad} in a non-negative table")));
            }
        }
        Ok(Distribution { context, outcome_count, weights })
    }

    pub fn from_rationals(
        semiring: Semiring,
        context: Vec<usize>,
        outcome_count: usize,
        values: Vec<Rational>,
    ) -> Result<Self> {
        if semiring == Semiring::Boolean {
            if let Some(bad) = values.iter().find(|v| !v.is_zero() && !v.is_one()) {
                return Err(Error::InvalidDistribution(format!("boolean weight {bad}")));
            }
        }
        Distribution::new(context, outcome_count, Weights::from_rationals(semiring, values))
    }

    pub fn from_bits(context: Vec<usize>, outcome_count: usize, bits: impl IntoIterator<Item = bool>) -> Result<Self> {
        Distribution::new(context, outcome_count, Weights::Boolean(bits.into_iter().collect()))
    }

    /// Point distribution at `s`.
    pub fn delta(s: &Section, outcome_count: usize, semiring: Semiring) -> Self {
        let mut weights = Weights::zeros(semiring, outcome_count.pow(s.len() as u32));
        let i = s.index(outcome_count);
        match &mut weights {
            Weights::Boolean(b) => b.set(i, true),
            Weights::NonNegative(w) | Weights::Signed(w) => w[i] = Rational::one(),
        }
        Distribution { context: s.context().to_vec(), outcome_count, weights }
    }

    pub fn semiring(&self) -> Semiring {
        self.weights.semiring()
    }

    pub fn context(&self) -> &[usize] {
        &self.context
    }

    pub fn outcome_count(&self) -> usize {
        self.outcome_count
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight at canonical index `i`; booleans read as 0 or 1.
    pub fn weight(&self, i: usize) -> Rational {
        match &self.weights {
            Weights::Boolean(b) => {
                if b[i] {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Weights::NonNegative(w) | Weights::Signed(w) => w[i].clone(),
        }
    }

    pub fn weight_of(&self, s: &Section) -> Rational {
        assert_eq!(s.context(), self.context.as_slice(), "section over another context");
        self.weight(s.index(self.outcome_count))
    }

    pub fn rationals(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn is_supported(&self, i: usize) -> bool {
        !self.weights.is_zero(i)
    }

    pub fn support(&self) -> BitVec {
        (0..self.len()).map(|i| self.is_supported(i)).collect()
    }

    /// Semiring sum of all weights, read as a rational.
    pub fn total(&self) -> Rational {
        match &self.weights {
            Weights::Boolean(b) => {
                if b.any() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Weights::NonNegative(w) | Weights::Signed(w) => w.iter().sum(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one()
    }

    pub fn marginalize(&self, target: &[usize]) -> Result<Distribution> {
        let mut target = target.to_vec();
        target.sort_unstable();
        target.dedup();
        if target.iter().any(|m| self.context.binary_search(m).is_err()) {
            return Err(Error::NotSubset { target, context: self.context.clone() });
        }
        let l = self.outcome_count;
        let mut weights = Weights::zeros(self.semiring(), l.pow(target.len() as u32));
        for i in 0..self.len() {
            if self.weights.is_zero(i) {
                continue;
            }
            let s = Section::from_index(&self.context, i, l);
            weights.accumulate(s.restricted_index(&target, l), &self.weights, i);
        }
        Ok(Distribution { context: target, outcome_count: l, weights })
    }

    /// Support as a boolean distribution; the signed case has no homomorphism.
    pub fn to_boolean(&self) -> Result<Distribution> {
        match &self.weights {
            Weights::Signed(_) => Err(Error::SignedToBoolean),
            Weights::Boolean(_) => Ok(self.clone()),
            Weights::NonNegative(_) => Ok(Distribution {
                context: self.context.clone(),
                outcome_count: self.outcome_count,
                weights: Weights::Boolean(self.support()),
            }),
        }
    }

    /// Reinterprets non-negative weights as signed.
    pub fn to_signed(&self) -> Distribution {
        Distribution {
            context: self.context.clone(),
            outcome_count: self.outcome_count,
            weights: Weights::Signed(self.rationals()),
        }
    }

    /// `h_C(s) = Π_m h_m(s|m)` from one single-measurement factor per measurement of `context`.
    pub fn product_over_singletons(factors: &[Distribution], context: &[usize]) -> Result<Distribution> {
        let mut context = context.to_vec();
        context.sort_unstable();
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidDistribution("no factors given".into()))?;
        let (semiring, l) = (first.semiring(), first.outcome_count);
        let mut per_measurement = Vec::with_capacity(context.len());
        for &m in &context {
            let f = factors
                .iter()
                .find(|f| f.context == [m])
                .ok_or_else(|| Error::InvalidDistribution(format!("missing factor for measurement {m}")))?;
            if f.semiring() != semiring {
                return Err(Error::SemiringMismatch {
                    expected: semiring.to_string(),
                    found: f.semiring().to_string(),
                });
            }
            if f.outcome_count != l {
                return Err(Error::InvalidDistribution("factors disagree on the outcome count".into()));
            }
            per_measurement.push(f);
        }
        let count = l.pow(context.len() as u32);
        let weights = match semiring {
            Semiring::Boolean => Weights::Boolean(
                (0..count)
                    .map(|i| {
                        let s = Section::from_index(&context, i, l);
                        per_measurement.iter().zip(s.values()).all(|(f, &o)| f.is_supported(o))
                    })
                    .collect(),
            ),
            _ => Weights::from_rationals(
                semiring,
                (0..count)
                    .map(|i| {
                        let s = Section::from_index(&context, i, l);
                        per_measurement.iter().zip(s.values()).map(|(f, &o)| f.weight(o)).product()
                    })
                    .collect(),
            ),
        };
        Distribution::new(context, l, weights)
    }
}
