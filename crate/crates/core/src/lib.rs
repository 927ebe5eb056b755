//! Exact analysis of empirical models over measurement covers.
//!
//! A [`Scenario`](scenario::Scenario) fixes measurements, outcomes and a cover of
//! contexts. An [`EmpiricalModel`](model::EmpiricalModel) assigns a distribution
//! to every context. From there the crate decides, with exact rational
//! arithmetic, whether the model has a global section over the booleans, the
//! non-negative rationals or the signed rationals, computes its non-contextual
//! fraction, and checks Kochen-Specker style obstructions. The [`quantum`]
//! module is the only place floating point appears.

pub mod algebra;
pub mod catalog;
pub mod document;
pub mod error;
pub mod hidden;
pub mod hierarchy;
pub mod kspec;
pub mod model;
pub mod quantum;
pub mod rational;
pub mod scenario;
pub mod solve;
pub mod tableau;

pub use algebra::{Distribution, Semiring, Weights};
pub use error::{Error, Result};
pub use model::EmpiricalModel;
pub use rational::Rational;
pub use scenario::{Scenario, Section};
pub use tableau::IncidenceTableau;

