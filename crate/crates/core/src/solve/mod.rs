//! Exact solvers for the systems `M X = V` over the three semirings.

pub mod boolean;
pub mod linear;
pub mod simplex;

pub use boolean::{enumerate_se, solve_boolean, BooleanSolution};
pub use linear::{rank, solve_signed, Inconsistency, LinearSystem, SignedOutcome, SignedSolution, SparseRow};
pub use simplex::{maximize, solve_nonneg, Constraint, LpOutcome, Relation};
