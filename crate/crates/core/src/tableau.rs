//! The incidence matrix of a cover, model vectors and the linear systems built from them.

use bitvec::prelude::*;
use num_traits::{One, Zero};

use crate::algebra::{Distribution, Semiring, Weights};
use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::rational::Rational;
use crate::scenario::{Scenario, Section};
use crate::solve::linear::{self, LinearSystem, SparseRow};

pub const DEFAULT_COLUMN_LIMIT: usize = 1 << 20;

/// 0/1 matrix with rows `(C, s)` and columns the global assignments `t`;
/// `entry((C, s), t) = 1` iff `t|C = s`.
///
/// Every column has exactly one 1 per context, so the matrix is stored as the
/// row hit by each (column, context) pair.
#[derive(Clone, Debug)]
pub struct IncidenceTableau {
    scenario: Scenario,
    row_offsets: Vec<usize>,
    columns: usize,
    hits: Vec<u32>,
}

impl IncidenceTableau {
    pub fn build(scenario: &Scenario) -> Result<Self> {
        IncidenceTableau::build_with_limit(scenario, DEFAULT_COLUMN_LIMIT)
    }

    pub fn build_with_limit(scenario: &Scenario, limit: usize) -> Result<Self> {
        let needed = scenario.global_count().unwrap_or(u128::MAX);
        if needed > limit as u128 {
            return Err(Error::SizeBound { needed, limit });
        }
        let columns = needed as usize;
        let l = scenario.outcome_count();
        let mut row_offsets = vec![0];
        for c in scenario.cover() {
            row_offsets.push(row_offsets.last().unwrap() + l.pow(c.len() as u32));
        }
        if *row_offsets.last().unwrap() > u32::MAX as usize {
            return Err(Error::SizeBound { needed: *row_offsets.last().unwrap() as u128, limit });
        }
        let contexts = scenario.cover().len();
        let mut hits = Vec::with_capacity(columns * contexts);
        for j in 0..columns {
            let t = scenario.global_assignment(j);
            for (c, context) in scenario.cover().iter().enumerate() {
                hits.push((row_offsets[c] + t.restricted_index(context, l)) as u32);
            }
        }
        Ok(IncidenceTableau { scenario: scenario.clone(), row_offsets, columns, hits })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn rows(&self) -> usize {
        *self.row_offsets.last().unwrap()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Row of section number `section` over context `context`.
    pub fn row_of(&self, context: usize, section: usize) -> usize {
        self.row_offsets[context] + section
    }

    pub fn row_label(&self, row: usize) -> (usize, Section) {
        let c = self.row_offsets.partition_point(|&o| o <= row) - 1;
        let section = Section::from_index(self.scenario.context(c), row - self.row_offsets[c], self.scenario.outcome_count());
        (c, section)
    }

    /// Rows holding a 1 in `column`, one per context.
    pub fn column_rows(&self, column: usize) -> &[u32] {
        let k = self.scenario.cover().len();
        &self.hits[column * k..(column + 1) * k]
    }

    pub fn entry(&self, row: usize, column: usize) -> bool {
        let (c, _) = self.row_label(row);
        self.column_rows(column)[c] as usize == row
    }

    /// Columns of each row.
    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.rows()];
        for j in 0..self.columns {
            for &r in self.column_rows(j) {
                rows[r as usize].push(j);
            }
        }
        rows
    }

    pub fn row_bits(&self, row: usize) -> BitVec {
        let (c, _) = self.row_label(row);
        (0..self.columns).map(|j| self.column_rows(j)[c] as usize == row).collect()
    }

    /// Plain-text dump, one line of 0/1 characters per row.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.rows() * (self.columns + 1));
        for r in 0..self.rows() {
            for bit in self.row_bits(r) {
                out.push(if bit { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// The model's weights in row order.
    pub fn model_vector(&self, model: &EmpiricalModel) -> Result<ModelVector> {
        if model.scenario() != &self.scenario {
            return Err(Error::ScenarioMismatch("model and tableau are over different scenarios".into()));
        }
        Ok(ModelVector { semiring: model.semiring(), weights: model.flat_weights() })
    }

    /// `M d` for a weight per column.
    pub fn apply(&self, d: &[Rational]) -> Vec<Rational> {
        assert_eq!(d.len(), self.columns, "one weight per column");
        let mut out = vec![Rational::zero(); self.rows()];
        for (j, w) in d.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for &r in self.column_rows(j) {
                out[r as usize] += w;
            }
        }
        out
    }

    /// `M X = V`, optionally with the all-ones row `Σ X = 1` appended.
    pub fn system(&self, v: &ModelVector, augmented: bool) -> LinearSystem {
        assert_eq!(v.weights.len(), self.rows(), "model vector length");
        let mut system = LinearSystem::new(self.columns);
        for (r, cols) in self.row_supports().into_iter().enumerate() {
            system.push_row(cols.into_iter().map(|j| (j, Rational::one())).collect(), v.weights[r].clone());
        }
        if augmented {
            system.push_row((0..self.columns).map(|j| (j, Rational::one())).collect(), Rational::one());
        }
        system.with_pivot_hint(self.structural_pivots())
    }

    pub fn augment(&self, v: &ModelVector) -> LinearSystem {
        self.system(v, true)
    }

    /// One `(row, column)` pair per partial context `U` and section `s` avoiding
    /// outcome 0: the column sets `s` on `U` and 0 elsewhere, the row is that
    /// assignment restricted to the first context containing `U`. Ordered by
    /// decreasing `|U|`, the block is unit lower-triangular.
    pub fn structural_pivots(&self) -> Vec<(usize, usize)> {
        let scenario = &self.scenario;
        let l = scenario.outcome_count();
        let family = scenario.partial_contexts();
        let mut subsets: Vec<&Vec<usize>> = family.subsets().iter().collect();
        subsets.sort_by_key(|u| std::cmp::Reverse(u.len()));
        let mut pivots = Vec::new();
        let all: Vec<usize> = (0..scenario.measurement_count()).collect();
        for u in subsets {
            let c = scenario
                .cover()
                .iter()
                .position(|c| u.iter().all(|m| c.binary_search(m).is_ok()))
                .expect("partial context lies in a context");
            let count = (l - 1).pow(u.len() as u32);
            for k in 0..count {
                let s = Section::from_index(u, k, l - 1);
                let mut values = vec![0; all.len()];
                for (&m, &o) in s.context().iter().zip(s.values()) {
                    values[m] = o + 1;
                }
                let t = Section::new(all.clone(), values);
                let row = self.row_of(c, t.restricted_index(scenario.context(c), l));
                pivots.push((row, scenario.global_column(&t)));
            }
        }
        pivots
    }

    /// Exact rank. Strongly rectangular matrices go through the Gram matrix of
    /// the smaller side, which has the same rank over the rationals.
    pub fn rank(&self) -> usize {
        let (rows, cols) = (self.rows(), self.columns);
        if rows.max(cols) <= 4 * rows.min(cols) {
            return self.rank_by_elimination();
        }
        let gram: Vec<Vec<u64>> = if rows <= cols {
            let mut g = vec![vec![0u64; rows]; rows];
            for j in 0..cols {
                let hit = self.column_rows(j);
                for &a in hit {
                    for &b in hit {
                        g[a as usize][b as usize] += 1;
                    }
                }
            }
            g
        } else {
            let mut g = vec![vec![0u64; cols]; cols];
            for support in self.row_supports() {
                for &a in &support {
                    for &b in &support {
                        g[a][b] += 1;
                    }
                }
            }
            g
        };
        let n = gram.len();
        let sparse: Vec<SparseRow> = gram
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| *v != 0)
                    .map(|(j, v)| (j, Rational::from_integer(v.into())))
                    .collect()
            })
            .collect();
        linear::rank(&sparse, n)
    }

    /// Exact rank by elimination on the matrix itself.
    pub fn rank_by_elimination(&self) -> usize {
        let rows: Vec<SparseRow> = self
            .row_supports()
            .into_iter()
            .map(|cols| cols.into_iter().map(|j| (j, Rational::one())).collect())
            .collect();
        linear::rank(&rows, self.columns)
    }

    /// Column weights read as a distribution over all measurements.
    pub fn to_global(&self, weights: &[Rational], semiring: Semiring) -> Result<Distribution> {
        assert_eq!(weights.len(), self.columns);
        let l = self.scenario.outcome_count();
        let mut values = vec![Rational::zero(); self.columns];
        for (j, w) in weights.iter().enumerate() {
            values[self.scenario.global_assignment(j).index(l)] = w.clone();
        }
        let all: Vec<usize> = (0..self.scenario.measurement_count()).collect();
        let weights = match semiring {
            Semiring::Boolean => Weights::Boolean(values.iter().map(|v| !v.is_zero()).collect()),
            Semiring::NonNegative => Weights::NonNegative(values),
            Semiring::Signed => Weights::Signed(values),
        };
        Distribution::new(all, l, weights)
    }

    /// A distribution over all measurements as column weights.
    pub fn from_global(&self, d: &Distribution) -> Vec<Rational> {
        (0..self.columns).map(|j| d.weight(self.scenario.global_assignment(j).index(self.scenario.outcome_count()))).collect()
    }
}

/// One weight per tableau row, in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelVector {
    pub semiring: Semiring,
    pub weights: Vec<Rational>,
}

impl ModelVector {
    pub fn support(&self) -> BitVec {
        self.weights.iter().map(|w| !w.is_zero()).collect()
    }
}
