//! Boolean global sections and the set `S_e` of globally consistent assignments.

use bitvec::prelude::*;

use crate::model::EmpiricalModel;
use crate::scenario::Section;
use crate::tableau::IncidenceTableau;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanSolution {
    pub solvable: bool,
    /// Admissible columns: those whose ones all fall inside the support.
    pub witness: Vec<usize>,
    /// Supported rows that no admissible column reaches.
    pub uncovered: Vec<usize>,
}

/// Solves `M X = V` over the booleans.
///
/// A column can only be switched on if it never hits a zero of `V`, and
/// switching on every such column is then optimal, so the system is solvable
/// iff the admissible columns jointly cover the support.
pub fn solve_boolean(tableau: &IncidenceTableau, vector: &BitSlice) -> BooleanSolution {
    assert_eq!(vector.len(), tableau.rows(), "boolean vector length");
    let mut covered = bitvec![0; tableau.rows()];
    let mut witness = Vec::new();
    for j in 0..tableau.columns() {
        let rows = tableau.column_rows(j);
        if rows.iter().all(|&r| vector[r as usize]) {
            witness.push(j);
            for &r in rows {
                covered.set(r as usize, true);
            }
        }
    }
    let uncovered: Vec<usize> = vector.iter_ones().filter(|&r| !covered[r]).collect();
    BooleanSolution { solvable: uncovered.is_empty(), witness, uncovered }
}

/// Global assignments whose restriction to every context is supported,
/// sorted by column number.
pub fn enumerate_se(model: &EmpiricalModel) -> Vec<Section> {
    let scenario = model.scenario();
    let n = scenario.measurement_count();
    let l = scenario.outcome_count();
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, context) in scenario.cover().iter().enumerate() {
        if let Some(&last) = context.last() {
            closing[last].push(c);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let mut found = Vec::new();
    let mut values = vec![0usize; n];
    search(model, &closing, &all, l, 0, &mut values, &mut found);
    found.sort_by_key(|t| scenario.global_column(t));
    found
}

fn search(
    model: &EmpiricalModel,
    closing: &[Vec<usize>],
    all: &[usize],
    l: usize,
    m: usize,
    values: &mut Vec<usize>,
    found: &mut Vec<Section>,
) {
    if m == all.len() {
        found.push(Section::new(all.to_vec(), values.clone()));
        return;
    }
    for o in 0..l {
        values[m] = o;
        let consistent = closing[m].iter().all(|&c| {
            let context = model.scenario().context(c);
            let index = context.iter().rev().fold(0, |acc, &x| acc * l + values[x]);
            model.table(c).is_supported(index)
        });
        if consistent {
            search(model, closing, all, l, m + 1, values, found);
        }
    }
}
