//! Classification into the contextuality hierarchy, the non-contextual
//! fraction, and the constraint-satisfaction views of a support.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{Distribution, Semiring};
use crate::error::{Error, Result};
use crate::model::EmpiricalModel;
use crate::rational::Rational;
use crate::scenario::Section;
use crate::solve::{self, BooleanSolution, Constraint, LpOutcome, Relation};
use crate::tableau::IncidenceTableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Local,
    ProbNonExtendable,
    PossNonExtendable,
    StronglyContextual,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Local => "Local",
            Level::ProbNonExtendable => "ProbNonExtendable",
            Level::PossNonExtendable => "PossNonExtendable",
            Level::StronglyContextual => "StronglyContextual",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Level::Local => 0,
            Level::ProbNonExtendable => 10,
            Level::PossNonExtendable => 11,
            Level::StronglyContextual => 12,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `e = λ L + (1 − λ) q` with `L` local and `q` no-signalling.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `L` as weights on global assignments (column order), summing to 1.
    pub global: Vec<Rational>,
    pub local: EmpiricalModel,
    pub residual: EmpiricalModel,
}

#[derive(Clone, Debug)]
pub struct NoncontextualFraction {
    pub value: Rational,
    /// Optimal sub-model weights on global assignments; they sum to `value`.
    pub weights: Vec<Rational>,
    /// Present when `0 < value < 1`.
    pub decomposition: Option<Decomposition>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub level: Level,
    /// A non-negative global section (column weights), when local.
    pub global_section: Option<Vec<Rational>>,
    pub boolean: BooleanSolution,
    /// `S_e`, sorted by column.
    pub se: Vec<Section>,
    pub ncf: NoncontextualFraction,
}

fn require_probabilistic(model: &EmpiricalModel) -> Result<()> {
    if model.is_raw() {
        return Err(Error::Incompatible(model.check_no_signalling().describe(model.scenario())));
    }
    if model.semiring() != Semiring::NonNegative {
        return Err(Error::SemiringMismatch {
            expected: Semiring::NonNegative.to_string(),
            found: model.semiring().to_string(),
        });
    }
    Ok(())
}

pub fn classify(model: &EmpiricalModel) -> Result<ClassificationReport> {
    let tableau = IncidenceTableau::build(model.scenario())?;
    classify_with(&tableau, model)
}

/// Runs every test regardless of which one decides the level.
pub fn classify_with(tableau: &IncidenceTableau, model: &EmpiricalModel) -> Result<ClassificationReport> {
    require_probabilistic(model)?;
    let v = tableau.model_vector(model)?;
    let global_section = solve::solve_nonneg(&tableau.augment(&v)).witness().map(<[Rational]>::to_vec);
    let support = model.support_model()?;
    let boolean = solve::solve_boolean(tableau, &tableau.model_vector(&support)?.support());
    let se = solve::enumerate_se(&support);
    let ncf = noncontextual_fraction_with(tableau, model)?;

    let level = if global_section.is_some() {
        Level::Local
    } else if se.is_empty() {
        Level::StronglyContextual
    } else if !boolean.solvable {
        Level::PossNonExtendable
    } else {
        Level::ProbNonExtendable
    };
    let consistent = (ncf.value.is_zero() == se.is_empty())
        && (ncf.value.is_one() == global_section.is_some())
        && (global_section.is_none() || boolean.solvable)
        && (!se.is_empty() || !boolean.solvable);
    if !consistent {
        return Err(Error::Internal(format!("hierarchy tests disagree for level {level}")));
    }
    Ok(ClassificationReport { level, global_section, boolean, se, ncf })
}

pub fn noncontextual_fraction(model: &EmpiricalModel) -> Result<NoncontextualFraction> {
    let tableau = IncidenceTableau::build(model.scenario())?;
    noncontextual_fraction_with(&tableau, model)
}

/// `λ* = max Σ x` subject to `M x ≤ V`, `x ≥ 0`.
///
/// The residual `V − M x` is a difference of two no-signalling families and
/// hence no-signalling itself; this is checked on every decomposition.
pub fn noncontextual_fraction_with(tableau: &IncidenceTableau, model: &EmpiricalModel) -> Result<NoncontextualFraction> {
    require_probabilistic(model)?;
    let v = tableau.model_vector(model)?;
    let constraints: Vec<Constraint> = tableau
        .row_supports()
        .into_iter()
        .zip(&v.weights)
        .map(|(cols, b)| Constraint::new(cols.into_iter().map(|j| (j, Rational::one())).collect(), Relation::Le, b.clone()))
        .collect();
    let objective = vec![Rational::one(); tableau.columns()];
    let LpOutcome::Optimal { value, witness } = solve::maximize(&objective, &constraints) else {
        return Err(Error::Internal("non-contextual fraction LP is feasible and bounded".into()));
    };
    let decomposition = if value.is_zero() || value.is_one() {
        None
    } else {
        Some(decompose(tableau, model, &value, &witness)?)
    };
    Ok(NoncontextualFraction { value, weights: witness, decomposition })
}

fn decompose(tableau: &IncidenceTableau, model: &EmpiricalModel, lambda: &Rational, x: &[Rational]) -> Result<Decomposition> {
    let scenario = model.scenario();
    let global: Vec<Rational> = x.iter().map(|w| w / lambda).collect();
    let d = tableau.to_global(&global, Semiring::NonNegative)?;
    let local = EmpiricalModel::from_global(scenario.clone(), &d)?;
    let mu = Rational::one() - lambda;
    let mx = tableau.apply(x);
    let v = model.flat_weights();
    let mut offset = 0;
    let mut tables = Vec::with_capacity(scenario.cover().len());
    for context in scenario.cover() {
        let len = scenario.outcome_count().pow(context.len() as u32);
        let values = (offset..offset + len).map(|r| (&v[r] - &mx[r]) / &mu).collect();
        tables.push(Distribution::from_rationals(Semiring::NonNegative, context.clone(), scenario.outcome_count(), values)?);
        offset += len;
    }
    let residual = EmpiricalModel::new(scenario.clone(), tables)
        .map_err(|e| Error::Internal(format!("residual is not a valid model: {e}")))?;
    let rebuilt = EmpiricalModel::mixture(&[(lambda.clone(), &local), (mu, &residual)])?;
    if rebuilt != *model {
        return Err(Error::Internal("decomposition does not reproduce the model".into()));
    }
    Ok(Decomposition { global, local, residual })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CspConstraint {
    pub scope: Vec<String>,
    pub allowed: Vec<Vec<String>>,
}

/// Variables are measurements, values are outcomes, one constraint per context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CspInstance {
    pub variables: Vec<String>,
    pub values: Vec<String>,
    pub constraints: Vec<CspConstraint>,
}

impl CspInstance {
    /// Every solution as a value index per variable, by backtracking.
    pub fn solutions(&self) -> Vec<Vec<usize>> {
        let index = |v: &str| self.variables.iter().position(|x| x == v).expect("scope variable");
        let value = |v: &str| self.values.iter().position(|x| x == v).expect("known value");
        let scopes: Vec<Vec<usize>> = self.constraints.iter().map(|c| c.scope.iter().map(|v| index(v)).collect()).collect();
        let allowed: Vec<Vec<Vec<usize>>> = self
            .constraints
            .iter()
            .map(|c| c.allowed.iter().map(|t| t.iter().map(|v| value(v)).collect()).collect())
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.variables.len());
        self.extend(&scopes, &allowed, &mut current, &mut out);
        out
    }

    fn extend(&self, scopes: &[Vec<usize>], allowed: &[Vec<Vec<usize>>], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = current.len();
        let ok = scopes.iter().zip(allowed).all(|(scope, tuples)| {
            if scope.iter().any(|&v| v >= k) {
                return true;
            }
            let tuple: Vec<usize> = scope.iter().map(|&v| current[v]).collect();
            tuples.contains(&tuple)
        });
        if !ok {
            return;
        }
        if k == self.variables.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..self.values.len() {
            current.push(v);
            self.extend(scopes, allowed, current, out);
            current.pop();
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn to_csp(model: &EmpiricalModel) -> Result<CspInstance> {
    let support = model.support_model()?;
    let scenario = support.scenario();
    let constraints = scenario
        .cover()
        .iter()
        .enumerate()
        .map(|(c, context)| {
            let table = support.table(c);
            CspConstraint {
                scope: context.iter().map(|&m| scenario.measurements()[m].clone()).collect(),
                allowed: scenario
                    .sections(context)
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| table.is_supported(*i))
                    .map(|(_, s)| s.values().iter().map(|&o| scenario.outcomes()[o].clone()).collect())
                    .collect(),
            }
        })
        .collect();
    Ok(CspInstance {
        variables: scenario.measurements().to_vec(),
        values: scenario.outcomes().to_vec(),
        constraints,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub variable: usize,
    pub positive: bool,
}

/// A conjunction of clauses, each a disjunction of cubes (conjunctions of literals).
///
/// Outcome 1 reads as true. Contexts with full support give tautological
/// clauses and are left out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub variables: Vec<String>,
    pub clauses: Vec<Vec<Vec<Literal>>>,
}

impl Formula {
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|cube| cube.iter().all(|l| assignment[l.variable] == l.positive))
        })
    }

    /// DIMACS CNF. Each cube gets an auxiliary variable tied to it by a full
    /// equivalence, so models of the CNF correspond one-to-one with models of
    /// the formula on variables `1..=n`.
    pub fn to_dimacs(&self) -> String {
        let n = self.variables.len();
        let lit = |l: &Literal| if l.positive { (l.variable + 1) as i64 } else { -((l.variable + 1) as i64) };
        let mut next = n as i64;
        let mut cnf: Vec<Vec<i64>> = Vec::new();
        for clause in &self.clauses {
            let mut disjunction = Vec::with_capacity(clause.len());
            for cube in clause {
                next += 1;
                let y = next;
                disjunction.push(y);
                let mut back = vec![y];
                for l in cube {
                    cnf.push(vec![-y, lit(l)]);
                    back.push(-lit(l));
                }
                cnf.push(back);
            }
            cnf.push(disjunction);
        }
        let mut out = String::new();
        for (i, v) in self.variables.iter().enumerate() {
            out.push_str(&format!("c {} {}\n", i + 1, v));
        }
        out.push_str(&format!("p cnf {} {}\n", next, cnf.len()));
        for c in cnf {
            let words: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{} 0\n", words.join(" ")));
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "true");
        }
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|clause| {
                let cubes: Vec<String> = clause
                    .iter()
                    .map(|cube| {
                        let lits: Vec<String> = cube
                            .iter()
                            .map(|l| format!("{}{}", if l.positive { "" } else { "!" }, self.variables[l.variable]))
                            .collect();
                        format!("({})", lits.join(" & "))
                    })
                    .collect();
                format!("[{}]", cubes.join(" | "))
            })
            .collect();
        write!(f, "{}", clauses.join(" &\n"))
    }
}

pub fn to_formula(model: &EmpiricalModel) -> Result<Formula> {
    let l = model.scenario().outcome_count();
    if l != 2 {
        return Err(Error::NotDichotomic(l));
    }
    let support = model.support_model()?;
    let scenario = support.scenario();
    let mut clauses = Vec::new();
    for (c, context) in scenario.cover().iter().enumerate() {
        let table = support.table(c);
        if (0..table.len()).all(|i| table.is_supported(i)) {
            continue;
        }
        let clause = scenario
            .sections(context)
            .iter()
            .enumerate()
            .filter(|(i, _)| table.is_supported(*i))
            .map(|(_, s)| {
                s.context()
                    .iter()
                    .zip(s.values())
                    .map(|(&m, &o)| Literal { variable: m, positive: o == 1 })
                    .collect()
            })
            .collect();
        clauses.push(clause);
    }
    Ok(Formula { variables: scenario.measurements().to_vec(), clauses })
}
