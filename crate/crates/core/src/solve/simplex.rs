//! Exact two-phase simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::linear::{LinearSystem, SparseRow};
use crate::rational::Rational;

type Row = (Vec<(usize, Rational)>, Relation, Rational);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `Σ coeffs·x  (relation)  rhs`, over variables `x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: SparseRow,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: SparseRow, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, witness: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Is there `x ≥ 0` with `A x = b`? The witness comes back with value 0.
pub fn solve_nonneg(system: &LinearSystem) -> LpOutcome {
    let constraints: Vec<Constraint> = system
        .rows()
        .iter()
        .zip(system.rhs())
        .map(|(row, b)| Constraint::new(row.clone(), Relation::Eq, b.clone()))
        .collect();
    maximize(&vec![Rational::zero(); system.columns()], &constraints)
}

/// Maximizes `objective · x` subject to `constraints` and `x ≥ 0`.
pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let fixed = presolve(n, constraints);
    let free: Vec<usize> = (0..n).filter(|&j| !fixed[j]).collect();
    let mut local = vec![usize::MAX; n];
    for (k, &j) in free.iter().enumerate() {
        local[j] = k;
    }

    let mut rows: Vec<Row> = Vec::new();
    for c in constraints {
        let coeffs: Vec<(usize, Rational)> =
            c.coeffs.iter().filter(|(j, _)| !fixed[*j]).map(|(j, a)| (local[*j], a.clone())).collect();
        if coeffs.is_empty() {
            let ok = match c.relation {
                Relation::Le => !c.rhs.is_negative(),
                Relation::Eq => c.rhs.is_zero(),
                Relation::Ge => !c.rhs.is_positive(),
            };
            if !ok {
                return LpOutcome::Infeasible;
            }
            continue;
        }
        rows.push((coeffs, c.relation, c.rhs.clone()));
    }
    let reduced_objective: Vec<Rational> = free.iter().map(|&j| objective[j].clone()).collect();
    match Tableau::solve(free.len(), &reduced_objective, rows) {
        Solved::Optimal(x_free, value) => {
            let mut witness = vec![Rational::zero(); n];
            for (k, &j) in free.iter().enumerate() {
                witness[j] = x_free[k].clone();
            }
            debug_assert!(constraints.iter().all(|c| c.is_satisfied_by(&witness)));
            LpOutcome::Optimal { value, witness }
        }
        Solved::Infeasible => LpOutcome::Infeasible,
        Solved::Unbounded => LpOutcome::Unbounded,
    }
}

/// Variables forced to zero: a row `Σ a_j x_j ≤ 0` (or `= 0`) with every
/// remaining `a_j ≥ 0` pins each positive-coefficient variable, and symmetrically for `≥`.
fn presolve(n: usize, constraints: &[Constraint]) -> Vec<bool> {
    let mut fixed = vec![false; n];
    loop {
        let mut changed = false;
        for c in constraints {
            if !c.rhs.is_zero() {
                continue;
            }
            let live = || c.coeffs.iter().filter(|(j, _)| !fixed[*j]);
            let sign_ok = |positive: bool| live().all(|(_, a)| if positive { !a.is_negative() } else { !a.is_positive() });
            let pins = match c.relation {
                Relation::Le => sign_ok(true),
                Relation::Ge => sign_ok(false),
                Relation::Eq => sign_ok(true) || sign_ok(false),
            };
            if pins {
                let targets: Vec<usize> = live().filter(|(_, a)| !a.is_zero()).map(|(j, _)| *j).collect();
                for j in targets {
                    fixed[j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return fixed;
        }
    }
}

enum Solved {
    Optimal(Vec<Rational>, Rational),
    Infeasible,
    Unbounded,
}

/// Dense tableau in canonical form: basic columns are unit vectors.
struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    artificial_start: usize,
}

impl Tableau {
    fn solve(n: usize, objective: &[Rational], rows: Vec<Row>) -> Solved {
        let slack_count = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let needs_artificial: Vec<bool> = rows
            .iter()
            .map(|(_, rel, rhs)| {
                let flipped = rhs.is_negative();
                !matches!((rel, flipped), (Relation::Le, false) | (Relation::Ge, true))
            })
            .collect();
        let artificial_start = n + slack_count;
        let width = artificial_start + needs_artificial.iter().filter(|x| **x).count();
        let mut a = Vec::with_capacity(rows.len());
        let mut b = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut slack, mut artificial) = (n, artificial_start);
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for (j, v) in coeffs {
                row[j] = v;
            }
            match rel {
                Relation::Le => row[slack] = Rational::one(),
                Relation::Ge => row[slack] = -Rational::one(),
                Relation::Eq => {}
            }
            let mut rhs = rhs;
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -std::mem::take(v);
                }
                rhs = -rhs;
            }
            if needs_artificial[i] {
                row[artificial] = Rational::one();
                basis.push(artificial);
                artificial += 1;
            } else {
                basis.push(slack);
            }
            if rel != Relation::Eq {
                slack += 1;
            }
            a.push(row);
            b.push(rhs);
        }
        let mut t = Tableau { a, b, basis, artificial_start };

        let mut phase1 = vec![Rational::zero(); width];
        for v in phase1.iter_mut().skip(artificial_start) {
            *v = -Rational::one();
        }
        match t.optimize(&phase1, width) {
            Some(v) if v.is_zero() => {}
            Some(_) => return Solved::Infeasible,
            None => unreachable!("phase one is bounded"),
        }
        t.drive_out_artificials();

        let mut cost = vec![Rational::zero(); width];
        cost[..n].clone_from_slice(objective);
        match t.optimize(&cost, artificial_start) {
            None => Solved::Unbounded,
            Some(value) => {
                let mut x = vec![Rational::zero(); n];
                for (i, &j) in t.basis.iter().enumerate() {
                    if j < n {
                        x[j] = t.b[i].clone();
                    }
                }
                Solved::Optimal(x, value)
            }
        }
    }

    /// Maximizes `cost` with entering columns restricted to `0..allowed`; `None` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Option<Rational> {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    if !self.a[i][j].is_zero() && !cost[bj].is_zero() {
                        d -= &cost[bj] * &self.a[i][j];
                    }
                }
                d.is_positive()
            });
            let Some(col) = entering else {
                return Some(self.basis.iter().enumerate().map(|(i, &bj)| &cost[bj] * &self.b[i]).sum());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (row, _) = leave?;
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        if !p.is_one() {
            for v in self.a[row].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.b[row] /= &p;
        }
        let pivot_row = self.a[row].clone();
        let pivot_b = self.b[row].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.a.len() {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for &j in &nonzero {
                let delta = &f * &pivot_row[j];
                self.a[i][j] -= delta;
            }
            self.b[i] -= &f * &pivot_b;
        }
        self.basis[row] = col;
    }

    /// After phase one every artificial sits at zero; pivot it out or drop its redundant row.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] < self.artificial_start {
                i += 1;
                continue;
            }
            match (0..self.artificial_start).find(|&j| !self.a[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.a.remove(i);
                    self.b.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn c(coeffs: &[(usize, i64)], relation: Relation, rhs: Rational) -> Constraint {
        Constraint::new(coeffs.iter().map(|&(j, v)| (j, int(v))).collect(), relation, rhs)
    }

    #[test]
    fn simplex_on_unit_simplex() {
        let out = maximize(&[int(1), int(1)], &[c(&[(0, 1), (1, 1)], Relation::Le, int(1))]);
        assert_eq!(out.value(), Some(&int(1)));
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let out = maximize(
            &[int(3), int(5)],
            &[
                c(&[(0, 1)], Relation::Le, int(4)),
                c(&[(1, 2)], Relation::Le, int(12)),
                c(&[(0, 3), (1, 2)], Relation::Le, int(18)),
            ],
        );
        assert_eq!(out, LpOutcome::Optimal { value: int(36), witness: vec![int(2), int(6)] });
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = maximize(&[int(1)], &[c(&[(0, 1)], Relation::Ge, int(2)), c(&[(0, 1)], Relation::Le, int(1))]);
        assert_eq!(infeasible, LpOutcome::Infeasible);
        let unbounded = maximize(&[int(1), int(0)], &[c(&[(0, 1), (1, -1)], Relation::Le, int(1))]);
        assert_eq!(unbounded, LpOutcome::Unbounded);
    }

    #[test]
    fn equality_with_redundant_rows() {
        let system = LinearSystem::from_dense(
            &[vec![int(1), int(1), int(0)], vec![int(0), int(1), int(1)], vec![int(1), int(2), int(1)]],
            vec![rat(1, 2), rat(1, 2), int(1)],
        );
        let out = solve_nonneg(&system);
        let x = out.witness().expect("feasible");
        assert!(system.is_solved_by(x));
        assert!(x.iter().all(|v| !v.is_negative()));
        let negative = LinearSystem::from_dense(&[vec![int(1), int(1)]], vec![int(-1)]);
        assert_eq!(solve_nonneg(&negative), LpOutcome::Infeasible);
    }

    #[test]
    fn presolve_pins_zero_rows() {
        let system = LinearSystem::from_dense(&[vec![int(1), int(1)], vec![int(1), int(0)]], vec![int(0), int(1)]);
        assert_eq!(solve_nonneg(&system), LpOutcome::Infeasible);
    }
}
