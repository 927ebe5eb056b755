#![allow(dead_code)]

use contextuality::algebra::Distribution;
use contextuality::catalog;
use contextuality::rational::{int, rat};
use contextuality::{EmpiricalModel, Rational, Scenario, Section, Semiring};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The (2,2,2) incidence matrix as printed, rows by context then section.
pub const CHSH_MATRIX: &str = "\
1111000000000000
0000111100000000
0000000011110000
0000000000001111
1010101000000000
0101010100000000
0000000010101010
0000000001010101
1100000011000000
0000110000001100
0011000000110000
0000001100000011
1000100010001000
0100010001000100
0010001000100010
0001000100010001
";

/// The printed signed solution for PR box variant 0, in column order.
pub fn printed_pr_solution() -> Vec<Rational> {
    [(1, 2), (0, 1), (0, 1), (0, 1), (-1, 2), (0, 1), (1, 2), (0, 1), (-1, 2), (1, 2), (0, 1), (0, 1), (1, 2), (0, 1), (0, 1), (0, 1)]
        .iter()
        .map(|&(n, d)| rat(n, d))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All global assignments as value vectors, measurement 0 fastest; independent
/// of the crate's column order.
pub fn all_assignments(scenario: &Scenario) -> Vec<Vec<usize>> {
    let n = scenario.measurement_count();
    let l = scenario.outcome_count();
    (0..l.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let v = k % l;
                    k /= l;
                    v
                })
                .collect()
        })
        .collect()
}

pub fn restrict(values: &[usize], context: &[usize]) -> Section {
    Section::new(context.to_vec(), context.iter().map(|&m| values[m]).collect())
}

/// `S_e` by testing every global assignment.
pub fn brute_force_se(model: &EmpiricalModel) -> Vec<Vec<usize>> {
    let scenario = model.scenario();
    all_assignments(scenario)
        .into_iter()
        .filter(|t| {
            scenario
                .cover()
                .iter()
                .enumerate()
                .all(|(c, context)| !model.table(c).weight_of(&restrict(t, context)).is_zero())
        })
        .collect()
}

pub fn deterministic(scenario: &Scenario, values: &[usize]) -> EmpiricalModel {
    let all: Vec<usize> = (0..scenario.measurement_count()).collect();
    EmpiricalModel::deterministic(scenario.clone(), &Section::new(all, values.to_vec()), Semiring::NonNegative).unwrap()
}

/// Random convex mixture of deterministic models and PR boxes on the CHSH scenario.
pub fn random_chsh_mixture(rng: &mut ChaCha8Rng) -> EmpiricalModel {
    let scenario = catalog::chsh_scenario();
    let parts = rng.random_range(1..=4);
    let mut models = Vec::new();
    let mut weights = Vec::new();
    for _ in 0..parts {
        let m = if rng.random_bool(0.5) {
            catalog::pr_box(rng.random_range(0..8)).unwrap().model.unwrap()
        } else {
            let t: Vec<usize> = (0..4).map(|_| rng.random_range(0..2)).collect();
            deterministic(&scenario, &t)
        };
        models.push(m);
        weights.push(rng.random_range(1..=6i64));
    }
    let total: i64 = weights.iter().sum();
    let parts: Vec<(Rational, &EmpiricalModel)> = weights.iter().map(|&w| rat(w, total)).zip(&models).collect();
    EmpiricalModel::mixture(&parts).unwrap()
}

/// Moves weight inside one table between two sections that disagree on a
/// measurement shared with another context, so that marginal no longer matches.
pub fn signalling_perturbation(rng: &mut ChaCha8Rng, model: &EmpiricalModel) -> EmpiricalModel {
    let scenario = model.scenario();
    let l = scenario.outcome_count();
    loop {
        let c = rng.random_range(0..scenario.cover().len());
        let context = scenario.context(c);
        let shared: Vec<usize> = context.iter().copied().filter(|&m| scenario.contexts_containing(m).len() > 1).collect();
        if shared.is_empty() {
            continue;
        }
        let m = shared[rng.random_range(0..shared.len())];
        let pos = context.iter().position(|&x| x == m).unwrap();
        let table = model.table(c);
        let sections = scenario.sections(context);
        let donors: Vec<usize> = (0..sections.len()).filter(|&i| table.weight(i).is_positive()).collect();
        let from = donors[rng.random_range(0..donors.len())];
        let receivers: Vec<usize> = (0..sections.len()).filter(|&i| sections[i].values()[pos] != sections[from].values()[pos]).collect();
        let to = receivers[rng.random_range(0..receivers.len())];
        let amount = table.weight(from) * rat(rng.random_range(1..=4), 4);
        let mut tables: Vec<Distribution> = model.tables().to_vec();
        let mut values = table.rationals();
        values[from] -= &amount;
        values[to] += &amount;
        tables[c] = Distribution::from_rationals(Semiring::NonNegative, context.to_vec(), l, values).unwrap();
        return EmpiricalModel::raw(scenario.clone(), tables).unwrap();
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Non-contextual fraction by vertex inspection.
///
/// Every one of the `|O|^|X|` deterministic assignments gets a variable; a
/// variable whose assignment hits a zero of the model is pinned to 0 by the
/// constraint on that row. The remaining `k` variables span a bounded
/// polytope `{x ≥ 0, Mx ≤ V}`; every choice of `k` tight constraints is
/// solved by Cramer's rule and the best feasible vertex is returned.
pub fn ncf_by_vertices(model: &EmpiricalModel) -> Rational {
    let scenario = model.scenario();
    let assignments = all_assignments(scenario);
    let mut scale = int(1);
    for t in model.tables() {
        for w in t.rationals() {
            scale = num_integer::Integer::lcm(&scale.to_integer(), w.denom()).into();
        }
    }
    let scale: i128 = scale.to_integer().try_into().unwrap();
    let mut rows: Vec<(Vec<usize>, i128)> = Vec::new();
    let mut free: Vec<usize> = (0..assignments.len()).collect();
    for (c, context) in scenario.cover().iter().enumerate() {
        for (i, s) in scenario.sections(context).iter().enumerate() {
            let v = model.table(c).weight(i);
            let hit: Vec<usize> = (0..assignments.len()).filter(|&j| restrict(&assignments[j], context) == *s).collect();
            if v.is_zero() {
                free.retain(|j| !hit.contains(j));
            } else {
                let b: i128 = (v * Rational::from_integer(scale.into())).to_integer().try_into().unwrap();
                rows.push((hit, b));
            }
        }
    }
    let k = free.len();
    if k == 0 {
        return Rational::zero();
    }
    // Constraint rows over the free variables: `a·x ≤ b`; `-x_i ≤ 0` for positivity.
    let mut constraints: Vec<(Vec<i128>, i128)> = Vec::new();
    for (hit, b) in &rows {
        let a: Vec<i128> = free.iter().map(|j| i128::from(hit.contains(j))).collect();
        if a.iter().any(|&x| x != 0) && !constraints.contains(&(a.clone(), *b)) {
            constraints.push((a, *b));
        }
    }
    for i in 0..k {
        let mut a = vec![0; k];
        a[i] = -1;
        constraints.push((a, 0));
    }
    let mut best: Option<(i128, i128)> = None;
    let mut choice: Vec<usize> = (0..k).collect();
    loop {
        let a: Vec<Vec<i128>> = choice.iter().map(|&r| constraints[r].0.clone()).collect();
        let det = bareiss_det(a.clone());
        if det != 0 {
            let numerators: Vec<i128> = (0..k)
                .map(|col| {
                    let mut ai = a.clone();
                    for (row, &r) in ai.iter_mut().zip(&choice) {
                        row[col] = constraints[r].1;
                    }
                    bareiss_det(ai)
                })
                .collect();
            let (numerators, det): (Vec<i128>, i128) =
                if det < 0 { (numerators.iter().map(|x| -x).collect(), -det) } else { (numerators, det) };
            let feasible = constraints
                .iter()
                .all(|(a, b)| a.iter().zip(&numerators).map(|(x, y)| x * y).sum::<i128>() <= b * det);
            if feasible {
                let value: i128 = numerators.iter().sum();
                if best.is_none_or(|(bv, bd)| value * bd > bv * det) {
                    best = Some((value, det));
                }
            }
        }
        // Next k-subset of the constraints in lexicographic order.
        let m = constraints.len();
        let mut i = k;
        while i > 0 && choice[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        choice[i - 1] += 1;
        for j in i..k {
            choice[j] = choice[j - 1] + 1;
        }
    }
    let (value, det) = best.expect("x = 0 is a feasible vertex");
    Rational::new(value.into(), (det * scale).into())
}

/// Rational weights with denominators up to `max_den`, summing to one.
pub fn random_weights(rng: &mut ChaCha8Rng, parts: usize, max_den: u64) -> Vec<Rational> {
    contextuality::hidden::random_rational_distribution(rng, parts, max_den)
}

pub fn one() -> Rational {
    Rational::one()
}
