mod common;

use bitvec::prelude::*;
use contextuality::algebra::Distribution;
use contextuality::catalog;
use contextuality::rational::{int, rat};
use contextuality::solve::{
    enumerate_se, maximize, solve_boolean, solve_nonneg, solve_signed, Constraint, LpOutcome, Relation, SignedOutcome,
};
use contextuality::{EmpiricalModel, IncidenceTableau, Rational, Scenario, Semiring};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn system_for(model: &EmpiricalModel) -> (IncidenceTableau, contextuality::solve::LinearSystem) {
    let t = IncidenceTableau::build(model.scenario()).unwrap();
    let v = t.model_vector(model).unwrap();
    let system = t.system(&v, false);
    (t, system)
}

#[test]
fn printed_pr_solution_satisfies_the_system() {
    let pr = catalog::pr_box(0).unwrap();
    let t = IncidenceTableau::build(&pr.scenario).unwrap();
    let x = common::printed_pr_solution();
    let v = t.model_vector(pr.expect_model()).unwrap();
    assert_eq!(t.apply(&x), v.weights);
    assert!(t.augment(&v).is_solved_by(&x));
}

#[test]
fn compatible_catalog_models_have_signed_solutions() {
    for entry in catalog::models().into_iter().filter(|e| e.expect_model().semiring() != Semiring::Boolean) {
        let (_, system) = system_for(entry.expect_model());
        match solve_signed(&system) {
            SignedOutcome::Solvable(s) => assert!(system.is_solved_by(&s.particular), "{}", entry.name),
            SignedOutcome::Unsolvable(_) => panic!("{} has no signed solution", entry.name),
        }
    }
}

#[test]
fn perturbed_bell_model_is_unsolvable_with_a_certificate() {
    let bell = catalog::bell();
    let mut rows: Vec<Vec<Rational>> = bell.expect_model().tables().iter().map(|t| t.rationals()).collect();
    rows[0][0] = rat(3, 8);
    let raw = EmpiricalModel::raw_from_rows(bell.scenario.clone(), Semiring::NonNegative, rows).unwrap();
    let (_, system) = system_for(&raw);
    match solve_signed(&system) {
        SignedOutcome::Unsolvable(certificate) => assert!(certificate.verify(&system)),
        SignedOutcome::Solvable(_) => panic!("signalling model solved"),
    }
}

#[test]
fn signed_solutions_and_certificates_on_random_models() {
    let mut rng = common::rng(3);
    for _ in 0..40 {
        let model = common::random_chsh_mixture(&mut rng);
        let (_, system) = system_for(&model);
        let s = solve_signed(&system);
        let solution = s.solution().expect("compatible model");
        assert!(system.is_solved_by(&solution.particular));
        assert_eq!(solution.rank + solution.nullity, 16);

        let bad = common::signalling_perturbation(&mut rng, &model);
        let (_, system) = system_for(&bad);
        match solve_signed(&system) {
            SignedOutcome::Unsolvable(c) => assert!(c.verify(&system)),
            SignedOutcome::Solvable(_) => panic!("signalling model solved"),
        }
    }
}

#[test]
fn nonnegative_feasibility() {
    for entry in [catalog::bell(), catalog::pr_box(0).unwrap()] {
        let (_, system) = system_for(entry.expect_model());
        assert_eq!(solve_nonneg(&system), LpOutcome::Infeasible, "{}", entry.name);
    }
    let product = catalog::product_model(catalog::chsh_scenario(), &[
        vec![rat(1, 3), rat(2, 3)],
        vec![rat(1, 2), rat(1, 2)],
        vec![rat(1, 5), rat(4, 5)],
        vec![int(1), int(0)],
    ])
    .unwrap();
    let (_, system) = system_for(&product);
    let witness = solve_nonneg(&system).witness().expect("local model").to_vec();
    assert!(witness.iter().all(|x| !x.is_negative()));
    assert!(system.is_solved_by(&witness));
}

#[test]
fn maximize_examples() {
    let x = |j: usize| (j, Rational::one());
    let sum = vec![x(0), x(1), x(2)];
    let outcome = maximize(&[int(1), int(1), int(1)], &[Constraint::new(sum.clone(), Relation::Le, int(1))]);
    assert_eq!(outcome.value(), Some(&int(1)));

    let unbounded = maximize(&[int(1), int(0)], &[Constraint::new(vec![x(1)], Relation::Le, int(1))]);
    assert_eq!(unbounded, LpOutcome::Unbounded);

    let infeasible = maximize(&[int(1)], &[Constraint::new(vec![x(0)], Relation::Ge, int(2)), Constraint::new(vec![x(0)], Relation::Le, int(1))]);
    assert_eq!(infeasible, LpOutcome::Infeasible);
}

/// Solves a square rational system, `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, p);
        b.swap(k, p);
        let pivot = a[k].clone();
        for r in 0..n {
            if r != k && !a[r][k].is_zero() {
                let f = &a[r][k] / &pivot[k];
                for (x, y) in a[r][k..].iter_mut().zip(&pivot[k..]) {
                    *x -= &f * y;
                }
                let delta = &f * &b[k];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Best vertex of `{x ≥ 0, A x ≤ b}` by trying every set of tight constraints.
fn best_vertex(objective: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Rational {
    let n = objective.len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = int(-1);
        rows.push((e, Rational::zero()));
    }
    let m = rows.len();
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != n {
            continue;
        }
        let chosen: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let Some(x) = solve_square(
            chosen.iter().map(|&i| rows[i].0.clone()).collect(),
            chosen.iter().map(|&i| rows[i].1.clone()).collect(),
        ) else {
            continue;
        };
        let feasible = rows.iter().all(|(r, rhs)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>() <= *rhs);
        if feasible {
            let value: Rational = objective.iter().zip(&x).map(|(p, q)| p * q).sum();
            if best.as_ref().is_none_or(|v| value > *v) {
                best = Some(value);
            }
        }
    }
    best.expect("the origin is a vertex")
}

fn random_lp(rng: &mut ChaCha8Rng) -> (Vec<Rational>, Vec<Vec<Rational>>, Vec<Rational>) {
    let n = rng.random_range(1..=4);
    let m = rng.random_range(1..=5);
    let objective = (0..n).map(|_| int(rng.random_range(-3..=5))).collect();
    let mut a: Vec<Vec<Rational>> =
        (0..m).map(|_| (0..n).map(|_| rat(rng.random_range(-2..=6), rng.random_range(1..=3))).collect()).collect();
    // A box keeps the polytope bounded.
    for j in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[j] = int(1);
        a.push(e);
    }
    let b = (0..a.len()).map(|_| rat(rng.random_range(0..=12), rng.random_range(1..=4))).collect();
    (objective, a, b)
}

#[test]
fn simplex_optimum_is_the_best_vertex() {
    let mut rng = common::rng(5);
    for _ in 0..300 {
        let (objective, a, b) = random_lp(&mut rng);
        let constraints: Vec<Constraint> = a
            .iter()
            .zip(&b)
            .map(|(row, rhs)| {
                let coeffs = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
                Constraint::new(coeffs, Relation::Le, rhs.clone())
            })
            .collect();
        match maximize(&objective, &constraints) {
            LpOutcome::Optimal { value, witness } => {
                assert!(witness.iter().all(|x| !x.is_negative()));
                assert!(constraints.iter().all(|c| c.is_satisfied_by(&witness)));
                let achieved: Rational = objective.iter().zip(&witness).map(|(p, q)| p * q).sum();
                assert_eq!(achieved, value);
                assert_eq!(value, best_vertex(&objective, &a, &b));
            }
            other => panic!("bounded feasible LP gave {other:?}"),
        }
    }
}

fn random_boolean_model(rng: &mut ChaCha8Rng, scenario: &Scenario, density: f64) -> EmpiricalModel {
    let l = scenario.outcome_count();
    let tables = scenario
        .cover()
        .iter()
        .map(|c| {
            let size = l.pow(c.len() as u32);
            let mut bits: Vec<bool> = (0..size).map(|_| rng.random_bool(density)).collect();
            bits[rng.random_range(0..size)] = true;
            Distribution::from_bits(c.clone(), l, bits).unwrap()
        })
        .collect();
    EmpiricalModel::raw(scenario.clone(), tables).unwrap()
}

#[test]
fn boolean_examples() {
    let t = IncidenceTableau::build(&catalog::chsh_scenario()).unwrap();
    let hardy = t.model_vector(catalog::hardy_support().expect_model()).unwrap();
    assert!(!solve_boolean(&t, &hardy.support()).solvable);

    let bell = t.model_vector(catalog::bell().expect_model()).unwrap();
    assert!(solve_boolean(&t, &bell.support()).solvable);

    let full = solve_boolean(&t, &bitvec![1; 16]);
    assert!(full.solvable);
    assert_eq!(full.witness, (0..16).collect::<Vec<_>>());
}

#[test]
fn boolean_solver_matches_subset_search() {
    let mut rng = common::rng(9);
    let scenario = catalog::chsh_scenario();
    let t = IncidenceTableau::build(&scenario).unwrap();
    for _ in 0..200 {
        let model = random_boolean_model(&mut rng, &scenario, 0.7);
        let v = t.model_vector(&model).unwrap().support();
        let solution = solve_boolean(&t, &v);
        let admissible: Vec<usize> = (0..16).filter(|&j| t.column_rows(j).iter().all(|&r| v[r as usize])).collect();
        assert_eq!(solution.witness, admissible);
        let brute = (0u32..1 << admissible.len()).any(|mask| {
            let mut or = bitvec![0; t.rows()];
            for (i, &j) in admissible.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &r in t.column_rows(j) {
                        or.set(r as usize, true);
                    }
                }
            }
            or == v
        });
        assert_eq!(solution.solvable, brute);
        if solution.solvable {
            let mut or = bitvec![0; t.rows()];
            for &j in &solution.witness {
                for &r in t.column_rows(j) {
                    or.set(r as usize, true);
                }
            }
            assert_eq!(or, v);
        }
    }
}

#[test]
fn se_examples() {
    let hardy = enumerate_se(catalog::hardy_support().expect_model());
    assert!(hardy.contains(&catalog::hardy_witness()));
    assert!(enumerate_se(&catalog::pr_box(0).unwrap().model.unwrap().support_model().unwrap()).is_empty());
    assert!(enumerate_se(&catalog::ghz(3).unwrap().model.unwrap().support_model().unwrap()).is_empty());
}

#[test]
fn se_matches_exhaustive_search() {
    let mut rng = common::rng(13);
    let scenarios = [
        catalog::chsh_scenario(),
        catalog::bell_scenario(3, 2, 2).unwrap(),
        catalog::bell_scenario(2, 2, 3).unwrap(),
        catalog::triangle_cover().scenario,
        catalog::peres_mermin_cover().scenario,
        catalog::ghz_scenario(4).unwrap(),
    ];
    for s in &scenarios {
        for density in [0.5, 0.8, 0.95] {
            for _ in 0..10 {
                let model = random_boolean_model(&mut rng, s, density);
                let fast: Vec<Vec<usize>> = enumerate_se(&model).iter().map(|t| t.values().to_vec()).collect();
                let mut brute = common::brute_force_se(&model);
                brute.sort_by_key(|t| s.global_column(&common::restrict(t, &(0..t.len()).collect::<Vec<_>>())));
                assert_eq!(fast, brute);
            }
        }
    }
    for entry in catalog::models() {
        let model = entry.expect_model();
        let fast: Vec<Vec<usize>> = enumerate_se(model).iter().map(|t| t.values().to_vec()).collect();
        let mut brute = common::brute_force_se(model);
        brute.sort_by_key(|t| entry.scenario.global_column(&common::restrict(t, &(0..t.len()).collect::<Vec<_>>())));
        assert_eq!(fast, brute, "{}", entry.name);
    }
}

#[test]
fn nonnegative_feasibility_implies_boolean_solvability() {
    let mut rng = common::rng(17);
    let mut models: Vec<EmpiricalModel> = catalog::models()
        .into_iter()
        .filter(|e| e.expect_model().semiring() == Semiring::NonNegative)
        .map(|e| e.model.unwrap())
        .collect();
    models.extend((0..30).map(|_| common::random_chsh_mixture(&mut rng)));
    for model in models {
        let (t, system) = system_for(&model);
        if solve_nonneg(&system).is_feasible() {
            let v = t.model_vector(&model).unwrap().support();
            assert!(solve_boolean(&t, &v).solvable);
        }
    }
}
