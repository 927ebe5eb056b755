mod common;

use contextuality::algebra::Distribution;
use contextuality::catalog;
use contextuality::rational::{int, rat};
use contextuality::{Rational, Section, Semiring};
use num_traits::Zero;
use proptest::prelude::*;

fn nonneg(context: Vec<usize>, values: Vec<Rational>) -> Distribution {
    Distribution::from_rationals(Semiring::NonNegative, context, 2, values).unwrap()
}

fn bits(context: Vec<usize>, b: &[u8]) -> Distribution {
    Distribution::from_bits(context, 2, b.iter().map(|&x| x == 1)).unwrap()
}

#[test]
fn marginalize_examples() {
    let bell_ab = nonneg(vec![0, 2], vec![rat(1, 2), int(0), int(0), rat(1, 2)]);
    assert_eq!(bell_ab.marginalize(&[0]).unwrap().rationals(), vec![rat(1, 2), rat(1, 2)]);
    assert_eq!(bell_ab.marginalize(&[0, 2]).unwrap(), bell_ab);
    assert!(bell_ab.marginalize(&[1]).is_err());

    let hardy_ab = bits(vec![0, 2], &[1, 1, 1, 1]);
    assert_eq!(hardy_ab.marginalize(&[2]).unwrap(), bits(vec![2], &[1, 1]));
}

#[test]
fn delta_examples() {
    let d = Distribution::delta(&Section::new(vec![0, 1], vec![0, 0]), 2, Semiring::NonNegative);
    assert_eq!(d.rationals(), vec![int(1), int(0), int(0), int(0)]);

    let empty = Distribution::delta(&Section::empty(), 2, Semiring::NonNegative);
    assert_eq!(empty.rationals(), vec![int(1)]);
}

#[test]
fn delta_commutes_with_restriction_on_the_hardy_witness() {
    let t = catalog::hardy_witness();
    let scenario = catalog::chsh_scenario();
    for semiring in [Semiring::Boolean, Semiring::NonNegative, Semiring::Signed] {
        let d = Distribution::delta(&t, 2, semiring);
        for c in scenario.cover() {
            assert_eq!(d.marginalize(c).unwrap(), Distribution::delta(&t.restrict(c).unwrap(), 2, semiring));
        }
    }
}

#[test]
fn to_boolean_examples() {
    let bell_ab = nonneg(vec![0, 2], vec![rat(1, 2), int(0), int(0), rat(1, 2)]);
    assert_eq!(bell_ab.to_boolean().unwrap(), bits(vec![0, 2], &[1, 0, 0, 1]));
    let positive = nonneg(vec![0, 2], vec![rat(1, 4), rat(1, 8), rat(1, 8), rat(1, 2)]);
    assert_eq!(positive.to_boolean().unwrap(), bits(vec![0, 2], &[1, 1, 1, 1]));
    assert!(bell_ab.to_signed().to_boolean().is_err());
}

#[test]
fn normalization_is_enforced_per_semiring() {
    assert!(Distribution::from_rationals(Semiring::NonNegative, vec![0], 2, vec![rat(1, 2), rat(1, 3)]).is_err());
    assert!(Distribution::from_rationals(Semiring::NonNegative, vec![0], 2, vec![rat(3, 2), rat(-1, 2)]).is_err());
    assert!(Distribution::from_rationals(Semiring::Signed, vec![0], 2, vec![rat(3, 2), rat(-1, 2)]).is_ok());
    assert!(Distribution::from_bits(vec![0], 2, [false, false]).is_err());
    assert!(Distribution::from_rationals(Semiring::Boolean, vec![0], 2, vec![int(2), int(0)]).is_err());
    assert!(Distribution::from_rationals(Semiring::NonNegative, vec![0], 2, vec![int(1)]).is_err());
}

#[test]
fn product_over_singletons_examples() {
    let half = |m| nonneg(vec![m], vec![rat(1, 2), rat(1, 2)]);
    let uniform = Distribution::product_over_singletons(&[half(0), half(1)], &[0, 1]).unwrap();
    assert_eq!(uniform.rationals(), vec![rat(1, 4); 4]);

    let zero = |m| Distribution::delta(&Section::new(vec![m], vec![0]), 2, Semiring::NonNegative);
    let d = Distribution::product_over_singletons(&[zero(0), zero(1)], &[0, 1]).unwrap();
    assert_eq!(d, Distribution::delta(&Section::new(vec![0, 1], vec![0, 0]), 2, Semiring::NonNegative));

    let thirds = nonneg(vec![0], vec![rat(1, 3), rat(2, 3)]);
    let d = Distribution::product_over_singletons(&[thirds.clone(), half(1)], &[0, 1]).unwrap();
    assert_eq!(d.rationals(), vec![rat(1, 6), rat(1, 3), rat(1, 6), rat(1, 3)]);
    assert_eq!(d.marginalize(&[0]).unwrap(), thirds);
    assert_eq!(d.marginalize(&[1]).unwrap(), half(1));

    assert!(Distribution::product_over_singletons(&[half(0)], &[0, 1]).is_err());
    assert!(Distribution::product_over_singletons(&[half(0), half(1).to_signed()], &[0, 1]).is_err());
}

fn random_distribution(seed: u64, size: usize, l: usize) -> Distribution {
    let mut rng = common::rng(seed);
    let mut weights = common::random_weights(&mut rng, l.pow(size as u32), 12);
    // Leave some holes so the support is interesting.
    for (i, w) in weights.iter_mut().enumerate() {
        if (seed >> (i % 64)) & 3 == 0 {
            *w = Rational::zero();
        }
    }
    let total: Rational = weights.iter().sum();
    if total.is_zero() {
        weights[0] = int(1);
    } else {
        weights.iter_mut().for_each(|w| *w /= &total);
    }
    Distribution::from_rationals(Semiring::NonNegative, (0..size).collect(), l, weights).unwrap()
}

fn subset(context_size: usize, mask: u32) -> Vec<usize> {
    (0..context_size).filter(|i| mask >> i & 1 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginalize_is_functorial(seed in any::<u64>(), size in 0usize..=5, outer in any::<u32>(), inner in any::<u32>()) {
        let d = random_distribution(seed, size, 2);
        let full = (1u32 << size) - 1;
        let outer = outer & full;
        let inner = inner & outer;
        let u1 = subset(size, outer);
        let u2 = subset(size, inner);
        let via = d.marginalize(&u1).unwrap().marginalize(&u2).unwrap();
        let direct = d.marginalize(&u2).unwrap();
        prop_assert_eq!(&via, &direct);
        prop_assert!(direct.is_normalized());
    }

    #[test]
    fn to_boolean_commutes_with_marginalize(seed in any::<u64>(), size in 1usize..=4, l in 2usize..=3, mask in any::<u32>()) {
        let d = random_distribution(seed, size, l);
        let u = subset(size, mask & ((1 << size) - 1));
        prop_assert_eq!(
            d.marginalize(&u).unwrap().to_boolean().unwrap(),
            d.to_boolean().unwrap().marginalize(&u).unwrap()
        );
    }

    #[test]
    fn products_are_normalized_and_marginalize_back(seeds in proptest::collection::vec(any::<u64>(), 1..=4)) {
        let factors: Vec<Distribution> = seeds.iter().enumerate().map(|(m, &s)| {
            let d = random_distribution(s, 1, 3);
            Distribution::from_rationals(Semiring::NonNegative, vec![m], 3, d.rationals()).unwrap()
        }).collect();
        let context: Vec<usize> = (0..factors.len()).collect();
        let p = Distribution::product_over_singletons(&factors, &context).unwrap();
        prop_assert!(p.is_normalized());
        for (m, f) in factors.iter().enumerate() {
            prop_assert_eq!(&p.marginalize(&[m]).unwrap(), f);
        }
    }

    #[test]
    fn rational_field_identities(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50, e in -50i64..50, f in 1i64..50) {
        let (x, y, z) = (rat(a, b), rat(c, d), rat(e, f));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        let sum = &x + &y;
        prop_assert!(num_integer::Integer::gcd(sum.numer(), sum.denom()) == 1.into());
        prop_assert!(*sum.denom() > 0.into());
    }
}
