//! Arbitrary-precision rationals and the `"p/q"` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Always reduced, positive denominator, zero is `0/1`.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = |msg: &str| Error::parse(format!("\"{t}\""), msg);
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
    let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

/// `"3/8"`, `"-1/2"`, `"0"`, `"1"`.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Always `p/q`, integers included.
pub fn format_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Closest rational to `x` with denominator at most `max_denom`.
pub fn limit_denominator(x: &Rational, max_denom: &BigInt) -> Rational {
    assert!(max_denom >= &BigInt::one(), "max_denom must be positive");
    if x.denom() <= max_denom {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_denom {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (max_denom - &q0).div_floor(&q1);
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

/// Best rational approximation of a finite float.
pub fn approximate(x: f64, max_denom: u64) -> Option<Rational> {
    let exact = BigRational::from_float(x)?;
    Some(limit_denominator(&exact, &BigInt::from(max_denom)))
}

/// Serde adapter storing a rational as its `"p/q"` string.
pub mod as_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}
