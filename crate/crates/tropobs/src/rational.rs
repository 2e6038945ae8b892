//! Rational numbers and the string form used in curve files ("p/q" or "p").

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// gcd of the entries of an integer vector (0 for the zero vector).
pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x)).abs()
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_vec(v) == 1
}

/// Splits a nonzero integer vector into (weight, primitive direction).
pub fn primitive_part(v: &[i64]) -> Option<(i64, Vec<i64>)> {
    let g = gcd_vec(v);
    if g == 0 {
        return None;
    }
    Some((g, v.iter().map(|x| x / g).collect()))
}

/// Scales a rational vector to the primitive integer vector pointing the same way.
pub fn primitive_of_rational(v: &[Q]) -> Option<Vec<i64>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let out: Option<Vec<i64>> = ints
        .iter()
        .map(|x| {
            let y: BigInt = x / &g;
            i64::try_from(y).ok()
        })
        .collect();
    out
}

pub fn to_q_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}
