//! Finite Laurent series in `t` with rational coefficients and the partial
//! order used to read trees off marked-point data.

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};
use num_traits::{One, Zero};
use serde_json::Value;
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentSeries {
    terms: BTreeMap<i64, Q>,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Q)>) -> Self {
        let mut s = Self::zero();
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn monomial(exp: i64, coeff: Q) -> Self {
        Self::from_terms([(exp, coeff)])
    }

    fn add_term(&mut self, e: i64, c: Q) {
        let entry = self.terms.entry(e).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with nonzero coefficient; `None` stands for +infinity.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &Q)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Q {
        self.terms.get(&e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.add_term(*e, -c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.add_term(*e, c.clone());
        }
        s
    }

    /// Removes the leading term.
    pub fn strip_leading(&self) -> Self {
        let mut s = self.clone();
        if let Some(e) = self.order() {
            s.terms.remove(&e);
        }
        s
    }

    pub fn eval(&self, t: &Q) -> Q {
        assert!(!t.is_zero(), "evaluation at t = 0");
        self.terms.iter().fold(Q::zero(), |acc, (e, c)| acc + c * pow(t, *e))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(e, c)| serde_json::json!([e, fmt_q(c)])).collect())
    }

    /// Parses `[[exp, "coeff"], ...]`; coefficients may also be JSON integers.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Schema(format!("bad Laurent series {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let mut terms = Vec::new();
        for t in arr {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let e = pair[0].as_i64().ok_or_else(bad)?;
            let c = match &pair[1] {
                Value::String(s) => parse_q(s).ok_or_else(bad)?,
                Value::Number(n) => crate::rational::q(n.as_i64().ok_or_else(bad)?),
                _ => return Err(bad()),
            };
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

fn pow(t: &Q, e: i64) -> Q {
    let base = if e < 0 { Q::one() / t } else { t.clone() };
    let mut out = Q::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// `p < q`: at the lowest exponent where they differ, `q` has a nonzero
/// coefficient and `p` has none. Series of equal order with different leading
/// coefficients are incomparable.
pub fn laurent_less(p: &LaurentSeries, q: &LaurentSeries) -> bool {
    match q.sub(p).order() {
        None => false,
        Some(j) => p.coeff(j).is_zero() && !q.coeff(j).is_zero(),
    }
}

pub fn laurent_cmp(p: &LaurentSeries, q: &LaurentSeries) -> Option<Ordering> {
    if p == q {
        Some(Ordering::Equal)
    } else if laurent_less(p, q) {
        Some(Ordering::Less)
    } else if laurent_less(q, p) {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// Sorts labeled series ascending; fails unless they form a strict chain.
pub fn sort_chain(mut items: Vec<(usize, LaurentSeries)>) -> Result<Vec<(usize, LaurentSeries)>> {
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if laurent_cmp(&items[i].1, &items[j].1).map_or(true, |o| o == Ordering::Equal) {
                return Err(Error::Unordered(format!(
                    "series {} and {} are equal or incomparable",
                    items[i].0 + 1,
                    items[j].0 + 1
                )));
            }
        }
    }
    items.sort_by(|a, b| laurent_cmp(&a.1, &b.1).unwrap());
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    pub(crate) fn s(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(terms.iter().map(|&(e, c)| (e, q(c))))
    }

    #[test]
    fn orders() {
        assert_eq!(s(&[(-5, 1), (-2, 1)]).order(), Some(-5));
        assert_eq!(LaurentSeries::zero().order(), None);
        assert_eq!(s(&[(0, 3)]).order(), Some(0));
        assert_eq!(s(&[(1, 1), (1, -1)]).order(), None);
    }

    #[test]
    fn ordering_examples() {
        let p2 = s(&[(-5, 1), (-2, 1)]);
        let p3 = s(&[(-5, 1), (-3, 1)]);
        let p4 = s(&[(-5, 1), (-4, 1), (-3, 1)]);
        let p5 = s(&[(-6, 1), (-5, 1), (-4, 1)]);
        let zero = LaurentSeries::zero();
        assert!(laurent_less(&zero, &p2));
        assert!(laurent_less(&p2, &p3));
        assert!(laurent_less(&p3, &p4));
        assert!(laurent_less(&p4, &p5));
        assert!(!laurent_less(&p2, &p2));
        assert!(laurent_less(&zero, &s(&[(-1, 1)])));
        // same order, different leading coefficient: incomparable
        let a = s(&[(-1, 1)]);
        let b = s(&[(-1, 2)]);
        assert_eq!(laurent_cmp(&a, &b), None);
    }

    #[test]
    fn evaluation() {
        let p = s(&[(-1, 1), (2, 3)]);
        assert_eq!(p.eval(&qf(1, 2)), q(2) + qf(3, 4));
    }

    #[test]
    fn json_roundtrip() {
        let p = LaurentSeries::from_terms([(-2, qf(1, 3)), (4, q(-7))]);
        assert_eq!(LaurentSeries::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn chain_sorting() {
        let items = vec![(0, s(&[(-2, 1)])), (1, LaurentSeries::zero()), (2, s(&[(-1, 1)]))];
        let sorted = sort_chain(items).unwrap();
        assert_eq!(sorted.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 2, 0]);
        assert!(sort_chain(vec![(0, s(&[(-1, 1)])), (1, s(&[(-1, 2)]))]).is_err());
    }
}
