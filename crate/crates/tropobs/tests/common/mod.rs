//! Helpers shared by the integration tests: data loading and independent
//! oracles that do not go through the library's linear algebra.
#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use tropobs::higher_valent::laurent::LaurentSeries;

pub type Q = BigRational;

pub fn data_path(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Rank by elimination with the largest-magnitude pivot in each column.
pub fn oracle_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).filter(|&r| !rows[r][c].is_zero()).max_by(|&a, &b| {
            rows[a][c].abs().cmp(&rows[b][c].abs())
        }) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in c..cols {
                    let d = &f * &rows[rank][k];
                    rows[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn oracle_rank_i64(rows: &[Vec<i64>]) -> usize {
    oracle_rank(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
}

/// Lowest exponent of a nonzero series, `None` for zero.
pub fn ord(p: &LaurentSeries) -> Option<i64> {
    p.terms().next().map(|(e, _)| e)
}

/// Clusters of the ultrametric `ord(p_i - p_j)`: every ball
/// `{k : ord(p_k - p_i) >= ord(p_j - p_i)}` with its radius.
pub fn ultrametric_clusters(p: &[LaurentSeries]) -> BTreeSet<(BTreeSet<usize>, i64)> {
    let mut out = BTreeSet::new();
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i == j {
                continue;
            }
            let rad = ord(&p[j].sub(&p[i])).unwrap();
            let ball = (0..p.len()).filter(|&k| ord(&p[k].sub(&p[i])).map_or(true, |o| o >= rad)).collect();
            out.insert((ball, rad));
        }
    }
    out
}

pub fn series(terms: &[(i64, i64)]) -> LaurentSeries {
    LaurentSeries::from_terms(terms.iter().map(|&(e, c)| (e, qi(c))))
}

/// The eight series whose tree has the nested cluster structure used as a
/// regression: 0 < {2,3,4,5} < {6,7,8} by order, and so on.
pub fn eight_point_series() -> Vec<LaurentSeries> {
    vec![
        LaurentSeries::zero(),
        series(&[(-1, 1), (1, 1), (3, 1)]),
        series(&[(-1, 1), (1, 1), (2, 1), (4, 1)]),
        series(&[(-1, 1), (1, 1), (2, 1), (3, 1)]),
        series(&[(-1, 1), (0, 1)]),
        series(&[(-2, 1), (1, 1)]),
        series(&[(-2, 1), (0, 1)]),
        series(&[(-2, 1), (-1, 1)]),
    ]
}

pub fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

pub fn one() -> Q {
    Q::one()
}

pub fn counts<K: Ord>(it: impl Iterator<Item = K>) -> BTreeMap<K, usize> {
    let mut m = BTreeMap::new();
    for k in it {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}
