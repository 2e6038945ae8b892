//! Strict feasibility of homogeneous systems `M z > 0` by Fourier-Motzkin
//! elimination, with back-substitution to produce a witness.

use crate::rational::Q;
use num_traits::{One, Signed, Zero};

/// Returns `z` with every row `r` satisfying `r . z > 0`, or `None` when no such
/// `z` exists.
pub fn strictly_positive_point(rows: &[Vec<Q>], nvars: usize) -> Option<Vec<Q>> {
    let rows: Vec<Vec<Q>> = rows.iter().map(|r| normalize(r.clone())).collect();
    solve(dedup(rows), nvars)
}

fn normalize(mut r: Vec<Q>) -> Vec<Q> {
    if let Some(p) = r.iter().find(|x| !x.is_zero()) {
        let s = p.abs();
        for x in r.iter_mut() {
            *x /= &s;
        }
    }
    r
}

fn dedup(mut rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    rows.sort();
    rows.dedup();
    rows
}

fn solve(rows: Vec<Vec<Q>>, nvars: usize) -> Option<Vec<Q>> {
    if rows.iter().any(|r| r.iter().all(|x| x.is_zero())) {
        return None;
    }
    if nvars == 0 {
        return Some(Vec::new());
    }
    let k = nvars - 1;
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in &rows {
        if r[k].is_positive() {
            pos.push(r.clone());
        } else if r[k].is_negative() {
            neg.push(r.clone());
        } else {
            rest.push(r[..k].to_vec());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = Q::one() / p[k].abs();
            let b = Q::one() / n[k].abs();
            let comb: Vec<Q> = (0..k).map(|j| &p[j] * &a + &n[j] * &b).collect();
            rest.push(normalize(comb));
        }
    }
    let y = solve(dedup(rest), k)?;
    let partial = |r: &Vec<Q>| -> Q { (0..k).fold(Q::zero(), |acc, j| acc + &r[j] * &y[j]) };
    // p_k x > -partial  and  n_k x > -partial
    let lower = pos.iter().map(|p| -partial(p) / &p[k]).max();
    let upper = neg.iter().map(|n| -partial(n) / &n[k]).min();
    let x = match (lower, upper) {
        (Some(l), Some(u)) => {
            debug_assert!(l < u);
            (l + u) / Q::from_integer(2.into())
        }
        (Some(l), None) => l + Q::one(),
        (None, Some(u)) => u - Q::one(),
        (None, None) => Q::zero(),
    };
    let mut z = y;
    z.push(x);
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn rows(v: &[Vec<i64>]) -> Vec<Vec<Q>> {
        v.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn check(m: &[Vec<Q>], z: &[Q]) -> bool {
        m.iter().all(|r| r.iter().zip(z).fold(Q::zero(), |a, (x, y)| a + x * y).is_positive())
    }

    #[test]
    fn simple_cases() {
        let m = rows(&[vec![1, 0], vec![0, 1], vec![-1, 1]]);
        let z = strictly_positive_point(&m, 2).unwrap();
        assert!(check(&m, &z));
        let m = rows(&[vec![1, 0], vec![-1, 0]]);
        assert!(strictly_positive_point(&m, 2).is_none());
        let m = rows(&[vec![1, 1], vec![-1, 0], vec![0, -1]]);
        assert!(strictly_positive_point(&m, 2).is_none());
        assert!(strictly_positive_point(&[], 3).is_some());
    }

    proptest! {
        #[test]
        fn witness_is_valid(m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 3), 1..6)) {
            let m = rows(&m);
            if let Some(z) = strictly_positive_point(&m, 3) {
                prop_assert!(check(&m, &z));
            } else {
                // no small integer point works either
                for a in -4i64..5 { for b in -4i64..5 { for c in -4i64..5 {
                    prop_assert!(!check(&m, &[q(a), q(b), q(c)]));
                }}}
            }
        }
    }
}
