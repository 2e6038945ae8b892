//! Residue systems at a single (r+2)-valent vertex.

use super::phylo::TreeNode;
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Subspace};
use crate::rational::{q, to_q_vec, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// One vertex: weighted outgoing directions `theta[k] = w_k n_k` of its r+2
/// flags, which of them are bounded, and marked-point coordinates with exactly
/// one flag at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalVertexModel {
    pub n: usize,
    pub theta: Vec<Vec<i64>>,
    pub bounded: Vec<bool>,
    coords: Vec<Option<Q>>,
}

impl LocalVertexModel {
    /// `coords` has one entry per flag; `None` marks the point at infinity. If
    /// every entry is finite, the last bounded flag (or the last flag) is moved
    /// to infinity by `p -> 1/(p - p_m)`.
    pub fn new(theta: Vec<Vec<i64>>, bounded: Vec<bool>, coords: Vec<Option<Q>>) -> Result<Self> {
        let s = theta.len();
        let bad = |d: String| Error::BadConfiguration { vertex: "<local>".into(), detail: d };
        if s < 3 {
            return Err(bad(format!("valence {s} < 3")));
        }
        if bounded.len() != s || coords.len() != s {
            return Err(bad(format!("expected {s} boundedness flags and coordinates")));
        }
        let n = theta[0].len();
        if theta.iter().any(|t| t.len() != n) {
            return Err(bad("directions of different lengths".into()));
        }
        if (0..n).any(|c| theta.iter().map(|t| t[c]).sum::<i64>() != 0) {
            return Err(bad("directions are not balanced".into()));
        }
        let coords = normalize_coords(coords, &bounded).map_err(bad)?;
        Ok(LocalVertexModel { n, theta, bounded, coords })
    }

    /// Standard vertex in ℝ^{r+1}: e_1..e_{r+1} and -(e_1+...+e_{r+1}).
    pub fn standard(r: usize, bounded: Vec<bool>, coords: Vec<Option<Q>>) -> Result<Self> {
        let n = r + 1;
        let mut theta: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        theta.push(vec![-1; n]);
        Self::new(theta, bounded, coords)
    }

    /// Valence minus two.
    pub fn r(&self) -> usize {
        self.theta.len() - 2
    }

    pub fn valence(&self) -> usize {
        self.theta.len()
    }

    pub fn bounded_count(&self) -> usize {
        self.bounded.iter().filter(|&&b| b).count()
    }

    /// Coordinates after normalization; exactly one is `None`.
    pub fn coords(&self) -> &[Option<Q>] {
        &self.coords
    }

    pub fn infinity_index(&self) -> usize {
        self.coords.iter().position(|c| c.is_none()).unwrap()
    }

    /// Rows of the local system on variables `w_k[c]` at index `k * n + c`.
    pub fn a_rows(&self) -> Vec<Vec<Q>> {
        let (n, s) = (self.n, self.valence());
        let nv = s * n;
        let th: Vec<Vec<Q>> = self.theta.iter().map(|t| to_q_vec(t)).collect();
        let mut rows = Vec::new();
        for k in 0..s {
            if self.bounded[k] {
                let mut row = vec![Q::zero(); nv];
                row[k * n..(k + 1) * n].clone_from_slice(&th[k]);
                rows.push(row);
            } else {
                for c in 0..n {
                    let mut row = vec![Q::zero(); nv];
                    row[k * n + c] = Q::one();
                    rows.push(row);
                }
            }
        }
        for c in 0..n {
            let mut row = vec![Q::zero(); nv];
            for k in 0..s {
                row[k * n + c] = Q::one();
            }
            rows.push(row);
        }
        let m = self.infinity_index();
        let finite: Vec<usize> = (0..s).filter(|&k| k != m).collect();
        let r = self.r();
        let mut poly_rows = vec![vec![Q::zero(); nv]; r];
        for (a, &i) in finite.iter().enumerate() {
            for &j in &finite[a + 1..] {
                let others: Vec<&Q> =
                    finite.iter().filter(|&&l| l != i && l != j).map(|&l| self.coords[l].as_ref().unwrap()).collect();
                let poly = monic_from_roots(&others);
                // a_{i,j} + a_{j,i} = w_j . theta_i + w_i . theta_j
                for (deg, coef) in poly.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let row = &mut poly_rows[deg];
                    for c in 0..n {
                        row[j * n + c] += coef * &th[i][c];
                        row[i * n + c] += coef * &th[j][c];
                    }
                }
            }
        }
        rows.extend(poly_rows);
        rows
    }

    pub fn a_system(&self) -> (RationalMatrix, Subspace) {
        let m = RationalMatrix::from_rows(self.valence() * self.n, self.a_rows());
        let k = m.kernel();
        (m, k)
    }

    /// `a_{i,j} = w_j(theta_i)` for a residue tuple in local coordinates.
    pub fn residue_coefficient(&self, w: &[Q], i: usize, j: usize) -> Q {
        let n = self.n;
        w[j * n..(j + 1) * n].iter().zip(&self.theta[i]).fold(Q::zero(), |acc, (x, &t)| acc + x * q(t))
    }
}

fn normalize_coords(coords: Vec<Option<Q>>, bounded: &[bool]) -> std::result::Result<Vec<Option<Q>>, String> {
    let infs = coords.iter().filter(|c| c.is_none()).count();
    if infs > 1 {
        return Err("more than one coordinate at infinity".into());
    }
    let finite: Vec<&Q> = coords.iter().flatten().collect();
    for (i, a) in finite.iter().enumerate() {
        if finite[i + 1..].contains(a) {
            return Err(format!("repeated coordinate {a}"));
        }
    }
    if infs == 1 {
        return Ok(coords);
    }
    let m = default_infinity(bounded);
    let pm = coords[m].clone().unwrap();
    Ok(coords
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k == m { None } else { Some(Q::one() / (c.unwrap() - &pm)) })
        .collect())
}

/// The flag sent to infinity by default: the last bounded one, else the last.
pub fn default_infinity(bounded: &[bool]) -> usize {
    bounded.iter().rposition(|&b| b).unwrap_or(bounded.len() - 1)
}

/// Coefficients (constant term first) of prod (z - root).
fn monic_from_roots(roots: &[&Q]) -> Vec<Q> {
    let mut p = vec![Q::one()];
    for &a in roots {
        let mut next = vec![Q::zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * a;
        }
        p = next;
    }
    p
}

/// r(s-2) + (n-r-1)(s-1) for s >= 2 bounded flags, 0 otherwise.
pub fn expected_local_dim(r: usize, n: usize, s: usize) -> usize {
    if s < 2 {
        return 0;
    }
    let v = r as i64 * (s as i64 - 2) + (n as i64 - r as i64 - 1) * (s as i64 - 1);
    v.max(0) as usize
}

/// Relations on `b_{i,j}` (i != j) from a rooted binary tree: one row per
/// internal node, summing `b_{l,m}` over ordered pairs of its descendant leaves.
pub struct BSystem {
    pub matrix: RationalMatrix,
    pub rank: usize,
    /// Column index -> (i, j), leaves in sorted label order.
    pub columns: Vec<(usize, usize)>,
}

pub fn b_system(tree: &TreeNode) -> BSystem {
    let leaves: Vec<usize> = tree.leaves().into_iter().collect();
    let mut columns = Vec::new();
    let mut col_of = BTreeMap::new();
    for &i in &leaves {
        for &j in &leaves {
            if i != j {
                col_of.insert((i, j), columns.len());
                columns.push((i, j));
            }
        }
    }
    let mut rows = Vec::new();
    for (set, _) in tree.clusters() {
        let mut row = vec![Q::zero(); columns.len()];
        for &l in &set {
            for &m in &set {
                if l != m {
                    row[col_of[&(l, m)]] = Q::one();
                }
            }
        }
        rows.push(row);
    }
    let matrix = RationalMatrix::from_rows(columns.len(), rows);
    let rank = matrix.rank();
    BSystem { matrix, rank, columns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::higher_valent::phylo::all_shapes;
    use crate::rational::qf;

    fn finite(v: &[i64]) -> Vec<Option<Q>> {
        v.iter().map(|&x| Some(q(x))).collect()
    }

    fn with_inf(v: &[i64]) -> Vec<Option<Q>> {
        let mut c = finite(v);
        c.push(None);
        c
    }

    #[test]
    fn standard_vertex_all_bounded_has_dim_r_squared() {
        for r in 1..=4 {
            let coords = with_inf(&(0..=r as i64).map(|x| x * x + 1).collect::<Vec<_>>());
            let m = LocalVertexModel::standard(r, vec![true; r + 2], coords).unwrap();
            assert_eq!(m.a_system().1.dim(), r * r, "r = {r}");
            assert_eq!(expected_local_dim(r, r + 1, r + 2), r * r);
        }
    }

    #[test]
    fn trivalent_vertex_gives_2n_minus_3() {
        let theta = vec![vec![1, 0, 2, 0], vec![0, 1, -1, 3], vec![-1, -1, -1, -3]];
        let m = LocalVertexModel::new(theta, vec![true; 3], with_inf(&[0, 1])).unwrap();
        assert_eq!(m.a_system().1.dim(), 2 * 4 - 3);
    }

    #[test]
    fn magnified_vertex_has_no_residues() {
        // e1, e2 bounded; weight-2 e3 and e4 unbounded
        let theta = vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -2], vec![1, 1, 2]];
        let m = LocalVertexModel::new(theta, vec![true, true, false, false], with_inf(&[0, 3, 7])).unwrap();
        assert_eq!(m.a_system().1.dim(), 0);
    }

    #[test]
    fn infinity_choice_does_not_matter() {
        let theta = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]];
        let raw = [q(0), q(1), qf(5, 2), q(-3)];
        let mut spaces = Vec::new();
        for m in 0..4 {
            let coords: Vec<Option<Q>> = (0..4)
                .map(|k| if k == m { None } else { Some(Q::one() / (&raw[k] - &raw[m])) })
                .collect();
            spaces.push(LocalVertexModel::new(theta.clone(), vec![true; 4], coords).unwrap().a_system().1);
        }
        let auto = LocalVertexModel::new(theta, vec![true; 4], raw.iter().cloned().map(Some).collect()).unwrap();
        spaces.push(auto.a_system().1);
        for s in &spaces[1..] {
            assert!(s.same_as(&spaces[0]));
        }
    }

    #[test]
    fn highest_coefficient_is_the_total_sum() {
        // A_{r-1} is implied by the other rows: dropping it keeps the kernel
        let m = LocalVertexModel::standard(3, vec![true; 5], with_inf(&[0, 2, 5, 9])).unwrap();
        let rows = m.a_rows();
        let full = RationalMatrix::from_rows(20, rows.clone()).rank();
        let without = RationalMatrix::from_rows(20, rows[..rows.len() - 1].to_vec()).rank();
        assert_eq!(full, without);
    }

    #[test]
    fn repeated_coordinates_are_rejected() {
        assert!(LocalVertexModel::standard(2, vec![true; 4], with_inf(&[0, 1, 1])).is_err());
        assert!(LocalVertexModel::standard(2, vec![true; 4], vec![None, None, Some(q(0)), Some(q(1))]).is_err());
    }

    #[test]
    fn b_system_rank() {
        let b = b_system(&all_shapes(2)[0]);
        assert_eq!(b.rank, 1);
        assert_eq!(b.columns, vec![(0, 1), (1, 0)]);
        for r in 1..=6 {
            for t in all_shapes(r + 1) {
                assert_eq!(b_system(&t).rank, r);
            }
        }
    }
}
