//! Dense exact linear algebra over the rationals.
//!
//! Elimination pivots on the lowest column index and skips zero entries, which
//! keeps the (very sparse) constraint systems of this crate cheap enough.

use crate::rational::Q;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Q>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    /// Nonzero rows of the reduced matrix, in pivot order.
    pub rows: Vec<Vec<Q>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            entries.extend(row);
        }
        RationalMatrix { rows: r, cols, entries }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| crate::rational::q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.entries.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn rref(&self) -> Rref {
        rref_rows(self.row_vecs(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn kernel(&self) -> Subspace {
        kernel_of_rref(&self.rref())
    }

    /// One solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug: Vec<Vec<Q>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let red = rref_rows(aug, self.cols + 1);
        if red.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }
}

/// Gauss-Jordan elimination over a list of rows.
pub fn rref_rows(mut rows: Vec<Vec<Q>>, cols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let nz: Vec<usize> = (c..cols).filter(|&j| !rows[r][j].is_zero()).collect();
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let t = &f * &pivot_row[j];
                row[j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots, cols }
}

pub fn kernel_of_rref(red: &Rref) -> Subspace {
    let n = red.cols;
    let mut is_pivot = vec![false; n];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Q::zero(); n];
        v[f] = Q::one();
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            if !row[f].is_zero() {
                v[p] = -row[f].clone();
            }
        }
        basis.push(v);
    }
    Subspace { ambient: n, basis }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, RationalMatrix::identity(ambient).row_vecs())
    }

    /// Span of arbitrary vectors; the stored basis is the reduced echelon basis.
    pub fn span(ambient: usize, vectors: Vec<Vec<Q>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length mismatch");
        }
        Subspace { ambient, basis: rref_rows(vectors, ambient).rows }
    }

    pub fn span_i64(ambient: usize, vectors: &[Vec<i64>]) -> Self {
        Self::span(ambient, vectors.iter().map(|v| crate::rational::to_q_vec(v)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<Q>> {
        self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref_rows(rows, self.ambient).pivots.len() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    /// Equality decided by mutual containment.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other) && other.is_subspace_of(self)
    }

    /// Covectors vanishing on the subspace, as a subspace of the dual.
    pub fn annihilator(&self) -> Subspace {
        RationalMatrix::from_rows(self.ambient, self.basis.clone()).kernel()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(self.ambient, rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Canonical (reduced echelon) basis of the same subspace.
    pub fn canonical(&self) -> Subspace {
        Self::span(self.ambient, self.basis.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    fn zero_product(m: &RationalMatrix, v: &[Q]) -> bool {
        m.mul_vec(v).iter().all(|x| x.is_zero())
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = RationalMatrix::identity(2);
        assert_eq!(m.kernel().dim(), 0);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn row_of_ones() {
        let m = RationalMatrix::from_i64(&[vec![1, 1]]);
        let k = m.kernel();
        assert_eq!(k.basis(), &[vec![q(-1), q(1)]]);
        assert!(k.same_as(&Subspace::span_i64(2, &[vec![1, -1]])));
    }

    #[test]
    fn zero_matrix_rank() {
        assert_eq!(RationalMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(RationalMatrix::zeros(3, 4).kernel().dim(), 4);
    }

    #[test]
    fn five_by_eight() {
        let m = RationalMatrix::from_i64(&[
            vec![1, 2, 0, 0, 3, 0, 1, 0],
            vec![0, 1, 1, 0, 0, 2, 0, 0],
            vec![2, 0, 0, 1, 0, 0, 0, 5],
            vec![0, 0, 3, 1, 1, 0, 0, 0],
            vec![1, 0, 0, 0, 0, 1, 1, 1],
        ]);
        assert_eq!(m.rank(), 5);
        let k = m.kernel();
        assert_eq!(k.dim(), 3);
        for v in k.basis() {
            assert!(zero_product(&m, v));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let m = RationalMatrix::from_i64(&[vec![1, 1], vec![1, -1]]);
        let x = m.solve(&[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = RationalMatrix::from_i64(&[vec![1, 1], vec![2, 2]]);
        assert!(s.solve(&[q(1), q(3)]).is_none());
        assert!(s.solve(&[q(1), q(2)]).is_some());
    }

    #[test]
    fn annihilator_examples() {
        let s = Subspace::span_i64(3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(s.annihilator().same_as(&Subspace::span_i64(3, &[vec![0, 0, 1]])));
        assert_eq!(Subspace::full(3).annihilator().dim(), 0);
        assert_eq!(Subspace::zero(3).annihilator().dim(), 3);
        // directions (1,1,0) and (0,0,1) of a vertical prism face
        let s = Subspace::span_i64(3, &[vec![-1, -1, 0], vec![0, 0, 1]]);
        assert!(s.annihilator().same_as(&Subspace::span_i64(3, &[vec![1, -1, 0]])));
    }

    #[test]
    fn fractions_survive() {
        let m = RationalMatrix::from_rows(2, vec![vec![qf(1, 3), qf(2, 7)]]);
        let k = m.kernel();
        assert_eq!(k.basis()[0], vec![qf(-6, 7), q(1)]);
    }

    fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
                .prop_map(|rows| RationalMatrix::from_i64(&rows))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.dim(), m.cols());
            for v in k.basis() {
                prop_assert!(zero_product(&m, v));
            }
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn double_annihilator(m in small_matrix()) {
            let s = Subspace::span(m.cols(), m.row_vecs());
            prop_assert!(s.annihilator().annihilator().same_as(&s));
            prop_assert_eq!(s.dim() + s.annihilator().dim(), s.ambient());
        }

        #[test]
        fn kernel_is_deterministic(m in small_matrix()) {
            prop_assert_eq!(m.kernel(), m.clone().kernel());
        }
    }
}
