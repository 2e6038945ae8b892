//! Compatible numberings, the chain description of the dual obstruction space
//! `H` for trivalent types, parameter dimension and the abundancy maps.

use crate::curve::{CombinatorialType, TropicalCurve};
use crate::error::{Error, Result};
use crate::graph::{AbstractGraph, Flag};
use crate::linalg::{RationalMatrix, Subspace};
use crate::rational::{q, to_q_vec, Q};
use num_traits::{One, Zero};
use std::collections::VecDeque;

/// Scalar flag values: unbounded flags vanish, a lone bounded flag vanishes,
/// otherwise bounded flags at a vertex sum to zero; the two flags of an edge
/// sum to zero.
pub fn compatible_numbering_space(g: &AbstractGraph) -> Result<Subspace> {
    if let Some(v) = (0..g.vertices().len()).find(|&v| g.valence(v) > 3) {
        return Err(Error::NotTrivalent(g.vertices()[v].clone()));
    }
    let nf = g.flags().len();
    let mut rows = Vec::new();
    let unit = |i: usize| {
        let mut r = vec![Q::zero(); nf];
        r[i] = Q::one();
        r
    };
    for v in 0..g.vertices().len() {
        let (bounded, unbounded): (Vec<usize>, Vec<usize>) =
            g.flags_at(v).iter().partition(|&&f| g.edges()[g.flags()[f].edge].bounded);
        for f in unbounded {
            rows.push(unit(f));
        }
        match bounded.len() {
            0 => {}
            1 => rows.push(unit(bounded[0])),
            _ => {
                let mut r = vec![Q::zero(); nf];
                for f in bounded {
                    r[f] += Q::one();
                }
                rows.push(r);
            }
        }
    }
    for e in 0..g.edges().len() {
        if let (Some(a), Some(b)) = (g.flag_of(e, 0), g.flag_of(e, 1)) {
            let mut r = vec![Q::zero(); nf];
            r[a] += Q::one();
            r[b] += Q::one();
            rows.push(r);
        }
    }
    Ok(RationalMatrix::from_rows(nf, rows).kernel())
}

/// The dual obstruction space together with the numbers derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub n: usize,
    pub dim_h: usize,
    /// Flag assignments, flattened as `flag * n + coordinate`, canonical basis.
    pub basis: Subspace,
    pub flag_labels: Vec<String>,
    pub param_dim: i64,
    pub superabundant_def1: bool,
    pub abundancy_rank: Option<usize>,
    pub superabundant_def2: Option<bool>,
}

impl ObstructionReport {
    pub fn new(t: &CombinatorialType, flags_graph: &AbstractGraph, basis: Subspace) -> Self {
        let dim_h = basis.dim();
        ObstructionReport {
            n: t.n,
            dim_h,
            basis: basis.canonical(),
            flag_labels: (0..flags_graph.flags().len()).map(|f| flags_graph.flag_label(f)).collect(),
            param_dim: t.expected_dim() + dim_h as i64,
            superabundant_def1: dim_h > 0,
            abundancy_rank: None,
            superabundant_def2: None,
        }
    }

    pub fn with_abundancy(mut self, a: &AbundancyMap) -> Self {
        self.abundancy_rank = Some(a.rank);
        self.superabundant_def2 = Some(!a.surjective);
        self
    }

    /// Value of basis vector `k` on flag `f`.
    pub fn flag_value(&self, k: usize, f: usize) -> &[Q] {
        &self.basis.basis()[k][f * self.n..(f + 1) * self.n]
    }
}

/// Dual obstruction space of a trivalent type via chains of the loop part.
pub fn dual_obstruction_chain(t: &CombinatorialType) -> Result<ObstructionReport> {
    let g = &t.graph;
    if let Some(v) = (0..g.vertices().len()).find(|&v| g.valence(v) > 3) {
        return Err(Error::NotTrivalent(g.vertices()[v].clone()));
    }
    let n = t.n;
    let dec = g.loop_decomposition();
    for &e in &dec.loop_edges {
        if t.directions[e].as_ref().map_or(true, |d| d.iter().all(|&x| x == 0)) {
            return Err(Error::Precondition(format!("loop edge {:?} has no direction", g.edges()[e].id)));
        }
    }
    // per chain: a basis of (U_m)^perp; the chain value is a combination of it
    let perps: Vec<Vec<Vec<Q>>> = dec
        .chains
        .iter()
        .map(|c| {
            let dirs: Vec<Vec<Q>> = c.edges().map(|e| to_q_vec(t.directions[e].as_ref().unwrap())).collect();
            Subspace::span(n, dirs).annihilator().into_basis()
        })
        .collect();
    let mut offset = Vec::with_capacity(perps.len());
    let mut nvars = 0;
    for p in &perps {
        offset.push(nvars);
        nvars += p.len();
    }
    // flag -> list of (chain, sign)
    let nf = g.flags().len();
    let mut flag_terms: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nf];
    for (m, c) in dec.chains.iter().enumerate() {
        for s in &c.steps {
            flag_terms[s.from_flag].push((m, 1));
            flag_terms[s.to_flag].push((m, -1));
        }
    }
    let flag_row = |f: usize, k: usize| -> Vec<Q> {
        let mut r = vec![Q::zero(); nvars];
        for &(m, sign) in &flag_terms[f] {
            for (j, b) in perps[m].iter().enumerate() {
                r[offset[m] + j] += &b[k] * q(sign);
            }
        }
        r
    };
    let on_loop_degree = |v: usize| g.flags_at(v).iter().filter(|&&f| dec.in_loop[g.flags()[f].edge]).count();
    let mut rows = Vec::new();
    for v in 0..g.vertices().len() {
        if on_loop_degree(v) < 3 {
            continue;
        }
        for k in 0..n {
            let mut r = vec![Q::zero(); nvars];
            for &f in g.flags_at(v) {
                for (x, y) in r.iter_mut().zip(flag_row(f, k)) {
                    *x += y;
                }
            }
            rows.push(r);
        }
    }
    let ker = RationalMatrix::from_rows(nvars, rows).kernel();
    let basis: Vec<Vec<Q>> = ker
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![Q::zero(); nf * n];
            for f in 0..nf {
                for k in 0..n {
                    let r = flag_row(f, k);
                    v[f * n + k] = r.iter().zip(c).fold(Q::zero(), |a, (x, y)| a + x * y);
                }
            }
            v
        })
        .collect();
    Ok(ObstructionReport::new(t, g, Subspace::span(nf * n, basis)))
}

/// (n-3)(1-g) + e + dim H
pub fn parameter_dimension(t: &CombinatorialType) -> Result<i64> {
    Ok(dual_obstruction_chain(t)?.param_dim)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbundancyMap {
    pub matrix: RationalMatrix,
    pub rank: usize,
    pub target_dim: usize,
    pub surjective: bool,
    /// Edge indices of the columns.
    pub columns: Vec<usize>,
    pub cut_edges: Vec<usize>,
}

/// Lexicographically first set of bounded edges whose removal leaves a
/// spanning tree.
pub fn cut_edges(g: &AbstractGraph) -> Vec<usize> {
    let target = g.genus();
    let mut cut = Vec::new();
    for e in 0..g.edges().len() {
        if cut.len() == target {
            break;
        }
        if !g.edges()[e].bounded {
            continue;
        }
        let comp = g.components(|i| i != e && !cut.contains(&i));
        if comp.iter().all(|&c| c == comp[0]) {
            cut.push(e);
        }
    }
    cut
}

/// Tree path from `a` to `b` avoiding `cut`: (edge, +1 if traversed from ends[0]).
pub(crate) fn tree_path(g: &AbstractGraph, cut: &[usize], a: usize, b: usize) -> Vec<(usize, i64)> {
    let nv = g.vertices().len();
    let mut prev: Vec<Option<(usize, usize, i64)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        for &f in g.flags_at(v) {
            let Flag { edge, end, .. } = g.flags()[f];
            let e = &g.edges()[edge];
            if !e.bounded || cut.contains(&edge) {
                continue;
            }
            let w = e.ends[1 - end as usize];
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, edge, if end == 0 { 1 } else { -1 }));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = b;
    while v != a {
        let (p, e, s) = prev[v].expect("tree spans the graph");
        path.push((e, s));
        v = p;
    }
    path.reverse();
    path
}

fn require_immersive(c: &TropicalCurve) -> Result<()> {
    if let Some(e) = (0..c.graph().edges().len()).find(|&e| c.is_contracted(e)) {
        return Err(Error::NotImmersive(c.graph().edges()[e].id.clone()));
    }
    Ok(())
}

/// Edge lengths of the loop part -> Hom(H_1, N): each fundamental cycle goes
/// to the sum of its signed, length-scaled edge directions.
pub fn abundancy_map(c: &TropicalCurve) -> Result<AbundancyMap> {
    require_immersive(c)?;
    let g = c.graph();
    let n = c.n();
    let dec = g.loop_decomposition();
    let cut = cut_edges(g);
    let columns = dec.loop_edges.clone();
    let col_of = |e: usize| columns.iter().position(|&x| x == e).expect("cycle edges lie in the loop part");
    let mut rows = Vec::new();
    for &f in &cut {
        let [a, b] = g.edges()[f].ends;
        let mut cycle = vec![(f, 1i64)];
        cycle.extend(tree_path(g, &cut, b, a));
        for k in 0..n {
            let mut r = vec![Q::zero(); columns.len()];
            for &(e, s) in &cycle {
                r[col_of(e)] += q(s * c.edge_direction(e).unwrap()[k]);
            }
            rows.push(r);
        }
    }
    let matrix = RationalMatrix::from_rows(columns.len(), rows);
    let rank = matrix.rank();
    let target_dim = g.genus() * n;
    Ok(AbundancyMap { matrix, rank, target_dim, surjective: rank == target_dim, columns, cut_edges: cut })
}

/// For each cut edge F_i = (a_i, b_i) with direction v_i, the tree-path
/// displacement from a_i to b_i taken modulo v_i.
pub fn reduced_abundancy_map(c: &TropicalCurve) -> Result<AbundancyMap> {
    require_immersive(c)?;
    let g = c.graph();
    let n = c.n();
    let dec = g.loop_decomposition();
    let cut = cut_edges(g);
    let columns: Vec<usize> = dec.loop_edges.iter().copied().filter(|e| !cut.contains(e)).collect();
    let col_of = |e: usize| columns.iter().position(|&x| x == e).expect("tree paths stay in the loop part");
    let mut rows = Vec::new();
    for &f in &cut {
        let [a, b] = g.edges()[f].ends;
        let v = to_q_vec(c.edge_direction(f).unwrap());
        let quotient = Subspace::span(n, vec![v]).annihilator();
        let path = tree_path(g, &cut, a, b);
        for alpha in quotient.basis() {
            let mut r = vec![Q::zero(); columns.len()];
            for &(e, s) in &path {
                let u = c.edge_direction(e).unwrap();
                let val = u.iter().zip(alpha).fold(Q::zero(), |acc, (x, y)| acc + q(*x) * y);
                r[col_of(e)] += val * q(s);
            }
            rows.push(r);
        }
    }
    let matrix = RationalMatrix::from_rows(columns.len(), rows);
    let rank = matrix.rank();
    let target_dim = g.genus() * (n - 1);
    Ok(AbundancyMap { matrix, rank, target_dim, surjective: rank == target_dim, columns, cut_edges: cut })
}

/// Chain-method report for a curve, with the abundancy verdict when defined.
pub fn classify(c: &TropicalCurve) -> Result<ObstructionReport> {
    let rep = dual_obstruction_chain(c.combinatorial_type())?;
    Ok(match abundancy_map(c) {
        Ok(a) => rep.with_abundancy(&a),
        Err(Error::NotImmersive(_)) => rep,
        Err(e) => return Err(e),
    })
}
