//! Rooted trivalent trees read off strictly ordered Laurent data, plus generic
//! rooted binary tree shapes.

use super::laurent::{laurent_less, sort_chain, LaurentSeries};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// A rooted tree; the root edge (towards infinity) sits above the top node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Leaf(usize),
    /// `depth` is the order at which the first child's cluster separates.
    Node { depth: i64, children: Vec<TreeNode> },
}

impl TreeNode {
    pub fn leaves(&self) -> BTreeSet<usize> {
        match self {
            TreeNode::Leaf(i) => BTreeSet::from([*i]),
            TreeNode::Node { children, .. } => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            TreeNode::Leaf(_) => 0,
            TreeNode::Node { children, .. } => 1 + children.iter().map(|c| c.internal_count()).sum::<usize>(),
        }
    }

    /// (leaf set, depth) of every internal node.
    pub fn clusters(&self) -> BTreeSet<(BTreeSet<usize>, i64)> {
        let mut out = BTreeSet::new();
        self.collect_clusters(&mut out);
        out
    }

    fn collect_clusters(&self, out: &mut BTreeSet<(BTreeSet<usize>, i64)>) {
        if let TreeNode::Node { depth, children } = self {
            out.insert((self.leaves(), *depth));
            for c in children {
                c.collect_clusters(out);
            }
        }
    }

    /// Leaf sets of internal nodes, ignoring depths.
    pub fn cluster_sets(&self) -> BTreeSet<BTreeSet<usize>> {
        self.clusters().into_iter().map(|(s, _)| s).collect()
    }

    pub fn is_binary(&self) -> bool {
        match self {
            TreeNode::Leaf(_) => true,
            TreeNode::Node { children, .. } => children.len() == 2 && children.iter().all(|c| c.is_binary()),
        }
    }

    pub fn relabel(&self, map: &dyn Fn(usize) -> usize) -> TreeNode {
        match self {
            TreeNode::Leaf(i) => TreeNode::Leaf(map(*i)),
            TreeNode::Node { depth, children } => {
                TreeNode::Node { depth: *depth, children: children.iter().map(|c| c.relabel(map)).collect() }
            }
        }
    }

    /// Nested-list rendering with 1-based leaves, e.g. `((1,2)@-1,3)@-2`.
    pub fn render(&self) -> String {
        match self {
            TreeNode::Leaf(i) => (i + 1).to_string(),
            TreeNode::Node { depth, children } => {
                format!("({})@{}", children.iter().map(|c| c.render()).collect::<Vec<_>>().join(","), depth)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloTree {
    /// Number of leaves (r + 1).
    pub leaves: usize,
    pub root: TreeNode,
}

impl PhyloTree {
    pub fn internal_count(&self) -> usize {
        self.root.internal_count()
    }
}

/// Tree of series given in ascending order; leaf `k` is the `k`-th series.
pub fn phylo_tree(p: &[LaurentSeries]) -> Result<PhyloTree> {
    for (i, w) in p.windows(2).enumerate() {
        if !laurent_less(&w[0], &w[1]) {
            return Err(Error::Unordered(format!("series {} is not below series {}", i + 1, i + 2)));
        }
    }
    let items: Vec<(usize, LaurentSeries)> = p.iter().cloned().enumerate().collect();
    Ok(PhyloTree { leaves: p.len(), root: build(items)? })
}

/// Tree of labeled series in any order (sorted first).
pub fn phylo_tree_labeled(items: Vec<(usize, LaurentSeries)>) -> Result<PhyloTree> {
    let n = items.len();
    let sorted = sort_chain(items)?;
    Ok(PhyloTree { leaves: n, root: build(sorted)? })
}

fn build(items: Vec<(usize, LaurentSeries)>) -> Result<TreeNode> {
    if items.is_empty() {
        return Err(Error::Unordered("empty series list".into()));
    }
    if items.len() == 1 {
        return Ok(TreeNode::Leaf(items[0].0));
    }
    let zeros: Vec<usize> = items.iter().filter(|(_, s)| s.is_zero()).map(|(i, _)| *i).collect();
    if zeros.len() > 1 {
        return Err(Error::Unordered(format!("series {} and {} coincide", zeros[0] + 1, zeros[1] + 1)));
    }
    let mut groups: BTreeMap<i64, Vec<(usize, LaurentSeries)>> = BTreeMap::new();
    for (i, s) in items.into_iter().filter(|(_, s)| !s.is_zero()) {
        groups.entry(s.order().unwrap()).or_default().push((i, s));
    }
    for (d, g) in &groups {
        let lead = g[0].1.leading().unwrap().1.clone();
        if let Some((i, _)) = g.iter().find(|(_, s)| *s.leading().unwrap().1 != lead) {
            return Err(Error::Unordered(format!(
                "series {} and {} have order {d} but different leading coefficients",
                g[0].0 + 1,
                i + 1
            )));
        }
    }
    let strip = |g: Vec<(usize, LaurentSeries)>| g.into_iter().map(|(i, s)| (i, s.strip_leading())).collect();
    let mut groups: Vec<(i64, Vec<(usize, LaurentSeries)>)> = groups.into_iter().collect();
    let mut tail = match zeros.first() {
        Some(&z) => TreeNode::Leaf(z),
        None => {
            let (_, last) = groups.pop().unwrap();
            build(strip(last))?
        }
    };
    while let Some((d, g)) = groups.pop() {
        tail = TreeNode::Node { depth: d, children: vec![build(strip(g))?, tail] };
    }
    Ok(tail)
}

/// `p_{i;j} = p_j - p_i`, labeled by `j` and sorted ascending.
pub fn rebase(p: &[LaurentSeries], i: usize) -> Result<Vec<(usize, LaurentSeries)>> {
    let items = p.iter().enumerate().map(|(j, s)| (j, s.sub(&p[i]))).collect();
    sort_chain(items)
}

/// All rooted binary tree shapes with `leaves` leaves labeled left to right.
pub fn all_shapes(leaves: usize) -> Vec<TreeNode> {
    fn go(start: usize, k: usize) -> Vec<TreeNode> {
        if k == 1 {
            return vec![TreeNode::Leaf(start)];
        }
        let mut out = Vec::new();
        for a in 1..k {
            let b = k - a;
            if a > b {
                break;
            }
            for l in go(start, a) {
                for r in go(start + a, b) {
                    if a == b && shape_key(&r) < shape_key(&l) {
                        continue;
                    }
                    out.push(TreeNode::Node { depth: 0, children: vec![l.clone(), r] });
                }
            }
        }
        out
    }
    go(0, leaves)
}

fn shape_key(t: &TreeNode) -> String {
    match t {
        TreeNode::Leaf(_) => "x".into(),
        TreeNode::Node { children, .. } => {
            let mut ks: Vec<String> = children.iter().map(shape_key).collect();
            ks.sort();
            format!("({})", ks.join(""))
        }
    }
}
