//! Replacing higher-valent stars by rooted trees, realizing the result by
//! perturbing edge lengths, and the deformability verdict for contracted edges.

use crate::curve::{CombinatorialType, TropicalCurve};
use crate::error::{Error, Result};
use crate::fm::strictly_positive_point;
use crate::graph::{AbstractGraph, EdgeSpec};
use crate::higher_valent::phylo::TreeNode;
use crate::linalg::RationalMatrix;
use crate::obstruction::{abundancy_map, cut_edges, tree_path};
use crate::rational::{primitive_part, q, Q};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};

/// A star replacement at one vertex: a rooted tree whose leaves are positions
/// in the vertex's flag list; the remaining flag is the root edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarChoice {
    pub tree: TreeNode,
    pub root_flag: usize,
}

impl StarChoice {
    /// Parses a nested list of edge ids, e.g. `[["e1","e2"],"e3"]`, against
    /// the flags at `v`; the unlisted flag becomes the root.
    pub fn from_json(g: &AbstractGraph, v: usize, value: &serde_json::Value) -> Result<Self> {
        let flags = g.flags_at(v);
        let vid = &g.vertices()[v];
        let bad = |d: String| Error::BadConfiguration { vertex: vid.clone(), detail: d };
        fn walk(
            val: &serde_json::Value,
            lookup: &dyn Fn(&str) -> std::result::Result<usize, String>,
        ) -> std::result::Result<TreeNode, String> {
            match val {
                serde_json::Value::String(s) => Ok(TreeNode::Leaf(lookup(s)?)),
                serde_json::Value::Array(a) if a.len() >= 2 => Ok(TreeNode::Node {
                    depth: 0,
                    children: a.iter().map(|x| walk(x, lookup)).collect::<std::result::Result<_, _>>()?,
                }),
                other => Err(format!("bad tree node {other}")),
            }
        }
        let lookup = |id: &str| {
            let hits: Vec<usize> =
                (0..flags.len()).filter(|&k| g.edges()[g.flags()[flags[k]].edge].id == id).collect();
            match hits.as_slice() {
                [k] => Ok(*k),
                [] => Err(format!("edge {id:?} is not incident")),
                _ => Err(format!("edge {id:?} is a self-loop; its flags cannot be named")),
            }
        };
        let tree = walk(value, &lookup).map_err(bad)?;
        let leaves = tree.leaves();
        if leaves.len() != flags.len() - 1 || tree.leaves().len() != count_leaves(&tree) {
            return Err(bad("the tree must list every flag but one exactly once".into()));
        }
        let root_flag = (0..flags.len()).find(|k| !leaves.contains(k)).unwrap();
        Ok(StarChoice { tree, root_flag })
    }
}

fn count_leaves(t: &TreeNode) -> usize {
    match t {
        TreeNode::Leaf(_) => 1,
        TreeNode::Node { children, .. } => children.iter().map(count_leaves).sum(),
    }
}

/// The combinatorial type after replacing the star of each chosen vertex.
/// The top node keeps the vertex id; further nodes are `{v}.{k}`, joined to
/// their parent by edge `{v}/{k}` whose direction balances the subtree below.
/// Also returns the ids of the inserted edges.
pub fn resolve_type(t: &CombinatorialType, choices: &BTreeMap<String, StarChoice>) -> Result<(CombinatorialType, Vec<String>)> {
    let g = &t.graph;
    let mut vertex_ids: Vec<String> = g.vertices().to_vec();
    // (edge id, [end0 vertex, end1 vertex], bounded, weight, direction)
    let mut ends: Vec<[String; 2]> =
        g.edges().iter().map(|e| [g.vertices()[e.ends[0]].clone(), g.vertices()[e.ends[1]].clone()]).collect();
    let mut extra: Vec<(String, String, String, u32, Vec<i64>)> = Vec::new();
    for (vid, choice) in choices {
        let v = g.vertex_index(vid).ok_or_else(|| Error::BadConfiguration {
            vertex: vid.clone(),
            detail: "unknown vertex".into(),
        })?;
        let flags = g.flags_at(v);
        let theta: Vec<Vec<i64>> = flags
            .iter()
            .map(|&f| {
                t.weighted_flag_direction(f).ok_or_else(|| {
                    Error::MissingDirection(g.edges()[g.flags()[f].edge].id.clone())
                })
            })
            .collect::<Result<_>>()?;
        let mut counter = 0usize;
        let mut stack = vec![(&choice.tree, vid.clone())];
        while let Some((node, name)) = stack.pop() {
            let TreeNode::Node { children, .. } = node else { continue };
            for child in children {
                match child {
                    TreeNode::Leaf(k) => {
                        let fl = g.flags()[flags[*k]];
                        ends[fl.edge][fl.end as usize] = name.clone();
                    }
                    TreeNode::Node { .. } => {
                        counter += 1;
                        let cname = format!("{vid}.{counter}");
                        let sum: Vec<i64> = (0..t.n)
                            .map(|c| child.leaves().iter().map(|&k| theta[k][c]).sum::<i64>())
                            .collect();
                        let (w, dir) = primitive_part(&sum).ok_or_else(|| {
                            Error::Infeasible(format!("directions of a cluster at vertex {vid:?} cancel"))
                        })?;
                        vertex_ids.push(cname.clone());
                        extra.push((format!("{vid}/{counter}"), name.clone(), cname.clone(), w as u32, dir));
                        stack.push((child, cname));
                    }
                }
            }
        }
    }
    let mut specs: Vec<EdgeSpec> = Vec::new();
    let mut dirs: BTreeMap<String, Option<Vec<i64>>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        let [a, b] = ends[i].clone();
        specs.push((e.id.clone(), a, e.bounded.then_some(b), e.weight));
        dirs.insert(e.id.clone(), t.directions[i].clone());
    }
    let mut new_edges = Vec::new();
    for (id, a, b, w, d) in extra {
        specs.push((id.clone(), a, Some(b), w));
        dirs.insert(id.clone(), Some(d));
        new_edges.push(id);
    }
    let graph = AbstractGraph::new(vertex_ids, specs)?;
    let directions = graph.edges().iter().map(|e| dirs[&e.id].clone()).collect();
    Ok((CombinatorialType { graph, n: t.n, directions }, new_edges))
}

/// Lengths solving the cycle-closure equations of `t`, equal to `base` up to
/// a perturbation that makes every edge in `grow` strictly longer while
/// keeping all edges positive. `None` if no such perturbation exists.
pub fn perturb_lengths(t: &CombinatorialType, base: &[Q], grow: &[usize]) -> Result<Option<Vec<Q>>> {
    let g = &t.graph;
    let bounded: Vec<usize> = (0..g.edges().len()).filter(|&e| g.edges()[e].bounded).collect();
    let col = |e: usize| bounded.iter().position(|&x| x == e).unwrap();
    let cut = cut_edges(g);
    let mut rows = Vec::new();
    for &f in &cut {
        let [a, b] = g.edges()[f].ends;
        let mut cycle = vec![(f, 1i64)];
        cycle.extend(tree_path(g, &cut, b, a));
        for k in 0..t.n {
            let mut r = vec![Q::zero(); bounded.len()];
            for &(e, s) in &cycle {
                let d = t.directions[e].as_ref().ok_or_else(|| Error::MissingDirection(g.edges()[e].id.clone()))?;
                r[col(e)] += q(s * d[k]);
            }
            rows.push(r);
        }
    }
    let ker = RationalMatrix::from_rows(bounded.len(), rows).kernel();
    let basis = ker.basis();
    // y = sum z_i basis_i; demand y_e > 0 on `grow`
    let lp: Vec<Vec<Q>> = grow.iter().map(|&e| basis.iter().map(|b| b[col(e)].clone()).collect()).collect();
    let z = if grow.is_empty() {
        vec![Q::zero(); basis.len()]
    } else {
        match strictly_positive_point(&lp, basis.len()) {
            Some(z) => z,
            None => return Ok(None),
        }
    };
    let y: Vec<Q> = (0..bounded.len()).map(|i| basis.iter().zip(&z).fold(Q::zero(), |a, (b, zi)| a + &b[i] * zi)).collect();
    let mut eps = Q::one();
    for (i, &e) in bounded.iter().enumerate() {
        if y[i].is_negative() {
            eps = eps.min(&base[e] / (q(2) * y[i].abs()));
        }
    }
    let mut out = base.to_vec();
    for (i, &e) in bounded.iter().enumerate() {
        out[e] = &base[e] + &eps * &y[i];
    }
    Ok(Some(out))
}

/// Positions from lengths by walking a spanning tree from vertex 0, which
/// stays at `origin`.
pub fn realize(t: &CombinatorialType, lengths: &[Q], origin: &[Q]) -> Result<TropicalCurve> {
    let g = &t.graph;
    let nv = g.vertices().len();
    let mut pos: Vec<Option<Vec<Q>>> = vec![None; nv];
    pos[0] = Some(origin.to_vec());
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &f in g.flags_at(v) {
            let fl = g.flags()[f];
            let e = &g.edges()[fl.edge];
            if !e.bounded {
                continue;
            }
            let w = e.ends[1 - fl.end as usize];
            if pos[w].is_none() {
                let d = t.flag_direction(f).ok_or_else(|| Error::MissingDirection(e.id.clone()))?;
                let p = pos[v].as_ref().unwrap().iter().zip(&d).map(|(x, &u)| x + &lengths[fl.edge] * q(u)).collect();
                pos[w] = Some(p);
                queue.push_back(w);
            }
        }
    }
    let vertices = g.vertices().iter().cloned().zip(pos.into_iter().map(Option::unwrap)).collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let b = e.bounded.then(|| g.vertices()[e.ends[1]].clone());
            let dir = if e.bounded && lengths[i].is_positive() { None } else { t.directions[i].clone() };
            (e.id.clone(), g.vertices()[e.ends[0]].clone(), b, e.weight, dir)
        })
        .collect();
    TropicalCurve::from_parts(t.n, vertices, edges)
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub ty: CombinatorialType,
    pub new_edges: Vec<String>,
    /// A realization with all inserted edges of positive length, if one exists.
    pub curve: Option<TropicalCurve>,
}

/// Star replacement on an immersive curve plus an attempted realization.
pub fn resolve_to_trivalent(c: &TropicalCurve, choices: &BTreeMap<String, StarChoice>) -> Result<Resolution> {
    if let Some(e) = (0..c.graph().edges().len()).find(|&e| c.is_contracted(e)) {
        return Err(Error::NotImmersive(c.graph().edges()[e].id.clone()));
    }
    let (ty, new_edges) = resolve_type(c.combinatorial_type(), choices)?;
    let base: Vec<Q> = ty
        .graph
        .edges()
        .iter()
        .map(|e| match c.graph().edge_index(&e.id) {
            Some(i) if e.bounded => c.edge_length(i),
            _ => Q::zero(),
        })
        .collect();
    let grow: Vec<usize> = new_edges.iter().map(|id| ty.graph.edge_index(id).unwrap()).collect();
    let curve = match perturb_lengths(&ty, &base, &grow)? {
        Some(l) => Some(realize(&ty, &l, c.position(0))?),
        None => None,
    };
    Ok(Resolution { ty, new_edges, curve })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deformability {
    Guaranteed(String),
    Refuted(String),
    Undetermined(String),
}

impl Deformability {
    pub fn label(&self) -> &'static str {
        match self {
            Deformability::Guaranteed(_) => "guaranteed",
            Deformability::Refuted(_) => "refuted",
            Deformability::Undetermined(_) => "undetermined",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            Deformability::Guaranteed(r) | Deformability::Refuted(r) | Deformability::Undetermined(r) => r,
        }
    }
}

/// Whether the curve deforms into an immersive one of the same type.
pub fn deformability(c: &TropicalCurve) -> Result<Deformability> {
    let g = c.graph();
    let contracted: Vec<usize> = (0..g.edges().len()).filter(|&e| c.is_contracted(e)).collect();
    if contracted.is_empty() {
        return Ok(Deformability::Guaranteed("the curve is immersive".into()));
    }
    let image = c.contract_image()?;
    let t = c.combinatorial_type();
    if contracted.iter().all(|&e| t.directions[e].is_some()) {
        let base: Vec<Q> = (0..g.edges().len()).map(|e| if g.edges()[e].bounded { c.edge_length(e) } else { Q::zero() }).collect();
        return Ok(match perturb_lengths(t, &base, &contracted)? {
            Some(_) => Deformability::Guaranteed("contracted edges can be given positive length along their directions".into()),
            None => Deformability::Refuted("no length perturbation opens the contracted edges along their directions".into()),
        });
    }
    if abundancy_map(&image.curve)?.surjective {
        return Ok(Deformability::Guaranteed("the abundancy map of the image is surjective".into()));
    }
    Ok(Deformability::Undetermined("contracted edges lack directions and the abundancy map is not surjective".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve_str;
    use crate::obstruction::dual_obstruction_chain;

    fn data(name: &str) -> String {
        std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    // a 4-valent vertex at the origin of the plane with four rays
    const STAR: &str = r#"{"ambient_dim":2,
        "vertices":[{"id":"v","position":["0","0"]}],
        "edges":[{"id":"a","ends":["v",null],"direction":[1,0]},{"id":"b","ends":["v",null],"direction":[0,1]},
                 {"id":"c","ends":["v",null],"direction":[-1,0]},{"id":"d","ends":["v",null],"direction":[0,-1]}]}"#;

    #[test]
    fn tree_curve_resolves() {
        let c = parse_curve_str(STAR).unwrap();
        let choice = StarChoice::from_json(c.graph(), 0, &serde_json::json!([["a", "b"], "c"])).unwrap();
        assert_eq!(choice.root_flag, 3);
        let res = resolve_to_trivalent(&c, &BTreeMap::from([("v".to_string(), choice)])).unwrap();
        assert_eq!(res.new_edges, vec!["v/1".to_string()]);
        assert!(res.ty.graph.is_trivalent());
        let r = res.curve.unwrap();
        let e = r.graph().edge_index("v/1").unwrap();
        assert!(r.edge_length(e) > Q::zero());
        assert_eq!(r.combinatorial_type().directions[e], Some(vec![1, 1]));
    }

    #[test]
    fn cancelling_cluster_is_rejected() {
        let c = parse_curve_str(STAR).unwrap();
        let choice = StarChoice::from_json(c.graph(), 0, &serde_json::json!([["a", "c"], "b"])).unwrap();
        assert!(matches!(
            resolve_to_trivalent(&c, &BTreeMap::from([("v".to_string(), choice)])),
            Err(Error::Infeasible(_))
        ));
        assert!(StarChoice::from_json(c.graph(), 0, &serde_json::json!([["a", "a"], "b"])).is_err());
        assert!(StarChoice::from_json(c.graph(), 0, &serde_json::json!([["a", "x"], "b"])).is_err());
    }

    #[test]
    fn two_planes_verdicts() {
        let c = parse_curve_str(&data("example_two_planes.json")).unwrap();
        assert_eq!(deformability(&c).unwrap().label(), "guaranteed");
        // the type with the virtual direction is trivalent and has H of dim 2
        assert_eq!(dual_obstruction_chain(c.combinatorial_type()).unwrap().dim_h, 2);
        let sq = parse_curve_str(&data("square_loop.json")).unwrap();
        assert_eq!(deformability(&sq).unwrap().label(), "guaranteed");
    }

    #[test]
    fn contracted_edge_that_cannot_open() {
        // a triangle whose edge ab is contracted with a virtual direction
        // leaving the plane of the other two: closure forbids opening it
        let s = r#"{"ambient_dim":3,
            "vertices":[{"id":"a","position":["0","0","0"]},{"id":"b","position":["0","0","0"]},
                        {"id":"c","position":["1","1","0"]}],
            "edges":[{"id":"ab","ends":["a","b"],"direction":[0,0,1]},
                     {"id":"ac","ends":["a","c"]},{"id":"bc","ends":["b","c"]},
                     {"id":"ua","ends":["a",null],"direction":[-1,-1,-1]},
                     {"id":"ub","ends":["b",null],"direction":[-1,-1,1]},
                     {"id":"uc","ends":["c",null],"weight":2,"direction":[1,1,0]}]}"#;
        let c = parse_curve_str(s).unwrap();
        assert_eq!(deformability(&c).unwrap().label(), "refuted");
    }
}
