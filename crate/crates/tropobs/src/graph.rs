//! Abstract weighted graphs with bounded and unbounded edges, flags, genus and
//! the loop decomposition (loop part, bouquets, chains, hanging trees).

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
    /// `false` for unbounded edges; then `ends[1]` is meaningless.
    pub bounded: bool,
    pub weight: u32,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.bounded && self.ends[0] == self.ends[1]
    }
}

/// A flag: an edge together with one of its vertex ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag {
    pub vertex: usize,
    pub edge: usize,
    /// 0 for the `ends[0]` side, 1 for the `ends[1]` side.
    pub end: u8,
}

/// Edge description used to build graphs: `(id, from, to or None, weight)`.
pub type EdgeSpec = (String, String, Option<String>, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    flags: Vec<Flag>,
    edge_flags: Vec<[Option<usize>; 2]>,
    vertex_flags: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCounts {
    pub vertices: usize,
    pub bounded_edges: usize,
    pub unbounded_edges: usize,
    pub total_edges: usize,
}

impl AbstractGraph {
    /// Builds a connected graph; vertex and edge ids are sorted internally.
    pub fn new(vertex_ids: Vec<String>, edge_specs: Vec<EdgeSpec>) -> Result<Self> {
        let g = Self::build(vertex_ids, edge_specs)?;
        g.check_connected()?;
        Ok(g)
    }

    /// Like [`AbstractGraph::new`] but without the connectivity check.
    pub fn new_unchecked(vertex_ids: Vec<String>, edge_specs: Vec<EdgeSpec>) -> Result<Self> {
        Self::build(vertex_ids, edge_specs)
    }

    fn build(mut vertex_ids: Vec<String>, mut edge_specs: Vec<EdgeSpec>) -> Result<Self> {
        vertex_ids.sort();
        for w in vertex_ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateId(w[0].clone()));
            }
        }
        edge_specs.sort_by(|a, b| a.0.cmp(&b.0));
        for w in edge_specs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateId(w[0].0.clone()));
            }
        }
        let index: BTreeMap<&str, usize> =
            vertex_ids.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |edge: &str, v: &str| {
            index.get(v).copied().ok_or_else(|| Error::UnknownVertex { edge: edge.into(), vertex: v.into() })
        };
        let mut edges = Vec::with_capacity(edge_specs.len());
        for (id, a, b, w) in &edge_specs {
            if *w < 1 {
                return Err(Error::BadWeight(id.clone()));
            }
            let ia = lookup(id, a)?;
            let (ib, bounded) = match b {
                Some(b) => (lookup(id, b)?, true),
                None => (ia, false),
            };
            edges.push(Edge { id: id.clone(), ends: [ia, ib], bounded, weight: *w });
        }
        let mut flags = Vec::new();
        let mut edge_flags = Vec::with_capacity(edges.len());
        let mut vertex_flags = vec![Vec::new(); vertex_ids.len()];
        for (ei, e) in edges.iter().enumerate() {
            let mut ef = [None, None];
            let nends = if e.bounded { 2 } else { 1 };
            for end in 0..nends {
                let f = Flag { vertex: e.ends[end], edge: ei, end: end as u8 };
                ef[end] = Some(flags.len());
                vertex_flags[f.vertex].push(flags.len());
                flags.push(f);
            }
            edge_flags.push(ef);
        }
        for (v, fl) in vertex_flags.iter().enumerate() {
            if fl.is_empty() {
                return Err(Error::Isolated(vertex_ids[v].clone()));
            }
        }
        Ok(AbstractGraph { vertices: vertex_ids, edges, flags, edge_flags, vertex_flags })
    }

    fn check_connected(&self) -> Result<()> {
        let comp = self.components(|_| true);
        if let Some(v) = (0..self.vertices.len()).find(|&v| comp[v] != comp[0]) {
            return Err(Error::Disconnected(self.vertices[v].clone()));
        }
        Ok(())
    }

    /// Component label of every vertex using only bounded edges accepted by `keep`.
    pub fn components(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        for (i, e) in self.edges.iter().enumerate() {
            if e.bounded && keep(i) {
                uf.union(e.ends[0], e.ends[1]);
            }
        }
        (0..self.vertices.len()).map(|v| uf.find(v)).collect()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    /// Flag indices at a vertex, in flag order.
    pub fn flags_at(&self, v: usize) -> &[usize] {
        &self.vertex_flags[v]
    }

    pub fn flag_of(&self, edge: usize, end: u8) -> Option<usize> {
        self.edge_flags[edge][end as usize]
    }

    /// The flag at the other end of a bounded edge.
    pub fn opposite(&self, flag: usize) -> Option<usize> {
        let f = self.flags[flag];
        self.edge_flags[f.edge][1 - f.end as usize]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertex_flags[v].len()
    }

    pub fn bounded_valence(&self, v: usize) -> usize {
        self.vertex_flags[v].iter().filter(|&&f| self.edges[self.flags[f].edge].bounded).count()
    }

    pub fn is_trivalent(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.valence(v) <= 3)
    }

    pub fn flag_label(&self, f: usize) -> String {
        let fl = self.flags[f];
        let e = &self.edges[fl.edge];
        if e.is_self_loop() {
            format!("{}@{}#{}", e.id, self.vertices[fl.vertex], fl.end)
        } else {
            format!("{}@{}", e.id, self.vertices[fl.vertex])
        }
    }

    pub fn euler_counts(&self) -> EulerCounts {
        let bounded = self.edges.iter().filter(|e| e.bounded).count();
        EulerCounts {
            vertices: self.vertices.len(),
            bounded_edges: bounded,
            unbounded_edges: self.edges.len() - bounded,
            total_edges: self.edges.len(),
        }
    }

    /// First Betti number, ignoring unbounded edges.
    pub fn genus(&self) -> usize {
        let c = self.euler_counts();
        let ncomp = self.components(|_| true).iter().collect::<BTreeSet<_>>().len();
        c.bounded_edges + ncomp - c.vertices
    }

    /// Whether bounded edge `e` is a bridge (self-loops never are).
    pub fn is_bridge(&self, e: usize) -> bool {
        let edge = &self.edges[e];
        if !edge.bounded || edge.is_self_loop() {
            return false;
        }
        let comp = self.components(|i| i != e);
        comp[edge.ends[0]] != comp[edge.ends[1]]
    }

    pub fn loop_decomposition(&self) -> LoopDecomposition {
        let in_loop: Vec<bool> =
            (0..self.edges.len()).map(|e| self.edges[e].bounded && !self.is_bridge(e)).collect();
        let loop_edges: Vec<usize> = (0..self.edges.len()).filter(|&e| in_loop[e]).collect();

        let comp = self.components(|e| in_loop[e]);
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &e in &loop_edges {
            by_root.entry(comp[self.edges[e].ends[0]]).or_default().push(e);
        }
        let mut bouquets: Vec<Vec<usize>> = by_root.into_values().collect();
        bouquets.sort();

        let loop_flags_at = |v: usize| -> Vec<usize> {
            self.vertex_flags[v].iter().copied().filter(|&f| in_loop[self.flags[f].edge]).collect()
        };
        let mut on_loop = vec![false; self.vertices.len()];
        for &e in &loop_edges {
            on_loop[self.edges[e].ends[0]] = true;
            on_loop[self.edges[e].ends[1]] = true;
        }
        let is_branch = |v: usize| on_loop[v] && loop_flags_at(v).len() != 2;

        let mut used = vec![false; self.edges.len()];
        let mut chains = Vec::new();
        let walk = |start_flag: usize, used: &mut Vec<bool>| -> Chain {
            let mut steps = Vec::new();
            let mut f = start_flag;
            loop {
                let e = self.flags[f].edge;
                used[e] = true;
                let to = self.opposite(f).expect("loop edges are bounded");
                steps.push(ChainStep { edge: e, from_flag: f, to_flag: to });
                let v = self.flags[to].vertex;
                if is_branch(v) || to == start_flag {
                    break;
                }
                let next = loop_flags_at(v).into_iter().find(|&g| g != to).expect("2-valent in L");
                if next == start_flag {
                    break;
                }
                f = next;
            }
            let closed = self.flags[steps[0].from_flag].vertex == self.flags[steps.last().unwrap().to_flag].vertex
                && !is_branch(self.flags[steps[0].from_flag].vertex);
            Chain { steps, closed }
        };
        for v in 0..self.vertices.len() {
            if !is_branch(v) {
                continue;
            }
            for f in loop_flags_at(v) {
                if !used[self.flags[f].edge] {
                    chains.push(walk(f, &mut used));
                }
            }
        }
        for &e in &loop_edges {
            if !used[e] {
                let start = self.edge_flags[e][0].unwrap();
                chains.push(walk(start, &mut used));
            }
        }

        // Hanging pieces: non-loop edges glued through vertices off the loop part.
        let mut uf = UnionFind::new(self.edges.len());
        for v in 0..self.vertices.len() {
            if on_loop[v] {
                continue;
            }
            let es: Vec<usize> = self.vertex_flags[v].iter().map(|&f| self.flags[f].edge).collect();
            for w in es.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut pieces: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in (0..self.edges.len()).filter(|&e| !in_loop[e]) {
            pieces.entry(uf.find(e)).or_default().push(e);
        }
        let mut tree_components: Vec<TreeComponent> = pieces
            .into_values()
            .map(|edges| {
                let attach = edges
                    .iter()
                    .flat_map(|&e| self.edge_flags[e].iter().flatten().copied())
                    .filter(|&f| on_loop[self.flags[f].vertex])
                    .count();
                let class = if attach == 1 { TreeClass::U } else { TreeClass::B };
                TreeComponent { edges, class }
            })
            .collect();
        tree_components.sort_by(|a, b| a.edges.cmp(&b.edges));

        LoopDecomposition { in_loop, loop_edges, bouquets, chains, tree_components }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub edge: usize,
    pub from_flag: usize,
    pub to_flag: usize,
}

/// A maximal path of the loop part between branch vertices, or a whole cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub steps: Vec<ChainStep>,
    pub closed: bool,
}

impl Chain {
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.edge)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TreeClass {
    U,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeComponent {
    pub edges: Vec<usize>,
    pub class: TreeClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopDecomposition {
    pub in_loop: Vec<bool>,
    pub loop_edges: Vec<usize>,
    pub bouquets: Vec<Vec<usize>>,
    pub chains: Vec<Chain>,
    pub tree_components: Vec<TreeComponent>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Convenience builder for tests and generators.
pub fn graph_from(vertices: &[&str], edges: &[(&str, &str, Option<&str>)]) -> Result<AbstractGraph> {
    AbstractGraph::new(
        vertices.iter().map(|s| s.to_string()).collect(),
        edges.iter().map(|(id, a, b, )| (id.to_string(), a.to_string(), b.map(|s| s.to_string()), 1)).collect(),
    )
}
