//! Parametrized tropical curves: positions, directions, balancing, degree,
//! combinatorial types and the image graph.

use crate::error::{Error, Result};
use crate::graph::{AbstractGraph, UnionFind};
use crate::rational::{fmt_q, gcd_vec, is_primitive, parse_q, primitive_of_rational, q, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_MAX_DIM: usize = 16;

/// On-disk curve document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub ambient_dim: usize,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub position: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub ends: (String, Option<String>),
    #[serde(default = "one")]
    pub weight: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<i64>>,
}

fn one() -> u32 {
    1
}

/// Direction data shared by curves and combinatorial types: one integer vector
/// per edge, measured from `ends[0]`; `None` only for contracted edges without
/// a virtual direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialType {
    pub graph: AbstractGraph,
    pub n: usize,
    pub directions: Vec<Option<Vec<i64>>>,
}

impl CombinatorialType {
    /// Outgoing primitive direction of a flag.
    pub fn flag_direction(&self, f: usize) -> Option<Vec<i64>> {
        let fl = self.graph.flags()[f];
        let d = self.directions[fl.edge].as_ref()?;
        Some(if fl.end == 0 { d.clone() } else { d.iter().map(|x| -x).collect() })
    }

    /// Outgoing direction times the edge weight.
    pub fn weighted_flag_direction(&self, f: usize) -> Option<Vec<i64>> {
        let w = self.graph.edges()[self.graph.flags()[f].edge].weight as i64;
        self.flag_direction(f).map(|d| d.into_iter().map(|x| x * w).collect())
    }

    pub fn genus(&self) -> usize {
        self.graph.genus()
    }

    pub fn unbounded_count(&self) -> usize {
        self.graph.euler_counts().unbounded_edges
    }

    /// e + (n-3)(1-g)
    pub fn expected_dim(&self) -> i64 {
        expected_dim_formula(self.n, self.genus(), self.unbounded_count())
    }
}

pub fn expected_dim_formula(n: usize, g: usize, e: usize) -> i64 {
    e as i64 + (n as i64 - 3) * (1 - g as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    ty: CombinatorialType,
    positions: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeMap {
    /// weighted direction -> multiplicity
    pub entries: BTreeMap<Vec<i64>, usize>,
    pub e: usize,
}

impl TropicalCurve {
    pub fn from_file(file: &CurveFile) -> Result<Self> {
        Self::from_file_with_limit(file, DEFAULT_MAX_DIM)
    }

    pub fn from_file_with_limit(file: &CurveFile, max_dim: usize) -> Result<Self> {
        let c = Self::from_file_unbalanced(file, max_dim)?;
        if let Some((v, r)) = c.check_balancing().into_iter().next() {
            return Err(Error::Unbalanced { vertex: v, residual: fmt_vec(&r) });
        }
        Ok(c)
    }

    /// Validates everything except balancing.
    pub fn from_file_unbalanced(file: &CurveFile, max_dim: usize) -> Result<Self> {
        let n = file.ambient_dim;
        if n == 0 {
            return Err(Error::Schema("ambient_dim must be positive".into()));
        }
        if n > max_dim {
            return Err(Error::DimensionTooLarge(n, max_dim));
        }
        let graph = AbstractGraph::new(
            file.vertices.iter().map(|v| v.id.clone()).collect(),
            file.edges.iter().map(|e| (e.id.clone(), e.ends.0.clone(), e.ends.1.clone(), e.weight)).collect(),
        )?;
        let mut positions = vec![Vec::new(); graph.vertices().len()];
        for v in &file.vertices {
            if v.position.len() != n {
                return Err(Error::Schema(format!("vertex {:?}: position needs {n} entries", v.id)));
            }
            let p: Option<Vec<Q>> = v.position.iter().map(|s| parse_q(s)).collect();
            let p = p.ok_or_else(|| Error::Schema(format!("vertex {:?}: bad rational in position", v.id)))?;
            positions[graph.vertex_index(&v.id).unwrap()] = p;
        }
        let records: BTreeMap<&str, &EdgeRecord> = file.edges.iter().map(|e| (e.id.as_str(), e)).collect();
        let mut directions = Vec::with_capacity(graph.edges().len());
        for e in graph.edges() {
            let rec = records[e.id.as_str()];
            if let Some(d) = &rec.direction {
                if d.len() != n {
                    return Err(Error::Schema(format!("edge {:?}: direction needs {n} entries", e.id)));
                }
            }
            let given = rec.direction.clone();
            let dir = if !e.bounded {
                let d = given.ok_or_else(|| Error::MissingDirection(e.id.clone()))?;
                if !is_primitive(&d) {
                    return Err(Error::NonPrimitive(e.id.clone()));
                }
                Some(d)
            } else {
                let diff: Vec<Q> =
                    positions[e.ends[1]].iter().zip(&positions[e.ends[0]]).map(|(b, a)| b - a).collect();
                match primitive_of_rational(&diff) {
                    None => match given {
                        Some(d) if d.iter().all(|x| *x == 0) => None,
                        Some(d) if !is_primitive(&d) => return Err(Error::NonPrimitive(e.id.clone())),
                        other => other,
                    },
                    Some(u) => {
                        if let Some(d) = given {
                            if !is_primitive(&d) && gcd_vec(&d) != 0 {
                                return Err(Error::NonPrimitive(e.id.clone()));
                            }
                            if d != u {
                                return Err(Error::DirectionMismatch {
                                    edge: e.id.clone(),
                                    detail: format!(
                                        "position difference is not a positive multiple of direction {}",
                                        fmt_ivec(&d)
                                    ),
                                });
                            }
                        }
                        Some(u)
                    }
                }
            };
            directions.push(dir);
        }
        Ok(TropicalCurve { ty: CombinatorialType { graph, n, directions }, positions })
    }

    /// Builds a curve from already-indexed parts, validating through the file path.
    pub fn from_parts(
        n: usize,
        vertices: Vec<(String, Vec<Q>)>,
        edges: Vec<(String, String, Option<String>, u32, Option<Vec<i64>>)>,
    ) -> Result<Self> {
        let file = CurveFile {
            ambient_dim: n,
            vertices: vertices
                .into_iter()
                .map(|(id, p)| VertexRecord { id, position: p.iter().map(fmt_q).collect() })
                .collect(),
            edges: edges
                .into_iter()
                .map(|(id, a, b, weight, direction)| EdgeRecord { id, ends: (a, b), weight, direction })
                .collect(),
        };
        Self::from_file_with_limit(&file, usize::MAX)
    }

    pub fn to_file(&self) -> CurveFile {
        let g = self.graph();
        CurveFile {
            ambient_dim: self.ty.n,
            vertices: g
                .vertices()
                .iter()
                .zip(&self.positions)
                .map(|(id, p)| VertexRecord { id: id.clone(), position: p.iter().map(fmt_q).collect() })
                .collect(),
            edges: g
                .edges()
                .iter()
                .zip(&self.ty.directions)
                .map(|(e, d)| EdgeRecord {
                    id: e.id.clone(),
                    ends: (g.vertices()[e.ends[0]].clone(), e.bounded.then(|| g.vertices()[e.ends[1]].clone())),
                    weight: e.weight,
                    direction: d.clone(),
                })
                .collect(),
        }
    }

    pub fn graph(&self) -> &AbstractGraph {
        &self.ty.graph
    }

    pub fn n(&self) -> usize {
        self.ty.n
    }

    pub fn position(&self, v: usize) -> &[Q] {
        &self.positions[v]
    }

    pub fn combinatorial_type(&self) -> &CombinatorialType {
        &self.ty
    }

    pub fn edge_direction(&self, e: usize) -> Option<&[i64]> {
        self.ty.directions[e].as_deref()
    }

    pub fn is_contracted(&self, e: usize) -> bool {
        let edge = &self.graph().edges()[e];
        edge.bounded && self.positions[edge.ends[0]] == self.positions[edge.ends[1]]
    }

    /// Lattice length of a bounded edge (0 when contracted).
    pub fn edge_length(&self, e: usize) -> Q {
        let edge = &self.graph().edges()[e];
        assert!(edge.bounded, "unbounded edges have no length");
        match self.edge_direction(e) {
            Some(u) if !self.is_contracted(e) => {
                let k = u.iter().position(|&x| x != 0).unwrap();
                (&self.positions[edge.ends[1]][k] - &self.positions[edge.ends[0]][k]) / q(u[k])
            }
            _ => Q::zero(),
        }
    }

    /// Vertices (or groups of vertices joined by direction-less contracted
    /// edges) whose weighted direction sum is nonzero.
    pub fn check_balancing(&self) -> Vec<(String, Vec<Q>)> {
        let g = self.graph();
        let mut uf = UnionFind::new(g.vertices().len());
        for (i, e) in g.edges().iter().enumerate() {
            if e.bounded && self.ty.directions[i].is_none() {
                uf.union(e.ends[0], e.ends[1]);
            }
        }
        let mut residual: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for v in 0..g.vertices().len() {
            let r = residual.entry(uf.find(v)).or_insert_with(|| vec![Q::zero(); self.n()]);
            for &f in g.flags_at(v) {
                if let Some(d) = self.ty.weighted_flag_direction(f) {
                    for (x, y) in r.iter_mut().zip(d) {
                        *x += q(y);
                    }
                }
            }
        }
        residual
            .into_iter()
            .filter(|(_, r)| r.iter().any(|x| !x.is_zero()))
            .map(|(v, r)| (g.vertices()[v].clone(), r))
            .collect()
    }

    pub fn degree(&self) -> DegreeMap {
        let g = self.graph();
        let mut entries = BTreeMap::new();
        let mut e = 0;
        for (i, edge) in g.edges().iter().enumerate() {
            if !edge.bounded {
                let f = g.flag_of(i, 0).unwrap();
                *entries.entry(self.ty.weighted_flag_direction(f).unwrap()).or_insert(0) += 1;
                e += 1;
            }
        }
        DegreeMap { entries, e }
    }

    pub fn is_immersive(&self) -> bool {
        (0..self.graph().edges().len()).all(|e| !self.is_contracted(e))
    }

    pub fn genus(&self) -> usize {
        self.graph().genus()
    }

    pub fn expected_dim(&self) -> i64 {
        self.ty.expected_dim()
    }

    /// Quotient by the contracted edges.
    pub fn contract_image(&self) -> Result<ImageGraph> {
        let g = self.graph();
        let nv = g.vertices().len();
        let mut uf = UnionFind::new(nv);
        for (i, e) in g.edges().iter().enumerate() {
            if self.is_contracted(i) && !uf.union(e.ends[0], e.ends[1]) {
                return Err(Error::ContractedLoop(g.vertices()[e.ends[0]].clone()));
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..nv {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        // union-find roots are the smallest index, hence the smallest id
        let rep_id = |v: usize| g.vertices()[uf_root(&groups, v)].clone();
        let mut vertices = Vec::new();
        let mut sources = BTreeMap::new();
        for (root, members) in &groups {
            vertices.push((g.vertices()[*root].clone(), self.positions[*root].clone()));
            sources.insert(g.vertices()[*root].clone(), members.iter().map(|&m| g.vertices()[m].clone()).collect());
        }
        let mut edges = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            if self.is_contracted(i) {
                continue;
            }
            edges.push((
                e.id.clone(),
                rep_id(e.ends[0]),
                e.bounded.then(|| rep_id(e.ends[1])),
                e.weight,
                self.ty.directions[i].clone(),
            ));
        }
        let curve = TropicalCurve::from_parts(self.n(), vertices, edges)?;
        let cg = curve.graph();
        let valences = (0..cg.vertices().len())
            .map(|v| (cg.vertices()[v].clone(), (cg.valence(v), cg.bounded_valence(v))))
            .collect();
        Ok(ImageGraph { curve, sources, valences })
    }
}

fn uf_root(groups: &BTreeMap<usize, Vec<usize>>, v: usize) -> usize {
    *groups.iter().find(|(_, m)| m.contains(&v)).unwrap().0
}

/// The image graph: contracted edges collapsed; vertex ids are the smallest
/// source vertex id of each collapsed group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageGraph {
    pub curve: TropicalCurve,
    pub sources: BTreeMap<String, Vec<String>>,
    /// (sigma_v, s_v): valence and number of bounded edges.
    pub valences: BTreeMap<String, (usize, usize)>,
}

pub fn fmt_vec(v: &[Q]) -> String {
    format!("({})", v.iter().map(fmt_q).collect::<Vec<_>>().join(", "))
}

pub fn fmt_ivec(v: &[i64]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

pub fn parse_curve_str(s: &str) -> Result<TropicalCurve> {
    parse_curve_str_with_limit(s, DEFAULT_MAX_DIM)
}

pub fn parse_curve_str_with_limit(s: &str, max_dim: usize) -> Result<TropicalCurve> {
    let file: CurveFile = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
    TropicalCurve::from_file_with_limit(&file, max_dim)
}
