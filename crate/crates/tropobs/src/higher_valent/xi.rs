//! The global map Ξ: per-vertex residue spaces glued along bounded edges.

use super::local::{default_infinity, LocalVertexModel};
use crate::curve::{ImageGraph, TropicalCurve};
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, Subspace};
use crate::obstruction::{abundancy_map, ObstructionReport};
use crate::rational::{fmt_q, parse_q, to_q_vec, Q};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Marked-point coordinates per higher-valent image vertex; `None` is infinity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    pub vertices: BTreeMap<String, Vec<Option<Q>>>,
}

impl Configuration {
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Schema(format!("configuration: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        if let Some(k) = obj.keys().find(|k| *k != "vertices") {
            return Err(bad(&format!("unknown field {k:?}")));
        }
        let verts = obj.get("vertices").and_then(Value::as_object).ok_or_else(|| bad("missing \"vertices\""))?;
        let mut vertices = BTreeMap::new();
        for (vid, entry) in verts {
            let coords = entry
                .get("coords")
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("vertex {vid:?} has no \"coords\" list")))?;
            let parsed = coords
                .iter()
                .map(|c| match c.as_str() {
                    Some("inf") | Some("∞") => Ok(None),
                    Some(s) => parse_q(s).map(Some).ok_or_else(|| bad(&format!("bad coordinate {s:?}"))),
                    None => c.as_i64().map(|i| Some(crate::rational::q(i))).ok_or_else(|| bad("bad coordinate")),
                })
                .collect::<Result<Vec<_>>>()?;
            vertices.insert(vid.clone(), parsed);
        }
        Ok(Configuration { vertices })
    }

    pub fn parse_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let verts: serde_json::Map<String, Value> = self
            .vertices
            .iter()
            .map(|(k, cs)| {
                let cs: Vec<String> = cs.iter().map(|c| c.as_ref().map_or("inf".into(), fmt_q)).collect();
                (k.clone(), json!({ "coords": cs }))
            })
            .collect();
        json!({ "vertices": verts })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XiOptions {
    /// Force flags outside the loop part to zero.
    pub zero_outside_loops: bool,
}

impl Default for XiOptions {
    fn default() -> Self {
        XiOptions { zero_outside_loops: true }
    }
}

#[derive(Clone, Debug)]
pub struct XiResult {
    pub image: ImageGraph,
    pub report: ObstructionReport,
    /// Local models of the higher-valent image vertices, by vertex id.
    pub local_models: BTreeMap<String, LocalVertexModel>,
}

impl XiResult {
    /// Restriction of basis vector `k` to the flags at image vertex `vid`, in
    /// the local variable layout of its model.
    pub fn local_residues(&self, k: usize, vid: &str) -> Option<Vec<Q>> {
        let g = self.image.curve.graph();
        let v = g.vertex_index(vid)?;
        Some(g.flags_at(v).iter().flat_map(|&f| self.report.flag_value(k, f).to_vec()).collect())
    }
}

/// Number of flags at `v` lying on the loop part.
fn loop_flags(c: &TropicalCurve, in_loop: &[bool], v: usize) -> usize {
    let g = c.graph();
    g.flags_at(v).iter().filter(|&&f| in_loop[g.flags()[f].edge]).count()
}

/// Builds the local model of image vertex `v` from its configuration entry.
pub fn local_model_at(c: &TropicalCurve, v: usize, coords: &[Option<Q>]) -> Result<LocalVertexModel> {
    let g = c.graph();
    let t = c.combinatorial_type();
    let vid = &g.vertices()[v];
    let flags = g.flags_at(v);
    let theta: Vec<Vec<i64>> = flags.iter().map(|&f| t.weighted_flag_direction(f).unwrap()).collect();
    let bounded: Vec<bool> = flags.iter().map(|&f| g.edges()[g.flags()[f].edge].bounded).collect();
    let s = flags.len();
    let coords: Vec<Option<Q>> = if coords.len() == s {
        coords.to_vec()
    } else if coords.len() + 1 == s && coords.iter().all(Option::is_some) {
        let m = default_infinity(&bounded);
        let mut c = coords.to_vec();
        c.insert(m, None);
        c
    } else {
        return Err(Error::BadConfiguration {
            vertex: vid.clone(),
            detail: format!("expected {} or {} coordinates, got {}", s - 1, s, coords.len()),
        });
    };
    LocalVertexModel::new(theta, bounded, coords).map_err(|e| match e {
        Error::BadConfiguration { detail, .. } => Error::BadConfiguration { vertex: vid.clone(), detail },
        other => other,
    })
}

pub fn xi_map(c: &TropicalCurve, cfg: &Configuration) -> Result<XiResult> {
    xi_map_with(c, cfg, XiOptions::default())
}

pub fn xi_map_with(c: &TropicalCurve, cfg: &Configuration, opts: XiOptions) -> Result<XiResult> {
    let image = c.contract_image()?;
    for vid in cfg.vertices.keys() {
        if image.curve.graph().vertex_index(vid).is_none() {
            return Err(Error::BadConfiguration {
                vertex: vid.clone(),
                detail: "not a vertex of the image graph (use the smallest id of a contracted group)".into(),
            });
        }
    }
    let ic = &image.curve;
    let g = ic.graph();
    let t = ic.combinatorial_type();
    let n = ic.n();
    let nf = g.flags().len();
    let nv = nf * n;
    let dec = g.loop_decomposition();
    let unit = |f: usize, k: usize| {
        let mut r = vec![Q::zero(); nv];
        r[f * n + k] = Q::one();
        r
    };
    let mut rows: Vec<Vec<Q>> = Vec::new();
    // flags forced to zero are dropped as variables before elimination
    let mut zeroed = vec![false; nf];
    for f in 0..nf {
        let e = g.flags()[f].edge;
        let edge = &g.edges()[e];
        if !edge.bounded || (opts.zero_outside_loops && !dec.in_loop[e]) {
            zeroed[f] = true;
        } else {
            let u = to_q_vec(t.directions[e].as_ref().unwrap());
            let mut r = vec![Q::zero(); nv];
            r[f * n..(f + 1) * n].clone_from_slice(&u);
            rows.push(r);
        }
    }
    for e in 0..g.edges().len() {
        if let (Some(f0), Some(f1)) = (g.flag_of(e, 0), g.flag_of(e, 1)) {
            for k in 0..n {
                let mut r = unit(f0, k);
                r[f1 * n + k] += Q::one();
                rows.push(r);
            }
        }
    }
    let mut local_models = BTreeMap::new();
    for v in 0..g.vertices().len() {
        let flags = g.flags_at(v);
        let vid = &g.vertices()[v];
        if flags.len() <= 3 {
            for k in 0..n {
                let mut r = vec![Q::zero(); nv];
                for &f in flags {
                    r[f * n + k] = Q::one();
                }
                rows.push(r);
            }
            continue;
        }
        if opts.zero_outside_loops && loop_flags(ic, &dec.in_loop, v) == 0 {
            continue;
        }
        let coords = cfg.vertices.get(vid).ok_or_else(|| Error::MissingConfiguration(vid.clone()))?;
        let model = local_model_at(ic, v, coords)?;
        for lr in model.a_rows() {
            let mut r = vec![Q::zero(); nv];
            for (k, &f) in flags.iter().enumerate() {
                r[f * n..(f + 1) * n].clone_from_slice(&lr[k * n..(k + 1) * n]);
            }
            rows.push(r);
        }
        local_models.insert(vid.clone(), model);
    }
    let keep: Vec<usize> = (0..nv).filter(|&x| !zeroed[x / n]).collect();
    let reduced: Vec<Vec<Q>> = rows.into_iter().map(|r| keep.iter().map(|&x| r[x].clone()).collect()).collect();
    let small = RationalMatrix::from_rows(keep.len(), reduced).kernel();
    let ker = Subspace::span(
        nv,
        small
            .into_basis()
            .into_iter()
            .map(|w| {
                let mut v = vec![Q::zero(); nv];
                for (x, val) in keep.iter().zip(w) {
                    v[*x] = val;
                }
                v
            })
            .collect(),
    );
    let mut report = ObstructionReport::new(t, g, ker);
    if let Ok(a) = abundancy_map(ic) {
        report = report.with_abundancy(&a);
    }
    Ok(XiResult { image, report, local_models })
}
