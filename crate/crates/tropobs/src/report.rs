//! JSON views of computation results and a plain-text renderer for them.

use crate::curve::TropicalCurve;
use crate::graph::{AbstractGraph, TreeClass};
use crate::higher_valent::compare::CompareReport;
use crate::higher_valent::genus1::Genus1Verdict;
use crate::higher_valent::local::{expected_local_dim, LocalVertexModel};
use crate::higher_valent::phylo::PhyloTree;
use crate::linalg::Subspace;
use crate::obstruction::{AbundancyMap, ObstructionReport};
use crate::rational::{fmt_q, Q};
use crate::resolve::{Deformability, Resolution};
use num_traits::Zero;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "tropctl-report/1";

fn qs(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
}

/// Basis vectors as maps from flag label to covector, nonzero flags only.
pub fn basis_json(basis: &Subspace, labels: &[String], n: usize) -> Value {
    Value::Array(
        basis
            .basis()
            .iter()
            .map(|v| {
                let mut m = Map::new();
                for (f, label) in labels.iter().enumerate() {
                    let w = &v[f * n..(f + 1) * n];
                    if w.iter().any(|x| !x.is_zero()) {
                        m.insert(label.clone(), qs(w));
                    }
                }
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn obstruction_json(r: &ObstructionReport, with_basis: bool) -> Value {
    let mut v = json!({
        "dimH": r.dim_h,
        "paramDim": r.param_dim,
        "expectedDim": r.param_dim - r.dim_h as i64,
        "superabundantDef1": r.superabundant_def1,
        "abundancyRank": r.abundancy_rank,
        "superabundantDef2": r.superabundant_def2,
    });
    if with_basis {
        v["basis"] = basis_json(&r.basis, &r.flag_labels, r.n);
    }
    v
}

pub fn abundancy_json(a: &AbundancyMap, g: &AbstractGraph) -> Value {
    let ids = |es: &[usize]| -> Vec<String> { es.iter().map(|&e| g.edges()[e].id.clone()).collect() };
    json!({
        "rank": a.rank,
        "targetDim": a.target_dim,
        "surjective": a.surjective,
        "columns": ids(&a.columns),
        "cutEdges": ids(&a.cut_edges),
        "matrix": a.matrix.row_vecs().iter().map(|r| qs(r)).collect::<Vec<_>>(),
    })
}

pub fn info_json(c: &TropicalCurve) -> Value {
    let g = c.graph();
    let ec = g.euler_counts();
    let dec = g.loop_decomposition();
    let ids = |es: &mut dyn Iterator<Item = usize>| -> Vec<String> { es.map(|e| g.edges()[e].id.clone()).collect() };
    let degree: Vec<Value> =
        c.degree().entries.iter().map(|(d, m)| json!({"direction": d, "multiplicity": m})).collect();
    let chains: Vec<Value> = dec
        .chains
        .iter()
        .map(|ch| json!({"edges": ids(&mut ch.edges()), "closed": ch.closed}))
        .collect();
    let trees: Vec<Value> = dec
        .tree_components
        .iter()
        .map(|t| {
            json!({
                "edges": ids(&mut t.edges.iter().copied()),
                "class": match t.class { TreeClass::U => "U", TreeClass::B => "B" },
            })
        })
        .collect();
    let max_valence = (0..g.vertices().len()).map(|v| g.valence(v)).max().unwrap_or(0);
    json!({
        "ambientDim": c.n(),
        "genus": c.genus(),
        "vertices": ec.vertices,
        "boundedEdges": ec.bounded_edges,
        "e": ec.unbounded_edges,
        "totalEdges": ec.total_edges,
        "expectedDim": c.expected_dim(),
        "immersive": c.is_immersive(),
        "maxValence": max_valence,
        "degree": degree,
        "loopEdges": ids(&mut dec.loop_edges.iter().copied()),
        "bouquets": dec.bouquets.len(),
        "chains": chains,
        "treeComponents": trees,
    })
}

pub fn deformability_json(d: &Deformability) -> Value {
    json!({"verdict": d.label(), "reason": d.reason()})
}

pub fn genus1_json(v: &Genus1Verdict) -> Value {
    json!({
        "spans": v.spans,
        "spanDim": v.span_dim,
        "guaranteedDimH": v.guaranteed_dim_h,
        "verdict": v.verdict,
    })
}

pub fn compare_json(r: &CompareReport) -> Value {
    json!({
        "d": r.d,
        "d0": r.d0,
        "semicontinuityHolds": r.holds,
        "stabilized": r.stabilized,
        "samples": r.history.iter().map(|(t, d)| json!({"t": fmt_q(t), "d": d})).collect::<Vec<_>>(),
        "trees": r.trees,
    })
}

pub fn phylo_json(t: &PhyloTree) -> Value {
    let clusters: Vec<Value> = t
        .root
        .clusters()
        .into_iter()
        .map(|(s, d)| json!({"leaves": s.iter().map(|i| i + 1).collect::<Vec<_>>(), "depth": d}))
        .collect();
    json!({
        "leaves": t.leaves,
        "internalVertices": t.internal_count(),
        "tree": t.root.render(),
        "clusters": clusters,
        "psiRank": crate::higher_valent::local::b_system(&t.root).rank,
    })
}

pub fn local_model_json(m: &LocalVertexModel, with_basis: bool) -> Value {
    let (_, ker) = m.a_system();
    let s = m.bounded_count();
    let mut v = json!({
        "r": m.r(),
        "n": m.n,
        "boundedFlags": s,
        "infinityFlag": m.infinity_index() + 1,
        "dim": ker.dim(),
        "expectedDim": expected_local_dim(m.r(), m.n, s),
    });
    if with_basis {
        let k = m.valence();
        let basis: Vec<Value> = ker
            .basis()
            .iter()
            .map(|w| {
                let mut a = Map::new();
                for i in 0..k {
                    for j in 0..k {
                        let x = m.residue_coefficient(w, i, j);
                        if i != j && !x.is_zero() {
                            a.insert(format!("a{},{}", i + 1, j + 1), Value::String(fmt_q(&x)));
                        }
                    }
                }
                let flags: Vec<Value> = (0..k).map(|f| qs(&w[f * m.n..(f + 1) * m.n])).collect();
                json!({"flags": flags, "residues": a})
            })
            .collect();
        v["basis"] = Value::Array(basis);
    }
    v
}

pub fn resolution_json(r: &Resolution) -> Value {
    let ty = &r.ty;
    let realization = r.curve.as_ref().map(|c| serde_json::to_value(c.to_file()).unwrap());
    json!({
        "newEdges": r.new_edges,
        "trivalent": ty.graph.is_trivalent(),
        "realizable": r.curve.is_some(),
        "realization": realization,
    })
}

/// Keys printed first in text mode, in this order.
const LEAD: &[&str] = &["valid", "dimH", "d", "d0", "dim", "expectedDim", "paramDim", "genus", "rank", "targetDim"];

/// Plain-text rendering: scalars as `key: value` (dimensions first), nested
/// objects indented, and a `basis` array as a flag-by-flag table.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    let Value::Object(m) = v else {
        out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_else(|| v.to_string())));
        return;
    };
    let mut keys: Vec<&String> = m.keys().collect();
    keys.sort_by_key(|k| (LEAD.iter().position(|l| l == k).unwrap_or(LEAD.len()), k.as_str() == "basis", k.as_str()));
    for k in keys {
        let val = &m[k];
        if k == "basis" {
            render_basis(out, val, indent);
        } else if let Some(s) = scalar(val) {
            out.push_str(&format!("{pad}{k}: {s}\n"));
        } else if let Value::Array(items) = val {
            out.push_str(&format!("{pad}{k}:\n"));
            for it in items {
                match scalar(it) {
                    Some(s) => out.push_str(&format!("{pad}  - {s}\n")),
                    None => {
                        let mut sub = String::new();
                        render_into(&mut sub, it, indent + 4);
                        out.push_str(&format!("{pad}  -\n{sub}"));
                    }
                }
            }
        } else {
            out.push_str(&format!("{pad}{k}:\n"));
            render_into(out, val, indent + 2);
        }
    }
}

fn render_basis(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    let Value::Array(items) = v else { return };
    out.push_str(&format!("{pad}basis: {} vector(s)\n", items.len()));
    for (k, it) in items.iter().enumerate() {
        out.push_str(&format!("{pad}  [{}]\n", k + 1));
        match it {
            Value::Object(m) => {
                let width = m.keys().map(|s| s.chars().count()).max().unwrap_or(0);
                for (label, w) in m {
                    let cell = scalar(w).unwrap_or_else(|| w.to_string());
                    out.push_str(&format!("{pad}    {label:<width$}  {cell}\n"));
                }
            }
            other => render_into(out, other, indent + 4),
        }
    }
}
