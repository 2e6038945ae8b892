//! Ξ at a configuration sampled from Laurent data versus H of the trivalent
//! type those data degenerate to.

use super::laurent::LaurentSeries;
use super::local::default_infinity;
use super::phylo::phylo_tree_labeled;
use super::xi::{xi_map, Configuration};
use crate::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::obstruction::dual_obstruction_chain;
use crate::rational::{fmt_q, q, qf, Q};
use crate::resolve::{resolve_type, StarChoice};
use num_traits::{One, Zero};
use serde_json::Value;
use std::collections::BTreeMap;

/// Per image vertex, one series per flag (sorted flag order); `None` marks the
/// flag at infinity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentData {
    pub vertices: BTreeMap<String, Vec<Option<LaurentSeries>>>,
}

impl LaurentData {
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: String| Error::Schema(format!("Laurent data: {m}"));
        let verts = v.get("vertices").and_then(Value::as_object).ok_or_else(|| bad("missing \"vertices\"".into()))?;
        let mut vertices = BTreeMap::new();
        for (vid, entry) in verts {
            let series = entry
                .get("series")
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("vertex {vid:?} has no \"series\" list")))?;
            let parsed = series
                .iter()
                .map(|s| if s.is_null() { Ok(None) } else { LaurentSeries::from_json(s).map(Some) })
                .collect::<Result<Vec<_>>>()?;
            vertices.insert(vid.clone(), parsed);
        }
        Ok(LaurentData { vertices })
    }

    pub fn parse_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub d: usize,
    pub d0: usize,
    pub holds: bool,
    /// (t, dim ker Ξ) for every sampled t.
    pub history: Vec<(Q, usize)>,
    pub stabilized: bool,
    /// Rendered tree per vertex.
    pub trees: BTreeMap<String, String>,
}

pub const DEFAULT_T0_DENOM: i64 = 1_000_000;
const MAX_SHRINKS: usize = 8;

pub fn default_t0() -> Q {
    qf(1, DEFAULT_T0_DENOM)
}

/// Series of one vertex with the infinity slot made explicit.
fn slots(c: &TropicalCurve, v: usize, series: &[Option<LaurentSeries>]) -> Result<Vec<Option<LaurentSeries>>> {
    let g = c.graph();
    let flags = g.flags_at(v);
    let vid = &g.vertices()[v];
    let bad = |d: String| Error::BadConfiguration { vertex: vid.clone(), detail: d };
    if series.len() == flags.len() {
        if series.iter().filter(|s| s.is_none()).count() != 1 {
            return Err(bad("exactly one series must be null (the flag at infinity)".into()));
        }
        return Ok(series.to_vec());
    }
    if series.len() + 1 == flags.len() && series.iter().all(Option::is_some) {
        let bounded: Vec<bool> = flags.iter().map(|&f| g.edges()[g.flags()[f].edge].bounded).collect();
        let mut s = series.to_vec();
        s.insert(default_infinity(&bounded), None);
        return Ok(s);
    }
    Err(bad(format!("expected {} or {} series, got {}", flags.len() - 1, flags.len(), series.len())))
}

pub fn degeneration_compare(c: &TropicalCurve, data: &LaurentData, t0: &Q) -> Result<CompareReport> {
    if *t0 <= Q::zero() || *t0 >= Q::one() {
        return Err(Error::Precondition(format!("t0 = {} is not in (0, 1)", fmt_q(t0))));
    }
    let image = c.contract_image()?;
    let ic = &image.curve;
    let g = ic.graph();
    let mut full = BTreeMap::new();
    let mut choices = BTreeMap::new();
    let mut trees = BTreeMap::new();
    for (vid, series) in &data.vertices {
        let v = g.vertex_index(vid).ok_or_else(|| Error::BadConfiguration {
            vertex: vid.clone(),
            detail: "not a vertex of the image graph".into(),
        })?;
        let s = slots(ic, v, series)?;
        let root_flag = s.iter().position(Option::is_none).unwrap();
        let items = s.iter().enumerate().filter_map(|(k, x)| x.clone().map(|x| (k, x))).collect();
        let tree = phylo_tree_labeled(items)?;
        trees.insert(vid.clone(), tree.root.render());
        choices.insert(vid.clone(), StarChoice { tree: tree.root, root_flag });
        full.insert(vid.clone(), s);
    }
    let (resolved, _) = resolve_type(ic.combinatorial_type(), &choices)?;
    let d0 = dual_obstruction_chain(&resolved)?.dim_h;
    let sample = |t: &Q| -> Result<usize> {
        let cfg = Configuration {
            vertices: full
                .iter()
                .map(|(vid, s)| (vid.clone(), s.iter().map(|x| x.as_ref().map(|p| p.eval(t))).collect()))
                .collect(),
        };
        Ok(xi_map(c, &cfg)?.report.dim_h)
    };
    let mut t = t0.clone();
    let mut history = vec![(t.clone(), sample(&t)?)];
    let mut repeats = 0;
    while repeats < 2 && history.len() <= MAX_SHRINKS {
        t /= q(1000);
        let d = sample(&t)?;
        repeats = if d == history.last().unwrap().1 { repeats + 1 } else { 0 };
        history.push((t.clone(), d));
    }
    let d = history.last().unwrap().1;
    Ok(CompareReport { d, d0, holds: d <= d0, history, stabilized: repeats >= 2, trees })
}
