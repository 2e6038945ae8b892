//! Genus-one criterion: do the directions at the loop's vertices span ℝⁿ?

use crate::curve::TropicalCurve;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::rational::to_q_vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genus1Verdict {
    pub spans: bool,
    pub span_dim: usize,
    /// n - span_dim; H is the annihilator of the span.
    pub guaranteed_dim_h: usize,
    pub verdict: String,
}

pub fn genus1_loop_criterion(c: &TropicalCurve) -> Result<Genus1Verdict> {
    if c.genus() != 1 {
        return Err(Error::Precondition(format!("genus is {}, the criterion needs genus 1", c.genus())));
    }
    let image = c.contract_image()?;
    let ic = &image.curve;
    let g = ic.graph();
    let dec = g.loop_decomposition();
    let mut dirs = Vec::new();
    for v in 0..g.vertices().len() {
        let flags = g.flags_at(v);
        if flags.iter().any(|&f| dec.in_loop[g.flags()[f].edge]) {
            for &f in flags {
                if let Some(d) = ic.combinatorial_type().flag_direction(f) {
                    dirs.push(to_q_vec(&d));
                }
            }
        }
    }
    let n = c.n();
    let span_dim = Subspace::span(n, dirs).dim();
    let spans = span_dim == n;
    let verdict = if spans {
        "directions at the loop span the ambient space: H = 0 and every pre-log curve of this type is smoothable".into()
    } else {
        format!("directions at the loop span a {span_dim}-dimensional subspace: H is its {}-dimensional annihilator", n - span_dim)
    };
    Ok(Genus1Verdict { spans, span_dim, guaranteed_dim_h: n - span_dim, verdict })
}
