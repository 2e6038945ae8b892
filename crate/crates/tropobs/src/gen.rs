//! Seeded random instances: graphs, balanced curves, Laurent tuples.

use crate::curve::TropicalCurve;
use crate::graph::{AbstractGraph, EdgeSpec};
use crate::higher_valent::laurent::{sort_chain, LaurentSeries};
use crate::linalg::RationalMatrix;
use crate::rational::{primitive_part, q, qf, Q};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;

/// A connected multigraph (self-loops allowed) of the given genus whose
/// vertex degrees stay within `cap[v]`. Returns the edge list.
fn skeleton<R: Rng>(rng: &mut R, caps: &[usize], genus: usize) -> Option<Vec<(usize, usize)>> {
    let nv = caps.len();
    let mut deg = vec![0usize; nv];
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (1..nv).collect();
    order.shuffle(rng);
    let mut placed = vec![0usize];
    for v in order {
        let open: Vec<usize> = placed.iter().copied().filter(|&u| deg[u] < caps[u]).collect();
        let &u = open.choose(rng)?;
        edges.push((u, v));
        deg[u] += 1;
        deg[v] += 1;
        placed.push(v);
    }
    for _ in 0..genus {
        let open: Vec<usize> = (0..nv).filter(|&u| deg[u] < caps[u]).collect();
        let &a = open.choose(rng)?;
        deg[a] += 1;
        let open: Vec<usize> = (0..nv).filter(|&u| deg[u] < caps[u]).collect();
        let &b = open.choose(rng)?;
        deg[b] += 1;
        edges.push((a, b));
    }
    Some(edges)
}

/// Random connected graph with valence at most 3 and the given genus; some
/// vertices may be left 1- or 2-valent.
pub fn random_trivalent_graph<R: Rng>(rng: &mut R, genus: usize) -> AbstractGraph {
    loop {
        let nv = rng.gen_range(1..=2 * genus.max(1) + 2);
        let Some(edges) = skeleton(rng, &vec![3; nv], genus) else { continue };
        let mut deg = vec![0usize; nv];
        let mut specs: Vec<EdgeSpec> = Vec::new();
        for (i, &(a, b)) in edges.iter().enumerate() {
            deg[a] += 1;
            deg[b] += 1;
            specs.push((format!("b{i:02}"), format!("v{a:02}"), Some(format!("v{b:02}")), 1));
        }
        let mut k = 0;
        for v in 0..nv {
            let fill = if deg[v] == 0 { 3 } else { rng.gen_range(0..=3 - deg[v]) };
            for _ in 0..fill {
                specs.push((format!("u{k:02}"), format!("v{v:02}"), None, 1));
                k += 1;
            }
        }
        let vids = (0..nv).map(|v| format!("v{v:02}")).collect();
        if let Ok(g) = AbstractGraph::new(vids, specs) {
            return g;
        }
    }
}

#[derive(Clone, Debug)]
pub struct CurveOptions {
    pub n: usize,
    pub genus: usize,
    /// Generate inside a random sublattice of this rank (<= n), which makes
    /// superabundant curves common.
    pub rank: Option<usize>,
    /// Valence of one distinguished vertex (3 for an ordinary trivalent curve).
    pub star_valence: usize,
}

impl CurveOptions {
    pub fn trivalent(n: usize, genus: usize) -> Self {
        CurveOptions { n, genus, rank: None, star_valence: 3 }
    }
}

fn random_dir<R: Rng>(rng: &mut R, m: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..m).map(|_| rng.gen_range(-2..=2)).collect();
        if let Some((_, p)) = primitive_part(&v) {
            return p;
        }
    }
}

fn add(a: &[i64], b: &[i64], s: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

struct Builder {
    vertices: Vec<(String, Vec<i64>)>,
    /// id, from, to (None = unbounded), weighted direction
    edges: Vec<(String, usize, Option<usize>, Vec<i64>)>,
}

impl Builder {
    fn vertex(&mut self, p: Vec<i64>) -> usize {
        self.vertices.push((format!("v{:02}", self.vertices.len()), p));
        self.vertices.len() - 1
    }

    fn edge(&mut self, a: usize, b: Option<usize>, wdir: Vec<i64>) {
        let id = match b {
            Some(_) => format!("e{:02}", self.edges.len()),
            None => format!("u{:02}", self.edges.len()),
        };
        self.edges.push((id, a, b, wdir));
    }

    /// Outgoing weighted directions at `v`.
    fn residual(&self, v: usize, m: usize) -> Vec<i64> {
        let mut r = vec![0; m];
        for (_, a, b, d) in &self.edges {
            if *a == v {
                r = add(&r, d, 1);
            }
            if *b == Some(v) {
                r = add(&r, d, -1);
            }
        }
        r
    }

    /// Closes `v` with `k >= 1` unbounded edges summing to minus its residual.
    fn balance<R: Rng>(&mut self, rng: &mut R, v: usize, k: usize, m: usize) -> bool {
        let target: Vec<i64> = self.residual(v, m).iter().map(|x| -x).collect();
        let mut parts: Vec<Vec<i64>> = (1..k).map(|_| random_dir(rng, m)).collect();
        let last = parts.iter().fold(target, |acc, p| add(&acc, p, -1));
        parts.push(last);
        let dirs: BTreeSet<Vec<i64>> = parts.iter().filter_map(|p| primitive_part(p).map(|x| x.1)).collect();
        if dirs.len() != k {
            return false;
        }
        for p in parts {
            self.edge(v, None, p);
        }
        true
    }
}

/// Random balanced immersive curve; every vertex is 3-valent except possibly
/// the distinguished vertex `v00` of valence `star_valence`.
pub fn random_curve<R: Rng>(rng: &mut R, opts: &CurveOptions) -> TropicalCurve {
    let m = opts.rank.unwrap_or(opts.n);
    let basis: Vec<Vec<i64>> = loop {
        if m == opts.n && opts.rank.is_none() {
            break (0..opts.n).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
        }
        let b: Vec<Vec<i64>> = (0..opts.n).map(|_| (0..m).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if RationalMatrix::from_i64(&b).rank() == m {
            break b;
        }
    };
    loop {
        if let Some(c) = try_curve(rng, opts, m, &basis) {
            return c;
        }
    }
}

fn try_curve<R: Rng>(rng: &mut R, opts: &CurveOptions, m: usize, basis: &[Vec<i64>]) -> Option<TropicalCurve> {
    let nv = rng.gen_range(1..=2 * opts.genus.max(1));
    let mut caps = vec![3; nv];
    caps[0] = opts.star_valence;
    let sk = skeleton(rng, &caps, opts.genus)?;
    let mut b = Builder { vertices: Vec::new(), edges: Vec::new() };
    for _ in 0..nv {
        let p = (0..m).map(|_| rng.gen_range(-6..=6)).collect();
        b.vertex(p);
    }
    // weighted outgoing direction of each skeleton edge at each of its ends
    let mut dirs: Vec<[Vec<i64>; 2]> = sk.iter().map(|_| [random_dir(rng, m), random_dir(rng, m)]).collect();
    let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (j, &(x, y)) in sk.iter().enumerate() {
        ends[x].push((j, 0));
        ends[y].push((j, 1));
    }
    // a full skeleton vertex is balanced through its last end
    for v in 0..nv {
        if ends[v].len() == caps[v] {
            let (&(j, side), rest) = ends[v].split_last().unwrap();
            let sum = rest.iter().fold(vec![0; m], |acc, &(k, sd)| add(&acc, &dirs[k][sd], 1));
            let neg: Vec<i64> = sum.iter().map(|x| -x).collect();
            primitive_part(&neg)?;
            dirs[j][side] = neg;
        }
    }
    for (j, &(x, y)) in sk.iter().enumerate() {
        let [dx, dy] = dirs[j].clone();
        let px = b.vertices[x].1.clone();
        let py = b.vertices[y].1.clone();
        let (_, ux) = primitive_part(&dx)?;
        let (_, uy) = primitive_part(&dy)?;
        let x1 = add(&px, &ux, rng.gen_range(1..=3));
        let y1 = add(&py, &uy, rng.gen_range(1..=3));
        let mut pts = vec![x1];
        if rng.gen_bool(0.5) || x == y {
            pts.push((0..m).map(|_| rng.gen_range(-6..=6)).collect());
        }
        pts.push(y1);
        let mut ids = vec![x];
        for p in pts {
            ids.push(b.vertex(p));
        }
        ids.push(y);
        for w in ids.windows(2) {
            let diff = add(&b.vertices[w[1]].1, &b.vertices[w[0]].1, -1);
            let (_, u) = primitive_part(&diff)?;
            let wdir = if w[0] == x && w[1] == ids[1] {
                // the skeleton end fixes the weight of the first segment
                if u != ux {
                    return None;
                }
                dx.clone()
            } else if w[1] == y && w[0] == ids[ids.len() - 2] {
                if u.iter().map(|t| -t).collect::<Vec<_>>() != uy {
                    return None;
                }
                dy.iter().map(|t| -t).collect()
            } else {
                u
            };
            b.edge(w[0], Some(w[1]), wdir);
        }
    }
    for v in 0..b.vertices.len() {
        let cap = if v < nv { caps[v] } else { 3 };
        let have = b.edges.iter().filter(|e| e.1 == v).count() + b.edges.iter().filter(|e| e.2 == Some(v)).count();
        if have < cap {
            if !b.balance(rng, v, cap - have, m) {
                return None;
            }
        } else if b.residual(v, m).iter().any(|&x| x != 0) {
            return None;
        }
    }
    let embed = |p: &[i64]| -> Vec<i64> { basis.iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect() };
    let vertices = b.vertices.iter().map(|(id, p)| (id.clone(), embed(p).into_iter().map(q).collect())).collect();
    let mut edges = Vec::new();
    for (id, a, to, wdir) in &b.edges {
        let (w, u) = primitive_part(&embed(wdir))?;
        let bid = to.map(|t| b.vertices[t].0.clone());
        let dir = if to.is_none() { Some(u) } else { None };
        edges.push((id.clone(), b.vertices[*a].0.clone(), bid, w as u32, dir));
    }
    TropicalCurve::from_parts(opts.n, vertices, edges).ok()
}

/// `k` distinct rationals with small numerators and denominators.
pub fn random_distinct_coords<R: Rng>(rng: &mut R, k: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    while out.len() < k {
        let x = qf(rng.gen_range(-40..=40), rng.gen_range(1..=7));
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// `k` pairwise comparable distinct series, sorted ascending, the first zero.
/// Coefficients depend only on the exponent, so equal orders always share the
/// leading coefficient.
pub fn random_ordered_laurent<R: Rng>(rng: &mut R, k: usize) -> Vec<LaurentSeries> {
    let coef: Vec<Q> = (0..8).map(|_| qf(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3))).collect();
    loop {
        let mut items = vec![(0usize, LaurentSeries::zero())];
        for i in 1..k {
            let terms: Vec<(i64, Q)> = (0..8usize)
                .filter(|_| rng.gen_bool(0.4))
                .map(|e| (e as i64 - 4, coef[e].clone()))
                .collect();
            items.push((i, LaurentSeries::from_terms(terms)));
        }
        if let Ok(sorted) = sort_chain(items) {
            return sorted.into_iter().map(|x| x.1).collect();
        }
    }
}
