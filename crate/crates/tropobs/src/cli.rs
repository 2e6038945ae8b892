//! The `tropctl` command line, as a library function so it can be driven from
//! tests and bindings.

use crate::curve::{parse_curve_str_with_limit, TropicalCurve, DEFAULT_MAX_DIM};
use crate::error::{Error, Result};
use crate::gen::{random_curve, random_distinct_coords, random_ordered_laurent, random_trivalent_graph, CurveOptions};
use crate::higher_valent::compare::{default_t0, degeneration_compare, LaurentData};
use crate::higher_valent::genus1::genus1_loop_criterion;
use crate::higher_valent::laurent::LaurentSeries;
use crate::higher_valent::local::{expected_local_dim, LocalVertexModel};
use crate::higher_valent::phylo::{phylo_tree, phylo_tree_labeled, rebase};
use crate::higher_valent::xi::{xi_map, Configuration};
use crate::linalg::RationalMatrix;
use crate::obstruction::{abundancy_map, compatible_numbering_space, dual_obstruction_chain, reduced_abundancy_map, ObstructionReport};
use crate::rational::{parse_q, Q};
use crate::report::{self, SCHEMA};
use crate::resolve::{deformability, resolve_to_trivalent, StarChoice};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "tropctl", version, about = "Superabundancy and dual obstruction spaces of tropical curves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Chain,
    Xi,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Curve file.
    file: Option<String>,
    /// Process every file matching this pattern (in sorted order).
    #[arg(long)]
    glob: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and validate a curve file.
    Validate(Input),
    /// Genus, degree, expected dimension and loop structure.
    Info(Input),
    /// Dual obstruction space H.
    Obstruction {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Method::Chain)]
        method: Method,
        /// Configuration for higher-valent vertices (xi method).
        #[arg(long)]
        config: Option<String>,
        /// Omit the kernel basis.
        #[arg(long)]
        no_basis: bool,
    },
    /// Superabundancy verdicts under both definitions.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        config: Option<String>,
    },
    /// Abundancy map and its reduced form.
    Abundancy(Input),
    /// Tree read off ordered Laurent data.
    Phylo {
        #[arg(long)]
        laurent: String,
    },
    /// Residue system of a single higher-valent vertex.
    LocalModel {
        #[arg(long)]
        model: String,
        #[arg(long)]
        no_basis: bool,
    },
    /// Genus-one loop criterion.
    #[command(name = "genus1-check")]
    Genus1Check(Input),
    /// Ξ at sampled configurations against the degenerate trivalent type.
    Compare {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        laurent: String,
        #[arg(long)]
        t0: Option<String>,
    },
    /// Replace higher-valent stars by trees and realize the result.
    Resolve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        choices: String,
    },
    /// Randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Env {
    max_dim: usize,
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {path}: {e}")))
}

fn digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

fn error_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_PRECONDITION
    }
}

fn error_json(e: &Error) -> Value {
    json!({"kind": if e.is_validation() { "validation" } else { "precondition" }, "message": e.to_string()})
}

/// One unit of work: a main input plus auxiliary files.
struct Job {
    command: &'static str,
    options: Value,
    input: Option<String>,
    aux: Vec<String>,
}

struct Done {
    code: i32,
    envelope: Value,
}

impl Job {
    fn run(&self, f: impl Fn(Option<&str>, &[String]) -> Result<(Value, Vec<String>, i32)>) -> Done {
        let mut texts = Vec::new();
        let loaded = self
            .input
            .iter()
            .chain(self.aux.iter())
            .map(|p| read(p))
            .collect::<Result<Vec<String>>>();
        let (code, result, warnings, err) = match loaded {
            Err(e) => (error_code(&e), Value::Null, Vec::new(), Some(e)),
            Ok(t) => {
                texts = t;
                let (main, aux) = if self.input.is_some() { (Some(texts[0].as_str()), &texts[1..]) } else { (None, &texts[..]) };
                match f(main, aux) {
                    Ok((v, w, code)) => (code, v, w, None),
                    Err(e) => (error_code(&e), Value::Null, Vec::new(), Some(e)),
                }
            }
        };
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let mut env = json!({
            "schema": SCHEMA,
            "command": self.command,
            "options": self.options,
            "input": self.input,
            "digest": digest(&refs),
            "warnings": warnings,
        });
        match err {
            Some(e) => env["error"] = error_json(&e),
            None => env["result"] = result,
        }
        Done { code, envelope: env }
    }
}

fn inputs(input: &Input) -> std::result::Result<Vec<String>, String> {
    match (&input.file, &input.glob) {
        (Some(f), None) => Ok(vec![f.clone()]),
        (None, Some(g)) => {
            let mut files: Vec<String> = glob::glob(g)
                .map_err(|e| format!("bad glob pattern: {e}"))?
                .filter_map(|p| p.ok())
                .map(|p| p.to_string_lossy().into_owned())
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(format!("no files match {g:?}"));
            }
            Ok(files)
        }
        (Some(_), Some(_)) => Err("give either a file or --glob, not both".into()),
        (None, None) => Err("missing input file".into()),
    }
}

fn curve(text: &str, env: &Env) -> Result<TropicalCurve> {
    parse_curve_str_with_limit(text, env.max_dim)
}

fn ok(v: Value) -> Result<(Value, Vec<String>, i32)> {
    Ok((v, Vec::new(), EXIT_OK))
}

fn scope_warning(c: &TropicalCurve) -> Vec<String> {
    if c.is_immersive() {
        Vec::new()
    } else {
        vec!["curve is not immersive: the parameter dimension is a type-level count".into()]
    }
}

fn cmd_obstruction(c: &TropicalCurve, method: Method, cfg: Option<&str>, basis: bool) -> Result<(Value, Vec<String>, i32)> {
    let rep: ObstructionReport = match method {
        Method::Chain => {
            if cfg.is_some() {
                return Err(Error::Precondition("--config applies to the xi method only".into()));
            }
            let r = dual_obstruction_chain(c.combinatorial_type())?;
            match abundancy_map(c) {
                Ok(a) => r.with_abundancy(&a),
                Err(_) => r,
            }
        }
        Method::Xi => {
            let cfg = match cfg {
                Some(t) => Configuration::parse_str(t)?,
                None => Configuration::default(),
            };
            xi_map(c, &cfg)?.report
        }
    };
    let mut v = report::obstruction_json(&rep, basis);
    v["method"] = json!(match method {
        Method::Chain => "chain",
        Method::Xi => "xi",
    });
    Ok((v, scope_warning(c), EXIT_OK))
}

fn cmd_classify(c: &TropicalCurve, cfg: Option<&str>) -> Result<(Value, Vec<String>, i32)> {
    let g = c.graph();
    let trivalent_type = g.is_trivalent() && c.combinatorial_type().directions.iter().all(Option::is_some);
    let (rep, method) = if trivalent_type && cfg.is_none() {
        (crate::obstruction::classify(c)?, "chain")
    } else {
        let cfg = match cfg {
            Some(t) => Configuration::parse_str(t)?,
            None => Configuration::default(),
        };
        (xi_map(c, &cfg)?.report, "xi")
    };
    let mut v = report::obstruction_json(&rep, false);
    let def1 = if rep.superabundant_def1 { "superabundant" } else { "not superabundant" };
    v["method"] = json!(method);
    v["verdictDef1"] = json!(def1);
    v["verdictDef2"] = json!(rep.superabundant_def2.map(|s| if s { "superabundant" } else { "not superabundant" }));
    v["definitionsAgree"] = json!(rep.superabundant_def2.map(|s| s == rep.superabundant_def1));
    v["parameterDimScope"] = json!(if c.is_immersive() { "curve" } else { "type-level" });
    v["deformability"] = report::deformability_json(&deformability(c)?);
    Ok((v, scope_warning(c), EXIT_OK))
}

fn cmd_abundancy(c: &TropicalCurve) -> Result<(Value, Vec<String>, i32)> {
    let full = abundancy_map(c)?;
    let red = reduced_abundancy_map(c)?;
    let g = c.graph();
    let n = c.n();
    ok(json!({
        "full": report::abundancy_json(&full, g),
        "reduced": report::abundancy_json(&red, g),
        "K": red.rank,
        "dimHFromRank": (n - 1) * c.genus() - red.rank,
        "surjective": full.surjective,
    }))
}

fn laurent_list(v: &Value) -> Result<Vec<LaurentSeries>> {
    v.as_array()
        .ok_or_else(|| Error::Schema("\"series\" must be a list".into()))?
        .iter()
        .map(LaurentSeries::from_json)
        .collect()
}

fn cmd_phylo(text: &str) -> Result<(Value, Vec<String>, i32)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if let Some(s) = v.get("series") {
        let items = laurent_list(s)?.into_iter().enumerate().collect();
        return ok(report::phylo_json(&phylo_tree_labeled(items)?));
    }
    let data = LaurentData::from_json(&v)?;
    let mut out = serde_json::Map::new();
    for (vid, series) in data.vertices {
        let items = series.into_iter().enumerate().filter_map(|(k, s)| s.map(|s| (k, s))).collect();
        out.insert(vid, report::phylo_json(&phylo_tree_labeled(items)?));
    }
    ok(json!({ "vertices": out }))
}

fn cmd_local_model(text: &str, basis: bool) -> Result<(Value, Vec<String>, i32)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let bad = |m: &str| Error::Schema(format!("model: {m}"));
    let bounded: Vec<bool> = v
        .get("bounded")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"bounded\""))?
        .iter()
        .map(|b| b.as_bool().ok_or_else(|| bad("\"bounded\" entries must be booleans")))
        .collect::<Result<_>>()?;
    let mut coords: Vec<Option<Q>> = v
        .get("coords")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing \"coords\""))?
        .iter()
        .map(|c| match c.as_str() {
            Some("inf") => Ok(None),
            Some(s) => parse_q(s).map(Some).ok_or_else(|| bad("bad coordinate")),
            None => Err(bad("coordinates must be strings")),
        })
        .collect::<Result<_>>()?;
    if coords.len() + 1 == bounded.len() {
        coords.insert(crate::higher_valent::local::default_infinity(&bounded), None);
    }
    let model = if let Some(r) = v.get("standard") {
        let r = r.as_u64().ok_or_else(|| bad("\"standard\" must be r"))? as usize;
        LocalVertexModel::standard(r, bounded, coords)?
    } else {
        let theta: Vec<Vec<i64>> = serde_json::from_value(v.get("directions").cloned().unwrap_or(Value::Null))
            .map_err(|_| bad("\"directions\" must be a list of integer vectors"))?;
        LocalVertexModel::new(theta, bounded, coords)?
    };
    ok(report::local_model_json(&model, basis))
}

fn cmd_compare(c: &TropicalCurve, laurent: &str, t0: &Option<String>) -> Result<(Value, Vec<String>, i32)> {
    let data = LaurentData::parse_str(laurent)?;
    let t0 = match t0 {
        Some(s) => parse_q(s).ok_or_else(|| Error::Schema(format!("bad --t0 {s:?}")))?,
        None => default_t0(),
    };
    let r = degeneration_compare(c, &data, &t0)?;
    let mut w = Vec::new();
    if !r.stabilized {
        w.push("dim ker Ξ did not stabilize within the shrink budget".into());
    }
    Ok((report::compare_json(&r), w, EXIT_OK))
}

fn cmd_resolve(c: &TropicalCurve, choices: &str) -> Result<(Value, Vec<String>, i32)> {
    let v: Value = serde_json::from_str(choices).map_err(|e| Error::Schema(e.to_string()))?;
    let verts = v
        .get("vertices")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Schema("choices: missing \"vertices\"".into()))?;
    let g = c.graph();
    let mut map = BTreeMap::new();
    for (vid, tree) in verts {
        let vi = g.vertex_index(vid).ok_or_else(|| Error::BadConfiguration {
            vertex: vid.clone(),
            detail: "unknown vertex".into(),
        })?;
        map.insert(vid.clone(), StarChoice::from_json(g, vi, tree)?);
    }
    let res = resolve_to_trivalent(c, &map)?;
    let mut out = report::resolution_json(&res);
    if res.ty.graph.is_trivalent() {
        out["dimH"] = json!(dual_obstruction_chain(&res.ty)?.dim_h);
    }
    let w = if res.curve.is_none() { vec!["no realization with positive new edge lengths".into()] } else { Vec::new() };
    Ok((out, w, EXIT_OK))
}

/// Randomized properties; each case draws from a stream seeded by (seed, case).
fn cmd_selftest(seed: u64, cases: usize) -> Result<(Value, Vec<String>, i32)> {
    type Check = fn(&mut ChaCha8Rng) -> bool;
    let checks: Vec<(&str, Check)> = vec![
        ("numberingDimEqualsGenus", |rng| {
            let g = rng.gen_range(0..=4);
            compatible_numbering_space(&random_trivalent_graph(rng, g)).map(|s| s.dim() == g).unwrap_or(false)
        }),
        ("chainEqualsXi", |rng| {
            let (n, g) = (rng.gen_range(2..=4), rng.gen_range(0..=2));
            let c = random_curve(rng, &CurveOptions::trivalent(n, g));
            let a = dual_obstruction_chain(c.combinatorial_type()).unwrap();
            let b = xi_map(&c, &Configuration::default()).unwrap().report;
            a.basis.same_as(&b.basis)
        }),
        ("abundancyIdentity", |rng| {
            let n = rng.gen_range(2..=4);
            let g = rng.gen_range(0..=2);
            let rank = if rng.gen_bool(0.5) { Some(rng.gen_range(2..=n)) } else { None };
            let c = random_curve(rng, &CurveOptions { n, genus: g, rank, star_valence: 3 });
            let h = dual_obstruction_chain(c.combinatorial_type()).unwrap().dim_h;
            let red = reduced_abundancy_map(&c).unwrap();
            let full = abundancy_map(&c).unwrap();
            h == (n - 1) * g - red.rank && full.surjective == red.surjective && full.surjective == (h == 0)
        }),
        ("localDimension", |rng| {
            let r = rng.gen_range(1..=4);
            let n = rng.gen_range(r + 1..=r + 3);
            let theta: Vec<Vec<i64>> = loop {
                let mut t: Vec<Vec<i64>> = (0..=r).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
                if RationalMatrix::from_i64(&t).rank() == r + 1 {
                    t.push((0..n).map(|c| -t.iter().map(|x| x[c]).sum::<i64>()).collect());
                    break t;
                }
            };
            let s = rng.gen_range(0..=r + 2);
            let mut bounded = vec![false; r + 2];
            for b in bounded.iter_mut().take(s) {
                *b = true;
            }
            let coords = random_distinct_coords(rng, r + 2).into_iter().map(Some).collect();
            let m = LocalVertexModel::new(theta, bounded, coords).unwrap();
            m.a_system().1.dim() == expected_local_dim(r, n, s)
        }),
        ("rebaseInvariance", |rng| {
            let k = rng.gen_range(2..=7);
            let p = random_ordered_laurent(rng, k);
            let t = phylo_tree(&p).unwrap().root.cluster_sets();
            (0..k).all(|i| phylo_tree_labeled(rebase(&p, i).unwrap()).map(|x| x.root.cluster_sets() == t).unwrap_or(false))
        }),
    ];
    let mut out = serde_json::Map::new();
    let mut all = true;
    for (ci, (name, check)) in checks.iter().enumerate() {
        let passed = (0..cases)
            .into_par_iter()
            .filter(|&k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((ci as u64) << 48) ^ k as u64);
                check(&mut rng)
            })
            .count();
        all &= passed == cases;
        out.insert(name.to_string(), json!({"cases": cases, "passed": passed}));
    }
    let code = if all { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((json!({"seed": seed, "checks": out, "allPassed": all}), Vec::new(), code))
}

fn max_dim_from_env() -> std::result::Result<usize, String> {
    match std::env::var("TROPCTL_MAX_DIM") {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| format!("TROPCTL_MAX_DIM={s:?} is not a nonnegative integer")),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn render(done: &[Done], format: Format, batch: bool) -> String {
    match format {
        Format::Json => {
            let v = if batch {
                Value::Array(done.iter().map(|d| d.envelope.clone()).collect())
            } else {
                done[0].envelope.clone()
            };
            let mut s = serde_json::to_string_pretty(&v).unwrap();
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for d in done {
                let e = &d.envelope;
                if batch {
                    s.push_str(&format!("== {} ==\n", e["input"].as_str().unwrap_or("-")));
                }
                if let Some(err) = e.get("error") {
                    s.push_str(&format!("error ({}): {}\n", err["kind"].as_str().unwrap(), err["message"].as_str().unwrap()));
                } else {
                    s.push_str(&report::render_text(&e["result"]));
                }
                for w in e["warnings"].as_array().into_iter().flatten() {
                    s.push_str(&format!("warning: {}\n", w.as_str().unwrap_or_default()));
                }
            }
            s
        }
    }
}

/// Runs `tropctl` with the given arguments (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    Output { code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { EXIT_USAGE } else { EXIT_OK }, stdout: text, stderr: String::new() }
                }
                _ => Output { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let usage = |m: String| Output { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") };
    let env = match max_dim_from_env() {
        Ok(d) => Env { max_dim: d },
        Err(m) => return usage(m),
    };
    let format = cli.format;
    // (input spec, job template, action)
    type Action<'a> = Box<dyn Fn(Option<&str>, &[String]) -> Result<(Value, Vec<String>, i32)> + Sync + 'a>;
    let env = &env;
    let (input, command, options, aux, action): (Option<Input>, &'static str, Value, Vec<String>, Action) = match cli.cmd {
        Cmd::Validate(i) => (
            Some(i),
            "validate",
            json!({}),
            vec![],
            Box::new(move |t, _| {
                let c = curve(t.unwrap(), env)?;
                ok(json!({"valid": true, "vertices": c.graph().vertices().len(), "edges": c.graph().edges().len()}))
            }),
        ),
        Cmd::Info(i) => (Some(i), "info", json!({}), vec![], Box::new(move |t, _| {
            let c = curve(t.unwrap(), env)?;
            let mut v = report::info_json(&c);
            v["deformability"] = report::deformability_json(&deformability(&c)?);
            ok(v)
        })),
        Cmd::Obstruction { input, method, config, no_basis } => {
            let opts = json!({"method": format!("{method:?}").to_lowercase(), "config": config, "basis": !no_basis});
            let aux: Vec<String> = config.into_iter().collect();
            (Some(input), "obstruction", opts, aux, Box::new(move |t, aux| {
                cmd_obstruction(&curve(t.unwrap(), env)?, method, aux.first().map(String::as_str), !no_basis)
            }))
        }
        Cmd::Classify { input, config } => {
            let opts = json!({"config": config});
            let aux: Vec<String> = config.into_iter().collect();
            (Some(input), "classify", opts, aux, Box::new(move |t, aux| {
                cmd_classify(&curve(t.unwrap(), env)?, aux.first().map(String::as_str))
            }))
        }
        Cmd::Abundancy(i) => (Some(i), "abundancy", json!({}), vec![], Box::new(move |t, _| cmd_abundancy(&curve(t.unwrap(), env)?))),
        Cmd::Genus1Check(i) => (Some(i), "genus1-check", json!({}), vec![], Box::new(move |t, _| {
            ok(report::genus1_json(&genus1_loop_criterion(&curve(t.unwrap(), env)?)?))
        })),
        Cmd::Compare { input, laurent, t0 } => {
            let opts = json!({"laurent": laurent, "t0": t0});
            (Some(input), "compare", opts, vec![laurent], Box::new(move |t, aux| cmd_compare(&curve(t.unwrap(), env)?, &aux[0], &t0)))
        }
        Cmd::Resolve { input, choices } => {
            let opts = json!({"choices": choices});
            (Some(input), "resolve", opts, vec![choices], Box::new(move |t, aux| cmd_resolve(&curve(t.unwrap(), env)?, &aux[0])))
        }
        Cmd::Phylo { laurent } => (None, "phylo", json!({"laurent": laurent}), vec![laurent], Box::new(|_, aux| cmd_phylo(&aux[0]))),
        Cmd::LocalModel { model, no_basis } => (
            None,
            "local-model",
            json!({"model": model, "basis": !no_basis}),
            vec![model],
            Box::new(move |_, aux| cmd_local_model(&aux[0], !no_basis)),
        ),
        Cmd::Selftest { seed, cases } => {
            (None, "selftest", json!({"seed": seed, "cases": cases}), vec![], Box::new(move |_, _| cmd_selftest(seed, cases)))
        }
    };
    let (files, batch) = match &input {
        Some(i) => match inputs(i) {
            Ok(f) => (f.into_iter().map(Some).collect::<Vec<_>>(), i.glob.is_some()),
            Err(m) => return usage(m),
        },
        None => (vec![None], false),
    };
    let done: Vec<Done> = files
        .par_iter()
        .map(|f| Job { command, options: options.clone(), input: f.clone(), aux: aux.clone() }.run(&action))
        .collect();
    let code = done.iter().map(|d| d.code).max().unwrap_or(EXIT_OK);
    let stdout = render(&done, format, batch);
    let stderr = if code == EXIT_VALIDATION || code == EXIT_PRECONDITION {
        done.iter()
            .filter_map(|d| d.envelope.get("error").map(|e| format!("error: {}\n", e["message"].as_str().unwrap())))
            .collect()
    } else {
        String::new()
    };
    Output { code, stdout, stderr }
}
