//! Command-line front end.
//!
//! Every artifact is a JSON object carrying the tool version, the complete
//! run configuration and the result; wall time lives in its own `timing`
//! field so re-running an embedded configuration reproduces everything
//! else byte for byte. CSV artifacts carry the same header as `#` lines.
//!
//! `--config FILE` reads a TOML table whose keys are long flag names. A key
//! that is also given on the command line is an error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arrowing::{decide_arrow, to_dimacs, SolverOptions};
use crate::booster::{
    construct_normal_family, hypergraph::degree_bounds, hypergraph_stats, restrict_index_consistent,
    verify_core_properties, verify_normal_family, brute_force_cores, BoosterHypergraph, BoosterSpec, IndexParams,
    NormalParams, Partition, Pool, Selection,
};
use crate::counting::{adversarial_t_search, base_graph, check_t, enumerate_copies};
use crate::error::{LabError, Result};
use crate::experiments::{
    bisect_threshold_constant, derive_proof_constants, janson_bound, sharpness_window, threshold_curve, to_csv,
    ArrowOracle, BisectParams, ConstantInputs, ZParams,
};
use crate::graph::{named_pattern, parse_graph, to_edge_list, to_graph6, Graph, Seed};
use crate::pattern::classify;
use crate::rational::{self, parse_rational, Rational};
use crate::regularity::{is_eps_p_regular, reduced_graph, CheckMode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct GlobalArgs {
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Solver search nodes per decision.
    #[arg(long, global = true)]
    pub budget_nodes: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(name = "ramsey-lab", version, about = "Sparse Ramsey arrowing experiments for G(n,p)")]
struct Cli {
    /// TOML file of flag values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

macro_rules! args_struct {
    ($(#[$m:meta])* $name:ident { $($(#[$fm:meta])* $field:ident : $ty:ty),* $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
        #[serde(rename_all = "kebab-case", deny_unknown_fields)]
        pub struct $name {
            $($(#[$fm])* #[arg(long)] pub $field: $ty,)*
        }
    };
}

args_struct!(PatternArgs {
    /// Pattern name (Kk, Ck, Pk, Kk-e, K1,k) or graph file.
    pattern: Option<String>,
});

args_struct!(SampleArgs { n: Option<usize>, p: Option<f64> });

args_struct!(ArrowsArgs {
    host: Option<String>,
    pattern: Option<String>,
    /// Sample the host from G(n,p) instead.
    n: Option<usize>,
    p: Option<f64>,
    /// Also write the DIMACS CNF to this file.
    cnf: Option<PathBuf>,
});

args_struct!(ThresholdArgs {
    pattern: Option<String>,
    n: Option<usize>,
    /// Grid of c values, p = c n^(-1/m2(F)).
    #[arg(value_delimiter = ',')]
    c: Vec<f64>,
    trials: Option<usize>,
    /// Bisect for the crossing instead of evaluating a grid.
    #[arg(action = clap::ArgAction::SetTrue)]
    bisect: bool,
    level: Option<f64>,
    tol: Option<f64>,
    c_lo: Option<f64>,
    c_hi: Option<f64>,
});

args_struct!(WindowArgs {
    pattern: Option<String>,
    #[arg(value_delimiter = ',')]
    ns: Vec<usize>,
    trials: Option<usize>,
    tol: Option<f64>,
    c_lo: Option<f64>,
    c_hi: Option<f64>,
});

args_struct!(ZcheckArgs {
    pattern: Option<String>,
    booster: Option<String>,
    n: Option<usize>,
    p: Option<f64>,
    c: Option<f64>,
    d: Option<f64>,
    zeta: Option<f64>,
    delta: Option<String>,
    trials: Option<usize>,
    pair_samples: Option<usize>,
    embedding_samples: Option<usize>,
});

args_struct!(BoosterArgs {
    host: Option<String>,
    pattern: Option<String>,
    booster: Option<String>,
    n: Option<usize>,
    p: Option<f64>,
    d: Option<f64>,
    delta: Option<f64>,
    alpha: Option<f64>,
    /// Uniform sample pool of this many draws instead of the full pool.
    pool_samples: Option<usize>,
    /// Fixed number of selection draws.
    draws: Option<usize>,
    /// Keep the whole filtered pool instead of drawing.
    #[arg(action = clap::ArgAction::SetTrue)]
    all: bool,
    #[arg(action = clap::ArgAction::SetTrue)]
    no_arrow_filter: bool,
    /// Also restrict to an index-consistent family and build the hypergraph.
    #[arg(action = clap::ArgAction::SetTrue)]
    restrict: bool,
    max_len: Option<usize>,
    /// Greedy instead of uniform random edge partition for the restriction.
    #[arg(action = clap::ArgAction::SetTrue)]
    greedy_partition: bool,
    tau: Option<String>,
});

args_struct!(HstatsArgs {
    /// JSON file {"m": .., "edges": [[..], ..]}.
    hypergraph: Option<PathBuf>,
    host: Option<String>,
    pattern: Option<String>,
    booster: Option<String>,
    /// JSON file with a list of embeddings.
    embeddings: Option<PathBuf>,
    tau: Option<String>,
    n: Option<usize>,
    p: Option<f64>,
    d: Option<f64>,
    delta: Option<f64>,
});

args_struct!(CoresArgs { hypergraph: Option<PathBuf>, beta: Option<f64>, gamma: Option<f64> });

args_struct!(BasegraphArgs { pattern: Option<String>, host: Option<String> });

args_struct!(TpropArgs {
    pattern: Option<String>,
    host: Option<String>,
    /// Check this subgraph instead of searching.
    sub: Option<String>,
    lambda: Option<String>,
    eta: Option<String>,
    search_budget: Option<u64>,
});

args_struct!(RegularityArgs {
    host: Option<String>,
    p: Option<String>,
    #[arg(value_delimiter = ',')]
    x: Vec<usize>,
    #[arg(value_delimiter = ',')]
    y: Vec<usize>,
    eps: Option<String>,
    /// Refute by sampling this many subset pairs instead of exact checking.
    samples: Option<usize>,
    /// JSON file with a list of vertex classes; builds the reduced graph.
    partition: Option<PathBuf>,
    density: Option<String>,
});

args_struct!(JansonArgs { pattern: Option<String>, host: Option<String>, q: Option<String> });

args_struct!(ConstantsArgs {
    pattern: Option<String>,
    booster_vertices: Option<usize>,
    booster_edges: Option<usize>,
    d: Option<String>,
    ell: Option<usize>,
    lambda: Option<String>,
    c0: Option<String>,
    c1: Option<String>,
    rho: Option<String>,
    c_dense: Option<String>,
    xi_cl: Option<String>,
    eps_cl: Option<String>,
    t0: Option<u64>,
});

#[derive(Debug, Subcommand)]
enum Command {
    /// Densities and classification of a pattern.
    Pattern {
        /// Pattern given positionally.
        name: Option<String>,
        #[command(flatten)]
        args: PatternArgs,
    },
    /// Sample G(n,p).
    Sample(SampleArgs),
    /// Decide host -> (pattern)_2^e.
    Arrows(ArrowsArgs),
    /// Arrowing probability along p = c n^(-1/m2).
    Threshold(ThresholdArgs),
    /// Finite-n threshold window across n.
    Window(WindowArgs),
    /// Rates of the random-graph properties Z1-Z5.
    Zcheck(ZcheckArgs),
    /// Normal booster family pipeline.
    Booster(BoosterArgs),
    /// Hypergraph degree statistics.
    Hstats(HstatsArgs),
    /// Exhaustive containers and cores.
    Cores(CoresArgs),
    /// Basegraph of a host.
    Basegraph(BasegraphArgs),
    /// Property T on a host.
    Tprop(TpropArgs),
    /// (eps,p)-regularity and reduced graphs.
    Regularity(RegularityArgs),
    /// Janson bound for the copies of a pattern.
    Janson(JansonArgs),
    /// Constants of the proofs.
    Constants(ConstantsArgs),
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub global: GlobalArgs,
    pub args: Value,
}

fn is_set(v: &Value) -> bool {
    match v {
        Value::Null | Value::Bool(false) => false,
        Value::Array(a) => !a.is_empty(),
        _ => true,
    }
}

/// Fills unset fields of `cli` from `table`, removing the keys it used.
fn merge<T: Serialize + DeserializeOwned>(cli: &T, table: &mut toml::Table) -> Result<T> {
    let mut v = serde_json::to_value(cli).map_err(|e| LabError::param(e.to_string()))?;
    if let Value::Object(obj) = &mut v {
        for (key, slot) in obj.iter_mut() {
            if let Some(cfg) = table.remove(key) {
                if is_set(slot) {
                    return Err(LabError::param(format!("--{key} is given both on the command line and in the config")));
                }
                *slot = serde_json::to_value(cfg).map_err(|e| LabError::param(e.to_string()))?;
            }
        }
    }
    serde_json::from_value(v).map_err(|e| LabError::param(format!("config: {e}")))
}

fn need<T: Clone>(x: &Option<T>, flag: &str) -> Result<T> {
    x.clone().ok_or_else(|| LabError::param(format!("missing --{flag}")))
}

fn rat(x: &Option<String>, flag: &str) -> Result<Rational> {
    parse_rational(&need(x, flag)?)
}

fn opt_rat(x: &Option<String>) -> Result<Option<Rational>> {
    x.as_deref().map(parse_rational).transpose()
}

/// A named pattern, or else a graph file.
pub fn load_graph(spec: &str) -> Result<Graph> {
    match named_pattern(spec) {
        Ok(g) => Ok(g),
        Err(named) => {
            let path = Path::new(spec);
            if path.exists() {
                parse_graph(&std::fs::read_to_string(path)?)
            } else {
                Err(named)
            }
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| LabError::Parse { offset: e.column(), message: e.to_string() })
}

fn host(spec: &Option<String>, n: Option<usize>, p: Option<f64>, seed: Seed) -> Result<Graph> {
    match (spec, n, p) {
        (Some(s), None, _) => load_graph(s),
        (Some(_), Some(_), _) => Err(LabError::param("give either --host or --n/--p")),
        (None, Some(n), Some(p)) => Graph::gnp(n, p, seed),
        _ => Err(LabError::param("missing --host (or --n and --p)")),
    }
}

fn exponent(f: &Graph) -> Result<f64> {
    Ok(rational::to_f64(&classify(f)?.threshold_exponent))
}

struct Ctx {
    seed: Seed,
    opts: SolverOptions,
    format: Format,
}

enum Artifact {
    Json(Value),
    /// CSV body plus the JSON summary kept in the header.
    Csv(String, Value),
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn cmd_pattern(spec: &str) -> Result<Artifact> {
    Ok(Artifact::Json(to_value(&classify(&load_graph(spec)?)?)))
}

fn cmd_sample(a: &SampleArgs, cx: &Ctx) -> Result<Artifact> {
    let g = Graph::gnp(need(&a.n, "n")?, need(&a.p, "p")?, cx.seed)?;
    Ok(Artifact::Json(json!({ "n": g.n(), "e": g.e(), "graph6": to_graph6(&g), "edgeList": to_edge_list(&g) })))
}

fn cmd_arrows(a: &ArrowsArgs, cx: &Ctx) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    let g = host(&a.host, a.n, a.p, cx.seed)?;
    if let Some(path) = &a.cnf {
        std::fs::write(path, to_dimacs(&g, &f)?)?;
    }
    let r = decide_arrow(&g, &f, &cx.opts)?;
    Ok(Artifact::Json(json!({
        "verdict": if r.arrows() { "arrows" } else { "notArrows" },
        "certificate": r.certificate.as_ref().map(|c| c.to_letters()),
        "hostEdges": g.edges(),
        "stats": r.stats,
    })))
}

fn cmd_threshold(a: &ThresholdArgs, cx: &Ctx) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    let n = need(&a.n, "n")?;
    let trials = a.trials.unwrap_or(100);
    let exp = exponent(&f)?;
    let oracle = ArrowOracle { f: &f, opts: cx.opts.clone() };
    if a.bisect {
        let params = BisectParams {
            exponent: exp,
            trials,
            level: a.level.unwrap_or(0.5),
            tol: a.tol.unwrap_or(1e-2),
            c_lo: a.c_lo.unwrap_or(0.0),
            c_hi: a.c_hi.unwrap_or(4.0),
        };
        let b = bisect_threshold_constant(&oracle, n, &params, cx.seed)?;
        return Ok(match cx.format {
            Format::Json => Artifact::Json(to_value(&b)),
            Format::Csv => Artifact::Csv(to_csv(&b.probes)?, json!({ "cHat": b.c_hat, "clamped": b.clamped })),
        });
    }
    if a.c.is_empty() {
        return Err(LabError::param("missing --c grid (or --bisect)"));
    }
    let curve = threshold_curve(&oracle, n, exp, &a.c, trials, cx.seed)?;
    Ok(match cx.format {
        Format::Json => Artifact::Json(to_value(&curve)),
        Format::Csv => Artifact::Csv(
            to_csv(&curve.points)?,
            json!({ "crossing": curve.crossing, "window": curve.window }),
        ),
    })
}

fn cmd_window(a: &WindowArgs, cx: &Ctx) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    if a.ns.is_empty() {
        return Err(LabError::param("missing --ns"));
    }
    let params = BisectParams {
        exponent: exponent(&f)?,
        trials: a.trials.unwrap_or(100),
        level: 0.5,
        tol: a.tol.unwrap_or(1e-2),
        c_lo: a.c_lo.unwrap_or(0.0),
        c_hi: a.c_hi.unwrap_or(4.0),
    };
    let t = sharpness_window(&ArrowOracle { f: &f, opts: cx.opts.clone() }, &a.ns, &params, cx.seed)?;
    Ok(match cx.format {
        Format::Json => Artifact::Json(to_value(&t)),
        Format::Csv => Artifact::Csv(to_csv(&t.rows)?, json!({ "trend": t.trend })),
    })
}

#[derive(Serialize)]
struct ZRow {
    seed_stream: u64,
    edges: usize,
    f_minus_norm: f64,
    max_through_p: f64,
    heavy_fraction: f64,
    bad_fraction: f64,
    z1: bool,
    z2: bool,
    z3: bool,
    z4: bool,
    z5: bool,
}

fn cmd_zcheck(a: &ZcheckArgs, cx: &Ctx) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    let spec = BoosterSpec::new(load_graph(&need(&a.booster, "booster")?)?, &f)?;
    let n = need(&a.n, "n")?;
    let p = match (a.p, a.c) {
        (Some(p), None) => p,
        (None, Some(c)) => crate::experiments::montecarlo::scaled_p(c, n, exponent(&f)?).0,
        _ => return Err(LabError::param("give exactly one of --p and --c")),
    };
    let params = ZParams {
        n,
        p,
        d: a.d.unwrap_or(1.0),
        zeta: a.zeta.unwrap_or(0.1),
        delta: match &a.delta {
            Some(s) => parse_rational(s)?,
            None => {
                let prof = classify(&f)?;
                let inv = prof.threshold_exponent;
                rational::min(&inv, &(rational::int(1) - &inv)) / rational::int(6)
            }
        },
        trials: a.trials.unwrap_or(20),
        pair_samples: a.pair_samples,
        embedding_samples: a.embedding_samples.unwrap_or(200),
    };
    let r = crate::experiments::z_property_rates(&f, &spec, &params, cx.seed)?;
    Ok(match cx.format {
        Format::Json => Artifact::Json(to_value(&r)),
        Format::Csv => {
            let rows: Vec<ZRow> = r
                .trials
                .iter()
                .map(|t| ZRow {
                    seed_stream: t.seed.stream,
                    edges: t.edges,
                    f_minus_norm: t.f_minus_norm,
                    max_through_p: t.max_through_p,
                    heavy_fraction: t.heavy_fraction,
                    bad_fraction: t.bad_fraction,
                    z1: t.z[0],
                    z2: t.z[1],
                    z3: t.z[2],
                    z4: t.z[3],
                    z5: t.z[4],
                })
                .collect();
            Artifact::Csv(to_csv(&rows)?, json!({ "rates": r.rates, "degenerate": r.degenerate }))
        }
    })
}

fn cmd_booster(a: &BoosterArgs, cx: &Ctx) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    let spec = BoosterSpec::new(load_graph(&need(&a.booster, "booster")?)?, &f)?;
    let z = host(&a.host, a.n, a.p, cx.seed.child(100))?;
    let mut params = NormalParams::new(a.d.unwrap_or(1.0), a.delta.unwrap_or(0.1), need(&a.p, "p")?);
    params.alpha = a.alpha;
    params.solver = cx.opts.clone();
    params.arrow_filter = !a.no_arrow_filter;
    params.pool = a.pool_samples.map_or(Pool::Full, Pool::Sampled);
    params.selection = match (a.all, a.draws) {
        (true, Some(_)) => return Err(LabError::param("--all and --draws exclude each other")),
        (true, None) => Selection::All,
        (false, Some(k)) => Selection::Draws(k),
        (false, None) => Selection::Paper,
    };
    let fam = construct_normal_family(&z, &spec, &f, &params, cx.seed)?;
    let violations = verify_normal_family(&z, &fam.xi0, &spec, &f, &params)?;
    let mut out = json!({
        "z": { "n": z.n(), "edges": z.edges() },
        "sigma": spec.sigma.to_letters(),
        "family": fam.xi0,
        "report": fam.report,
        "violations": violations,
    });
    if a.restrict && !fam.xi0.is_empty() {
        let partition = if a.greedy_partition { Partition::Greedy } else { Partition::Random };
        let ip = IndexParams { max_len: a.max_len, partition };
        let ic = restrict_index_consistent(&z, &fam.xi0, &spec, &f, &ip, cx.seed.child(1))?;
        let hg = BoosterHypergraph::build(&z, &ic.xi, &spec, &f)?;
        let tau = opt_rat(&a.tau)?.unwrap_or_else(|| rational::ratio(1, 2));
        let stats = hypergraph_stats(&hg, &tau).ok();
        out["index"] = to_value(&ic);
        out["hypergraph"] = json!({ "edges": hg.edges, "profile": hg.profile, "stats": stats });
    }
    Ok(Artifact::Json(out))
}

#[derive(Deserialize)]
struct HypergraphFile {
    m: usize,
    edges: Vec<Vec<u32>>,
}

fn load_hypergraph(path: &Path) -> Result<BoosterHypergraph> {
    let h: HypergraphFile = read_json(path)?;
    BoosterHypergraph::from_edges(h.m, h.edges)
}

fn cmd_hstats(a: &HstatsArgs, cx: &Ctx) -> Result<Artifact> {
    let hg = match &a.hypergraph {
        Some(path) => load_hypergraph(path)?,
        None => {
            let f = load_graph(&need(&a.pattern, "pattern")?)?;
            let spec = BoosterSpec::new(load_graph(&need(&a.booster, "booster")?)?, &f)?;
            let z = host(&a.host, None, None, cx.seed)?;
            let xi: Vec<Vec<u32>> = read_json(&need(&a.embeddings, "embeddings")?)?;
            BoosterHypergraph::build(&z, &xi, &spec, &f)?
        }
    };
    let stats = hypergraph_stats(&hg, &rat(&a.tau, "tau")?)?;
    let bounds = match (a.d, a.p, a.n, a.delta) {
        (Some(d), Some(p), Some(n), Some(delta)) => {
            let vf = match &a.pattern {
                Some(s) => load_graph(s)?.n(),
                None => return Err(LabError::param("degree bounds need --pattern")),
            };
            Some(degree_bounds(&stats, d, p, n, delta, vf))
        }
        _ => None,
    };
    Ok(Artifact::Json(json!({ "profile": hg.profile, "stats": stats, "bounds": bounds })))
}

fn cmd_cores(a: &CoresArgs) -> Result<Artifact> {
    let hg = load_hypergraph(&need(&a.hypergraph, "hypergraph")?)?;
    let c = brute_force_cores(&hg)?;
    let r = verify_core_properties(&hg, &c, a.beta.unwrap_or(0.0), a.gamma.unwrap_or(0.0))?;
    Ok(Artifact::Json(json!({ "family": c, "report": r })))
}

fn cmd_basegraph(a: &BasegraphArgs, cx: &Ctx) -> Result<Artifact> {
    let prof = classify(&load_graph(&need(&a.pattern, "pattern")?)?)?;
    let g = host(&a.host, None, None, cx.seed)?;
    let base = base_graph(&prof, &g)?;
    Ok(Artifact::Json(json!({ "n": base.n(), "e": base.e(), "edges": base.edges() })))
}

fn cmd_tprop(a: &TpropArgs, cx: &Ctx) -> Result<Artifact> {
    let prof = classify(&load_graph(&need(&a.pattern, "pattern")?)?)?;
    let g = host(&a.host, None, None, cx.seed)?;
    let (lambda, eta) = (rat(&a.lambda, "lambda")?, rat(&a.eta, "eta")?);
    match &a.sub {
        Some(s) => Ok(Artifact::Json(to_value(&check_t(&prof, &g, &load_graph(s)?, &lambda, &eta)?))),
        None => {
            let r = adversarial_t_search(&prof, &g, &lambda, &eta, a.search_budget.unwrap_or(200), cx.seed)?;
            Ok(Artifact::Json(to_value(&r)))
        }
    }
}

fn cmd_regularity(a: &RegularityArgs, cx: &Ctx) -> Result<Artifact> {
    let g = host(&a.host, None, None, cx.seed)?;
    let p = rat(&a.p, "p")?;
    let eps = rat(&a.eps, "eps")?;
    let mode = a.samples.map_or(CheckMode::Exact, |samples| CheckMode::Sampled { samples });
    if let Some(path) = &a.partition {
        let part: Vec<Vec<usize>> = read_json(path)?;
        let d = rat(&a.density, "density")?;
        return Ok(Artifact::Json(to_value(&reduced_graph(&g, &p, &part, &d, &eps, mode, cx.seed)?)));
    }
    let v = is_eps_p_regular(&g, &p, &a.x, &a.y, &eps, mode, cx.seed)?;
    Ok(Artifact::Json(to_value(&v)))
}

fn cmd_janson(a: &JansonArgs, cx: &Ctx) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    let g = host(&a.host, None, None, cx.seed)?;
    let fam = enumerate_copies(&f, &g, None)?;
    Ok(Artifact::Json(to_value(&janson_bound(&fam, &rat(&a.q, "q")?)?)))
}

fn cmd_constants(a: &ConstantsArgs) -> Result<Artifact> {
    let f = load_graph(&need(&a.pattern, "pattern")?)?;
    let inp = ConstantInputs {
        booster_vertices: a.booster_vertices,
        booster_edges: a.booster_edges,
        d: opt_rat(&a.d)?,
        ell: a.ell,
        lambda: opt_rat(&a.lambda)?,
        c0: opt_rat(&a.c0)?,
        c1: opt_rat(&a.c1)?,
        rho: opt_rat(&a.rho)?,
        c_dense: opt_rat(&a.c_dense)?,
        xi_cl: opt_rat(&a.xi_cl)?,
        eps_cl: opt_rat(&a.eps_cl)?,
        t0_big: a.t0,
    };
    let chain = derive_proof_constants(&f, &inp)?;
    let identities = inp.d.as_ref().and_then(|d| chain.identities_hold(d, f.n()));
    let mut v = to_value(&chain);
    v["identitiesHold"] = json!(identities);
    Ok(Artifact::Json(v))
}

fn emit(global: &GlobalArgs, config: &RunConfig, art: std::result::Result<Artifact, LabError>, ms: f64) -> Result<i32> {
    let (code, text) = match art {
        Ok(Artifact::Json(result)) => {
            let doc = json!({ "tool": "ramsey-lab", "version": VERSION, "config": config, "partial": false,
                "result": result, "timing": { "wallMs": ms } });
            (0, serde_json::to_string_pretty(&doc).expect("json") + "\n")
        }
        Ok(Artifact::Csv(body, summary)) => {
            let cfg = serde_json::to_string(config).expect("json");
            let summary = serde_json::to_string(&summary).expect("json");
            (0, format!("# ramsey-lab {VERSION}\n# config {cfg}\n# summary {summary}\n# timing {{\"wallMs\":{ms}}}\n{body}"))
        }
        Err(LabError::BudgetExceeded { nodes }) => {
            let doc = json!({ "tool": "ramsey-lab", "version": VERSION, "config": config, "partial": true,
                "result": { "verdict": "undecided", "nodes": nodes }, "timing": { "wallMs": ms } });
            (3, serde_json::to_string_pretty(&doc).expect("json") + "\n")
        }
        Err(e) => return Err(e),
    };
    match &global.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn dispatch(cmd: &Command, cx: &Ctx) -> Result<Artifact> {
    match cmd {
        Command::Pattern { name, args } => match (name, &args.pattern) {
            (Some(s), None) | (None, Some(s)) => cmd_pattern(s),
            (Some(_), Some(_)) => Err(LabError::param("pattern given twice")),
            (None, None) => Err(LabError::param("missing pattern")),
        },
        Command::Sample(a) => cmd_sample(a, cx),
        Command::Arrows(a) => cmd_arrows(a, cx),
        Command::Threshold(a) => cmd_threshold(a, cx),
        Command::Window(a) => cmd_window(a, cx),
        Command::Zcheck(a) => cmd_zcheck(a, cx),
        Command::Booster(a) => cmd_booster(a, cx),
        Command::Hstats(a) => cmd_hstats(a, cx),
        Command::Cores(a) => cmd_cores(a),
        Command::Basegraph(a) => cmd_basegraph(a, cx),
        Command::Tprop(a) => cmd_tprop(a, cx),
        Command::Regularity(a) => cmd_regularity(a, cx),
        Command::Janson(a) => cmd_janson(a, cx),
        Command::Constants(a) => cmd_constants(a),
    }
}

/// Merges the config file into every argument struct of `cmd`.
fn apply_config(cli: &mut Cli) -> Result<()> {
    let Some(path) = &cli.config else { return Ok(()) };
    let text = std::fs::read_to_string(path)?;
    let mut table: toml::Table =
        text.parse().map_err(|e: toml::de::Error| LabError::Parse { offset: e.span().map_or(0, |s| s.start), message: e.to_string() })?;
    cli.global = merge(&cli.global, &mut table)?;
    macro_rules! m {
        ($a:expr) => {
            *$a = merge(&*$a, &mut table)?
        };
    }
    match &mut cli.command {
        Command::Pattern { args, .. } => m!(args),
        Command::Sample(a) => m!(a),
        Command::Arrows(a) => m!(a),
        Command::Threshold(a) => m!(a),
        Command::Window(a) => m!(a),
        Command::Zcheck(a) => m!(a),
        Command::Booster(a) => m!(a),
        Command::Hstats(a) => m!(a),
        Command::Cores(a) => m!(a),
        Command::Basegraph(a) => m!(a),
        Command::Tprop(a) => m!(a),
        Command::Regularity(a) => m!(a),
        Command::Janson(a) => m!(a),
        Command::Constants(a) => m!(a),
    }
    if let Some(key) = table.keys().next() {
        return Err(LabError::param(format!("unknown config key {key:?}")));
    }
    Ok(())
}

fn describe(cmd: &Command) -> (String, Value) {
    match cmd {
        Command::Pattern { name, args } => {
            ("pattern".into(), json!({ "pattern": name.clone().or_else(|| args.pattern.clone()) }))
        }
        Command::Sample(a) => ("sample".into(), to_value(a)),
        Command::Arrows(a) => ("arrows".into(), to_value(a)),
        Command::Threshold(a) => ("threshold".into(), to_value(a)),
        Command::Window(a) => ("window".into(), to_value(a)),
        Command::Zcheck(a) => ("zcheck".into(), to_value(a)),
        Command::Booster(a) => ("booster".into(), to_value(a)),
        Command::Hstats(a) => ("hstats".into(), to_value(a)),
        Command::Cores(a) => ("cores".into(), to_value(a)),
        Command::Basegraph(a) => ("basegraph".into(), to_value(a)),
        Command::Tprop(a) => ("tprop".into(), to_value(a)),
        Command::Regularity(a) => ("regularity".into(), to_value(a)),
        Command::Janson(a) => ("janson".into(), to_value(a)),
        Command::Constants(a) => ("constants".into(), to_value(a)),
    }
}

fn execute(mut cli: Cli) -> Result<i32> {
    apply_config(&mut cli)?;
    if let Some(w) = cli.global.workers {
        // Fails harmlessly when a pool already exists (repeated in-process runs).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let seed = Seed::new(cli.global.seed.unwrap_or(0));
    let mut opts = SolverOptions::default();
    if let Some(b) = cli.global.budget_nodes {
        opts.budget_nodes = b;
    }
    let cx = Ctx { seed, opts, format: cli.global.format.unwrap_or(Format::Json) };
    let (subcommand, args) = describe(&cli.command);
    let config = RunConfig { subcommand, global: cli.global.clone(), args };
    let start = Instant::now();
    let art = dispatch(&cli.command, &cx);
    emit(&cli.global, &config, art, start.elapsed().as_secs_f64() * 1e3)
}

/// Runs the tool on `argv` and returns the process exit code: 0 on
/// success, 2 on invalid input, 3 when a search budget ran out.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn merge_rejects_conflicts() {
        let cli = SampleArgs { n: Some(5), p: None };
        let mut t: toml::Table = "p = 0.5".parse().unwrap();
        let m = merge(&cli, &mut t).unwrap();
        assert_eq!((m.n, m.p), (Some(5), Some(0.5)));
        let mut t: toml::Table = "n = 6".parse().unwrap();
        assert!(merge(&cli, &mut t).is_err());
    }
}
