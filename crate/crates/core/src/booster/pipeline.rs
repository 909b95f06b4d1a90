//! Randomised construction of a normal booster family.
//!
//! Stages, each removing embeddings for one reason:
//! pool -> arrowing filter -> bad embeddings -> heavy pairs -> random
//! selection -> vertex overlap -> pair cap -> edge clash.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    all_embeddings, arrow_status, bad_flags, booster_edges, focus_data, relation, sample_embeddings,
    ArrowStatus, BoosterSpec, Embedding, FocusData,
};
use crate::arrowing::{decide_arrow, decide_arrow_union, SolverOptions};
use crate::counting::copies::{p_candidates, p_count};
use crate::counting::{f_minus_two_members, SubCopy};
use crate::error::{LabError, Result};
use crate::graph::{Edge, EdgeId, Graph, Seed};
use crate::rational::{factorial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Pool {
    /// Every unlabelled embedding of `B` into `K_n`.
    Full,
    /// This many uniform draws, duplicates removed.
    Sampled(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Selection {
    /// `ceil(ε n²)` draws with repetition, `ε = 2α̃`.
    Paper,
    Draws(usize),
    /// Keep the whole filtered pool, in pool order.
    All,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalParams {
    /// `α̃`; `None` uses `1/(13 v(B)^4 v(B)!)`.
    pub alpha: Option<f64>,
    pub d: f64,
    pub delta: f64,
    pub p: f64,
    pub pool: Pool,
    pub selection: Selection,
    pub arrow_filter: bool,
    pub solver: SolverOptions,
}

impl NormalParams {
    pub fn new(d: f64, delta: f64, p: f64) -> Self {
        NormalParams {
            alpha: None,
            d,
            delta,
            p,
            pool: Pool::Full,
            selection: Selection::Paper,
            arrow_filter: true,
            solver: SolverOptions::default(),
        }
    }
}

/// `1/(13 v^4 v!)`.
pub fn alpha_tilde(vb: usize) -> Rational {
    let den = num_bigint::BigInt::from(13u32) * num_bigint::BigInt::from(vb).pow(4) * factorial(vb as u64);
    Rational::new(1.into(), den)
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StageSizes {
    pub pool: usize,
    pub psi1: usize,
    pub psi2: usize,
    pub psi3: usize,
    pub draws: usize,
    pub selected: usize,
    pub psi4: usize,
    pub capped: usize,
    pub xi0: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalReport {
    pub regime: Pool,
    pub arrow_filter: bool,
    pub z_status: Option<ArrowStatus>,
    pub z_arrows_alone: bool,
    pub alpha: f64,
    pub heavy_threshold: f64,
    pub pair_cap: f64,
    pub selection_target: usize,
    /// Fewer embeddings than requested draws were available.
    pub truncated: bool,
    pub sizes: StageSizes,
    pub removals: BTreeMap<String, usize>,
    pub bad_histogram: BTreeMap<String, usize>,
    pub heavy_pairs: usize,
    /// `|Ξ⁰| ≥ α̃ n²`.
    pub meets_size_target: bool,
    /// First stage left empty, if any.
    pub starved: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFamily {
    pub xi0: Vec<Embedding>,
    pub report: NormalReport,
}

fn bump(m: &mut BTreeMap<String, usize>, key: &str, by: usize) {
    if by > 0 {
        *m.entry(key.to_string()).or_insert(0) += by;
    }
}

type Cands = Vec<(SubCopy, Vec<Edge>)>;

struct PairCounter<'a> {
    f: &'a Graph,
    z: &'a Graph,
    members: Vec<Graph>,
    cands: HashMap<EdgeId, Cands>,
    counts: HashMap<(EdgeId, EdgeId), usize>,
}

impl PairCounter<'_> {
    fn cands(&mut self, e: EdgeId) -> Result<&Cands> {
        if !self.cands.contains_key(&e) {
            let c = p_candidates(self.f, &self.members, self.z, self.z.edge(e))?;
            self.cands.insert(e, c);
        }
        Ok(&self.cands[&e])
    }

    fn count(&mut self, e1: EdgeId, e2: EdgeId) -> Result<usize> {
        let key = (e1.min(e2), e1.max(e2));
        if let Some(&c) = self.counts.get(&key) {
            return Ok(c);
        }
        self.cands(e1)?;
        self.cands(e2)?;
        let c = p_count(&self.cands[&e1], &self.cands[&e2]);
        self.counts.insert(key, c);
        Ok(c)
    }
}

fn shared_vertices(a: &[u32], b: &[u32]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

pub fn construct_normal_family(
    z: &Graph,
    spec: &BoosterSpec,
    f: &Graph,
    params: &NormalParams,
    seed: Seed,
) -> Result<NormalFamily> {
    for (name, x) in [("D", params.d), ("p", params.p), ("delta", params.delta)] {
        if !(x.is_finite() && x > 0.0) {
            return Err(LabError::param(format!("{name} must be positive")));
        }
    }
    if params.p > 1.0 {
        return Err(LabError::param("p must be at most 1"));
    }
    let n = z.n();
    let nf = n as f64;
    let alpha = match params.alpha {
        Some(a) if a > 0.0 => a,
        Some(_) => return Err(LabError::param("alpha must be positive")),
        None => crate::rational::to_f64(&alpha_tilde(spec.b.n())),
    };
    let heavy_threshold = params.d / (params.p * nf.powf(params.delta));
    let pair_cap = 1.0 / (params.p * nf.powf(params.delta / 2.0));

    let pool = match params.pool {
        Pool::Full => {
            if spec.b.n() > n {
                return Err(LabError::pre("B has more vertices than Z"));
            }
            all_embeddings(&spec.b, n)
        }
        Pool::Sampled(m) => sample_embeddings(&spec.b, n, m, seed.child(0))?,
    };
    let mut sizes = StageSizes { pool: pool.len(), ..Default::default() };
    let mut removals = BTreeMap::new();
    let mut bad_histogram = BTreeMap::new();

    let z_status = if params.arrow_filter {
        Some(arrow_status(decide_arrow(z, f, &params.solver))?)
    } else {
        None
    };

    // Focus data and the arrowing verdict per embedding; identical images
    // share one verdict.
    let data: Vec<FocusData> =
        pool.par_iter().map(|h| focus_data(z, h, spec, f)).collect::<Result<_>>()?;
    let mut psi1: Vec<usize> = (0..pool.len()).collect();
    if params.arrow_filter {
        let mut images: Vec<Vec<Edge>> = pool
            .iter()
            .map(|h| {
                let mut es = booster_edges(spec, h);
                es.sort();
                es
            })
            .collect();
        let unique: BTreeSet<Vec<Edge>> = images.iter().cloned().collect();
        let verdicts: HashMap<Vec<Edge>, ArrowStatus> = unique
            .into_par_iter()
            .map(|es| {
                let add = Graph::from_edges(n, es.iter().copied())?;
                let s = arrow_status(decide_arrow_union(z, &add, f, &params.solver))?;
                Ok((es, s))
            })
            .collect::<Result<_>>()?;
        psi1.retain(|&i| {
            let s = verdicts[&std::mem::take(&mut images[i])];
            match s {
                ArrowStatus::Arrows => true,
                ArrowStatus::NotArrows => {
                    bump(&mut removals, "not-arrowing", 1);
                    false
                }
                ArrowStatus::Undecided => {
                    bump(&mut removals, "undecided", 1);
                    false
                }
            }
        });
    }
    sizes.psi1 = psi1.len();

    let mut psi2 = Vec::new();
    for i in psi1 {
        let flags = bad_flags(&data[i], z);
        if flags.b1 {
            bump(&mut bad_histogram, "B1", 1);
        }
        if flags.b2 {
            bump(&mut bad_histogram, "B2", 1);
        }
        if flags.b3 {
            bump(&mut bad_histogram, "B3", 1);
        }
        match flags.reason() {
            Some(_) => bump(&mut removals, "bad", 1),
            None => psi2.push(i),
        }
    }
    sizes.psi2 = psi2.len();

    let mut counter = PairCounter {
        f,
        z,
        members: f_minus_two_members(f),
        cands: HashMap::new(),
        counts: HashMap::new(),
    };
    let mut heavy: BTreeSet<(EdgeId, EdgeId)> = BTreeSet::new();
    let mut psi3 = Vec::new();
    for i in psi2 {
        let d = &data[i];
        let ms = d.members();
        let mut ok = true;
        'pairs: for (a, &e1) in ms.iter().enumerate() {
            for &e2 in &ms[a + 1..] {
                if !relation(d, e1, e2).sim {
                    continue;
                }
                if counter.count(e1, e2)? as f64 > heavy_threshold {
                    heavy.insert((e1, e2));
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            psi3.push(i);
        } else {
            bump(&mut removals, "heavy-pair", 1);
        }
    }
    sizes.psi3 = psi3.len();

    let paper_target = (2.0 * alpha * nf * nf).ceil() as usize;
    let (draws, truncated) = match params.selection {
        Selection::All => (psi3.len(), false),
        Selection::Paper => (paper_target.min(psi3.len()), paper_target > psi3.len()),
        Selection::Draws(k) => (k.min(psi3.len()), k > psi3.len()),
    };
    sizes.draws = draws;
    let selected: Vec<usize> = match params.selection {
        Selection::All => psi3.clone(),
        _ => {
            let mut rng = seed.child(1).rng();
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            if !psi3.is_empty() {
                for _ in 0..draws {
                    let i = psi3[rng.gen_range(0..psi3.len())];
                    if seen.insert(i) {
                        out.push(i);
                    }
                }
            }
            out
        }
    };
    sizes.selected = selected.len();

    let psi4: Vec<usize> = selected
        .iter()
        .copied()
        .filter(|&i| {
            let clash = selected
                .iter()
                .any(|&j| j != i && shared_vertices(&pool[i], &pool[j]) >= 2);
            if clash {
                bump(&mut removals, "overlap", 1);
            }
            !clash
        })
        .collect();
    sizes.psi4 = psi4.len();

    let mut c: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
    let mut capped = Vec::new();
    for i in psi4 {
        let ms = data[i].members();
        let fits = ms.iter().enumerate().all(|(a, &e1)| {
            ms[a + 1..].iter().all(|&e2| (c.get(&(e1, e2)).copied().unwrap_or(0) + 1) as f64 <= pair_cap)
        });
        if !fits {
            bump(&mut removals, "pair-cap", 1);
            continue;
        }
        for (a, &e1) in ms.iter().enumerate() {
            for &e2 in &ms[a + 1..] {
                *c.entry((e1, e2)).or_insert(0) += 1;
            }
        }
        capped.push(i);
    }
    sizes.capped = capped.len();

    let mut xi0 = Vec::new();
    for i in capped {
        if data[i].booster_edges.iter().any(|&(a, b)| z.has_edge(a, b)) {
            bump(&mut removals, "edge-clash", 1);
        } else {
            xi0.push(pool[i].clone());
        }
    }
    sizes.xi0 = xi0.len();

    let stages = [
        ("pool", sizes.pool),
        ("arrowing", sizes.psi1),
        ("bad", sizes.psi2),
        ("heavy-pair", sizes.psi3),
        ("selection", sizes.selected),
        ("overlap", sizes.psi4),
        ("pair-cap", sizes.capped),
        ("edge-clash", sizes.xi0),
    ];
    let starved = stages.iter().find(|(_, s)| *s == 0).map(|(name, _)| name.to_string());
    let report = NormalReport {
        regime: params.pool,
        arrow_filter: params.arrow_filter,
        z_status,
        z_arrows_alone: z_status == Some(ArrowStatus::Arrows),
        alpha,
        heavy_threshold,
        pair_cap,
        selection_target: paper_target,
        truncated,
        meets_size_target: xi0.len() as f64 >= alpha * nf * nf,
        heavy_pairs: heavy.len(),
        sizes,
        removals,
        bad_histogram,
        starved,
    };
    Ok(NormalFamily { xi0, report })
}
