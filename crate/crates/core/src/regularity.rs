//! Scaled pair densities, `(ε,p)`-regularity, reduced graphs and partite
//! copy counts.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::embed::for_each_embedding;
use crate::error::{LabError, Result};
use crate::graph::{pair, Edge, Graph, Seed};
use crate::rational::{self, Rational};

pub const EXACT_REGULARITY_CAP: usize = 16;
pub const DEFAULT_SAMPLES: usize = 10_000;

pub type VertexPartition = Vec<Vec<usize>>;

/// Consecutive classes with sizes differing by at most one.
pub fn balanced_partition(n: usize, t: usize) -> Result<VertexPartition> {
    if t == 0 || t > n {
        return Err(LabError::param("need 1 <= t <= n"));
    }
    let (q, r) = (n / t, n % t);
    let mut out = Vec::new();
    let mut next = 0;
    for i in 0..t {
        let size = q + usize::from(i >= t - r);
        out.push((next..next + size).collect());
        next += size;
    }
    Ok(out)
}

fn check_sets(h: &Graph, x: &[usize], y: &[usize]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(LabError::param("vertex sets must be nonempty"));
    }
    let xs: BTreeSet<usize> = x.iter().copied().collect();
    let ys: BTreeSet<usize> = y.iter().copied().collect();
    if xs.len() != x.len() || ys.len() != y.len() {
        return Err(LabError::param("vertex sets must not repeat vertices"));
    }
    if !xs.is_disjoint(&ys) {
        return Err(LabError::param("vertex sets must be disjoint"));
    }
    if let Some(&v) = xs.iter().chain(ys.iter()).find(|&&v| v >= h.n()) {
        return Err(LabError::VertexOutOfRange { vertex: v, n: h.n() });
    }
    Ok(())
}

fn check_p(p: &Rational) -> Result<()> {
    if *p <= Rational::zero() {
        return Err(LabError::param("p must be positive"));
    }
    Ok(())
}

fn frac(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `d_{H,p}(X,Y) = e(X,Y) / (p |X| |Y|)`.
pub fn pair_density(h: &Graph, p: &Rational, x: &[usize], y: &[usize]) -> Result<Rational> {
    check_sets(h, x, y)?;
    check_p(p)?;
    let e = h.edge_count_between(x, Some(y))?;
    Ok(frac(e, x.len() * y.len()) / p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CheckMode {
    Exact,
    Sampled { samples: usize },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SubsetWitness {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    #[serde(with = "crate::rational::serde_str")]
    pub density: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub deviation: Rational,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegularityVerdict {
    pub mode: CheckMode,
    /// `Some(true)` only when certified exactly; sampling can only refute.
    pub regular: Option<bool>,
    #[serde(with = "crate::rational::serde_str")]
    pub density: Rational,
    /// Largest deviation seen, violating or not.
    pub worst: Option<SubsetWitness>,
    pub checked: u64,
}

/// Smallest admissible subset size: `ceil(ε |S|)`, at least 1.
fn min_size(eps: &Rational, s: usize) -> usize {
    let m = rational::ceil_to_bigint(&(eps * Rational::from_integer(BigInt::from(s))));
    m.to_usize().unwrap_or(usize::MAX).max(1)
}

/// `|e/(a b) - E/(A B)|` as an exact fraction over small integers.
#[derive(Clone, Copy)]
struct Dev {
    num: i128,
    den: i128,
}

impl Dev {
    fn new(e: usize, a: usize, b: usize, big_e: usize, big_a: usize, big_b: usize) -> Dev {
        let num = (e * big_a * big_b) as i128 - (big_e * a * b) as i128;
        Dev { num: num.abs(), den: (a * b * big_a * big_b) as i128 }
    }

    fn gt(self, o: Dev) -> bool {
        self.num * o.den > o.num * self.den
    }
}

struct Worst {
    dev: Dev,
    x: Vec<usize>,
    y: Vec<usize>,
}

fn finish(
    h: &Graph,
    p: &Rational,
    eps: &Rational,
    density: Rational,
    worst: Option<Worst>,
    checked: u64,
    mode: CheckMode,
) -> Result<RegularityVerdict> {
    let witness = match worst {
        Some(w) => {
            let deviation = Rational::new(w.dev.num.into(), w.dev.den.into()) / p;
            let d = pair_density(h, p, &w.x, &w.y)?;
            Some(SubsetWitness { x: w.x, y: w.y, density: d, deviation })
        }
        None => None,
    };
    let violated = witness.as_ref().is_some_and(|w| w.deviation >= *eps);
    let regular = match (mode, violated) {
        (_, true) => Some(false),
        (CheckMode::Exact, false) => Some(true),
        (CheckMode::Sampled { .. }, false) => None,
    };
    Ok(RegularityVerdict { mode, regular, density, worst: witness, checked })
}

/// Checks `|d(X',Y') - d(X,Y)| < ε` for all `X' ⊆ X`, `Y' ⊆ Y` with
/// `|X'| ≥ ε|X|`, `|Y'| ≥ ε|Y|`.
///
/// Exact mode enumerates every `X'`; for each `X'` and each size of `Y'`,
/// the extreme edge counts are reached by the highest- and lowest-degree
/// vertices of `Y` into `X'`, so every `Y'` is covered without listing it.
pub fn is_eps_p_regular(
    h: &Graph,
    p: &Rational,
    x: &[usize],
    y: &[usize],
    eps: &Rational,
    mode: CheckMode,
    seed: Seed,
) -> Result<RegularityVerdict> {
    check_sets(h, x, y)?;
    check_p(p)?;
    if *eps <= Rational::zero() {
        return Err(LabError::param("eps must be positive"));
    }
    let density = pair_density(h, p, x, y)?;
    let (big_a, big_b) = (x.len(), y.len());
    let big_e = h.edge_count_between(x, Some(y))?;
    let (amin, bmin) = (min_size(eps, big_a), min_size(eps, big_b));
    if amin > big_a || bmin > big_b {
        return finish(h, p, eps, density, None, 0, mode);
    }
    let adj = |u: usize, v: usize| h.has_edge(u as u32, v as u32);
    match mode {
        CheckMode::Exact => {
            if big_a > EXACT_REGULARITY_CAP || big_b > EXACT_REGULARITY_CAP {
                return Err(LabError::CapExceeded {
                    what: "class size for exact regularity",
                    got: big_a.max(big_b),
                    cap: EXACT_REGULARITY_CAP,
                });
            }
            let mut worst: Option<Worst> = None;
            let mut checked = 0u64;
            for mask in 1u32..(1 << big_a) {
                let a = mask.count_ones() as usize;
                if a < amin {
                    continue;
                }
                let xs: Vec<usize> = (0..big_a).filter(|i| mask >> i & 1 == 1).map(|i| x[i]).collect();
                let mut deg: Vec<(usize, usize)> =
                    y.iter().map(|&v| (xs.iter().filter(|&&u| adj(u, v)).count(), v)).collect();
                deg.sort_unstable_by(|p, q| q.0.cmp(&p.0).then(p.1.cmp(&q.1)));
                let (mut hi, mut lo) = (0, 0);
                for t in 1..=big_b {
                    hi += deg[t - 1].0;
                    lo += deg[big_b - t].0;
                    if t < bmin {
                        continue;
                    }
                    checked += 2;
                    for (e, top) in [(hi, true), (lo, false)] {
                        let dev = Dev::new(e, a, t, big_e, big_a, big_b);
                        if worst.as_ref().is_none_or(|w| dev.gt(w.dev)) {
                            let ys = if top { &deg[..t] } else { &deg[big_b - t..] };
                            let mut ys: Vec<usize> = ys.iter().map(|d| d.1).collect();
                            ys.sort_unstable();
                            worst = Some(Worst { dev, x: xs.clone(), y: ys });
                        }
                    }
                }
            }
            finish(h, p, eps, density, worst, checked, mode)
        }
        CheckMode::Sampled { samples } => {
            let chunks = samples.div_ceil(256);
            let found: Vec<Worst> = (0..chunks)
                .into_par_iter()
                .filter_map(|c| {
                    let mut rng = seed.child(c as u64).rng();
                    let mut best: Option<Worst> = None;
                    for _ in 0..256.min(samples - c * 256) {
                        let a = rng.gen_range(amin..=big_a);
                        let b = rng.gen_range(bmin..=big_b);
                        let mut xs: Vec<usize> = x.choose_multiple(&mut rng, a).copied().collect();
                        let mut ys: Vec<usize> = y.choose_multiple(&mut rng, b).copied().collect();
                        xs.sort_unstable();
                        ys.sort_unstable();
                        let e = xs.iter().map(|&u| ys.iter().filter(|&&v| adj(u, v)).count()).sum();
                        let dev = Dev::new(e, a, b, big_e, big_a, big_b);
                        if best.as_ref().is_none_or(|w| dev.gt(w.dev)) {
                            best = Some(Worst { dev, x: xs, y: ys });
                        }
                    }
                    best
                })
                .collect();
            let worst = found.into_iter().reduce(|a, b| if b.dev.gt(a.dev) { b } else { a });
            finish(h, p, eps, density, worst, samples as u64, mode)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub density: Rational,
    pub regular: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReducedGraph {
    pub classes: VertexPartition,
    #[serde(with = "crate::rational::serde_str")]
    pub d: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub eps: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub p: Rational,
    /// Exact mode certifies each edge; sampled mode only failed to refute.
    pub certified: bool,
    pub edges: Vec<Edge>,
    pub pairs: Vec<PairCheck>,
}

impl ReducedGraph {
    pub fn graph(&self) -> Result<Graph> {
        Graph::from_edges(self.classes.len(), self.edges.iter().copied())
    }
}

/// `R(P, d, ε)`: class pairs that pass the regularity check with density at
/// least `d`.
pub fn reduced_graph(
    h: &Graph,
    p: &Rational,
    partition: &[Vec<usize>],
    d: &Rational,
    eps: &Rational,
    mode: CheckMode,
    seed: Seed,
) -> Result<ReducedGraph> {
    let mut edges = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..partition.len() {
        for j in i + 1..partition.len() {
            let v = is_eps_p_regular(h, p, &partition[i], &partition[j], eps, mode, seed.child((i * partition.len() + j) as u64))?;
            let passed = v.regular != Some(false);
            if passed && v.density >= *d {
                edges.push(pair(i as u32, j as u32));
            }
            pairs.push(PairCheck { i, j, density: v.density, regular: v.regular });
        }
    }
    Ok(ReducedGraph {
        classes: partition.to_vec(),
        d: d.clone(),
        eps: eps.clone(),
        p: p.clone(),
        certified: mode == CheckMode::Exact,
        edges,
        pairs,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountingReport {
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
    pub holds: bool,
    /// Re-verification of the designated pairs, when requested.
    pub pairs_ok: Option<bool>,
}

/// Partite copies of `F'` in `H`: maps with `φ(i) ∈ V_i` sending edges to
/// edges, compared with `ξ p^{e(F')} ∏|V_i|`.
pub fn counting_lemma_check(
    fprime: &Graph,
    classes: &[Vec<usize>],
    h: &Graph,
    p: &Rational,
    xi: f64,
    verify: Option<(&Rational, &Rational)>,
) -> Result<CountingReport> {
    check_p(p)?;
    if classes.len() != fprime.n() {
        return Err(LabError::param(format!(
            "{} classes for a pattern on {} vertices",
            classes.len(),
            fprime.n()
        )));
    }
    let mut seen = BTreeSet::new();
    for c in classes {
        for &v in c {
            if v >= h.n() {
                return Err(LabError::VertexOutOfRange { vertex: v, n: h.n() });
            }
            if !seen.insert(v) {
                return Err(LabError::param("classes must be disjoint"));
            }
        }
    }
    let mut count = 0u64;
    let mut phi = vec![0usize; fprime.n()];
    fn rec(i: usize, f: &Graph, classes: &[Vec<usize>], h: &Graph, phi: &mut Vec<usize>, count: &mut u64) {
        if i == f.n() {
            *count += 1;
            return;
        }
        for &v in &classes[i] {
            if f.neighbors(i).filter(|&j| j < i).all(|j| h.has_edge(phi[j] as u32, v as u32)) {
                phi[i] = v;
                rec(i + 1, f, classes, h, phi, count);
            }
        }
    }
    rec(0, fprime, classes, h, &mut phi, &mut count);
    let sizes: f64 = classes.iter().map(|c| c.len() as f64).product();
    let bound = xi * rational::to_f64(p).powi(fprime.e() as i32) * sizes;
    let ratio = if bound > 0.0 { count as f64 / bound } else { f64::INFINITY };
    let pairs_ok = match verify {
        None => None,
        Some((d, eps)) => {
            let mut ok = true;
            for &(a, b) in fprime.edges() {
                let (x, y) = (&classes[a as usize], &classes[b as usize]);
                let mode = if x.len().max(y.len()) <= EXACT_REGULARITY_CAP {
                    CheckMode::Exact
                } else {
                    CheckMode::Sampled { samples: DEFAULT_SAMPLES }
                };
                let v = is_eps_p_regular(h, p, x, y, eps, mode, Seed::new(0))?;
                ok &= v.regular != Some(false) && v.density >= *d;
            }
            Some(ok)
        }
    };
    Ok(CountingReport { count, bound, ratio, holds: count as f64 >= bound, pairs_ok })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OverlapCount {
    pub count: u64,
    /// `2 p^{e(F*)} n^{v(F*)-2} |W|²`.
    pub bound: f64,
}

/// Copies of `F*` meeting `W` exactly in the images of the marked vertices.
/// A copy is its edge set together with the image of `{a1, a2}`.
pub fn fstar_overlap_count(
    fstar: &Graph,
    a1: usize,
    a2: usize,
    g: &Graph,
    w: &[usize],
    p: f64,
) -> Result<OverlapCount> {
    if a1 >= fstar.n() || a2 >= fstar.n() || a1 == a2 {
        return Err(LabError::param("marked vertices must be two distinct vertices of F*"));
    }
    if fstar.has_edge(a1 as u32, a2 as u32) {
        return Err(LabError::pre("marked vertices must be non-adjacent"));
    }
    let wset: BTreeSet<u32> = w.iter().map(|&v| v as u32).collect();
    if let Some(&v) = wset.iter().find(|&&v| v as usize >= g.n()) {
        return Err(LabError::VertexOutOfRange { vertex: v as usize, n: g.n() });
    }
    let mut copies: BTreeSet<(Vec<Edge>, Edge)> = BTreeSet::new();
    for &x in &wset {
        for &y in &wset {
            if x == y {
                continue;
            }
            for_each_embedding(fstar, g, &[(a1, x), (a2, y)], |m| {
                let clean = m
                    .iter()
                    .enumerate()
                    .all(|(i, v)| i == a1 || i == a2 || !wset.contains(v));
                if clean {
                    let mut es: Vec<Edge> =
                        fstar.edges().iter().map(|&(a, b)| pair(m[a as usize], m[b as usize])).collect();
                    es.sort_unstable();
                    copies.insert((es, pair(x, y)));
                }
                ControlFlow::Continue(())
            });
        }
    }
    let bound = 2.0 * p.powi(fstar.e() as i32) * (g.n() as f64).powi(fstar.n() as i32 - 2) * (w.len() as f64).powi(2);
    Ok(OverlapCount { count: copies.len() as u64, bound })
}
