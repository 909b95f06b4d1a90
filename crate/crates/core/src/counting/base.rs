//! Basegraphs, property `T(λ, η, F)` and `(ρ, d)`-denseness.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::copies::enumerate_copies;
use super::embed::{is_isomorphic, par_collect};
use crate::error::{LabError, Result};
use crate::graph::{bits, pair, Edge, Graph, Seed};
use crate::pattern::PatternProfile;
use crate::rational::{self, Rational};

/// `Base_F(G')`: pairs `{x, y}` such that some copy `F''` of the bipartite
/// part `F' = F - w` in `G'` satisfies `F'' + {x, y} ≅ F`.
pub fn base_graph(f: &PatternProfile, g: &Graph) -> Result<Graph> {
    let fprime = f
        .bipartite_part()
        .ok_or_else(|| LabError::pre("basegraph needs a nearly bipartite pattern"))?;
    let pattern = &f.pattern;
    let mut pairs = BTreeSet::new();
    if pattern.n() <= g.n() {
        // Every edge w' with F - w' ≅ F' gives the completing pairs of copies
        // of F' that are labelled through w'.
        for &w in pattern.edges() {
            let rest = pattern.filter_edges(|_, e| e != w);
            if !is_isomorphic(&rest, &fprime) {
                continue;
            }
            let found = par_collect(&rest, g, |m| Some(pair(m[w.0 as usize], m[w.1 as usize])));
            pairs.extend(found);
        }
    }
    Graph::from_edges(g.n(), pairs)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TVerdict {
    pub host_edges: usize,
    pub sub_edges: usize,
    pub above_floor: bool,
    pub base_edges: usize,
    pub copies: usize,
    #[serde(with = "rational::serde_str")]
    pub required: Rational,
    pub pass: bool,
    pub note: Option<String>,
}

/// Single-subgraph check of property `T(λ, η, F)`.
pub fn check_t(
    f: &PatternProfile,
    g: &Graph,
    sub: &Graph,
    lambda: &Rational,
    eta: &Rational,
) -> Result<TVerdict> {
    if sub.n() != g.n() || !sub.is_subgraph_of(g) {
        return Err(LabError::pre("G' is not a subgraph of G"));
    }
    let above_floor =
        Rational::from_integer(BigInt::from(sub.e())) >= lambda * BigInt::from(g.e());
    let required = eta * BigInt::from(g.n()).pow(f.v() as u32);
    let base = base_graph(f, sub)?;
    let copies = enumerate_copies(&f.pattern, &base, None)?.len();
    let enough = Rational::from_integer(BigInt::from(copies)) >= required;
    Ok(TVerdict {
        host_edges: g.e(),
        sub_edges: sub.e(),
        above_floor,
        base_edges: base.e(),
        copies,
        required,
        pass: !above_floor || enough,
        note: (!above_floor).then(|| "below density floor: vacuous pass".to_string()),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TSearchResult {
    pub worst: Graph,
    pub verdict: TVerdict,
    pub evaluations: u64,
    /// True when the worst subgraph found violates the property.
    pub counterexample: bool,
}

/// Randomised greedy minimisation of basegraph copies over subgraphs with
/// exactly `ceil(λ e(G))` edges. A refuter only: finding nothing proves
/// nothing.
pub fn adversarial_t_search(
    f: &PatternProfile,
    g: &Graph,
    lambda: &Rational,
    eta: &Rational,
    budget: u64,
    seed: Seed,
) -> Result<TSearchResult> {
    if f.bipartite_part().is_none() {
        return Err(LabError::pre("basegraph needs a nearly bipartite pattern"));
    }
    let target = rational::ceil_to_bigint(&(lambda * BigInt::from(g.e())))
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(g.e());
    let mut rng = seed.rng();
    let mut evaluations = 0u64;
    let score = |keep: &[bool], evals: &mut u64| -> Result<usize> {
        *evals += 1;
        let sub = g.filter_edges(|id, _| keep[id.index()]);
        Ok(enumerate_copies(&f.pattern, &base_graph(f, &sub)?, None)?.len())
    };
    let mut keep = vec![true; g.e()];
    let mut kept = g.e();
    const SAMPLE: usize = 8;
    while kept > target {
        let present: Vec<usize> = (0..g.e()).filter(|&i| keep[i]).collect();
        if evaluations >= budget {
            let drop: Vec<usize> =
                present.choose_multiple(&mut rng, kept - target).copied().collect();
            for i in drop {
                keep[i] = false;
            }
            kept = target;
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for &i in present.choose_multiple(&mut rng, SAMPLE.min(present.len())) {
            keep[i] = false;
            let s = score(&keep, &mut evaluations)?;
            keep[i] = true;
            if best.map_or(true, |(bs, _)| s < bs) {
                best = Some((s, i));
            }
        }
        keep[best.unwrap().1] = false;
        kept -= 1;
    }
    let mut current = score(&keep, &mut evaluations)?;
    while evaluations < budget && kept > 0 && kept < g.e() {
        let present: Vec<usize> = (0..g.e()).filter(|&i| keep[i]).collect();
        let absent: Vec<usize> = (0..g.e()).filter(|&i| !keep[i]).collect();
        let out = present[rng.gen_range(0..present.len())];
        let back = absent[rng.gen_range(0..absent.len())];
        keep[out] = false;
        keep[back] = true;
        let s = score(&keep, &mut evaluations)?;
        if s <= current {
            current = s;
        } else {
            keep[out] = true;
            keep[back] = false;
        }
    }
    let worst = g.filter_edges(|id, _| keep[id.index()]);
    let verdict = check_t(f, g, &worst, lambda, eta)?;
    Ok(TSearchResult {
        counterexample: !verdict.pass,
        worst,
        verdict,
        evaluations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DenseMode {
    Exact,
    Heuristic { restarts: u32 },
}

/// Largest vertex count accepted by the exact denseness check.
pub const DENSE_EXACT_CAP: usize = 20;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DenseVerdict {
    pub dense: bool,
    pub exact: bool,
    pub floor_size: usize,
    pub worst: Vec<u32>,
    pub worst_edges: usize,
    #[serde(with = "rational::serde_str_opt")]
    pub worst_ratio: Option<Rational>,
    pub sets_checked: u64,
}

fn inner_edges(g: &Graph, mask: &[u64]) -> usize {
    bits(mask).map(|u| crate::graph::and_count(g.row(u), mask)).sum::<usize>() / 2
}

fn pairs_in(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// `(ρ, d)`-denseness: every `W` with `|W| >= ρ v(G0)` spans at least
/// `d C(|W|, 2)` edges. Sets of fewer than two vertices are vacuous.
pub fn rho_d_dense_check(
    g: &Graph,
    rho: &Rational,
    d: &Rational,
    mode: DenseMode,
    seed: Seed,
) -> Result<DenseVerdict> {
    let n = g.n();
    let floor = rational::ceil_to_bigint(&(rho * BigInt::from(n)))
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(2);
    let mut worst: Option<(Rational, Vec<u64>)> = None;
    let mut checked = 0u64;
    let mut consider = |mask: Vec<u64>, checked: &mut u64| {
        *checked += 1;
        let k: usize = mask.iter().map(|w| w.count_ones() as usize).sum();
        let ratio = rational::ratio(inner_edges(g, &mask) as i64, pairs_in(k) as i64);
        if worst.as_ref().map_or(true, |(r, _)| ratio < *r) {
            worst = Some((ratio, mask));
        }
    };
    let exact = matches!(mode, DenseMode::Exact);
    if floor <= n {
        match mode {
            DenseMode::Exact => {
                if n > DENSE_EXACT_CAP {
                    return Err(LabError::CapExceeded {
                        what: "vertices for the exact denseness check",
                        got: n,
                        cap: DENSE_EXACT_CAP,
                    });
                }
                for m in 0u64..(1u64 << n) {
                    if m.count_ones() as usize >= floor {
                        consider(vec![m], &mut checked);
                    }
                }
            }
            DenseMode::Heuristic { restarts } => {
                let mut rng = seed.rng();
                let verts: Vec<usize> = (0..n).collect();
                for _ in 0..restarts.max(1) {
                    let k = rng.gen_range(floor..=n);
                    let mut inside: Vec<bool> = vec![false; n];
                    for &v in verts.choose_multiple(&mut rng, k) {
                        inside[v] = true;
                    }
                    // Swap the inside vertex with the most inside neighbours
                    // for the outside vertex with the fewest, while that helps.
                    loop {
                        let mask = to_mask(&inside, g.words());
                        consider(mask.clone(), &mut checked);
                        let deg = |v: usize| crate::graph::and_count(g.row(v), &mask);
                        let out = (0..n).filter(|&v| inside[v]).max_by_key(|&v| deg(v));
                        let inn = (0..n).filter(|&v| !inside[v]).min_by_key(|&v| deg(v));
                        match (out, inn) {
                            (Some(o), Some(i)) if deg(i) + usize::from(g.has_edge(o as u32, i as u32)) < deg(o) => {
                                inside[o] = false;
                                inside[i] = true;
                            }
                            _ => break,
                        }
                    }
                }
            }
        }
    }
    let (worst_ratio, worst_mask) = match worst {
        Some((r, m)) => (Some(r), m),
        None => (None, vec![0u64; g.words()]),
    };
    let worst_vs: Vec<u32> = bits(&worst_mask).map(|v| v as u32).collect();
    Ok(DenseVerdict {
        dense: worst_ratio.as_ref().map_or(true, |r| r >= d),
        exact,
        floor_size: floor,
        worst_edges: inner_edges(g, &worst_mask),
        worst: worst_vs,
        worst_ratio,
        sets_checked: checked,
    })
}

fn to_mask(inside: &[bool], words: usize) -> Vec<u64> {
    let mut m = vec![0u64; words];
    for (v, _) in inside.iter().enumerate().filter(|(_, &b)| b) {
        m[v / 64] |= 1 << (v % 64);
    }
    m
}

/// Edges of `g` as a membership set, for subgraph bookkeeping.
pub fn edge_set(g: &Graph) -> BTreeSet<Edge> {
    g.edges().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};
    use crate::pattern::classify;
    use crate::rational::ratio;

    #[test]
    fn base_examples() {
        let k3 = classify(&complete(3)).unwrap();
        assert_eq!(base_graph(&k3, &path(3)).unwrap().edges(), &[(0, 2)]);
        assert_eq!(base_graph(&k3, &Graph::empty(4)).unwrap().e(), 0);
        let c4 = classify(&cycle(4)).unwrap();
        assert_eq!(base_graph(&c4, &path(4)).unwrap().edges(), &[(0, 3)]);
        for n in 3..8 {
            assert_eq!(base_graph(&k3, &complete(n)).unwrap(), complete(n));
        }
        let k4 = classify(&complete(4)).unwrap();
        assert!(base_graph(&k4, &complete(5)).is_err());
    }

    #[test]
    fn t_examples() {
        let k3 = classify(&complete(3)).unwrap();
        let k6 = complete(6);
        let v = check_t(&k3, &k6, &k6, &ratio(1, 1), &ratio(1, 1000)).unwrap();
        assert_eq!(v.copies, 20);
        assert!(v.pass && v.above_floor);
        let v = check_t(&k3, &k6, &path(6), &ratio(1, 2), &ratio(1, 1)).unwrap();
        assert!(v.pass && !v.above_floor && v.note.is_some());
        assert!(check_t(&k3, &path(6), &k6, &ratio(1, 2), &ratio(1, 1)).is_err());
    }

    #[test]
    fn t_search_on_k6() {
        let k3 = classify(&complete(3)).unwrap();
        let k6 = complete(6);
        let lambda = ratio(9, 10);
        // Exhaustive: every 14-edge subgraph of K6.
        let mut min_exhaustive = usize::MAX;
        for drop in 0..15 {
            let sub = k6.filter_edges(|id, _| id.index() != drop);
            let c = check_t(&k3, &k6, &sub, &lambda, &ratio(0, 1)).unwrap().copies;
            min_exhaustive = min_exhaustive.min(c);
        }
        let r = adversarial_t_search(&k3, &k6, &lambda, &ratio(1, 1000), 50, Seed::new(1)).unwrap();
        assert_eq!(r.worst.e(), 14);
        assert!(r.verdict.copies >= 1);
        assert!(r.verdict.copies >= min_exhaustive);
    }

    #[test]
    fn dense_examples() {
        let half = ratio(1, 2);
        let v = rho_d_dense_check(&complete(7), &half, &ratio(1, 1), DenseMode::Exact, Seed::new(0)).unwrap();
        assert!(v.dense);
        let v = rho_d_dense_check(&Graph::empty(6), &half, &ratio(1, 10), DenseMode::Exact, Seed::new(0)).unwrap();
        assert!(!v.dense);
        let v = rho_d_dense_check(&cycle(6), &half, &ratio(9, 10), DenseMode::Exact, Seed::new(0)).unwrap();
        assert!(!v.dense);
        assert_eq!(v.worst.len(), 3);
        assert!(v.worst_edges <= 2);
        let h = rho_d_dense_check(&cycle(6), &half, &ratio(9, 10), DenseMode::Heuristic { restarts: 20 }, Seed::new(4)).unwrap();
        assert!(!h.dense);
        assert!(rho_d_dense_check(&Graph::empty(21), &half, &half, DenseMode::Exact, Seed::new(0)).is_err());
    }

    #[test]
    fn base_monotone() {
        let k3 = classify(&complete(3)).unwrap();
        let c5 = classify(&cycle(5)).unwrap();
        for seed in 0..20 {
            let big = Graph::gnp(9, 0.5, Seed::new(seed)).unwrap();
            let small = big.filter_edges(|id, _| id.index() % 3 != 0);
            for f in [&k3, &c5] {
                assert!(base_graph(f, &small).unwrap().is_subgraph_of(&base_graph(f, &big).unwrap()));
            }
        }
    }
}
