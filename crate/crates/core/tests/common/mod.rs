//! Naive oracles and instance generators shared by the integration tests.
//!
//! Everything here works straight from the definitions by exhaustive
//! enumeration over injective maps and subsets, and shares no code with the
//! library beyond the `Graph` container.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::Rng;

use ramsey_lab::arrowing::{decide_arrow, SolverOptions};
use ramsey_lab::graph::{complete, Edge};
use ramsey_lab::{Graph, Seed};

pub fn e(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Every injective map from `0..k` into `0..n`.
pub fn injective_maps(k: usize, n: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..n as u32).permutations(k)
}

pub fn graph_on(vertices: &[u32], edges: &[Edge]) -> Graph {
    let pos = |x: u32| vertices.iter().position(|&v| v == x).unwrap() as u32;
    Graph::from_edges(vertices.len(), edges.iter().map(|&(a, b)| (pos(a), pos(b)))).unwrap()
}

fn degrees(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// Isomorphism by trying every bijection.
pub fn iso(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.e() != b.e() || degrees(a) != degrees(b) {
        return false;
    }
    injective_maps(a.n(), b.n()).any(|m| a.edges().iter().all(|&(x, y)| b.has_edge(m[x as usize], m[y as usize])))
}

pub fn without_edges(f: &Graph, drop: &[usize]) -> Graph {
    Graph::from_edges(
        f.n(),
        f.edges().iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &x)| x),
    )
    .unwrap()
}

/// Subgraphs `(V, E)` of `g` that are images of `f` under an injective map.
pub fn naive_images(f: &Graph, g: &Graph) -> BTreeSet<(Vec<u32>, Vec<Edge>)> {
    let mut out = BTreeSet::new();
    if f.n() > g.n() {
        return out;
    }
    for m in injective_maps(f.n(), g.n()) {
        let img: Vec<Edge> = f.edges().iter().map(|&(a, b)| e(m[a as usize], m[b as usize])).collect();
        if img.iter().all(|&(x, y)| g.has_edge(x, y)) {
            let mut vs = m.clone();
            vs.sort_unstable();
            let mut es = img;
            es.sort_unstable();
            out.insert((vs, es));
        }
    }
    out
}

/// `F_-(Z)`: images of every `F - w`.
pub fn naive_f_minus(f: &Graph, z: &Graph) -> BTreeSet<(Vec<u32>, Vec<Edge>)> {
    (0..f.e()).flat_map(|w| naive_images(&without_edges(f, &[w]), z)).collect()
}

/// `(|P(Z, e1, e2)|, counts by s)` straight from the three defining bullets.
pub fn naive_p(f: &Graph, z: &Graph, e1: Edge, e2: Edge) -> (usize, BTreeMap<usize, usize>) {
    let doubly: BTreeSet<(Vec<u32>, Vec<Edge>)> = (0..f.e())
        .tuple_combinations()
        .flat_map(|(a, b)| naive_images(&without_edges(f, &[a, b]), z))
        .collect();
    let completes = |c: &(Vec<u32>, Vec<Edge>), q: Edge, ei: Edge| {
        let mut es: BTreeSet<Edge> = c.1.iter().copied().collect();
        es.insert(q);
        es.insert(ei);
        let inside = c.0.contains(&ei.0) && c.0.contains(&ei.1);
        inside && es.len() == f.e() && iso(&graph_on(&c.0, &es.into_iter().collect::<Vec<_>>()), f)
    };
    let mut total = 0;
    let mut by_s = BTreeMap::new();
    for a in &doubly {
        for b in &doubly {
            if a.1.iter().any(|x| b.1.contains(x)) {
                continue;
            }
            let common: Vec<u32> = a.0.iter().copied().filter(|x| b.0.contains(x)).collect();
            if common.len() < 2 {
                continue;
            }
            let ok = common
                .iter()
                .tuple_combinations()
                .any(|(&x1, &x2)| completes(a, e(x1, x2), e1) && completes(b, e(x1, x2), e2));
            if ok {
                total += 1;
                *by_s.entry(common.len()).or_insert(0) += 1;
            }
        }
    }
    (total, by_s)
}

/// Ordered `(R, H)`-extensions of `host_roots`.
pub fn naive_extensions(roots: &[u32], h: &Graph, host_roots: &[u32], g: &Graph) -> u64 {
    let others: Vec<u32> = (0..h.n() as u32).filter(|v| !roots.contains(v)).collect();
    let free: Vec<u32> = (0..g.n() as u32).filter(|v| !host_roots.contains(v)).collect();
    let mut count = 0;
    for pick in free.iter().copied().permutations(others.len()) {
        let image = |v: u32| match roots.iter().position(|&r| r == v) {
            Some(i) => host_roots[i],
            None => pick[others.iter().position(|&o| o == v).unwrap()],
        };
        let ok = h
            .edges()
            .iter()
            .filter(|&&(a, b)| !(roots.contains(&a) && roots.contains(&b)))
            .all(|&(a, b)| g.has_edge(image(a), image(b)));
        if ok {
            count += 1;
        }
    }
    count
}

/// `Base_F(G')` by scanning every vertex set of size `v(F)` and every edge
/// subset of size `e(F) - 1` inside it.
pub fn naive_base(f: &Graph, fprime: &Graph, g: &Graph) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    if f.n() > g.n() {
        return out;
    }
    for vs in (0..g.n() as u32).combinations(f.n()) {
        let inside: Vec<Edge> = g.edges().iter().copied().filter(|&(a, b)| vs.contains(&a) && vs.contains(&b)).collect();
        for sub in inside.iter().copied().combinations(fprime.e()) {
            if !iso(&graph_on(&vs, &sub), fprime) {
                continue;
            }
            for (&x, &y) in vs.iter().tuple_combinations() {
                if sub.contains(&(x, y)) {
                    continue;
                }
                let mut es = sub.clone();
                es.push((x, y));
                if iso(&graph_on(&vs, &es), f) {
                    out.insert((x, y));
                }
            }
        }
    }
    out
}

/// Copies of `F*` meeting `W` exactly in the images of `a1, a2`, keyed by
/// edge set and the pair of marked images.
pub fn naive_fstar(fstar: &Graph, a1: usize, a2: usize, g: &Graph, w: &[usize]) -> usize {
    let w: BTreeSet<u32> = w.iter().map(|&x| x as u32).collect();
    let mut out = BTreeSet::new();
    if fstar.n() > g.n() {
        return 0;
    }
    for m in injective_maps(fstar.n(), g.n()) {
        let hits: Vec<usize> = (0..m.len()).filter(|&i| w.contains(&m[i])).collect();
        let marked_ok = w.contains(&m[a1]) && w.contains(&m[a2]) && hits.len() == 2;
        if !marked_ok || !fstar.edges().iter().all(|&(a, b)| g.has_edge(m[a as usize], m[b as usize])) {
            continue;
        }
        let mut es: Vec<Edge> = fstar.edges().iter().map(|&(a, b)| e(m[a as usize], m[b as usize])).collect();
        es.sort_unstable();
        out.insert((es, e(m[a1], m[a2])));
    }
    out.len()
}

/// Hypergraph statistics evaluated over every `j`-subset of the vertices.
pub struct NaiveStats {
    pub d: f64,
    pub delta1: usize,
    pub delta2: usize,
    pub delta_j: Vec<f64>,
    pub delta_tau: f64,
}

pub fn naive_hypergraph_stats(m: usize, edges: &[Vec<u32>], tau: f64) -> NaiveStats {
    let l = edges[0].len();
    let deg = |s: &[u32]| edges.iter().filter(|h| s.iter().all(|v| h.contains(v))).count();
    let max_deg_through = |v: u32, j: usize| {
        (0..m as u32)
            .combinations(j)
            .filter(|s| s.contains(&v))
            .map(|s| deg(&s))
            .max()
            .unwrap_or(0)
    };
    let d = (l * edges.len()) as f64 / m as f64;
    let delta1 = (0..m as u32).map(|v| deg(&[v])).max().unwrap_or(0);
    let delta2 = (0..m as u32).combinations(2).map(|s| deg(&s)).max().unwrap_or(0);
    let mut delta_j = Vec::new();
    let mut delta_tau = 0.0;
    for j in 2..=l {
        let sum: usize = (0..m as u32).map(|v| max_deg_through(v, j)).sum();
        let dj = sum as f64 / (tau.powi(j as i32 - 1) * m as f64 * d);
        delta_tau += 2f64.powi(-(((j - 1) * (j - 2) / 2) as i32)) * dj;
        delta_j.push(dj);
    }
    delta_tau *= 2f64.powi((l * (l - 1) / 2) as i32 - 1);
    NaiveStats { d, delta1, delta2, delta_j, delta_tau }
}

pub fn mask(vs: &[u32]) -> u32 {
    vs.iter().fold(0, |acc, &v| acc | 1 << v)
}

/// Every vertex set meeting every hyperedge.
pub fn hitting_sets(m: usize, edges: &[Vec<u32>]) -> Vec<u32> {
    let masks: Vec<u32> = edges.iter().map(|h| mask(h)).collect();
    (0..1u32 << m).filter(|&s| masks.iter().all(|&h| s & h != 0)).collect()
}

pub fn random_uniform_hypergraph(rng: &mut impl Rng, m: usize, l: usize, count: usize) -> Vec<Vec<u32>> {
    let mut set = BTreeSet::new();
    for _ in 0..count {
        let h: Vec<u32> = rand::seq::index::sample(rng, m, l).into_iter().map(|x| x as u32).sorted().collect();
        set.insert(h);
    }
    set.into_iter().collect()
}

/// Is `g` bipartite, by trying every 2-colouring of the vertices.
pub fn naive_bipartite(g: &Graph) -> bool {
    (0..1u32 << g.n()).any(|c| g.edges().iter().all(|&(a, b)| (c >> a & 1) != (c >> b & 1)))
}

pub fn solver() -> SolverOptions {
    SolverOptions::default()
}

/// A host on `n` vertices containing `blocks` vertex-disjoint copies of
/// `K6 - e` on random labels plus sparse random edges, redrawn until it does
/// not arrow `K3`.
pub fn k6_minus_edge_host(n: usize, blocks: usize, extra: f64, seed: Seed) -> Graph {
    assert!(6 * blocks <= n);
    let k3 = complete(3);
    let mut rng = seed.rng();
    loop {
        let labels: Vec<u32> =
            rand::seq::index::sample(&mut rng, n, 6 * blocks).into_iter().map(|x| x as u32).collect();
        let mut es: BTreeSet<Edge> = BTreeSet::new();
        for (u, v) in (0..n as u32).tuple_combinations() {
            if rng.gen_bool(extra) {
                es.insert((u, v));
            }
        }
        for block in labels.chunks(6) {
            for (i, j) in (0..6).tuple_combinations() {
                es.insert(e(block[i], block[j]));
            }
            es.remove(&e(block[0], block[1]));
        }
        let z = Graph::from_edges(n, es).unwrap();
        if !decide_arrow(&z, &k3, &solver()).unwrap().arrows() {
            return z;
        }
    }
}
