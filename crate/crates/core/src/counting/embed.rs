//! Backtracking subgraph embedding over bit-row adjacency.
//!
//! Patterns are tiny (at most [`PATTERN_CAP`] vertices), hosts are desk
//! scale. Pattern vertices are matched in a connectivity-first order and the
//! candidate set for each one is the intersection of the host rows of its
//! already-mapped neighbours.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::graph::{bits, Edge, Graph};

/// Largest pattern accepted by the exhaustive enumerators.
pub const PATTERN_CAP: usize = 10;

pub fn check_pattern_cap(f: &Graph) -> Result<()> {
    if f.n() > PATTERN_CAP {
        Err(LabError::PatternTooLarge { got: f.n(), cap: PATTERN_CAP })
    } else {
        Ok(())
    }
}

struct Plan {
    order: Vec<usize>,
    /// For each position, the pattern vertices adjacent to it that come
    /// earlier in `order`.
    back: Vec<Vec<usize>>,
}

fn plan(pattern: &Graph, fixed: &[(usize, u32)]) -> Plan {
    let k = pattern.n();
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for &(v, _) in fixed {
        if !placed[v] {
            placed[v] = true;
            order.push(v);
        }
    }
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let linked = order.iter().filter(|&&u| pattern.has_edge(u as u32, v as u32)).count();
                (linked, pattern.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            order[..i].iter().copied().filter(|&u| pattern.has_edge(u as u32, v as u32)).collect()
        })
        .collect();
    Plan { order, back }
}

struct Search<'a, F> {
    pattern: &'a Graph,
    host: &'a Graph,
    plan: Plan,
    map: Vec<u32>,
    used: Vec<u64>,
    scratch: Vec<Vec<u64>>,
    visit: F,
}

impl<F: FnMut(&[u32]) -> ControlFlow<()>> Search<'_, F> {
    fn run(&mut self, depth: usize) -> ControlFlow<()> {
        if depth == self.plan.order.len() {
            return (self.visit)(&self.map);
        }
        let v = self.plan.order[depth];
        let words = self.host.words();
        let mut cand = std::mem::take(&mut self.scratch[depth]);
        cand.clear();
        if self.plan.back[depth].is_empty() {
            cand.resize(words, !0u64);
            let tail = self.host.n() % 64;
            if tail != 0 {
                cand[words - 1] = (1u64 << tail) - 1;
            }
            if self.host.n() == 0 {
                cand.iter_mut().for_each(|w| *w = 0);
            }
        } else {
            let first = self.map[self.plan.back[depth][0]] as usize;
            cand.extend_from_slice(self.host.row(first));
            for &u in &self.plan.back[depth][1..] {
                let row = self.host.row(self.map[u] as usize);
                cand.iter_mut().zip(row).for_each(|(c, r)| *c &= r);
            }
        }
        cand.iter_mut().zip(&self.used).for_each(|(c, u)| *c &= !u);
        let mut flow = ControlFlow::Continue(());
        for x in bits(&cand) {
            self.map[v] = x as u32;
            self.used[x / 64] |= 1 << (x % 64);
            flow = self.run(depth + 1);
            self.used[x / 64] &= !(1 << (x % 64));
            if flow.is_break() {
                break;
            }
        }
        self.scratch[depth] = cand;
        flow
    }
}

/// Visits every injective edge-preserving map `pattern -> host` that agrees
/// with the `fixed` assignments (pattern vertex, host vertex). The slice
/// passed to `visit` is indexed by pattern vertex.
pub fn for_each_embedding<F>(pattern: &Graph, host: &Graph, fixed: &[(usize, u32)], visit: F)
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let k = pattern.n();
    if k > host.n() {
        return;
    }
    // Validate fixed assignments: injective, in range, and edge-consistent.
    for (i, &(a, x)) in fixed.iter().enumerate() {
        if a >= k || x as usize >= host.n() {
            return;
        }
        for &(b, y) in &fixed[..i] {
            if (a == b) != (x == y) {
                return;
            }
            if a != b && pattern.has_edge(a as u32, b as u32) && !host.has_edge(x, y) {
                return;
            }
        }
    }
    let plan = plan(pattern, fixed);
    let mut map = vec![u32::MAX; k];
    let mut used = vec![0u64; host.words()];
    let mut nfixed = 0;
    for &(a, x) in fixed {
        if map[a] == u32::MAX {
            map[a] = x;
            used[x as usize / 64] |= 1 << (x % 64);
            nfixed += 1;
        }
    }
    let mut search = Search {
        pattern,
        host,
        plan,
        map,
        used,
        scratch: vec![Vec::new(); k],
        visit,
    };
    let _ = search.pattern;
    let _ = search.run(nfixed);
}

pub fn embeddings(pattern: &Graph, host: &Graph, fixed: &[(usize, u32)]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for_each_embedding(pattern, host, fixed, |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Collects `f(map)` over all embeddings, splitting the search across host
/// vertices for the first planned pattern vertex. Output order is the
/// sequential order regardless of the thread count.
pub fn par_collect<T, F>(pattern: &Graph, host: &Graph, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[u32]) -> Option<T> + Sync,
{
    if pattern.n() == 0 || pattern.n() > host.n() {
        return Vec::new();
    }
    let first = plan(pattern, &[]).order[0];
    (0..host.n() as u32)
        .into_par_iter()
        .map(|x| {
            let mut out = Vec::new();
            for_each_embedding(pattern, host, &[(first, x)], |m| {
                if let Some(t) = f(m) {
                    out.push(t);
                }
                ControlFlow::Continue(())
            });
            out
        })
        .flatten()
        .collect()
}

pub fn has_embedding(pattern: &Graph, host: &Graph, fixed: &[(usize, u32)]) -> bool {
    let mut found = false;
    for_each_embedding(pattern, host, fixed, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// Automorphism group of a small graph, as vertex maps.
pub fn automorphisms(g: &Graph) -> Vec<Vec<u32>> {
    embeddings(g, g, &[])
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.e() != b.e() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    da == db && has_embedding(a, b, &[])
}

/// Lexicographically smallest map in the orbit `{ map ∘ α : α ∈ auts }`.
/// Two embeddings have the same image (as a subgraph) iff their canonical
/// forms coincide.
pub fn canonical(map: &[u32], auts: &[Vec<u32>]) -> Vec<u32> {
    let mut best: Vec<u32> = map.to_vec();
    let mut cand = vec![0u32; map.len()];
    for a in auts {
        for (i, c) in cand.iter_mut().enumerate() {
            *c = map[a[i] as usize];
        }
        if cand < best {
            best.copy_from_slice(&cand);
        }
    }
    best
}

pub fn is_canonical(map: &[u32], auts: &[Vec<u32>]) -> bool {
    auts.iter().all(|a| {
        for i in 0..map.len() {
            let c = map[a[i] as usize];
            if c != map[i] {
                return c > map[i];
            }
        }
        true
    })
}

/// Sorted host vertices and sorted host edges of an embedded pattern.
pub fn image(pattern: &Graph, map: &[u32]) -> (Vec<u32>, Vec<Edge>) {
    let mut vs = map.to_vec();
    vs.sort_unstable();
    (vs, image_edges(pattern, map))
}

pub fn image_edges(pattern: &Graph, map: &[u32]) -> Vec<Edge> {
    let mut es: Vec<Edge> = pattern
        .edges()
        .iter()
        .map(|&(a, b)| crate::graph::pair(map[a as usize], map[b as usize]))
        .collect();
    es.sort_unstable();
    es
}

/// Distinct isomorphism classes among `graphs`, keeping first occurrences.
pub fn iso_classes(graphs: Vec<Graph>) -> Vec<Graph> {
    let mut classes: Vec<Graph> = Vec::new();
    for g in graphs {
        if !classes.iter().any(|c| is_isomorphic(c, &g)) {
            classes.push(g);
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, star, Seed};

    fn brute_embeddings(pattern: &Graph, host: &Graph) -> usize {
        fn rec(p: &Graph, h: &Graph, map: &mut Vec<u32>, count: &mut usize) {
            let i = map.len();
            if i == p.n() {
                *count += 1;
                return;
            }
            for x in 0..h.n() as u32 {
                if map.contains(&x) {
                    continue;
                }
                if (0..i).all(|j| !p.has_edge(i as u32, j as u32) || h.has_edge(x, map[j])) {
                    map.push(x);
                    rec(p, h, map, count);
                    map.pop();
                }
            }
        }
        let mut c = 0;
        rec(pattern, host, &mut Vec::new(), &mut c);
        c
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&complete(4)).len(), 24);
        assert_eq!(automorphisms(&cycle(5)).len(), 10);
        assert_eq!(automorphisms(&path(4)).len(), 2);
        assert_eq!(automorphisms(&star(3)).len(), 6);
    }

    #[test]
    fn labelled_counts_match_brute_force() {
        for seed in 0..30 {
            let host = Graph::gnp(7, 0.5, Seed::new(seed)).unwrap();
            for p in [complete(3), path(3), cycle(4), star(2), Graph::from_edges(3, [(0, 1)]).unwrap()] {
                assert_eq!(embeddings(&p, &host, &[]).len(), brute_embeddings(&p, &host));
            }
        }
    }

    #[test]
    fn fixed_assignments_restrict() {
        let k4 = complete(4);
        let e = embeddings(&complete(3), &k4, &[(0, 2), (1, 3)]);
        assert_eq!(e.len(), 2);
        assert!(e.iter().all(|m| m[0] == 2 && m[1] == 3));
        assert!(embeddings(&complete(3), &k4, &[(0, 2), (1, 2)]).is_empty());
        let p = path(3);
        assert!(embeddings(&complete(3), &p, &[(0, 0), (1, 2)]).is_empty());
    }

    #[test]
    fn parallel_collect_matches_sequential() {
        let host = Graph::gnp(30, 0.3, Seed::new(11)).unwrap();
        let p = cycle(4);
        let mut seq = embeddings(&p, &host, &[]);
        let mut par = par_collect(&p, &host, |m| Some(m.to_vec()));
        seq.sort();
        par.sort();
        assert_eq!(seq, par);
    }

    #[test]
    fn isomorphism() {
        let relabelled = Graph::from_edges(4, [(2, 0), (0, 3), (3, 1), (1, 2)]).unwrap();
        assert!(is_isomorphic(&cycle(4), &relabelled));
        assert!(!is_isomorphic(&cycle(4), &path(4)));
        assert!(!is_isomorphic(&star(3), &path(4)));
    }

    #[test]
    fn canonical_forms_identify_images() {
        let host = complete(5);
        let f = cycle(4);
        let auts = automorphisms(&f);
        let all = embeddings(&f, &host, &[]);
        let canon: std::collections::BTreeSet<Vec<u32>> =
            all.iter().map(|m| canonical(m, &auts)).collect();
        let images: std::collections::BTreeSet<_> = all.iter().map(|m| image(&f, m)).collect();
        assert_eq!(canon.len(), images.len());
        assert_eq!(all.iter().filter(|m| is_canonical(m, &auts)).count(), canon.len());
        // 5 choices of 4 vertices, 3 four-cycles on each.
        assert_eq!(canon.len(), 15);
    }
}
