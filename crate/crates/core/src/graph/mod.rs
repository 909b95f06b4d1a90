//! Simple undirected host graphs on dense vertex indices `0..n`.
//!
//! Every [`Graph`] keeps its edge list sorted lexicographically on
//! `(min, max)`; the position of an edge in that list is its [`EdgeId`], so
//! comparing ids compares edges in the fixed global order used by focus sets
//! and profiles. Adjacency is held as one bit row per vertex.

mod io;
mod named;
mod seed;

pub use io::{parse_edge_list, parse_graph, parse_graph6, to_edge_list, to_graph6, GraphFormat};
pub use named::{complete, complete_minus_edge, cycle, named_pattern, path, star};
pub use seed::Seed;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Position of an edge in the sorted edge sequence of its graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Edge = (u32, u32);

/// Normalises an unordered pair to `(min, max)`.
#[inline]
pub fn pair(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    edges: Vec<Edge>,
    adj: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr { n: self.n, edges: self.edges.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        Graph::from_edges(r.n, r.edges).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, edges: Vec::new(), adj: vec![0; n * words] }
    }

    /// Builds a graph from arbitrary pairs. Duplicates (in either
    /// orientation) collapse; loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::empty(n);
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(LabError::VertexOutOfRange { vertex: w as usize, n });
                }
            }
            if u == v {
                return Err(LabError::param(format!("loop at vertex {u}")));
            }
            list.push(pair(u, v));
        }
        list.sort_unstable();
        list.dedup();
        for &(u, v) in &list {
            g.set_bit(u as usize, v as usize);
            g.set_bit(v as usize, u as usize);
        }
        g.edges = list;
        Ok(g)
    }

    fn set_bit(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] |= 1u64 << (v % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    /// Number of `u64` words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id.index()]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edge_id(&self, u: u32, v: u32) -> Option<EdgeId> {
        self.edges.binary_search(&pair(u, v)).ok().map(|i| EdgeId(i as u32))
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (u, v) = (u as usize, v as usize);
        u < self.n && v < self.n && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Graph with the edge set `self ∪ other`.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(LabError::VertexCountMismatch { left: self.n, right: other.n });
        }
        let mut edges = Vec::with_capacity(self.e() + other.e());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.edges, &other.edges);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                    *x
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    *x
                }
                (Some(_), Some(y)) => {
                    j += 1;
                    *y
                }
                (Some(x), None) => {
                    i += 1;
                    *x
                }
                (None, Some(y)) => {
                    j += 1;
                    *y
                }
                (None, None) => unreachable!(),
            };
            edges.push(next);
        }
        let mut g = Graph::empty(self.n);
        for k in 0..g.adj.len() {
            g.adj[k] = self.adj[k] | other.adj[k];
        }
        g.edges = edges;
        Ok(g)
    }

    /// Subgraph on the same vertex set keeping the edges selected by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(EdgeId, Edge) -> bool) -> Graph {
        let kept: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, &e)| keep(EdgeId(i as u32), e))
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(self.n, kept).expect("subset of a valid edge set")
    }

    /// Induced subgraph on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut edges = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u as u32, v as u32) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Graph::from_edges(vertices.len(), edges).expect("relabelled induced subgraph")
    }

    /// `e_G(U)` when `w` is `None`, else `e_G(U, W)` for disjoint `U`, `W`.
    pub fn edge_count_between(&self, u: &[usize], w: Option<&[usize]>) -> Result<usize> {
        let mask_u = self.vertex_mask(u)?;
        match w {
            None => {
                let twice: usize = distinct(u)
                    .iter()
                    .map(|&x| and_count(self.row(x), &mask_u))
                    .sum();
                Ok(twice / 2)
            }
            Some(w) => {
                let mask_w = self.vertex_mask(w)?;
                if mask_u.iter().zip(&mask_w).any(|(a, b)| a & b != 0) {
                    return Err(LabError::param("vertex sets U and W overlap"));
                }
                Ok(distinct(u).iter().map(|&x| and_count(self.row(x), &mask_w)).sum())
            }
        }
    }

    /// Bit mask of a vertex set, validating the range.
    pub fn vertex_mask(&self, vertices: &[usize]) -> Result<Vec<u64>> {
        let mut mask = vec![0u64; self.words];
        for &v in vertices {
            if v >= self.n {
                return Err(LabError::VertexOutOfRange { vertex: v, n: self.n });
            }
            mask[v / 64] |= 1 << (v % 64);
        }
        Ok(mask)
    }

    /// Samples `G(n, p)`: pairs are visited in lexicographic order and each is
    /// kept iff a uniform draw from `[0, 1)` falls below `p`.
    pub fn gnp(n: usize, p: f64, seed: Seed) -> Result<Graph> {
        if n == 0 {
            return Err(LabError::param("G(n,p) needs n >= 1"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(LabError::param(format!("probability {p} outside [0,1]")));
        }
        let mut rng = seed.rng();
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges)
    }
}

fn distinct(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Iterates the set bits of a word slice in increasing order.
pub fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_between(g: &Graph, u: &[usize], w: Option<&[usize]>) -> usize {
        let mut c = 0;
        match w {
            None => {
                for (i, &a) in u.iter().enumerate() {
                    for &b in &u[i + 1..] {
                        c += g.has_edge(a as u32, b as u32) as usize;
                    }
                }
            }
            Some(w) => {
                for &a in u {
                    for &b in w {
                        c += g.has_edge(a as u32, b as u32) as usize;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn gnp_extremes() {
        let g = Graph::gnp(5, 0.0, Seed::new(7)).unwrap();
        assert_eq!(g.e(), 0);
        assert_eq!(g.n(), 5);
        let g = Graph::gnp(5, 1.0, Seed::new(7)).unwrap();
        assert_eq!(g.e(), 10);
        assert!(Graph::gnp(5, 1.5, Seed::new(1)).is_err());
        assert!(Graph::gnp(5, -0.1, Seed::new(1)).is_err());
        assert!(Graph::gnp(0, 0.5, Seed::new(1)).is_err());
    }

    #[test]
    fn gnp_mean_edge_count() {
        // Binomial(4950, 1/2) per sample; the mean over 10000 samples has
        // standard deviation sqrt(4950/4)/100.
        let trials = 10_000u64;
        let total: usize = (0..trials)
            .map(|t| Graph::gnp(100, 0.5, Seed::with_stream(42, t)).unwrap().e())
            .sum();
        let mean = total as f64 / trials as f64;
        let sd = (4950.0f64 * 0.25).sqrt() / (trials as f64).sqrt();
        assert!((mean - 2475.0).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = Graph::gnp(40, 0.3, Seed::with_stream(9, 3)).unwrap();
        let b = Graph::gnp(40, 0.3, Seed::with_stream(9, 3)).unwrap();
        let c = Graph::gnp(40, 0.3, Seed::with_stream(9, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn union_examples() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.union(&Graph::empty(3)).unwrap(), g);
        assert_eq!(g.union(&g).unwrap().e(), 1);
        let h = Graph::from_edges(3, [(1, 2)]).unwrap();
        assert_eq!(g.union(&h).unwrap(), path(3));
        assert!(g.union(&Graph::empty(4)).is_err());
    }

    #[test]
    fn edge_count_examples() {
        let k4 = complete(4);
        assert_eq!(k4.edge_count_between(&[0, 1, 2, 3], None).unwrap(), 6);
        assert_eq!(k4.edge_count_between(&[0, 1], Some(&[2, 3])).unwrap(), 4);
        let c5 = cycle(5);
        assert_eq!(c5.edge_count_between(&[0, 2], Some(&[1])).unwrap(), 2);
        assert!(k4.edge_count_between(&[0, 1], Some(&[1, 2])).is_err());
        assert!(k4.edge_count_between(&[0, 9], None).is_err());
    }

    #[test]
    fn edge_ids_follow_lexicographic_order() {
        let g = Graph::from_edges(4, [(3, 2), (1, 0), (0, 3), (2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3), (2, 3)]);
        assert_eq!(g.edge_id(3, 0), Some(EdgeId(2)));
        assert_eq!(g.edge_id(1, 2), None);
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(1, 3)]).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n as u32 {
                    for v in u + 1..n as u32 {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn adjacency_matches_edge_list(g in arb_graph(12)) {
            let mut upper = 0;
            for u in 0..g.n() {
                prop_assert!(!g.has_edge(u as u32, u as u32));
                for v in 0..g.n() {
                    prop_assert_eq!(g.has_edge(u as u32, v as u32), g.has_edge(v as u32, u as u32));
                    if u < v && g.has_edge(u as u32, v as u32) {
                        upper += 1;
                        prop_assert!(g.edge_id(u as u32, v as u32).is_some());
                    }
                }
            }
            prop_assert_eq!(upper, g.e());
            prop_assert!(g.edges().windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn union_laws(a in arb_graph(9), seed in any::<u64>()) {
            let n = a.n();
            let b = Graph::gnp(n, 0.4, Seed::new(seed)).unwrap();
            let c = Graph::gnp(n, 0.3, Seed::with_stream(seed, 1)).unwrap();
            prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
            prop_assert_eq!(a.union(&a).unwrap(), a.clone());
            prop_assert_eq!(
                a.union(&b).unwrap().union(&c).unwrap(),
                a.union(&b.union(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn edge_counts_match_double_loop(g in arb_graph(12), mask in any::<u16>(), side in any::<u16>()) {
            let n = g.n();
            let u: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let w: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0 && side >> i & 1 == 1).collect();
            prop_assert_eq!(g.edge_count_between(&u, None).unwrap(), naive_between(&g, &u, None));
            prop_assert_eq!(
                g.edge_count_between(&u, Some(&w)).unwrap(),
                naive_between(&g, &u, Some(&w))
            );
        }
    }
}
