//! Unlabelled copies of a pattern and the families `F_-` and `P_s`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::embed::{
    automorphisms, canonical, check_pattern_cap, embeddings, image, is_canonical, is_isomorphic,
    iso_classes, par_collect,
};
use crate::error::{LabError, Result};
use crate::graph::{pair, Edge, Graph};

/// Restricts enumeration to copies whose image contains the anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anchor {
    Edge(Edge),
    Vertices(Vec<u32>),
}

/// Unlabelled copies of `pattern` in a host, one canonical vertex map per
/// copy, sorted.
#[derive(Clone, Debug, Serialize)]
pub struct CopyFamily {
    pub pattern: Graph,
    pub host_n: usize,
    pub copies: Vec<Vec<u32>>,
}

impl CopyFamily {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn edges_of(&self, i: usize) -> Vec<Edge> {
        super::embed::image_edges(&self.pattern, &self.copies[i])
    }

    pub fn edge_sets(&self) -> Vec<Vec<Edge>> {
        (0..self.len()).map(|i| self.edges_of(i)).collect()
    }
}

/// A subgraph of the host given by its vertex and edge sets, both sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubCopy {
    pub vertices: Vec<u32>,
    pub edges: Vec<Edge>,
}

pub fn enumerate_copies(f: &Graph, g: &Graph, anchor: Option<&Anchor>) -> Result<CopyFamily> {
    check_pattern_cap(f)?;
    if f.n() > g.n() {
        return Err(LabError::pre(format!(
            "pattern has {} vertices but the host only {}",
            f.n(),
            g.n()
        )));
    }
    let auts = automorphisms(f);
    let copies = match anchor {
        None => {
            let mut v = par_collect(f, g, |m| is_canonical(m, &auts).then(|| m.to_vec()));
            v.sort_unstable();
            v
        }
        Some(Anchor::Edge((u, v))) => {
            let mut set = BTreeSet::new();
            if g.has_edge(*u, *v) {
                for &(a, b) in f.edges() {
                    for (x, y) in [(*u, *v), (*v, *u)] {
                        for m in embeddings(f, g, &[(a as usize, x), (b as usize, y)]) {
                            set.insert(canonical(&m, &auts));
                        }
                    }
                }
            }
            set.into_iter().collect()
        }
        Some(Anchor::Vertices(vs)) => {
            if vs.is_empty() {
                return enumerate_copies(f, g, None);
            }
            let mut set = BTreeSet::new();
            for a in 0..f.n() {
                for m in embeddings(f, g, &[(a, vs[0])]) {
                    if vs.iter().all(|x| m.contains(x)) {
                        set.insert(canonical(&m, &auts));
                    }
                }
            }
            set.into_iter().collect()
        }
    };
    Ok(CopyFamily { pattern: f.clone(), host_n: g.n(), copies })
}

/// Isomorphism classes of the spanning subgraphs `F - f`.
pub fn f_minus_members(f: &Graph) -> Vec<Graph> {
    iso_classes(
        f.edges()
            .iter()
            .map(|&w| f.filter_edges(|_, e| e != w))
            .collect(),
    )
}

/// Isomorphism classes of the spanning subgraphs `F - f - g`, `f != g`.
pub fn f_minus_two_members(f: &Graph) -> Vec<Graph> {
    let es = f.edges();
    let mut all = Vec::new();
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            all.push(f.filter_edges(|id, _| id.index() != i && id.index() != j));
        }
    }
    iso_classes(all)
}

/// `|F_-(Z)|`: copies in `Z` of members of `F_-`.
pub fn count_f_minus(f: &Graph, z: &Graph) -> Result<usize> {
    let mut total = 0;
    for m in f_minus_members(f) {
        total += enumerate_copies(&m, z, None)?.len();
    }
    Ok(total)
}

/// `|F_-(Z, e)|`: the copies counted by [`count_f_minus`] that contain `e`.
pub fn count_f_minus_through(f: &Graph, z: &Graph, e: Edge) -> Result<usize> {
    let e = pair(e.0, e.1);
    if !z.has_edge(e.0, e.1) {
        return Err(LabError::pre(format!("anchor {e:?} is not an edge of Z")));
    }
    let mut total = 0;
    for m in f_minus_members(f) {
        total += enumerate_copies(&m, z, Some(&Anchor::Edge(e)))?.len();
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct PPair {
    pub f1: SubCopy,
    pub f2: SubCopy,
    /// `|V(F1) ∩ V(F2)|`.
    pub s: usize,
    /// Pairs `{x1, x2}` of common vertices that complete both sides.
    pub links: Vec<Edge>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PFamily {
    pub e1: Edge,
    pub e2: Edge,
    pub pairs: Vec<PPair>,
    pub by_s: BTreeMap<usize, usize>,
}

fn relabel(vertices: &[u32], edges: &[Edge]) -> Graph {
    let pos = |x: u32| vertices.binary_search(&x).unwrap() as u32;
    Graph::from_edges(vertices.len(), edges.iter().map(|&(a, b)| (pos(a), pos(b)))).unwrap()
}

/// Doubly-edge-deleted copies whose vertex set contains `e`, each with the
/// pairs `q` such that `copy + q + e` is isomorphic to `F`.
pub(crate) fn p_candidates(
    f: &Graph,
    members: &[Graph],
    z: &Graph,
    e: Edge,
) -> Result<Vec<(SubCopy, Vec<Edge>)>> {
    let mut out = Vec::new();
    if f.n() > z.n() {
        return Ok(out);
    }
    let mut seen = BTreeSet::new();
    for m in members {
        let fam = enumerate_copies(m, z, Some(&Anchor::Vertices(vec![e.0, e.1])))?;
        for map in &fam.copies {
            let (vertices, edges) = image(m, map);
            let sc = SubCopy { vertices, edges };
            if !seen.insert(sc.clone()) || sc.edges.binary_search(&e).is_ok() {
                continue;
            }
            let mut links = Vec::new();
            for (i, &x) in sc.vertices.iter().enumerate() {
                for &y in &sc.vertices[i + 1..] {
                    let q = (x, y);
                    if q == e || sc.edges.binary_search(&q).is_ok() {
                        continue;
                    }
                    let mut es = sc.edges.clone();
                    es.push(q);
                    es.push(e);
                    if is_isomorphic(&relabel(&sc.vertices, &es), f) {
                        links.push(q);
                    }
                }
            }
            if !links.is_empty() {
                out.push((sc, links));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn edge_disjoint(a: &[Edge], b: &[Edge]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

fn common(a: &[u32], b: &[u32]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

pub(crate) fn p_pairs(
    c1: &[(SubCopy, Vec<Edge>)],
    c2: &[(SubCopy, Vec<Edge>)],
    mut visit: impl FnMut(&SubCopy, &SubCopy, usize, Vec<Edge>),
) {
    for (a, qa) in c1 {
        for (b, qb) in c2 {
            let s = common(&a.vertices, &b.vertices);
            if s < 2 || !edge_disjoint(&a.edges, &b.edges) {
                continue;
            }
            let links: Vec<Edge> = qa.iter().copied().filter(|q| qb.contains(q)).collect();
            if !links.is_empty() {
                visit(a, b, s, links);
            }
        }
    }
}

/// `P(G, e1, e2)`, stratified by `s`. `e1` and `e2` are vertex pairs and need
/// not be edges of `G`.
pub fn enumerate_p(f: &Graph, z: &Graph, e1: Edge, e2: Edge) -> Result<PFamily> {
    check_pattern_cap(f)?;
    let (e1, e2) = (pair(e1.0, e1.1), pair(e2.0, e2.1));
    if e1 == e2 {
        return Err(LabError::param("e1 and e2 must differ"));
    }
    for x in [e1.0, e1.1, e2.0, e2.1] {
        if x as usize >= z.n() {
            return Err(LabError::VertexOutOfRange { vertex: x as usize, n: z.n() });
        }
    }
    let members = f_minus_two_members(f);
    let c1 = p_candidates(f, &members, z, e1)?;
    let c2 = p_candidates(f, &members, z, e2)?;
    let mut pairs = Vec::new();
    let mut by_s = BTreeMap::new();
    p_pairs(&c1, &c2, |a, b, s, links| {
        *by_s.entry(s).or_insert(0) += 1;
        pairs.push(PPair { f1: a.clone(), f2: b.clone(), s, links });
    });
    Ok(PFamily { e1, e2, pairs, by_s })
}

/// `|P(G, e1, e2)|` from cached candidate lists.
pub(crate) fn p_count(c1: &[(SubCopy, Vec<Edge>)], c2: &[(SubCopy, Vec<Edge>)]) -> usize {
    let mut n = 0;
    p_pairs(c1, c2, |_, _, _, _| n += 1);
    n
}
