//! Exact density analysis of small pattern graphs.
//!
//! All comparisons are on exact rationals. Subgraph maximisation scans
//! vertex subsets with their full induced edge sets: deleting edges at a
//! fixed vertex set never raises `d2`, and deleting an edge never raises the
//! rooted density either.

use serde::{Deserialize, Serialize};

use crate::counting::embed::check_pattern_cap;
use crate::error::{LabError, Result};
use crate::graph::{Edge, Graph};
use crate::rational::{self, int, Rational};

/// A vertex subset together with the edges of the pattern it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub vertices: Vec<u32>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternProfile {
    pub pattern: Graph,
    #[serde(with = "rational::serde_str")]
    pub m2: Rational,
    #[serde(with = "rational::serde_str")]
    pub d2: Rational,
    pub witness: Witness,
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub nearly_bipartite: bool,
    pub nearly_bipartite_witness: Option<Edge>,
    #[serde(with = "rational::serde_str")]
    pub threshold_exponent: Rational,
}

impl PatternProfile {
    pub fn v(&self) -> usize {
        self.pattern.n()
    }

    pub fn e(&self) -> usize {
        self.pattern.e()
    }

    /// `F' = F - e` for the near-bipartiteness witness, on the same vertices.
    pub fn bipartite_part(&self) -> Option<Graph> {
        let w = self.nearly_bipartite_witness?;
        Some(self.pattern.filter_edges(|_, e| e != w))
    }
}

fn d2_of(v: usize, e: usize) -> Rational {
    if v == 2 && e == 1 {
        int(1)
    } else {
        rational::ratio(e as i64 - 1, v as i64 - 2)
    }
}

/// The 2-density of a graph with at least one edge.
pub fn d2(f: &Graph) -> Result<Rational> {
    if f.e() == 0 {
        return Err(LabError::Edgeless);
    }
    Ok(d2_of(f.n(), f.e()))
}

fn subset_edges(f: &Graph, mask: u32) -> usize {
    f.edges()
        .iter()
        .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
        .count()
}

fn mask_vertices(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn witness_of(f: &Graph, mask: u32) -> Witness {
    Witness {
        vertices: mask_vertices(mask),
        edges: f
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .collect(),
    }
}

/// `m2(F)` and the lexicographically smallest maximising vertex set.
pub fn m2(f: &Graph) -> Result<(Rational, Witness)> {
    check_pattern_cap(f)?;
    if f.e() == 0 {
        return Err(LabError::Edgeless);
    }
    let mut best: Option<(Rational, Vec<u32>, u32)> = None;
    for mask in 1u32..(1 << f.n()) {
        let e = subset_edges(f, mask);
        if e == 0 {
            continue;
        }
        let value = d2_of(mask.count_ones() as usize, e);
        let verts = mask_vertices(mask);
        let better = match &best {
            None => true,
            Some((bv, bverts, _)) => value > *bv || (value == *bv && verts < *bverts),
        };
        if better {
            best = Some((value, verts, mask));
        }
    }
    let (value, _, mask) = best.unwrap();
    Ok((value, witness_of(f, mask)))
}

/// Proper 2-colouring if one exists.
pub fn bipartition(f: &Graph) -> Option<Vec<u8>> {
    let n = f.n();
    let mut side = vec![u8::MAX; n];
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for w in f.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    stack.push(w);
                } else if side[w] == side[u] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

pub fn is_bipartite(f: &Graph) -> bool {
    bipartition(f).is_some()
}

/// The lexicographically first edge whose removal leaves a bipartite graph,
/// provided `e(F) >= 2`.
pub fn nearly_bipartite_witness(f: &Graph) -> Option<Edge> {
    if f.e() < 2 {
        return None;
    }
    f.edges()
        .iter()
        .copied()
        .find(|&w| is_bipartite(&f.filter_edges(|_, e| e != w)))
}

pub fn classify(f: &Graph) -> Result<PatternProfile> {
    let (m2, witness) = m2(f)?;
    let d2_full = d2(f)?;
    let full = (1u32 << f.n()) - 1;
    // A proper subgraph either drops a vertex or drops an edge. Dropping an
    // edge on the full vertex set gives d2 strictly below d2(F) when v > 2,
    // so strictness is decided by the induced proper vertex subsets, plus
    // the spanning case itself.
    let mut strictly = d2_full == m2;
    if strictly {
        for mask in 1u32..full {
            let e = subset_edges(f, mask);
            if e > 0 && d2_of(mask.count_ones() as usize, e) >= m2 {
                strictly = false;
                break;
            }
        }
        // Spanning proper subgraphs with one edge fewer.
        if strictly && f.e() >= 2 && d2_of(f.n(), f.e() - 1) >= m2 {
            strictly = false;
        }
        // Isolated vertices: F minus an isolated vertex keeps every edge.
    }
    let nb = nearly_bipartite_witness(f);
    Ok(PatternProfile {
        pattern: f.clone(),
        threshold_exponent: m2.recip(),
        balanced: d2_full == m2,
        strictly_balanced: strictly,
        nearly_bipartite: nb.is_some(),
        nearly_bipartite_witness: nb,
        m2,
        d2: d2_full,
        witness,
    })
}

/// `m(B) = e(B)/v(B)`.
pub fn edge_density(b: &Graph) -> Result<Rational> {
    if b.n() == 0 {
        return Err(LabError::param("edge density of the graph with no vertices"));
    }
    Ok(rational::ratio(b.e() as i64, b.n() as i64))
}

/// True iff `m(B) <= m2(F)`.
pub fn booster_admissible(b: &Graph, f: &Graph) -> Result<bool> {
    Ok(edge_density(b)? <= m2(f)?.0)
}

fn root_mask(roots: &[u32], h: &Graph) -> Result<u32> {
    let mut mask = 0u32;
    for &r in roots {
        if r as usize >= h.n() {
            return Err(LabError::VertexOutOfRange { vertex: r as usize, n: h.n() });
        }
        if mask >> r & 1 == 1 {
            return Err(LabError::param(format!("root {r} repeated")));
        }
        mask |= 1 << r;
    }
    if roots.len() >= h.n() {
        return Err(LabError::param("roots must be a proper subset of the vertices"));
    }
    Ok(mask)
}

/// `dens(R, H) = (e(H) - e(H[R])) / (v(H) - |R|)`.
pub fn rooted_density(roots: &[u32], h: &Graph) -> Result<Rational> {
    check_pattern_cap(h)?;
    let r = root_mask(roots, h)?;
    let inner = subset_edges(h, r);
    Ok(rational::ratio((h.e() - inner) as i64, (h.n() - roots.len()) as i64))
}

/// Maximum of `dens(R, H[S])` over `R ⊊ S ⊆ V(H)`, with the lexicographically
/// smallest maximising `S`.
pub fn mad(roots: &[u32], h: &Graph) -> Result<(Rational, Witness)> {
    check_pattern_cap(h)?;
    let r = root_mask(roots, h)?;
    let inner = subset_edges(h, r);
    let rest = ((1u32 << h.n()) - 1) & !r;
    let mut best: Option<(Rational, Vec<u32>, u32)> = None;
    let mut sub = rest;
    loop {
        if sub != 0 {
            let s = sub | r;
            let value = rational::ratio(
                (subset_edges(h, s) - inner) as i64,
                sub.count_ones() as i64,
            );
            let verts = mask_vertices(s);
            let better = match &best {
                None => true,
                Some((bv, bverts, _)) => value > *bv || (value == *bv && verts < *bverts),
            };
            if better {
                best = Some((value, verts, s));
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    let (value, _, mask) = best.unwrap();
    Ok((value, witness_of(h, mask)))
}
