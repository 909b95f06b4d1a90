//! Deciding `G -> (F)_2^e`.
//!
//! Each copy of `F` in `G` is a not-all-equal constraint over its edges.
//! Edges in no copy are irrelevant and coloured red.

pub mod brute;
pub mod cnf;
pub mod solver;

use serde::{Deserialize, Serialize};

use crate::counting::enumerate_copies;
use crate::error::{LabError, Result};
use crate::graph::{Edge, EdgeId, Graph, Seed};

pub use brute::{brute_force_arrow, BRUTE_FORCE_CAP};
pub use cnf::to_dimacs;
pub use solver::SolverOptions;

pub const RED: u8 = 0;
pub const BLUE: u8 = 1;

/// A total colouring of `E(G)`, indexed by [`EdgeId`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub colors: Vec<u8>,
}

impl EdgeColoring {
    pub fn get(&self, id: EdgeId) -> u8 {
        self.colors[id.index()]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// `R`/`B` per edge in edge order.
    pub fn to_letters(&self) -> String {
        self.colors.iter().map(|&c| if c == RED { 'R' } else { 'B' }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Arrows,
    NotArrows,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverStats {
    pub nodes: u64,
    pub propagations: u64,
    pub constraints: usize,
    pub variables: usize,
    /// Constraints left after peeling copies with a private edge.
    pub kernel_constraints: usize,
    /// Copy split for union instances: inside `Z`, inside the addition, mixed.
    pub copies_in_z: Option<usize>,
    pub copies_in_addition: Option<usize>,
    pub copies_mixed: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowResult {
    pub verdict: Verdict,
    pub certificate: Option<EdgeColoring>,
    pub stats: SolverStats,
}

impl ArrowResult {
    pub fn arrows(&self) -> bool {
        self.verdict == Verdict::Arrows
    }
}

/// Copies of `F` in `G` as sorted lists of edge ids.
pub fn copy_constraints(g: &Graph, f: &Graph) -> Result<Vec<Vec<EdgeId>>> {
    if f.n() > g.n() {
        return Ok(Vec::new());
    }
    let fam = enumerate_copies(f, g, None)?;
    Ok((0..fam.len())
        .map(|i| {
            fam.edges_of(i)
                .into_iter()
                .map(|(a, b)| g.edge_id(a, b).unwrap())
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeCheck {
    pub free: bool,
    pub witness: Option<Vec<Edge>>,
}

/// Whether `coloring` has no monochromatic copy of `F`; otherwise the first
/// monochromatic copy in enumeration order.
pub fn is_f_free(coloring: &EdgeColoring, g: &Graph, f: &Graph) -> Result<FreeCheck> {
    if coloring.len() != g.e() {
        return Err(LabError::pre(format!(
            "colouring covers {} of {} edges",
            coloring.len(),
            g.e()
        )));
    }
    if coloring.colors.iter().any(|&c| c > 1) {
        return Err(LabError::param("two-colourings use colours 0 and 1"));
    }
    for copy in copy_constraints(g, f)? {
        let c0 = coloring.get(copy[0]);
        if f.e() > 0 && copy.iter().all(|&id| coloring.get(id) == c0) {
            return Ok(FreeCheck {
                free: false,
                witness: Some(copy.iter().map(|&id| g.edge(id)).collect()),
            });
        }
    }
    Ok(FreeCheck { free: true, witness: None })
}

pub fn decide_arrow(g: &Graph, f: &Graph, opts: &SolverOptions) -> Result<ArrowResult> {
    let copies = copy_constraints(g, f)?;
    solver::solve(g.e(), &copies, opts)
}

/// `decide_arrow(Z ∪ addition, F)` with the copy split by location.
pub fn decide_arrow_union(
    z: &Graph,
    addition: &Graph,
    f: &Graph,
    opts: &SolverOptions,
) -> Result<ArrowResult> {
    let u = z.union(addition)?;
    let copies = copy_constraints(&u, f)?;
    let (mut inz, mut inadd, mut mixed) = (0, 0, 0);
    for c in &copies {
        let zs = c.iter().filter(|&&id| {
            let (a, b) = u.edge(id);
            z.has_edge(a, b)
        });
        let nz = zs.count();
        let nadd = c
            .iter()
            .filter(|&&id| {
                let (a, b) = u.edge(id);
                addition.has_edge(a, b)
            })
            .count();
        if nz == c.len() {
            inz += 1;
        } else if nadd == c.len() {
            inadd += 1;
        } else {
            mixed += 1;
        }
    }
    let mut r = solver::solve(u.e(), &copies, opts)?;
    r.stats.copies_in_z = Some(inz);
    r.stats.copies_in_addition = Some(inadd);
    r.stats.copies_mixed = Some(mixed);
    Ok(r)
}

/// An `F`-free colouring drawn by the solver with random value order, or
/// `None` when `G -> (F)_2^e`.
pub fn sample_f_free_coloring(
    g: &Graph,
    f: &Graph,
    seed: Seed,
    budget: u64,
) -> Result<Option<EdgeColoring>> {
    let opts = SolverOptions { budget_nodes: budget, polarity: Some(seed), colours: 2 };
    Ok(decide_arrow(g, f, &opts)?.certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn is_f_free_examples() {
        let k3 = complete(3);
        let red = EdgeColoring { colors: vec![RED; 3] };
        let r = is_f_free(&red, &k3, &k3).unwrap();
        assert!(!r.free);
        assert_eq!(r.witness.unwrap(), k3.edges());
        let p = path(5);
        assert!(is_f_free(&EdgeColoring { colors: vec![RED; 4] }, &p, &k3).unwrap().free);
        // K5 as two edge-disjoint 5-cycles: red 0-1-2-3-4-0, blue pentagram.
        let k5 = complete(5);
        let colors = k5
            .edges()
            .iter()
            .map(|&(a, b)| if (b - a) % 5 == 1 || (b - a) % 5 == 4 { RED } else { BLUE })
            .collect();
        assert!(is_f_free(&EdgeColoring { colors }, &k5, &k3).unwrap().free);
        assert!(is_f_free(&EdgeColoring { colors: vec![RED; 2] }, &k3, &k3).is_err());
    }

    #[test]
    fn small_complete_graphs() {
        let k3 = complete(3);
        for n in 3..=5 {
            let r = decide_arrow(&complete(n), &k3, &opts()).unwrap();
            assert_eq!(r.verdict, Verdict::NotArrows);
            assert!(is_f_free(r.certificate.as_ref().unwrap(), &complete(n), &k3).unwrap().free);
        }
        assert!(decide_arrow(&complete(6), &k3, &opts()).unwrap().arrows());
        assert!(!decide_arrow(&cycle(7), &k3, &opts()).unwrap().arrows());
    }

    #[test]
    fn union_split() {
        let k5 = complete(5).union(&Graph::empty(6)).map(|_| ()).err();
        assert!(k5.is_some());
        let z = Graph::from_edges(6, complete(5).edges().iter().copied()).unwrap();
        let star = Graph::from_edges(6, (0..5).map(|i| (i, 5))).unwrap();
        let r = decide_arrow_union(&z, &star, &complete(3), &opts()).unwrap();
        assert!(r.arrows());
        assert_eq!(r.stats.copies_in_z, Some(10));
        assert_eq!(r.stats.copies_mixed, Some(10));
        assert_eq!(r.stats.copies_in_addition, Some(0));
        let empty = Graph::empty(4);
        assert!(!decide_arrow_union(&empty, &empty, &complete(3), &opts()).unwrap().arrows());
    }
}
