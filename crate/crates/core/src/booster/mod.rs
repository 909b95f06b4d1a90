//! Booster machinery: focus sets, bad embeddings, connection relations,
//! normal families, index consistency, activated sets and the hypergraph
//! `H(Z, Ξ)`.
//!
//! An embedding `h` is a vertex map `V(B) -> [n]`; `h(B)` is the image graph
//! on the host vertex set. Booster edges are indexed by the edge order of
//! `B`, so `h(b_j)` is `booster_edges(h)[j]`.

pub mod activated;
pub mod cores;
pub mod hypergraph;
pub mod index;
pub mod pipeline;
pub mod verify;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::arrowing::{decide_arrow, decide_arrow_union, EdgeColoring, SolverOptions};
use crate::counting::embed::{automorphisms, canonical, for_each_embedding, is_canonical};
use crate::counting::{enumerate_copies, Anchor};
use crate::error::{LabError, Result};
use crate::graph::{complete, pair, Edge, EdgeId, Graph, Seed};

pub use activated::activated_set;
pub use cores::{brute_force_cores, verify_core_properties, CoreFamily, CoreReport};
pub use hypergraph::{hypergraph_stats, BoosterHypergraph, HypergraphStats};
pub use index::{restrict_index_consistent, verify_index_consistent, IndexParams, Partition, Profile};
pub use pipeline::{construct_normal_family, NormalParams, NormalReport, Pool, Selection};
pub use verify::{verify_normal_family, Violation};

pub type Embedding = Vec<u32>;

/// A booster graph with a fixed `F`-free colouring `σ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoosterSpec {
    pub b: Graph,
    pub sigma: EdgeColoring,
}

impl BoosterSpec {
    /// Takes `σ` from the deterministic solver run on `B`.
    pub fn new(b: Graph, f: &Graph) -> Result<Self> {
        let r = decide_arrow(&b, f, &SolverOptions::default())?;
        let sigma = r
            .certificate
            .ok_or_else(|| LabError::pre("the booster graph arrows F, so it has no F-free colouring"))?;
        Ok(BoosterSpec { b, sigma })
    }

    pub fn with_sigma(b: Graph, sigma: EdgeColoring, f: &Graph) -> Result<Self> {
        if !crate::arrowing::is_f_free(&sigma, &b, f)?.free {
            return Err(LabError::pre("sigma is not F-free on B"));
        }
        Ok(BoosterSpec { b, sigma })
    }

    pub fn k(&self) -> usize {
        self.b.e()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ArrowStatus {
    Arrows,
    NotArrows,
    Undecided,
}

pub(crate) fn arrow_status(r: Result<crate::arrowing::ArrowResult>) -> Result<ArrowStatus> {
    match r {
        Ok(r) if r.arrows() => Ok(ArrowStatus::Arrows),
        Ok(_) => Ok(ArrowStatus::NotArrows),
        Err(LabError::BudgetExceeded { .. }) => Ok(ArrowStatus::Undecided),
        Err(e) => Err(e),
    }
}

pub(crate) fn check_embedding(n: usize, spec: &BoosterSpec, h: &[u32]) -> Result<()> {
    if h.len() != spec.b.n() {
        return Err(LabError::param(format!(
            "embedding has {} entries but B has {} vertices",
            h.len(),
            spec.b.n()
        )));
    }
    for (i, &x) in h.iter().enumerate() {
        if x as usize >= n {
            return Err(LabError::VertexOutOfRange { vertex: x as usize, n });
        }
        if h[..i].contains(&x) {
            return Err(LabError::param(format!("embedding repeats vertex {x}")));
        }
    }
    Ok(())
}

/// `h(b_1), ..., h(b_K)` in the edge order of `B`.
pub fn booster_edges(spec: &BoosterSpec, h: &[u32]) -> Vec<Edge> {
    spec.b
        .edges()
        .iter()
        .map(|&(a, b)| pair(h[a as usize], h[b as usize]))
        .collect()
}

/// `h(B)` as a graph on `n` vertices.
pub fn image_graph(n: usize, spec: &BoosterSpec, h: &[u32]) -> Result<Graph> {
    check_embedding(n, spec, h)?;
    Graph::from_edges(n, booster_edges(spec, h))
}

/// A copy of `F` in `Z ∪ h(B)` that uses at least one booster edge.
#[derive(Clone, Debug, Serialize)]
pub struct MixedCopy {
    pub edges: Vec<Edge>,
    /// Edges of the copy that lie in `Z` (as ids of `Z`).
    pub z_edges: Vec<EdgeId>,
    /// Booster edge indices `j` with `h(b_j)` in the copy.
    pub booster: Vec<usize>,
}

/// Everything about one embedding that the booster predicates need.
#[derive(Clone, Debug, Serialize)]
pub struct FocusData {
    pub h: Embedding,
    pub booster_edges: Vec<Edge>,
    pub mixed: Vec<MixedCopy>,
    /// `z -> { j : z focuses on h(b_j) }`.
    pub focus: BTreeMap<EdgeId, BTreeSet<usize>>,
}

impl FocusData {
    /// `M(Z, h(B))`, sorted.
    pub fn members(&self) -> Vec<EdgeId> {
        self.focus.keys().copied().collect()
    }
}

pub fn focus_data(z: &Graph, h: &[u32], spec: &BoosterSpec, f: &Graph) -> Result<FocusData> {
    check_embedding(z.n(), spec, h)?;
    let bedges = booster_edges(spec, h);
    let hb = Graph::from_edges(z.n(), bedges.iter().copied())?;
    let u = z.union(&hb)?;
    let mut copies: BTreeSet<Vec<Edge>> = BTreeSet::new();
    if f.n() <= u.n() {
        for &b in &bedges {
            let fam = enumerate_copies(f, &u, Some(&Anchor::Edge(b)))?;
            copies.extend(fam.edge_sets());
        }
    }
    let mut mixed = Vec::new();
    let mut focus: BTreeMap<EdgeId, BTreeSet<usize>> = BTreeMap::new();
    for edges in copies {
        let z_edges: Vec<EdgeId> = edges.iter().filter_map(|&(a, b)| z.edge_id(a, b)).collect();
        let booster: Vec<usize> =
            (0..bedges.len()).filter(|&j| edges.binary_search(&bedges[j]).is_ok()).collect();
        for &zid in &z_edges {
            focus.entry(zid).or_default().extend(booster.iter().copied());
        }
        mixed.push(MixedCopy { edges, z_edges, booster });
    }
    Ok(FocusData { h: h.to_vec(), booster_edges: bedges, mixed, focus })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusSet {
    pub h: Embedding,
    pub members: Vec<EdgeId>,
}

/// `M(Z, h(B))`: edges of `Z` in some copy of `F` in `Z ∪ h(B)` that also
/// contains an edge of `h(B)`.
pub fn focus_set(z: &Graph, h: &[u32], spec: &BoosterSpec, f: &Graph) -> Result<FocusSet> {
    let d = focus_data(z, h, spec, f)?;
    Ok(FocusSet { members: d.members(), h: d.h })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadFlags {
    pub b1: bool,
    pub b2: bool,
    pub b3: bool,
}

impl BadFlags {
    pub fn any(&self) -> bool {
        self.b1 || self.b2 || self.b3
    }

    /// First flagged reason, for removal histograms.
    pub fn reason(&self) -> Option<&'static str> {
        if self.b1 {
            Some("B1")
        } else if self.b2 {
            Some("B2")
        } else if self.b3 {
            Some("B3")
        } else {
            None
        }
    }
}

pub fn bad_flags(d: &FocusData, z: &Graph) -> BadFlags {
    let in_booster = |id: EdgeId| {
        let e = z.edge(id);
        d.booster_edges.contains(&e)
    };
    let mut flags = BadFlags::default();
    // Booster edge sets of the mixed copies through each pure Z edge.
    let mut through: BTreeMap<EdgeId, Vec<&[usize]>> = BTreeMap::new();
    for c in &d.mixed {
        let pure: Vec<EdgeId> = c.z_edges.iter().copied().filter(|&id| !in_booster(id)).collect();
        if !pure.is_empty() && c.booster.len() >= 2 {
            flags.b1 = true;
        }
        for id in pure {
            through.entry(id).or_default().push(&c.booster);
        }
    }
    for sets in through.values() {
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                if i == j {
                    continue;
                }
                if sets[i].iter().any(|f1| sets[j].iter().any(|f2| f1 != f2)) {
                    flags.b2 = true;
                }
                if sets[i].iter().any(|f| sets[j].contains(f)) {
                    flags.b3 = true;
                }
            }
        }
    }
    flags
}

pub fn classify_bad(z: &Graph, h: &[u32], spec: &BoosterSpec, f: &Graph) -> Result<BadFlags> {
    Ok(bad_flags(&focus_data(z, h, spec, f)?, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRelation {
    /// `e1 ≈_h e2`: both focus on `h(B)`.
    pub approx: bool,
    /// `e1 ∼_h e2`: both focus, and together only on one booster edge.
    pub sim: bool,
}

pub fn relation(d: &FocusData, e1: EdgeId, e2: EdgeId) -> PairRelation {
    match (d.focus.get(&e1), d.focus.get(&e2)) {
        (Some(a), Some(b)) => {
            let joint: BTreeSet<usize> = a.union(b).copied().collect();
            PairRelation { approx: true, sim: joint.len() == 1 }
        }
        _ => PairRelation { approx: false, sim: false },
    }
}

fn check_pair(z: &Graph, e1: EdgeId, e2: EdgeId) -> Result<()> {
    if e1 == e2 {
        return Err(LabError::param("e1 and e2 must differ"));
    }
    for e in [e1, e2] {
        if e.index() >= z.e() {
            return Err(LabError::param(format!("edge id {} out of range", e.0)));
        }
    }
    Ok(())
}

pub fn pair_relations(
    z: &Graph,
    h: &[u32],
    spec: &BoosterSpec,
    f: &Graph,
    e1: EdgeId,
    e2: EdgeId,
) -> Result<PairRelation> {
    check_pair(z, e1, e2)?;
    Ok(relation(&focus_data(z, h, spec, f)?, e1, e2))
}

/// `c_Ξ(e1, e2)`: embeddings of the family with `e1 ≈_h e2`.
pub fn c_xi(z: &Graph, xi: &[Embedding], spec: &BoosterSpec, f: &Graph, e1: EdgeId, e2: EdgeId) -> Result<usize> {
    check_pair(z, e1, e2)?;
    let mut c = 0;
    for h in xi {
        if relation(&focus_data(z, h, spec, f)?, e1, e2).approx {
            c += 1;
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddingReport {
    pub h: Embedding,
    pub edge_disjoint: bool,
    pub union: ArrowStatus,
    pub regular: bool,
    pub interactive: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InteractiveReport {
    pub z: ArrowStatus,
    pub b: ArrowStatus,
    pub per_h: Vec<EmbeddingReport>,
    /// `None` when some decision ran out of budget.
    pub interactive: Option<bool>,
    pub regular: bool,
}

fn and3(values: impl IntoIterator<Item = Option<bool>>) -> Option<bool> {
    let mut acc = Some(true);
    for v in values {
        match v {
            Some(false) => return Some(false),
            None => acc = None,
            Some(true) => {}
        }
    }
    acc
}

fn not_arrows(s: ArrowStatus) -> Option<bool> {
    match s {
        ArrowStatus::Arrows => Some(false),
        ArrowStatus::NotArrows => Some(true),
        ArrowStatus::Undecided => None,
    }
}

pub fn check_interactive_regular(
    z: &Graph,
    xi: &[Embedding],
    spec: &BoosterSpec,
    f: &Graph,
    opts: &SolverOptions,
) -> Result<InteractiveReport> {
    let zs = arrow_status(decide_arrow(z, f, opts))?;
    let bs = arrow_status(decide_arrow(&spec.b, f, opts))?;
    let mut per_h = Vec::new();
    for h in xi {
        let hb = image_graph(z.n(), spec, h)?;
        let edge_disjoint = hb.edges().iter().all(|&(a, b)| !z.has_edge(a, b));
        let union = arrow_status(decide_arrow_union(z, &hb, f, opts))?;
        let d = focus_data(z, h, spec, f)?;
        let regular = d.focus.values().all(|s| s.len() <= 1);
        let interactive = and3([
            Some(edge_disjoint),
            not_arrows(zs),
            not_arrows(bs),
            not_arrows(union).map(|x| !x),
        ]);
        per_h.push(EmbeddingReport { h: h.clone(), edge_disjoint, union, regular, interactive });
    }
    let interactive = and3(
        [not_arrows(zs), not_arrows(bs)]
            .into_iter()
            .chain(per_h.iter().map(|r| r.interactive)),
    );
    let regular = per_h.iter().all(|r| r.regular);
    Ok(InteractiveReport { z: zs, b: bs, per_h, interactive, regular })
}

/// All unlabelled embeddings of `B` into `K_n`, one canonical map each.
pub fn all_embeddings(b: &Graph, n: usize) -> Vec<Embedding> {
    let auts = automorphisms(b);
    let mut out = Vec::new();
    if b.n() <= n {
        for_each_embedding(b, &complete(n), &[], |m| {
            if is_canonical(m, &auts) {
                out.push(m.to_vec());
            }
            std::ops::ControlFlow::Continue(())
        });
    }
    out
}

/// A uniform unlabelled embedding of `B` into `K_n`.
pub fn random_embedding(b: &Graph, n: usize, auts: &[Vec<u32>], rng: &mut impl rand::Rng) -> Embedding {
    let verts: Vec<u32> = (0..n as u32).collect();
    let m: Vec<u32> = verts.choose_multiple(rng, b.n()).copied().collect();
    canonical(&m, auts)
}

/// Uniform unlabelled embeddings, duplicates removed, first-draw order.
pub fn sample_embeddings(b: &Graph, n: usize, draws: usize, seed: Seed) -> Result<Vec<Embedding>> {
    if b.n() > n {
        return Err(LabError::pre("B has more vertices than the host"));
    }
    let auts = automorphisms(b);
    let mut rng = seed.rng();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..draws {
        let h = random_embedding(b, n, &auts, &mut rng);
        if seen.insert(h.clone()) {
            out.push(h);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_minus_edge, star};

    fn k3() -> Graph {
        complete(3)
    }

    fn id(z: &Graph, a: u32, b: u32) -> EdgeId {
        z.edge_id(a, b).unwrap()
    }

    #[test]
    fn focus_examples() {
        // Z = {1,2}, h(B) = {2,3},{1,3}.
        let z = Graph::from_edges(4, [(1, 2)]).unwrap();
        let b = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let spec = BoosterSpec::new(b, &k3()).unwrap();
        let h = vec![3, 2, 1];
        let fs = focus_set(&z, &h, &spec, &k3()).unwrap();
        assert_eq!(fs.members, vec![id(&z, 1, 2)]);
        assert!(classify_bad(&z, &h, &spec, &k3()).unwrap().b1);
        let far = Graph::from_edges(6, [(4, 5)]).unwrap();
        assert!(focus_set(&far, &h, &spec, &k3()).unwrap().members.is_empty());
        assert!(!classify_bad(&far, &h, &spec, &k3()).unwrap().any());

        // Z = K4 on {1,2,3,4} minus {1,2}, booster the single edge {1,2}.
        let z = Graph::from_edges(5, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let spec = BoosterSpec::new(complete(2), &k3()).unwrap();
        let h = vec![1, 2];
        let fs = focus_set(&z, &h, &spec, &k3()).unwrap();
        let mut want = vec![id(&z, 1, 3), id(&z, 2, 3), id(&z, 1, 4), id(&z, 2, 4)];
        want.sort();
        assert_eq!(fs.members, want);
        let r = pair_relations(&z, &h, &spec, &k3(), id(&z, 1, 3), id(&z, 2, 3)).unwrap();
        assert!(r.approx && r.sim);
        let r = pair_relations(&z, &h, &spec, &k3(), id(&z, 1, 3), id(&z, 3, 4)).unwrap();
        assert!(!r.approx && !r.sim);
        assert!(pair_relations(&z, &h, &spec, &k3(), id(&z, 1, 3), id(&z, 1, 3)).is_err());
        assert_eq!(c_xi(&z, &[], &spec, &k3(), id(&z, 1, 3), id(&z, 2, 3)).unwrap(), 0);
        assert_eq!(c_xi(&z, &[h], &spec, &k3(), id(&z, 1, 3), id(&z, 2, 3)).unwrap(), 1);
    }

    #[test]
    fn star_toy_is_b1_bad() {
        let z = Graph::from_edges(6, complete(5).edges().iter().copied()).unwrap();
        let spec = BoosterSpec::new(star(5), &k3()).unwrap();
        let h = vec![5, 0, 1, 2, 3, 4];
        let flags = classify_bad(&z, &h, &spec, &k3()).unwrap();
        assert!(flags.b1);
        let rep = check_interactive_regular(&z, &[h], &spec, &k3(), &SolverOptions::default()).unwrap();
        assert_eq!(rep.interactive, Some(true));
        assert!(!rep.regular);
    }

    #[test]
    fn single_edge_toy_is_interactive_and_good() {
        let z = complete_minus_edge(6);
        let spec = BoosterSpec::new(complete(2), &k3()).unwrap();
        let h = vec![0, 1];
        assert!(!classify_bad(&z, &h, &spec, &k3()).unwrap().any());
        let rep = check_interactive_regular(&z, &[h.clone()], &spec, &k3(), &SolverOptions::default()).unwrap();
        assert_eq!(rep.interactive, Some(true));
        assert!(rep.regular);
        assert_eq!(focus_set(&z, &h, &spec, &k3()).unwrap().members.len(), 8);
        let arrows = complete(6);
        let rep = check_interactive_regular(&arrows, &[], &spec, &k3(), &SolverOptions::default()).unwrap();
        assert_eq!(rep.interactive, Some(false));
        let rep = check_interactive_regular(&z, &[], &spec, &k3(), &SolverOptions::default()).unwrap();
        assert_eq!(rep.interactive, Some(true));
    }

    #[test]
    fn embedding_pools() {
        assert_eq!(all_embeddings(&star(5), 6).len(), 6);
        assert_eq!(all_embeddings(&complete(2), 6).len(), 15);
        assert_eq!(all_embeddings(&crate::graph::cycle(5), 6).len(), 6 * 12);
        let s = sample_embeddings(&complete(2), 6, 200, Seed::new(1)).unwrap();
        assert_eq!(s.len(), 15);
    }
}
