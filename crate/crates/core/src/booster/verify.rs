//! Re-checks a normal family from scratch: all copies of `F` in each union
//! are enumerated unanchored and the conditions are evaluated pairwise.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{arrow_status, booster_edges, ArrowStatus, BadFlags, BoosterSpec, Embedding};
use crate::arrowing::{brute_force_arrow, decide_arrow, BRUTE_FORCE_CAP};
use crate::counting::enumerate_copies;
use crate::error::Result;
use crate::graph::{Edge, Graph};

use super::pipeline::NormalParams;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Violation {
    Overlap { h1: Embedding, h2: Embedding },
    Bad { h: Embedding, flags: BadFlags },
    PairCap { e1: Edge, e2: Edge, count: usize },
    EdgeClash { h: Embedding },
    NotArrowing { h: Embedding, status: ArrowStatus },
}

struct Naive {
    focus: BTreeSet<Edge>,
    flags: BadFlags,
}

fn naive(z: &Graph, h: &[u32], spec: &BoosterSpec, f: &Graph) -> Result<Naive> {
    let bs: BTreeSet<Edge> = booster_edges(spec, h).into_iter().collect();
    let u = z.union(&Graph::from_edges(z.n(), bs.iter().copied())?)?;
    let copies = if f.n() <= u.n() { enumerate_copies(f, &u, None)?.edge_sets() } else { Vec::new() };
    // (pure Z edges, booster edges) of each copy touching the booster.
    let mut mixed: Vec<(Vec<Edge>, Vec<Edge>)> = Vec::new();
    let mut focus = BTreeSet::new();
    for c in copies {
        let boost: Vec<Edge> = c.iter().copied().filter(|e| bs.contains(e)).collect();
        if boost.is_empty() {
            continue;
        }
        for &e in &c {
            if z.has_edge(e.0, e.1) {
                focus.insert(e);
            }
        }
        let pure: Vec<Edge> = c.iter().copied().filter(|e| !bs.contains(e)).collect();
        mixed.push((pure, boost));
    }
    let mut flags = BadFlags::default();
    for (i, (p1, b1)) in mixed.iter().enumerate() {
        if !p1.is_empty() && b1.len() >= 2 {
            flags.b1 = true;
        }
        for (j, (p2, b2)) in mixed.iter().enumerate() {
            if i == j || !p1.iter().any(|e| p2.contains(e)) {
                continue;
            }
            for f1 in b1 {
                for f2 in b2 {
                    if f1 != f2 {
                        flags.b2 = true;
                    } else {
                        flags.b3 = true;
                    }
                }
            }
        }
    }
    Ok(Naive { focus, flags })
}

pub fn verify_normal_family(
    z: &Graph,
    xi: &[Embedding],
    spec: &BoosterSpec,
    f: &Graph,
    params: &NormalParams,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for (i, h1) in xi.iter().enumerate() {
        for h2 in &xi[i + 1..] {
            if h1.iter().filter(|x| h2.contains(x)).count() >= 2 {
                out.push(Violation::Overlap { h1: h1.clone(), h2: h2.clone() });
            }
        }
    }
    let cap = 1.0 / (params.p * (z.n() as f64).powf(params.delta / 2.0));
    let mut c: BTreeMap<(Edge, Edge), usize> = BTreeMap::new();
    for h in xi {
        let nv = naive(z, h, spec, f)?;
        if nv.flags.b1 || nv.flags.b2 || nv.flags.b3 {
            out.push(Violation::Bad { h: h.clone(), flags: nv.flags });
        }
        let ms: Vec<Edge> = nv.focus.into_iter().collect();
        for (a, &e1) in ms.iter().enumerate() {
            for &e2 in &ms[a + 1..] {
                *c.entry((e1, e2)).or_insert(0) += 1;
            }
        }
        let bs = booster_edges(spec, h);
        if bs.iter().any(|&(a, b)| z.has_edge(a, b)) {
            out.push(Violation::EdgeClash { h: h.clone() });
        }
        if params.arrow_filter {
            let u = z.union(&Graph::from_edges(z.n(), bs)?)?;
            let status = if u.e() <= BRUTE_FORCE_CAP {
                arrow_status(brute_force_arrow(&u, f))?
            } else {
                arrow_status(decide_arrow(&u, f, &params.solver))?
            };
            if status != ArrowStatus::Arrows {
                out.push(Violation::NotArrowing { h: h.clone(), status });
            }
        }
    }
    for ((e1, e2), count) in c {
        if count as f64 > cap {
            out.push(Violation::PairCap { e1, e2, count });
        }
    }
    Ok(out)
}
