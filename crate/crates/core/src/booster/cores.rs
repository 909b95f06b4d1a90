//! Exhaustive containers and cores for small hypergraphs.
//!
//! Containers are the maximal independent sets; cores are their complements.
//! Every hitting set `A` has an independent complement, which lies in some
//! maximal one, so `A` contains the matching core.

use serde::Serialize;

use super::hypergraph::BoosterHypergraph;
use crate::error::{LabError, Result};

pub const CORE_VERTEX_CAP: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct CoreFamily {
    pub m: usize,
    pub containers: Vec<Vec<u32>>,
    pub cores: Vec<Vec<u32>>,
}

fn masks(h: &BoosterHypergraph) -> Vec<u32> {
    h.edges.iter().map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v)).collect()
}

fn members(mask: u32, m: usize) -> Vec<u32> {
    (0..m as u32).filter(|&v| mask >> v & 1 == 1).collect()
}

fn independent(set: u32, edges: &[u32]) -> bool {
    edges.iter().all(|&e| e & !set != 0)
}

pub fn brute_force_cores(h: &BoosterHypergraph) -> Result<CoreFamily> {
    if h.m > CORE_VERTEX_CAP {
        return Err(LabError::CapExceeded { what: "hypergraph vertex count", got: h.m, cap: CORE_VERTEX_CAP });
    }
    let m = h.m;
    let edges = masks(h);
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut containers = Vec::new();
    let mut cores = Vec::new();
    for set in 0..=full {
        if !independent(set, &edges) {
            continue;
        }
        let maximal = (0..m).all(|v| set >> v & 1 == 1 || !independent(set | 1 << v, &edges));
        if maximal {
            containers.push(members(set, m));
            cores.push(members(full & !set, m));
        }
    }
    Ok(CoreFamily { m, containers, cores })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoreReport {
    pub cores: usize,
    pub min_core: usize,
    pub hitting_sets: u64,
    /// Hitting sets containing no core.
    pub c3_violations: u64,
    /// `|C| ≥ β m` for every core.
    pub c2_holds: bool,
    /// `ln |C| ≤ m^{1-γ}`.
    pub c1_holds: bool,
    pub log_cores: f64,
    /// Containers that span a hyperedge.
    pub dirty_containers: usize,
}

pub fn verify_core_properties(h: &BoosterHypergraph, c: &CoreFamily, beta: f64, gamma: f64) -> Result<CoreReport> {
    if h.m > CORE_VERTEX_CAP {
        return Err(LabError::CapExceeded { what: "hypergraph vertex count", got: h.m, cap: CORE_VERTEX_CAP });
    }
    let m = h.m;
    let edges = masks(h);
    let core_masks: Vec<u32> = c.cores.iter().map(|s| s.iter().fold(0u32, |a, &v| a | 1 << v)).collect();
    let full: u32 = (1u32 << m) - 1;
    let (mut hitting_sets, mut c3_violations) = (0u64, 0u64);
    for a in 0..=full {
        if edges.iter().all(|&e| e & a != 0) {
            hitting_sets += 1;
            if !core_masks.iter().any(|&k| k & !a == 0) {
                c3_violations += 1;
            }
        }
    }
    let min_core = c.cores.iter().map(Vec::len).min().unwrap_or(0);
    let log_cores = (c.cores.len().max(1) as f64).ln();
    let dirty_containers = c
        .containers
        .iter()
        .filter(|j| !independent(j.iter().fold(0u32, |a, &v| a | 1 << v), &edges))
        .count();
    Ok(CoreReport {
        cores: c.cores.len(),
        min_core,
        hitting_sets,
        c3_violations,
        c2_holds: c.cores.iter().all(|k| k.len() as f64 >= beta * m as f64),
        c1_holds: log_cores <= (m as f64).powf(1.0 - gamma),
        log_cores,
        dirty_containers,
    })
}
