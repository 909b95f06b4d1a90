//! Complete backtracking search for a colouring with no monochromatic copy.
//!
//! Copies holding a private edge (an edge in no other remaining copy) are
//! peeled first: whatever the rest looks like, the private edge can be
//! coloured to break that copy. The remaining kernel is searched with
//! not-all-equal propagation: a copy whose edges are all one colour except a
//! single uncoloured edge forces that edge to the other colour.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ArrowResult, EdgeColoring, SolverStats, Verdict, BLUE, RED};
use crate::error::{LabError, Result};
use crate::graph::{EdgeId, Seed};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverOptions {
    /// Search nodes allowed before giving up.
    pub budget_nodes: u64,
    /// Random value order at each decision; `None` tries red first.
    pub polarity: Option<Seed>,
    pub colours: u8,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { budget_nodes: 50_000_000, polarity: None, colours: 2 }
    }
}

const UNSET: u8 = u8::MAX;

struct Kernel {
    /// Kernel constraints over compact variable indices.
    copies: Vec<Vec<u32>>,
    occ: Vec<Vec<u32>>,
    /// Compact variable -> host edge index.
    vars: Vec<usize>,
}

/// Peels constraints with a private edge. Returns the kernel and the peeled
/// constraints (as indices into `copies`) with their private edge, in
/// peeling order.
fn peel(num_edges: usize, copies: &[Vec<EdgeId>]) -> (Kernel, Vec<(usize, usize)>) {
    let mut deg = vec![0u32; num_edges];
    let mut occ: Vec<Vec<u32>> = vec![Vec::new(); num_edges];
    for (k, c) in copies.iter().enumerate() {
        for id in c {
            deg[id.index()] += 1;
            occ[id.index()].push(k as u32);
        }
    }
    let mut alive = vec![true; copies.len()];
    let mut peeled = Vec::new();
    let mut stack: Vec<usize> = (0..num_edges).filter(|&e| deg[e] == 1).collect();
    while let Some(e) = stack.pop() {
        if deg[e] != 1 {
            continue;
        }
        let k = occ[e].iter().map(|&k| k as usize).find(|&k| alive[k]).unwrap();
        alive[k] = false;
        peeled.push((k, e));
        for id in &copies[k] {
            let x = id.index();
            deg[x] -= 1;
            if deg[x] == 1 {
                stack.push(x);
            }
        }
    }
    let mut index = vec![u32::MAX; num_edges];
    let mut vars = Vec::new();
    let mut kcopies = Vec::new();
    for (k, c) in copies.iter().enumerate() {
        if !alive[k] {
            continue;
        }
        kcopies.push(
            c.iter()
                .map(|id| {
                    let x = id.index();
                    if index[x] == u32::MAX {
                        index[x] = vars.len() as u32;
                        vars.push(x);
                    }
                    index[x]
                })
                .collect::<Vec<u32>>(),
        );
    }
    let mut kocc = vec![Vec::new(); vars.len()];
    for (k, c) in kcopies.iter().enumerate() {
        for &v in c {
            kocc[v as usize].push(k as u32);
        }
    }
    (Kernel { copies: kcopies, occ: kocc, vars }, peeled)
}

struct Search<'a> {
    k: &'a Kernel,
    val: Vec<u8>,
    cnt: Vec<[u32; 2]>,
    trail: Vec<u32>,
    queue: Vec<(u32, u8)>,
    nodes: u64,
    propagations: u64,
    budget: u64,
    rng: Option<ChaCha8Rng>,
}

impl Search<'_> {
    /// Assigns and propagates; false on conflict.
    fn assign(&mut self, v: u32, c: u8) -> bool {
        self.queue.clear();
        self.queue.push((v, c));
        while let Some((v, c)) = self.queue.pop() {
            let cur = self.val[v as usize];
            if cur == c {
                continue;
            }
            if cur != UNSET {
                return false;
            }
            self.propagations += 1;
            self.val[v as usize] = c;
            self.trail.push(v);
            let mut ok = true;
            for &k in &self.k.occ[v as usize] {
                let cnt = &mut self.cnt[k as usize];
                cnt[c as usize] += 1;
                let size = self.k.copies[k as usize].len() as u32;
                if cnt[c as usize] == size {
                    ok = false;
                } else if cnt[c as usize] == size - 1 && cnt[1 - c as usize] == 0 {
                    let last = self.k.copies[k as usize]
                        .iter()
                        .copied()
                        .find(|&x| self.val[x as usize] == UNSET)
                        .unwrap();
                    self.queue.push((last, 1 - c));
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            let c = self.val[v as usize];
            for &k in &self.k.occ[v as usize] {
                self.cnt[k as usize][c as usize] -= 1;
            }
            self.val[v as usize] = UNSET;
        }
    }

    /// Most constrained unassigned variable: most incident constraints not
    /// yet holding both colours; ties to the smallest edge id.
    fn pick(&self) -> Option<u32> {
        let mut best: Option<(u32, usize, u32)> = None;
        for v in 0..self.val.len() as u32 {
            if self.val[v as usize] != UNSET {
                continue;
            }
            let score = self.k.occ[v as usize]
                .iter()
                .filter(|&&k| {
                    let c = self.cnt[k as usize];
                    c[0] == 0 || c[1] == 0
                })
                .count() as u32;
            let edge = self.k.vars[v as usize];
            let better = match best {
                None => true,
                Some((bs, be, _)) => score > bs || (score == bs && edge < be),
            };
            if better {
                best = Some((score, edge, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn run(&mut self, root: bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(LabError::BudgetExceeded { nodes: self.budget });
        }
        let Some(v) = self.pick() else { return Ok(true) };
        let first = match &mut self.rng {
            Some(rng) => rng.gen_range(0..2u8),
            None => RED,
        };
        // Swapping the two colours maps solutions to solutions, so the very
        // first decision only needs one value.
        let values: &[u8] = if root { &[first] } else if first == RED { &[RED, BLUE] } else { &[BLUE, RED] };
        for &c in values {
            let mark = self.trail.len();
            if self.assign(v, c) && self.run(false)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

pub fn solve(num_edges: usize, copies: &[Vec<EdgeId>], opts: &SolverOptions) -> Result<ArrowResult> {
    if opts.colours < 2 {
        return Err(LabError::param("at least two colours are required"));
    }
    if opts.colours > 2 {
        return super::brute::solve_many_colours(num_edges, copies, opts);
    }
    let mut stats = SolverStats {
        constraints: copies.len(),
        variables: {
            let mut seen = vec![false; num_edges];
            copies.iter().flatten().for_each(|id| seen[id.index()] = true);
            seen.iter().filter(|&&b| b).count()
        },
        ..SolverStats::default()
    };
    // A copy with a single edge can never avoid being monochromatic.
    if copies.iter().any(|c| c.len() < 2) {
        stats.kernel_constraints = copies.len();
        return Ok(ArrowResult { verdict: Verdict::Arrows, certificate: None, stats });
    }
    let (kernel, peeled) = peel(num_edges, copies);
    stats.kernel_constraints = kernel.copies.len();
    let mut search = Search {
        k: &kernel,
        val: vec![UNSET; kernel.vars.len()],
        cnt: vec![[0, 0]; kernel.copies.len()],
        trail: Vec::new(),
        queue: Vec::new(),
        nodes: 0,
        propagations: 0,
        budget: opts.budget_nodes,
        rng: opts.polarity.map(|s| s.rng()),
    };
    let found = search.run(true);
    stats.nodes = search.nodes;
    stats.propagations = search.propagations;
    if !found? {
        return Ok(ArrowResult { verdict: Verdict::Arrows, certificate: None, stats });
    }
    let mut colors = vec![UNSET; num_edges];
    for (v, &e) in kernel.vars.iter().enumerate() {
        colors[e] = search.val[v];
    }
    let mut rng = search.rng.take();
    let mut free_colour = || match &mut rng {
        Some(r) => r.gen_range(0..2u8),
        None => RED,
    };
    for &(k, private) in peeled.iter().rev() {
        for id in &copies[k] {
            if id.index() != private && colors[id.index()] == UNSET {
                colors[id.index()] = free_colour();
            }
        }
        let others: Vec<u8> = copies[k]
            .iter()
            .filter(|id| id.index() != private)
            .map(|id| colors[id.index()])
            .collect();
        colors[private] = if others.iter().all(|&c| c == others[0]) {
            1 - others[0]
        } else {
            free_colour()
        };
    }
    for c in colors.iter_mut().filter(|c| **c == UNSET) {
        *c = RED;
    }
    Ok(ArrowResult {
        verdict: Verdict::NotArrows,
        certificate: Some(EdgeColoring { colors }),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn peeling_handles_chains() {
        // Three constraints in a chain sharing single edges: all peel.
        let copies = vec![ids(&[0, 1, 2]), ids(&[2, 3, 4]), ids(&[4, 5, 6])];
        let (k, peeled) = peel(7, &copies);
        assert!(k.copies.is_empty());
        assert_eq!(peeled.len(), 3);
        let r = solve(7, &copies, &SolverOptions::default()).unwrap();
        let col = r.certificate.unwrap();
        for c in &copies {
            assert!(c.iter().any(|&i| col.get(i) != col.get(c[0])));
        }
    }

    #[test]
    fn budget_is_reported() {
        // K6 with K3 needs more than one node.
        let g = crate::graph::complete(6);
        let copies = super::super::copy_constraints(&g, &crate::graph::complete(3)).unwrap();
        let opts = SolverOptions { budget_nodes: 1, ..SolverOptions::default() };
        assert!(matches!(solve(g.e(), &copies, &opts), Err(LabError::BudgetExceeded { .. })));
    }

    #[test]
    fn single_edge_constraints_arrow() {
        let r = solve(2, &[ids(&[0])], &SolverOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Arrows);
    }
}
