//! Exhaustive oracle over all colourings of the constrained edges.

use super::{copy_constraints, ArrowResult, EdgeColoring, SolverOptions, SolverStats, Verdict, RED};
use crate::error::{LabError, Result};
use crate::graph::{EdgeId, Graph};

pub const BRUTE_FORCE_CAP: usize = 24;

pub fn brute_force_arrow(g: &Graph, f: &Graph) -> Result<ArrowResult> {
    let copies = copy_constraints(g, f)?;
    let mut vars: Vec<usize> = copies.iter().flatten().map(|id| id.index()).collect();
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > BRUTE_FORCE_CAP {
        return Err(LabError::CapExceeded {
            what: "constrained edges for brute force",
            got: vars.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    let masks: Vec<u32> = copies
        .iter()
        .map(|c| {
            c.iter()
                .map(|id| 1u32 << vars.binary_search(&id.index()).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    let stats = SolverStats {
        constraints: copies.len(),
        variables: vars.len(),
        kernel_constraints: copies.len(),
        ..SolverStats::default()
    };
    for assign in 0u32..(1u32 << vars.len()) {
        if masks.iter().all(|&m| {
            let blue = assign & m;
            blue != 0 && blue != m
        }) {
            let mut colors = vec![RED; g.e()];
            for (i, &e) in vars.iter().enumerate() {
                colors[e] = (assign >> i & 1) as u8;
            }
            let stats = SolverStats { nodes: assign as u64 + 1, ..stats };
            return Ok(ArrowResult {
                verdict: Verdict::NotArrows,
                certificate: Some(EdgeColoring { colors }),
                stats,
            });
        }
    }
    let stats = SolverStats { nodes: 1u64 << vars.len(), ..stats };
    Ok(ArrowResult { verdict: Verdict::Arrows, certificate: None, stats })
}

/// Plain backtracking for three or more colours. Smoke-level support only.
pub(crate) fn solve_many_colours(
    num_edges: usize,
    copies: &[Vec<EdgeId>],
    opts: &SolverOptions,
) -> Result<ArrowResult> {
    let r = opts.colours;
    let mut vars: Vec<usize> = copies.iter().flatten().map(|id| id.index()).collect();
    vars.sort_unstable();
    vars.dedup();
    let pos = |e: usize| vars.binary_search(&e).unwrap();
    let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    for (k, c) in copies.iter().enumerate() {
        let last = c.iter().map(|id| pos(id.index())).max().unwrap();
        by_last[last].push(k);
    }
    let mut val = vec![0u8; vars.len()];
    let mut nodes = 0u64;
    fn rec(
        i: usize,
        r: u8,
        val: &mut Vec<u8>,
        copies: &[Vec<EdgeId>],
        by_last: &[Vec<usize>],
        pos: &dyn Fn(usize) -> usize,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if i == val.len() {
            return Ok(true);
        }
        // Colours beyond the largest used so far are interchangeable.
        let used = val[..i].iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..r.min(used + 1) {
            *nodes += 1;
            if *nodes > budget {
                return Err(LabError::BudgetExceeded { nodes: budget });
            }
            val[i] = c;
            let ok = by_last[i]
                .iter()
                .all(|&k| copies[k].iter().any(|id| val[pos(id.index())] != c));
            if ok && rec(i + 1, r, val, copies, by_last, pos, nodes, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let stats = SolverStats {
        constraints: copies.len(),
        variables: vars.len(),
        kernel_constraints: copies.len(),
        ..SolverStats::default()
    };
    if copies.iter().any(|c| c.len() < 2) {
        return Ok(ArrowResult { verdict: Verdict::Arrows, certificate: None, stats });
    }
    let found = rec(0, r, &mut val, copies, &by_last, &pos, &mut nodes, opts.budget_nodes)?;
    let stats = SolverStats { nodes, ..stats };
    if !found {
        return Ok(ArrowResult { verdict: Verdict::Arrows, certificate: None, stats });
    }
    let mut colors = vec![RED; num_edges];
    for (i, &e) in vars.iter().enumerate() {
        colors[e] = val[i];
    }
    Ok(ArrowResult { verdict: Verdict::NotArrows, certificate: Some(EdgeColoring { colors }), stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::{decide_arrow, is_f_free};
    use crate::graph::{complete, cycle, Seed};

    #[test]
    fn examples() {
        let k3 = complete(3);
        assert!(brute_force_arrow(&complete(6), &k3).unwrap().arrows());
        let r = brute_force_arrow(&complete(5), &k3).unwrap();
        assert!(!r.arrows());
        assert!(is_f_free(&r.certificate.unwrap(), &complete(5), &k3).unwrap().free);
        assert!(!brute_force_arrow(&Graph::empty(6), &cycle(4)).unwrap().arrows());
        assert!(brute_force_arrow(&complete(9), &k3).is_err());
    }

    #[test]
    fn agrees_with_solver() {
        for seed in 0..40 {
            let g = Graph::gnp(8, 0.6, Seed::new(seed)).unwrap();
            for f in [complete(3), cycle(4)] {
                let Ok(b) = brute_force_arrow(&g, &f) else { continue };
                let s = decide_arrow(&g, &f, &SolverOptions::default()).unwrap();
                assert_eq!(b.verdict, s.verdict, "seed {seed}");
            }
        }
    }

    #[test]
    fn three_colours_smoke() {
        // R(3,3,3) = 17: K16 has a 3-colouring without monochromatic
        // triangles, which is too slow here; K5 is trivially colourable and a
        // single-edge pattern never is.
        let opts = SolverOptions { colours: 3, ..SolverOptions::default() };
        assert!(!decide_arrow(&complete(5), &complete(3), &opts).unwrap().arrows());
        assert!(decide_arrow(&complete(3), &complete(2), &opts).unwrap().arrows());
    }
}
