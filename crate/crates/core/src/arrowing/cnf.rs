//! DIMACS export of the not-all-equal encoding.
//!
//! Variable `i + 1` is true when the `i`-th constrained edge is red. Each
//! copy gives two clauses: some edge red, and some edge blue.

use std::fmt::Write;

use super::copy_constraints;
use crate::error::Result;
use crate::graph::Graph;

pub fn to_dimacs(g: &Graph, f: &Graph) -> Result<String> {
    let copies = copy_constraints(g, f)?;
    let mut vars: Vec<usize> = copies.iter().flatten().map(|id| id.index()).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut out = String::new();
    for (i, &e) in vars.iter().enumerate() {
        let (a, b) = g.edges()[e];
        writeln!(out, "c var {} edge {} {}", i + 1, a, b).unwrap();
    }
    writeln!(out, "p cnf {} {}", vars.len(), 2 * copies.len()).unwrap();
    for c in &copies {
        let lits: Vec<i64> =
            c.iter().map(|id| vars.binary_search(&id.index()).unwrap() as i64 + 1).collect();
        for sign in [1, -1] {
            for l in &lits {
                write!(out, "{} ", sign * l).unwrap();
            }
            out.push_str("0\n");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;

    #[test]
    fn triangle() {
        let s = to_dimacs(&complete(3), &complete(3)).unwrap();
        assert!(s.contains("p cnf 3 2\n"));
        assert!(s.ends_with("1 2 3 0\n-1 -2 -3 0\n"));
    }
}
