//! Rooted extension counts `N(x')`.

use std::ops::ControlFlow;

use super::embed::{check_pattern_cap, for_each_embedding};
use crate::error::{LabError, Result};
use crate::graph::Graph;

/// Number of ordered `(R, H)`-extensions of `host_roots` in `G`. Edges of `H`
/// between roots place no requirement on the host.
pub fn extension_count(roots: &[u32], h: &Graph, host_roots: &[u32], g: &Graph) -> Result<u64> {
    check_pattern_cap(h)?;
    if roots.len() != host_roots.len() {
        return Err(LabError::param(format!(
            "{} roots but {} host roots",
            roots.len(),
            host_roots.len()
        )));
    }
    let mut seen = vec![false; h.n()];
    for &r in roots {
        if r as usize >= h.n() {
            return Err(LabError::VertexOutOfRange { vertex: r as usize, n: h.n() });
        }
        if std::mem::replace(&mut seen[r as usize], true) {
            return Err(LabError::param(format!("root {r} repeated")));
        }
    }
    if roots.len() >= h.n() {
        return Err(LabError::param("roots must be a proper subset of V(H)"));
    }
    for (i, &x) in host_roots.iter().enumerate() {
        if x as usize >= g.n() {
            return Err(LabError::VertexOutOfRange { vertex: x as usize, n: g.n() });
        }
        if host_roots[..i].contains(&x) {
            return Err(LabError::param(format!("host root {x} repeated")));
        }
    }
    let free = h.filter_edges(|_, (a, b)| !(seen[a as usize] && seen[b as usize]));
    let fixed: Vec<(usize, u32)> =
        roots.iter().zip(host_roots).map(|(&r, &x)| (r as usize, x)).collect();
    let mut count = 0u64;
    for_each_embedding(&free, g, &fixed, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    #[test]
    fn examples() {
        // Cherry 0-2-1 rooted at its ends; in K5 any of the other 3 vertices.
        let cherry = Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(extension_count(&[0, 1], &cherry, &[3, 4], &complete(5)).unwrap(), 3);
        assert_eq!(extension_count(&[0, 1], &cherry, &[0, 1], &Graph::empty(5)).unwrap(), 0);
        assert!(extension_count(&[0, 1, 2], &cherry, &[0, 1, 2], &complete(5)).is_err());
        assert!(extension_count(&[0, 1], &cherry, &[2, 2], &complete(5)).is_err());
    }

    #[test]
    fn falling_factorial_in_complete_graphs() {
        // Any rooted H in K_n: (n - r)(n - r - 1)...(n - v + 1).
        for n in 4..9u32 {
            for (h, r) in [(cycle(4), vec![0u32, 2]), (path(4), vec![0]), (complete(4), vec![0, 1])] {
                let host: Vec<u32> = (0..r.len() as u32).collect();
                let expect: u64 = ((n as usize - h.n() + 1)..=(n as usize - r.len()))
                    .map(|x| x as u64)
                    .product();
                assert_eq!(extension_count(&r, &h, &host, &complete(n as usize)).unwrap(), expect);
            }
        }
    }

    #[test]
    fn root_edges_are_ignored() {
        let k3 = complete(3);
        let g = Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap();
        assert_eq!(extension_count(&[0, 1], &k3, &[0, 1], &g).unwrap(), 1);
    }
}
