use super::Graph;
use crate::error::{LabError, Result};

pub fn complete(k: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..k as u32 {
        for v in u + 1..k as u32 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(k, edges).unwrap()
}

/// `K_k` with the edge `{0, 1}` removed.
pub fn complete_minus_edge(k: usize) -> Graph {
    complete(k).filter_edges(|_, e| e != (0, 1))
}

/// Cycle `0 - 1 - ... - (k-1) - 0`.
pub fn cycle(k: usize) -> Graph {
    let k32 = k as u32;
    Graph::from_edges(k, (0..k32).map(|i| (i, (i + 1) % k32))).unwrap()
}

/// Path on `k` vertices `0 - 1 - ... - (k-1)`.
pub fn path(k: usize) -> Graph {
    Graph::from_edges(k, (1..k as u32).map(|i| (i - 1, i))).unwrap()
}

/// Star `K_{1,k}` centred at vertex 0.
pub fn star(k: usize) -> Graph {
    Graph::from_edges(k + 1, (1..=k as u32).map(|i| (0, i))).unwrap()
}

/// Resolves `Kk`, `Ck`, `Pk`, `Kk-e` and `K1,k` (also `Sk` for the star).
pub fn named_pattern(name: &str) -> Result<Graph> {
    let bad = || LabError::param(format!("unknown pattern name {name:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let t = name.trim();
    if let Some(rest) = t.strip_prefix("K1,") {
        let k = num(rest)?;
        return if k >= 1 { Ok(star(k)) } else { Err(bad()) };
    }
    if let Some(body) = t.strip_suffix("-e") {
        let k = num(body.strip_prefix('K').ok_or_else(bad)?)?;
        return if k >= 2 { Ok(complete_minus_edge(k)) } else { Err(bad()) };
    }
    let (kind, rest) = t.split_at(t.chars().next().map_or(0, |c| c.len_utf8()));
    let k = num(rest)?;
    match kind {
        "K" if k >= 1 => Ok(complete(k)),
        "C" if k >= 3 => Ok(cycle(k)),
        "P" if k >= 1 => Ok(path(k)),
        "S" if k >= 1 => Ok(star(k)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(named_pattern("K4").unwrap().e(), 6);
        assert_eq!(named_pattern("C5").unwrap().e(), 5);
        assert_eq!(named_pattern("P3").unwrap().e(), 2);
        assert_eq!(named_pattern("K4-e").unwrap().e(), 5);
        assert_eq!(named_pattern("K1,5").unwrap().n(), 6);
        assert!(named_pattern("C2").is_err());
        assert!(named_pattern("X5").is_err());
        assert!(named_pattern("").is_err());
    }
}
