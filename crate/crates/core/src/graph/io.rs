//! graph6 and plain edge-list formats.

use super::Graph;
use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

fn perr(offset: usize, message: impl Into<String>) -> LabError {
    LabError::Parse { offset, message: message.into() }
}

/// Detects the format: edge lists start with a decimal vertex count (after
/// optional `#` comments), which can never begin a graph6 string.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    match first.bytes().next() {
        Some(b) if b.is_ascii_digit() => parse_edge_list(text),
        Some(_) => parse_graph6(text),
        None => Err(perr(0, "empty input")),
    }
}

/// `n` on the first non-blank line, then one `u v` pair per line. Blank
/// lines and `#` comments are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let content = line.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut pos = 0;
        for tok in content.split_whitespace() {
            let at = content[pos..].find(tok).unwrap() + pos;
            pos = at + tok.len();
            tokens.push((start + at, tok));
        }
        if tokens.is_empty() {
            continue;
        }
        let num = |(at, tok): (usize, &str)| {
            tok.parse::<usize>().map_err(|_| perr(at, format!("expected an integer, found {tok:?}")))
        };
        match n {
            None => {
                if tokens.len() != 1 {
                    return Err(perr(tokens[1].0, "first line must hold only the vertex count"));
                }
                n = Some(num(tokens[0])?);
            }
            Some(count) => {
                if tokens.len() != 2 {
                    return Err(perr(start, format!("expected `u v`, found {} tokens", tokens.len())));
                }
                let u = num(tokens[0])?;
                let v = num(tokens[1])?;
                for (at, w) in [(tokens[0].0, u), (tokens[1].0, v)] {
                    if w >= count {
                        return Err(perr(at, format!("vertex {w} out of range 0..{count}")));
                    }
                }
                if u == v {
                    return Err(perr(tokens[0].0, format!("loop at vertex {u}")));
                }
                edges.push((u as u32, v as u32));
            }
        }
    }
    let n = n.ok_or_else(|| perr(0, "missing vertex count"))?;
    Graph::from_edges(n, edges)
}

/// Canonical edge list: `n`, then the sorted edges, no trailing newline.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = g.n().to_string();
    for &(u, v) in g.edges() {
        out.push('\n');
        out.push_str(&format!("{u} {v}"));
    }
    out
}

/// Parses one graph6 record (an optional `>>graph6<<` header is accepted).
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let lead = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = lead;
    if let Some(rest) = body.strip_prefix(">>graph6<<") {
        body = rest;
        base += ">>graph6<<".len();
    }
    let bytes = body.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(perr(base + i, format!("byte {b} outside the graph6 range 63..=126")));
        }
    }
    let (n, mut pos) = match bytes {
        [] => return Err(perr(base, "empty graph6 record")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(perr(base + 2, "truncated 36-bit vertex count"));
            }
            (rest[..6].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize), 8)
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(perr(base + 1, "truncated 18-bit vertex count"));
            }
            (rest[..3].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize), 4)
        }
        [b, ..] => ((b - 63) as usize, 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(perr(
            base + bytes.len().min(pos + need),
            format!("expected {need} adjacency bytes for n={n}, found {}", bytes.len() - pos),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = bytes[pos + k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((u as u32, v as u32));
            }
            k += 1;
        }
    }
    pos += need;
    // Padding bits must be zero.
    if pairs % 6 != 0 {
        let last = bytes[pos - 1] - 63;
        if last & ((1u8 << (6 - pairs % 6)) - 1) != 0 {
            return Err(perr(base + pos - 1, "non-zero padding bits"));
        }
    }
    Graph::from_edges(n, edges)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_edge(u as u32, v as u32) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, Seed};
    use proptest::prelude::*;

    #[test]
    fn edge_list_examples() {
        let g = parse_edge_list("3\n0 1\n1 2").unwrap();
        assert_eq!(g, path(3));
        assert_eq!(to_edge_list(&g), "3\n0 1\n1 2");
        let g = parse_graph("# comment\n\n4\n3 0  \n").unwrap();
        assert_eq!(g.edges(), &[(0, 3)]);
    }

    #[test]
    fn edge_list_errors_report_offsets() {
        match parse_edge_list("3\n0 1\n1 x") {
            Err(LabError::Parse { offset, .. }) => assert_eq!(offset, 8),
            other => panic!("{other:?}"),
        }
        match parse_edge_list("3\n0 5") {
            Err(LabError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_edge_list("3\n1 1").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn graph6_triangle() {
        assert_eq!(parse_graph6("Bw").unwrap(), complete(3));
        assert_eq!(to_graph6(&complete(3)), "Bw");
        assert_eq!(parse_graph(">>graph6<<Bw\n").unwrap(), complete(3));
        // C5 = 0-1-2-3-4-0 encodes as "Dhc" (bits 101001 100100).
        assert_eq!(parse_graph6("Dhc").unwrap(), cycle(5));
    }

    #[test]
    fn graph6_errors() {
        match parse_graph6("B!") {
            Err(LabError::Parse { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        assert!(parse_graph6("Bww").is_err());
        assert!(parse_graph6("Bx").is_err(), "padding bit set");
    }

    #[test]
    fn graph6_large_vertex_count() {
        let g = Graph::gnp(70, 0.1, Seed::new(3)).unwrap();
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    proptest! {
        #[test]
        fn round_trips(n in 1usize..30, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = Graph::gnp(n, p, Seed::new(seed)).unwrap();
            prop_assert_eq!(parse_graph(&to_graph6(&g)).unwrap(), g.clone());
            let text = to_edge_list(&g);
            prop_assert_eq!(to_edge_list(&parse_graph(&text).unwrap()), text);
        }
    }
}
