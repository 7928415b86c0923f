//! Graph serialization: a JSON object form and a compact one-line hex form.
//!
//! JSON: `{"m": 2, "n": 2, "edges": [[0,0],[1,1]]}` with 0-based indices and
//! edges sorted lexicographically.
//!
//! Compact: `m:n:HEX` where `HEX` concatenates one hex field per row, row 0
//! first, each field exactly `ceil(n/4)` digits with the most significant
//! nibble leftmost. Bit `j` of a row is set iff `x_i y_j` is an edge.

use crate::graph::{BipartiteGraph, GraphError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("invalid JSON graph: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid compact graph: {0}")]
    Compact(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    m: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
}

pub fn to_json(g: &BipartiteGraph) -> String {
    let doc = GraphJson {
        m: g.x_count(),
        n: g.y_count(),
        edges: g.edges(),
    };
    serde_json::to_string(&doc).expect("graph JSON serialization cannot fail")
}

pub fn from_json(s: &str) -> Result<BipartiteGraph, CodecError> {
    let doc: GraphJson = serde_json::from_str(s)?;
    Ok(BipartiteGraph::new(doc.m, doc.n, &doc.edges)?)
}

const HEX: &[u8; 16] = b"0123456789abcdef";

pub fn to_compact(g: &BipartiteGraph) -> String {
    let digits_per_row = g.y_count().div_ceil(4);
    let mut out = format!("{}:{}:", g.x_count(), g.y_count());
    for x in 0..g.x_count() {
        let words = g.row_words(x);
        for d in (0..digits_per_row).rev() {
            let nibble = (words[d / 16] >> (4 * (d % 16))) & 0xF;
            out.push(HEX[nibble as usize] as char);
        }
    }
    out
}

pub fn from_compact(s: &str) -> Result<BipartiteGraph, CodecError> {
    let bad = |msg: &str| CodecError::Compact(format!("{msg} (input {s:?})"));
    let mut parts = s.trim().splitn(3, ':');
    let m: usize = parts
        .next()
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| bad("missing or non-numeric m field"))?;
    let n_y: usize = parts
        .next()
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| bad("missing or non-numeric n field"))?;
    let hex = parts.next().ok_or_else(|| bad("missing hex field"))?;

    let digits_per_row = n_y.div_ceil(4);
    if hex.len() != m * digits_per_row {
        return Err(bad(&format!(
            "hex field has {} digits, expected {} ({} rows of {})",
            hex.len(),
            m * digits_per_row,
            m,
            digits_per_row
        )));
    }
    let mut edges = Vec::new();
    let hex = hex.as_bytes();
    for x in 0..m {
        let row = &hex[x * digits_per_row..(x + 1) * digits_per_row];
        for (p, &c) in row.iter().enumerate() {
            let nibble = (c as char)
                .to_digit(16)
                .ok_or_else(|| bad(&format!("non-hex digit {:?}", c as char)))?
                as usize;
            let base = 4 * (digits_per_row - 1 - p);
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let y = base + b;
                    if y >= n_y {
                        return Err(bad(&format!("row {x} sets bit {y} beyond n={n_y}")));
                    }
                    edges.push((x, y));
                }
            }
        }
    }
    Ok(BipartiteGraph::new(m, n_y, &edges)?)
}

/// Parses either encoding: JSON if the string starts with `{`, compact
/// otherwise.
pub fn parse_graph(s: &str) -> Result<BipartiteGraph, CodecError> {
    if s.trim_start().starts_with('{') {
        from_json(s)
    } else {
        from_compact(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_sorted_edges() {
        let g = BipartiteGraph::new(3, 2, &[(2, 1), (0, 0), (0, 1)]).unwrap();
        let s = to_json(&g);
        assert_eq!(s, r#"{"m":3,"n":2,"edges":[[0,0],[0,1],[2,1]]}"#);
        assert_eq!(from_json(&s).unwrap(), g);
    }

    #[test]
    fn compact_round_trip() {
        let g = BipartiteGraph::new(2, 5, &[(0, 0), (0, 4), (1, 3)]).unwrap();
        let s = to_compact(&g);
        assert_eq!(s, "2:5:1108");
        assert_eq!(from_compact(&s).unwrap(), g);
    }

    #[test]
    fn compact_degenerate_sizes() {
        let g = BipartiteGraph::empty(1, 0);
        assert_eq!(to_compact(&g), "1:0:");
        assert_eq!(from_compact("1:0:").unwrap(), g);
        assert_eq!(from_compact("0:3:").unwrap(), BipartiteGraph::empty(0, 3));
    }

    #[test]
    fn compact_rejects_stray_bits_and_bad_length() {
        assert!(from_compact("1:2:4").is_err());
        assert!(from_compact("1:2:11").is_err());
        assert!(from_compact("2:2:3").is_err());
        assert!(from_compact("1:2:g").is_err());
    }

    #[test]
    fn compact_wide_row() {
        let edges: Vec<(usize, usize)> = vec![(0, 0), (0, 64), (0, 99)];
        let g = BipartiteGraph::new(1, 100, &edges).unwrap();
        let s = to_compact(&g);
        assert_eq!(s.len(), "1:100:".len() + 25);
        assert_eq!(from_compact(&s).unwrap(), g);
    }

    #[test]
    fn parse_graph_detects_format() {
        let g = BipartiteGraph::complete(2, 2);
        assert_eq!(parse_graph(&to_json(&g)).unwrap(), g);
        assert_eq!(parse_graph(&to_compact(&g)).unwrap(), g);
    }
}
