//! Plain-text edge-list format.
//!
//! One simple edge per line as "u v"; self-loops as "loop u k"; lines
//! starting with '#' are comments. Vertex ids need not be contiguous:
//! they are compacted on load and the id map is carried alongside.

use std::fmt::Write as _;

use thiserror::Error;

use crate::error::GraphError;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: self-edge '{u} {u}'; write 'loop {u} K' instead")]
    SelfEdge { line: usize, u: u64 },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
}

/// Maps compact ids back to the ids used in the input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    originals: Vec<u64>,
}

impl IdMap {
    pub fn identity(n: usize) -> IdMap {
        IdMap { originals: (0..n as u64).collect() }
    }

    pub fn original(&self, compact: Vertex) -> u64 {
        self.originals[compact as usize]
    }

    pub fn compact(&self, original: u64) -> Option<Vertex> {
        self.originals.binary_search(&original).ok().map(|i| i as Vertex)
    }

    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }
}

pub fn parse_edge_list(text: &str) -> Result<(Graph, IdMap), ParseError> {
    let mut raw_edges: Vec<(u64, u64, usize)> = Vec::new();
    let mut raw_loops: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_id = |s: &str| -> Result<u64, ParseError> {
            s.parse::<u64>().map_err(|e| ParseError::Malformed {
                line: line_no,
                reason: format!("bad vertex id '{s}': {e}"),
            })
        };
        match fields.as_slice() {
            ["loop", u, k] => {
                let u = parse_id(u)?;
                let k = parse_id(k)?;
                raw_loops.push((u, k));
            }
            [u, v] => {
                let u = parse_id(u)?;
                let v = parse_id(v)?;
                if u == v {
                    return Err(ParseError::SelfEdge { line: line_no, u });
                }
                raw_edges.push((u, v, line_no));
            }
            _ => {
                return Err(ParseError::Malformed {
                    line: line_no,
                    reason: format!("expected 'u v' or 'loop u k', got '{trimmed}'"),
                })
            }
        }
    }
    let mut ids: Vec<u64> = raw_edges
        .iter()
        .flat_map(|&(u, v, _)| [u, v])
        .chain(raw_loops.iter().filter(|&&(_, k)| k > 0).map(|&(u, _)| u))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    let map = IdMap { originals: ids };
    let compact = |id: u64| map.compact(id).expect("id collected above");

    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(raw_edges.len());
    for &(u, v, line_no) in &raw_edges {
        let (cu, cv) = (compact(u), compact(v));
        edges.push((cu.min(cv), cu.max(cv)));
        let last = edges.len() - 1;
        if edges[..last].contains(&edges[last]) {
            return Err(ParseError::DuplicateEdge { line: line_no, u: u.min(v), v: u.max(v) });
        }
    }
    let loops: Vec<(Vertex, u64)> = raw_loops.iter().map(|&(u, k)| (compact(u), k)).collect();
    let g = Graph::build(&edges, &loops)?;
    Ok((g, map))
}

/// Serializes a graph back to the edge-list format using original ids.
pub fn write_edge_list(g: &Graph, map: &IdMap) -> String {
    let mut out = String::new();
    for u in g.vertices() {
        for &v in g.neighbors(u) {
            if u < v {
                let _ = writeln!(out, "{} {}", map.original(u), map.original(v));
            }
        }
    }
    for u in g.vertices() {
        if g.self_loops(u) > 0 {
            let _ = writeln!(out, "loop {} {}", map.original(u), g.self_loops(u));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_edge() {
        let (g, map) = parse_edge_list("0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.total_volume(), 2);
        assert_eq!(map.original(0), 0);
    }

    #[test]
    fn parses_comments_and_loops() {
        let (g, _) = parse_edge_list("# comment\n0 1\nloop 0 1\n").unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.self_loops(0), 1);
    }

    #[test]
    fn self_edge_points_at_loop_syntax() {
        let err = parse_edge_list("0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::SelfEdge { line: 1, u: 0 }));
        assert!(err.to_string().contains("loop"));
    }

    #[test]
    fn duplicate_edge_reports_line() {
        let err = parse_edge_list("0 1\n1 0\n").unwrap_err();
        assert_eq!(err, ParseError::DuplicateEdge { line: 2, u: 0, v: 1 });
    }

    #[test]
    fn malformed_line_reports_line() {
        let err = parse_edge_list("0 1\nfrog\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 2, .. }));
    }

    #[test]
    fn non_contiguous_ids_compact() {
        let (g, map) = parse_edge_list("10 30\n30 500\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(map.original(0), 10);
        assert_eq!(map.original(2), 500);
        assert_eq!(map.compact(30), Some(1));
    }

    #[test]
    fn round_trips() {
        let text = "0 1\n0 2\n1 2\nloop 2 2\n";
        let (g, map) = parse_edge_list(text).unwrap();
        assert_eq!(write_edge_list(&g, &map), text);
    }
}
