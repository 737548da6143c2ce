//! Plain-text edge lists: a header line `n m` followed by `m` lines `u v`
//! with 0-based vertex ids.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: cannot parse {text:?}")]
    Parse { line: usize, text: String },
    #[error("line {line}: vertex id {vertex} out of range for {n} vertices")]
    IdOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing header line")]
    MissingHeader,
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
    let (n, m) = parse_pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for (line, text) in lines {
        let (u, v) = parse_pair(line, text)?;
        for vertex in [u, v] {
            if vertex >= n {
                return Err(EdgeListError::IdOutOfRange { line, vertex, n });
            }
        }
        if u == v {
            return Err(EdgeListError::Loop { line, vertex: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(EdgeListError::DuplicateEdge { line, u, v });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(EdgeListError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::new(n, edges).map_err(|e| match e {
        // already screened above
        GraphError::Loop(_) | GraphError::DuplicateEdge(..) | GraphError::VertexOutOfRange { .. } => {
            unreachable!("edge list validated line by line")
        }
        other => panic!("unexpected graph error {other}"),
    })
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), EdgeListError> {
    let bad = || EdgeListError::Parse {
        line,
        text: text.to_string(),
    };
    let mut it = text.split_whitespace();
    let a = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

/// Canonical text form: header then edges in lexicographic order.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, EdgeListError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn write_edge_list(path: impl AsRef<Path>, g: &Graph) -> Result<(), EdgeListError> {
    fs::write(path, format_edge_list(g))?;
    Ok(())
}
