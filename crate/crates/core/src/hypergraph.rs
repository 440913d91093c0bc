//! Explicit uniform hypergraphs and the `p hgr` text format.
//!
//! Vertices are 0-based in memory and 1-based in files.

use std::collections::HashSet;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("invalid hypergraph: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A hypergraph with a fixed uniformity. Each edge is a strictly increasing
/// list of vertex indices; edge order is preserved as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    uniformity: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Edges are sorted internally; repeated vertices, out-of-range indices,
    /// wrong sizes and duplicate edges are rejected.
    pub fn new(vertex_count: usize, uniformity: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        if uniformity == 0 {
            return Err(HypergraphError::Invalid("uniformity must be positive".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut sorted = Vec::with_capacity(edges.len());
        for (n, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            if edge.len() != uniformity {
                return Err(HypergraphError::Invalid(format!(
                    "edge {n} has {} vertices, expected {uniformity}",
                    edge.len()
                )));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(HypergraphError::Invalid(format!("edge {n} repeats a vertex")));
            }
            if edge.last().is_some_and(|&v| v >= vertex_count) {
                return Err(HypergraphError::Invalid(format!("edge {n} references a vertex >= {vertex_count}")));
            }
            if !seen.insert(edge.clone()) {
                return Err(HypergraphError::Invalid(format!("edge {n} is a duplicate")));
            }
            sorted.push(edge);
        }
        Ok(Hypergraph { vertex_count, uniformity, edges: sorted })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Edge ids incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in edge {
                inc[v].push(e);
            }
        }
        inc
    }
}

pub fn write_hgr(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p hgr {} {} {}", h.vertex_count, h.edges.len(), h.uniformity);
    for edge in &h.edges {
        let line: Vec<String> = edge.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_hgr(text: &str) -> Result<Hypergraph, HypergraphError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let parse_err = |line: usize, message: String| HypergraphError::Parse { line, message };
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() {
                return Err(parse_err(line_no, "second header line".into()));
            }
            if fields.len() != 5 || fields[1] != "hgr" {
                return Err(parse_err(line_no, "expected `p hgr <vertices> <edges> <uniformity>`".into()));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|e| parse_err(line_no, format!("`{s}`: {e}")));
            header = Some((num(fields[2])?, num(fields[3])?, num(fields[4])?));
            continue;
        }
        let Some((vertex_count, _, _)) = header else {
            return Err(parse_err(line_no, "edge before header".into()));
        };
        let edge = fields
            .iter()
            .map(|s| match s.parse::<usize>() {
                Ok(v) if (1..=vertex_count).contains(&v) => Ok(v - 1),
                Ok(v) => Err(parse_err(line_no, format!("vertex {v} outside 1..={vertex_count}"))),
                Err(e) => Err(parse_err(line_no, format!("`{s}`: {e}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        edges.push(edge);
    }
    let (vertex_count, edge_count, uniformity) = header.ok_or_else(|| parse_err(0, "missing header".into()))?;
    if edges.len() != edge_count {
        return Err(parse_err(0, format!("header declares {edge_count} edges, found {}", edges.len())));
    }
    Hypergraph::new(vertex_count, uniformity, edges)
}
