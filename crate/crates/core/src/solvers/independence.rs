use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::hypergraph::Hypergraph;
use crate::reduction::scan::{count_edges_within, split_by_cloud};
use crate::reduction::{sample_edges_within, GadgetHypergraph, VerifyMode};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub mode: String,
    /// Exhaustive: no edge lies inside the set. Sampled: no probe found one.
    pub independent: bool,
    /// Exhaustive: the number of edges inside the set.
    pub edges_inside: Option<u64>,
    pub probes: u64,
    /// Sorted vertex indices of an edge inside the set.
    pub witness: Option<Vec<u64>>,
}

/// Checks a vertex set of an implicit gadget for edges lying inside it.
pub fn is_independent_implicit(
    g: &GadgetHypergraph,
    set: &[u64],
    mode: VerifyMode,
) -> Result<IndependenceReport, SolverError> {
    let members = split_by_cloud(g, set)?;
    match mode {
        VerifyMode::Exhaustive { cap } => {
            let scan = count_edges_within(g, &members, cap)?;
            Ok(IndependenceReport {
                mode: "exhaustive".into(),
                independent: scan.count == 0,
                edges_inside: Some(scan.count),
                probes: scan.evaluations,
                witness: scan.witness,
            })
        }
        VerifyMode::Sampled { probes, seed } => {
            let scan = sample_edges_within(g, &members, probes, seed, |_| true);
            Ok(IndependenceReport {
                mode: "sampled".into(),
                independent: scan.hits == 0,
                edges_inside: None,
                probes: scan.probes,
                witness: scan.witness,
            })
        }
    }
}

/// Checks a vertex set of an explicit hypergraph; always exhaustive.
pub fn is_independent_explicit(h: &Hypergraph, set: &[usize]) -> Result<IndependenceReport, SolverError> {
    let mut member = vec![false; h.vertex_count()];
    for &v in set {
        if v >= h.vertex_count() {
            return Err(SolverError::InvalidInput(format!("vertex {v} outside 0..{}", h.vertex_count())));
        }
        member[v] = true;
    }
    let inside: Vec<&Vec<usize>> = h.edges().iter().filter(|e| e.iter().all(|&v| member[v])).collect();
    Ok(IndependenceReport {
        mode: "exhaustive".into(),
        independent: inside.is_empty(),
        edges_inside: Some(inside.len() as u64),
        probes: h.edges().len() as u64,
        witness: inside.first().map(|e| e.iter().map(|&v| v as u64).collect()),
    })
}
