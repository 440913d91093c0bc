//! The 2k-uniform and (k+1)-uniform gadget hypergraphs over Label Cover
//! instances, their completeness colorings, coloring verification and
//! materialization to explicit edge lists.

mod coloring;
mod gadget;
mod materialize;
pub(crate) mod scan;

pub use coloring::{completeness_coloring, verify_coloring, Coloring, ColoringReport, VerifyMode};
pub(crate) use coloring::sample_edges_within;
pub use gadget::{build_2k_gadget, build_k1_gadget, GadgetHypergraph, GadgetKind, GadgetVertex, MAX_Q, MAX_VERTICES};
pub use materialize::{
    explicit_from_parts, materialize, materialize_estimate, read_vertex_map, write_vertex_map, ExplicitHypergraph,
    MaterializeCaps,
};
pub use scan::DEFAULT_EVALUATION_CAP;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not an edge shape: {0}")]
    NotAnEdgeShape(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
}
