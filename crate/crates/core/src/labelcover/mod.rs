//! Bipartite and multi-layered Label Cover: instances, planted generators,
//! assignment evaluation, and smoothness / weak-density checkers.
//!
//! Variables are 0-based everywhere; labels are 1-based.

mod checks;
mod eval;
mod generate;
mod instance;
mod io;

pub use checks::{
    check_smoothness, check_weak_density, regularity_fraction, DensityReport, DensityWitness, SmoothnessEntry,
    SmoothnessReport, SmoothnessViolation,
};
pub use eval::{eval_assignment, eval_bipartite, eval_layered, PairSatisfaction, SatisfactionReport};
pub use generate::{
    gen_planted_bipartite, gen_planted_layered, BipartiteGenConfig, LayeredGenConfig, SMOOTH_GEN_MAX_SET,
};
pub use instance::{
    Assignment, BipartiteInstance, Constraint, Instance, Layer, LayeredConstraint, LayeredInstance, ProjectionMap,
};
pub use io::{read_assignment, read_instance, write_assignment, write_instance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelCoverError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}
