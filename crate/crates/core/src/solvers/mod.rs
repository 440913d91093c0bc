//! Independence checks, maximum independent set and proper colorability.
//!
//! An independent set of a hypergraph contains no edge entirely.

mod color;
mod independence;
mod mis;

pub use color::exists_proper_coloring;
pub use independence::{is_independent_explicit, is_independent_implicit, IndependenceReport};
pub use mis::{max_independent_set, IsResult, MisMethod, DEFAULT_NODE_LIMIT};

use crate::reduction::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl From<ReductionError> for SolverError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Infeasible(m) => SolverError::Infeasible(m),
            other => SolverError::InvalidInput(other.to_string()),
        }
    }
}
