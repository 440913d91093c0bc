use crate::decode::DecodeError;
use crate::families::FamilyError;
use crate::hypergraph::HypergraphError;
use crate::labelcover::LabelCoverError;
use crate::reduction::ReductionError;
use crate::solvers::SolverError;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    LabelCover(#[from] LabelCoverError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Coarse classification of errors, matching process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// A checked property does not hold.
    Verification,
    /// Bad parameters or malformed input.
    Usage,
    /// The computation exceeds a size or search cap.
    Infeasible,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Verification => 1,
            ErrorKind::Usage => 2,
            ErrorKind::Infeasible => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::Verification => "verification",
            ErrorKind::Usage => "usage",
            ErrorKind::Infeasible => "infeasible",
        }
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Family(FamilyError::Infeasible(_))
            | Error::Reduction(ReductionError::Infeasible(_))
            | Error::Solver(SolverError::Infeasible(_))
            | Error::Decode(DecodeError::Infeasible(_)) => ErrorKind::Infeasible,
            Error::Decode(DecodeError::NotIndependent { .. } | DecodeError::HypothesisViolated(_)) => {
                ErrorKind::Verification
            }
            _ => ErrorKind::Usage,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds() {
        let e: Error = ReductionError::Infeasible("big".into()).into();
        assert_eq!(e.kind().exit_code(), 3);
        let e: Error = DecodeError::NotIndependent { witness: vec![1] }.into();
        assert_eq!(e.kind().exit_code(), 1);
        let e: Error = FamilyError::EmptyWord.into();
        assert_eq!(e.kind(), ErrorKind::Usage);
        assert_eq!(e.to_string(), "words must have positive length");
    }
}
