//! Words over `[q]`, agreement, k-wise t-agreeing families and the tools used
//! to reason about them: shifting, closed-form bounds and exact search.

mod bounds;
mod compare;
mod io;
mod packed;
mod predicates;
mod search;
mod shift;
mod word;

pub use bounds::{
    ft_ternary_bound, ft_ternary_bound_ln, golden_ratio_bound, golden_ratio_bound_log2,
    golden_ratio_conjugate, simplified_ternary_bound, simplified_ternary_bound_ln,
};
pub use compare::{compare_ft_bound, BoundComparison};
pub use io::{read_family, write_family};
pub use predicates::{
    find_low_agreement_tuple, is_k_wise_t_agreeing, is_k_wise_t_intersecting, min_agreement,
    min_common_ones, LowAgreementTuple, TupleSearch,
};
pub use search::{
    max_agreeing_family, SearchMethod, SearchOutcome, BRANCH_AND_BOUND_MAX_WORDS,
    DEFAULT_NODE_LIMIT, EXACT_MAX_WORDS,
};
pub use shift::{is_upward_closed, monotonize, monotonize_counting, shift_coordinate};
pub use word::{agreement, cube_size, AgreeParams, Family, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("dimension mismatch: expected (q, n) = {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("symbol {symbol} outside 1..={q}")]
    InvalidSymbol { symbol: usize, q: usize },
    #[error("digit `{digit}` is not valid for alphabet size {q}")]
    InvalidDigit { digit: char, q: usize },
    #[error("invalid alphabet size {0}")]
    InvalidAlphabet(usize),
    #[error("words must have positive length")]
    EmptyWord,
    #[error("empty input")]
    EmptyInput,
    #[error("family has {size} members, fewer than k = {k}")]
    FamilyTooSmall { size: usize, k: usize },
    #[error("operation needs a binary alphabet, got q = {q}")]
    BinaryOnly { q: usize },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
