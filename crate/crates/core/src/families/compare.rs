use serde::{Deserialize, Serialize};

use super::{ft_ternary_bound, max_agreeing_family, AgreeParams, FamilyError, SearchMethod};

/// The ternary closed-form bound next to an exact search result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub n: usize,
    pub q: u8,
    pub k: usize,
    pub t: usize,
    /// Exact maximum size of a k-wise t-agreeing family in `[q]^n`.
    pub oracle: usize,
    pub oracle_exhaustive: bool,
    /// The closed-form value, in decimal.
    pub formula: String,
    /// Whether the formula is at least the oracle value.
    pub formula_bounds_oracle: bool,
}

/// Compares [`ft_ternary_bound`] with the exact maximum found by `method`.
/// The formula is asymptotic; at small `t` it can fall below the oracle,
/// which the report records instead of treating as an error.
pub fn compare_ft_bound(n: usize, q: u8, k: usize, t: usize, method: SearchMethod) -> Result<BoundComparison, FamilyError> {
    let formula = ft_ternary_bound(n as u64, t as u64)?;
    let outcome = max_agreeing_family(n, q, AgreeParams::new(k, t)?, method)?;
    Ok(BoundComparison {
        n,
        q,
        k,
        t,
        oracle: outcome.max_size,
        oracle_exhaustive: outcome.exhaustive,
        formula_bounds_oracle: formula >= outcome.max_size.into(),
        formula: formula.to_string(),
    })
}
