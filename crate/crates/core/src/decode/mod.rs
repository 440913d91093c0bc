//! Soundness-side decoding: heavy clouds of a candidate independent set,
//! label lists from low-agreement tuples, star picks and randomized
//! labelings of the underlying Label Cover instance.

mod bipartite;
mod claim;
mod layered;
mod lists;
mod star;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use bipartite::decode_bipartite;
pub use claim::{check_disjoint_family_bound, ClaimReport, ClaimViolation, DEFAULT_SUBFAMILY_CAP};
pub use layered::{claim_formula, decode_layered};
pub use lists::{cloud_label_lists, DroppedCloud, LabelList, LabelLists};
pub use star::{star_pick, StarPick, STAR_EXHAUSTIVE_MAX};

use crate::families::FamilyError;
use crate::reduction::{GadgetKind, ReductionError, VerifyMode};
use crate::solvers::{IndependenceReport, SolverError};

/// Default number of sampled probes when verifying independence.
pub const DEFAULT_VERIFY_PROBES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no heavy clouds")]
    NoHeavyClouds,
    #[error("no layer pair carries retained constraints")]
    NoLayerPair,
    #[error("set is not independent: edge {witness:?} lies inside it")]
    NotIndependent { witness: Vec<u64> },
    #[error("star hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("empty family")]
    EmptyFamily,
    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl From<ReductionError> for DecodeError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Infeasible(m) => DecodeError::Infeasible(m),
            other => DecodeError::InvalidParams(other.to_string()),
        }
    }
}

impl From<SolverError> for DecodeError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Infeasible(m) => DecodeError::Infeasible(m),
            SolverError::InvalidInput(m) => DecodeError::InvalidParams(m),
        }
    }
}

impl From<FamilyError> for DecodeError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Infeasible(m) => DecodeError::Infeasible(m),
            other => DecodeError::InvalidParams(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeParams {
    /// Heaviness threshold: cloud `x` is heavy when `|I_x| >= delta * |cloud|`.
    pub delta: f64,
    /// Largest allowed list size.
    pub t: usize,
    /// Node budget per tuple search; `None` searches to completion.
    pub tuple_budget: Option<u64>,
    pub seed: u64,
    /// Number of randomized labelings.
    pub trials: usize,
    /// Independence check run before decoding; `None` skips it.
    pub verify: Option<VerifyMode>,
}

impl DecodeParams {
    pub fn new(delta: f64, t: usize, seed: u64) -> Self {
        DecodeParams {
            delta,
            t,
            tuple_budget: None,
            seed,
            trials: 20,
            verify: Some(VerifyMode::Sampled { probes: DEFAULT_VERIFY_PROBES, seed }),
        }
    }

    pub(crate) fn validate(&self) -> Result<(), DecodeError> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(DecodeError::InvalidParams(format!("delta = {} outside (0, 1]", self.delta)));
        }
        if self.trials == 0 {
            return Err(DecodeError::InvalidParams("need at least one trial".into()));
        }
        Ok(())
    }
}

/// The asymptotic parameter schedule: `t = ceil(c ln(1/delta))`,
/// `ell = ceil(2 / delta^2)` layers and smoothness `T = 16 t^2 ell / delta^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub delta: f64,
    pub c: f64,
    pub t: usize,
    pub ell: usize,
    pub smoothness: f64,
}

pub fn asymptotic_schedule(delta: f64, c: f64) -> Result<Schedule, DecodeError> {
    if !(delta > 0.0 && delta <= 1.0) || !c.is_finite() || c <= 0.0 {
        return Err(DecodeError::InvalidParams(format!("need 0 < delta <= 1 and c > 0, got {delta}, {c}")));
    }
    let t = (c * (1.0 / delta).ln()).ceil() as usize;
    let ell = (2.0 / (delta * delta) - 1e-9).ceil() as usize;
    let smoothness = 16.0 * (t * t) as f64 * ell as f64 / (delta * delta);
    Ok(Schedule { delta, c, t, ell, smoothness })
}

/// A label chosen for a right-hand variable by a star pick.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightPick {
    /// Global variable id.
    pub y: usize,
    /// Number of incoming lists.
    pub family_size: usize,
    /// Star parameter: among any `d` image sets, two intersect.
    pub d: usize,
    pub label: u32,
    pub count: usize,
    pub bound: f64,
    /// The hypothesis failed; the most covered label was used instead.
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossViolation {
    pub y: usize,
    pub x1: usize,
    pub x2: usize,
    /// Sorted vertex indices of the two tuples.
    pub witness: Vec<u64>,
    pub witness_is_edge: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossReport {
    pub pairs_checked: usize,
    pub holds: bool,
    pub violations: Vec<CrossViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayeredDetails {
    /// Heavy clouds per layer (global ids).
    pub z: Vec<Vec<usize>>,
    /// Layers in which at least a `delta` fraction of clouds is heavy.
    pub dense_layers: Vec<usize>,
    pub pair: (usize, usize),
    /// `|Φ(Z_i, Z_j)| / |Φ(U_i, U_j)|` for the chosen pair.
    pub pair_ratio: f64,
    pub pair_constraints: usize,
    pub retained: usize,
    pub bad: usize,
    pub good: usize,
    /// Largest observed pairwise-disjoint image subfamily over all `y`.
    pub s: usize,
    pub s_exact: bool,
    /// The asymptotic bound on `s` for the same `delta`, `q`, `t`.
    pub s_formula: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub satisfied: usize,
    pub total: usize,
    /// Headline fraction: `Φ(X, V)` (bipartite) or the chosen layer pair (layered).
    pub fraction: f64,
    /// Fraction over all constraints.
    pub overall: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub kind: GadgetKind,
    pub delta: f64,
    pub t: usize,
    pub verification: Option<IndependenceReport>,
    /// Heavy clouds.
    pub heavy: Vec<usize>,
    pub lists: Vec<LabelList>,
    pub dropped: Vec<DroppedCloud>,
    pub cross: Option<CrossReport>,
    pub layered: Option<LayeredDetails>,
    pub picks: Vec<RightPick>,
    pub trials: Vec<TrialResult>,
    pub mean_fraction: f64,
    pub best_trial: usize,
    /// Labeling of the best trial, by global variable id.
    pub labeling: BTreeMap<usize, u32>,
    /// Mean headline fraction of uniformly random labelings over the same trials.
    pub baseline_fraction: f64,
}

pub(crate) fn verify(
    g: &crate::reduction::GadgetHypergraph,
    set: &[u64],
    mode: Option<VerifyMode>,
) -> Result<Option<IndependenceReport>, DecodeError> {
    let Some(mode) = mode else { return Ok(None) };
    let report = crate::solvers::is_independent_implicit(g, set, mode)?;
    if !report.independent {
        return Err(DecodeError::NotIndependent { witness: report.witness.clone().unwrap_or_default() });
    }
    Ok(Some(report))
}

/// Index of the best trial (first on ties) and the mean headline fraction.
pub(crate) fn summarize(trials: &[TrialResult]) -> (usize, f64) {
    let mut best = 0;
    for (i, t) in trials.iter().enumerate() {
        if t.fraction > trials[best].fraction {
            best = i;
        }
    }
    let mean = trials.iter().map(|t| t.fraction).sum::<f64>() / trials.len() as f64;
    (best, mean)
}
