use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DecodeError, DecodeParams};
use crate::families::{find_low_agreement_tuple, Family, TupleSearch, Word};
use crate::reduction::scan::split_by_cloud;
use crate::reduction::GadgetHypergraph;
use crate::rng;

/// The list `L_x` of a heavy cloud: the agreement set of `tuple`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelList {
    pub x: usize,
    /// 1-based labels, ascending.
    pub labels: Vec<u32>,
    /// Sorted vertex indices of the witnessing k-tuple.
    pub tuple: Vec<u64>,
}

/// A heavy cloud without a list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedCloud {
    pub x: usize,
    pub members: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelLists {
    /// All heavy clouds, ascending.
    pub heavy: Vec<usize>,
    /// Lists of heavy clouds, ascending by `x`.
    pub lists: Vec<LabelList>,
    pub dropped: Vec<DroppedCloud>,
}

impl LabelLists {
    pub fn get(&self, x: usize) -> Option<&LabelList> {
        self.lists.binary_search_by_key(&x, |l| l.x).ok().map(|i| &self.lists[i])
    }
}

/// Finds the heavy clouds of `set` (`|I_x| >= delta * |cloud|`) and, for each,
/// a k-tuple of members whose agreement set is as small as possible, up to `t`.
///
/// List sizes are tried in increasing order, so a returned list is minimal
/// whenever the searches at smaller sizes ran to completion.
pub fn cloud_label_lists(
    g: &GadgetHypergraph,
    set: &[u64],
    params: &DecodeParams,
) -> Result<LabelLists, DecodeError> {
    params.validate()?;
    let members = split_by_cloud(g, set)?;
    let heavy: Vec<usize> = (0..g.cloud_count())
        .filter(|&x| !members[x].is_empty() && members[x].len() as f64 >= params.delta * g.cloud_size(x) as f64)
        .collect();
    if heavy.is_empty() {
        return Err(DecodeError::NoHeavyClouds);
    }
    let outcomes: Vec<Result<Result<LabelList, DroppedCloud>, DecodeError>> = heavy
        .par_iter()
        .map(|&x| cloud_list(g, x, &members[x], params))
        .collect();
    let mut lists = Vec::new();
    let mut dropped = Vec::new();
    for outcome in outcomes {
        match outcome? {
            Ok(list) => lists.push(list),
            Err(d) => dropped.push(d),
        }
    }
    Ok(LabelLists { heavy, lists, dropped })
}

fn cloud_list(
    g: &GadgetHypergraph,
    x: usize,
    ranks: &[u64],
    params: &DecodeParams,
) -> Result<Result<LabelList, DroppedCloud>, DecodeError> {
    let k = g.k();
    let drop = |reason: String| Ok(Err(DroppedCloud { x, members: ranks.len(), reason }));
    if ranks.len() < k {
        return drop(format!("{} members, fewer than k = {k}", ranks.len()));
    }
    let dim = g.cloud_dim(x);
    let family = Family::from_words(g.q(), dim, ranks.iter().map(|&r| Word::from_index(g.q(), dim, r)))?;
    let seed: u64 = rng::stream(params.seed, x as u64).gen();
    let mut exhausted = false;
    for t in 0..=params.t {
        match find_low_agreement_tuple(&family, k, t, params.tuple_budget, seed)? {
            TupleSearch::Found { tuple, .. } => {
                let offset = g.cloud_offset(x);
                let mut indices: Vec<u64> = tuple.words.iter().map(|w| offset + w.index()).collect();
                indices.sort_unstable();
                let labels = tuple.agreement.iter().map(|&c| c as u32).collect();
                return Ok(Ok(LabelList { x, labels, tuple: indices }));
            }
            TupleSearch::BudgetExhausted { .. } => exhausted = true,
            TupleSearch::NoneExists { .. } => {}
        }
    }
    if exhausted {
        drop(format!("tuple search budget exhausted for every t' <= {}", params.t))
    } else {
        drop(format!("every {k} members agree on more than {} coordinates", params.t))
    }
}
