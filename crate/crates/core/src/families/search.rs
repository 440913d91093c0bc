//! Maximum k-wise t-agreeing families in `[q]^n`.
//!
//! Three methods, from oracle to heuristic:
//!
//! * [`SearchMethod::Exact`] enumerates every subfamily of the cube as a
//!   bitmask and keeps the largest one that contains no violating subset.
//!   Only usable while `q^n <= 20`; it is the independent oracle the other
//!   methods are tested against.
//! * [`SearchMethod::BranchAndBound`] grows families clique-style: each
//!   chosen word filters the candidate list against every chosen subset of
//!   size `< k`, and the branch is cut when `chosen + candidates` cannot beat
//!   the incumbent. Words are ordered lexicographically and the first word is
//!   fixed to `1^n`, which is sound because relabeling symbols per coordinate
//!   preserves agreement.
//! * [`SearchMethod::Greedy`] adds words in seeded random orders and keeps the
//!   best result; a lower bound only.

use rand::seq::SliceRandom;

use super::packed::{AgreeState, PackedWords};
use super::{cube_size, AgreeParams, Family, FamilyError, Word};
use crate::rng;

pub const EXACT_MAX_WORDS: u64 = 20;
pub const BRANCH_AND_BOUND_MAX_WORDS: u64 = 4096;
pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    Exact,
    BranchAndBound { node_limit: u64 },
    Greedy { seed: u64, restarts: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub max_size: usize,
    pub witness: Family,
    /// `true` when `max_size` is proven maximal.
    pub exhaustive: bool,
    pub nodes_explored: u64,
}

pub fn max_agreeing_family(
    n: usize,
    q: u8,
    params: AgreeParams,
    method: SearchMethod,
) -> Result<SearchOutcome, FamilyError> {
    let size = cube_size(q, n).ok_or_else(|| FamilyError::Infeasible(format!("{q}^{n} overflows")))?;
    let cap = match method {
        SearchMethod::Exact => EXACT_MAX_WORDS,
        SearchMethod::BranchAndBound { .. } => BRANCH_AND_BOUND_MAX_WORDS,
        SearchMethod::Greedy { .. } => BRANCH_AND_BOUND_MAX_WORDS * 16,
    };
    if size > cap {
        return Err(FamilyError::Infeasible(format!(
            "{q}^{n} = {size} words exceeds the {cap}-word limit of {method:?}"
        )));
    }
    if params.t == 0 {
        let witness = Family::full(q, n)?;
        return Ok(SearchOutcome { max_size: witness.len(), witness, exhaustive: true, nodes_explored: 0 });
    }
    let words: Vec<Word> = (0..size).map(|i| Word::from_index(q, n, i)).collect();
    let (chosen, exhaustive, nodes) = match method {
        SearchMethod::Exact => exact(&words, params),
        SearchMethod::BranchAndBound { node_limit } => branch_and_bound(&words, params, node_limit),
        SearchMethod::Greedy { seed, restarts } => greedy(&words, params, seed, restarts.max(1)),
    };
    let witness = Family::from_words(q, n, chosen.iter().map(|&i| words[i].clone()))?;
    Ok(SearchOutcome { max_size: witness.len(), witness, exhaustive, nodes_explored: nodes })
}

/// Every subset of size `2..=k` of `0..len` with agreement below `t`, as bitmasks.
fn violating_subsets(packed: &PackedWords, params: AgreeParams) -> Vec<u32> {
    fn walk(
        packed: &PackedWords,
        params: AgreeParams,
        state: Option<&AgreeState>,
        start: usize,
        mask: u32,
        depth: usize,
        out: &mut Vec<u32>,
    ) {
        for w in start..packed.len() {
            let next = match state {
                None => packed.state_of(w),
                Some(s) => {
                    let mut next = packed.empty_state();
                    packed.extend_into(s, w, &mut next);
                    next
                }
            };
            let m = mask | (1 << w);
            if depth >= 1 && next.count() < params.t {
                // Supersets are violating too and contain this mask, so they add nothing.
                out.push(m);
                continue;
            }
            if depth + 1 < params.k {
                walk(packed, params, Some(&next), w + 1, m, depth + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(packed, params, None, 0, 0, 0, &mut out);
    out
}

fn exact(words: &[Word], params: AgreeParams) -> (Vec<usize>, bool, u64) {
    let packed = PackedWords::new(words);
    let bad = violating_subsets(&packed, params);
    let len = words.len() as u32;
    let mut best: (u32, u32) = (0, 0);
    let mut nodes = 0u64;
    for mask in 0..(1u64 << len) {
        let mask = mask as u32;
        let size = mask.count_ones();
        if size <= best.0 {
            continue;
        }
        nodes += 1;
        if bad.iter().all(|&b| b & mask != b) {
            best = (size, mask);
        }
    }
    let chosen = (0..len as usize).filter(|&i| best.1 & (1 << i) != 0).collect();
    (chosen, true, nodes)
}

struct Bnb<'a> {
    packed: &'a PackedWords,
    params: AgreeParams,
    node_limit: u64,
    nodes: u64,
    aborted: bool,
    best: Vec<usize>,
    chosen: Vec<usize>,
}

impl Bnb<'_> {
    /// `subsets` holds the agreement states of all chosen subsets of size `1..k`.
    fn walk(&mut self, candidates: &[usize], subsets: &[(usize, AgreeState)]) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        for (pos, &c) in candidates.iter().enumerate() {
            if self.chosen.len() + (candidates.len() - pos) <= self.best.len() {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.aborted = true;
                return;
            }
            let (new_subsets, rest) = self.include(c, &candidates[pos + 1..], subsets);
            self.chosen.push(c);
            self.walk(&rest, &new_subsets);
            self.chosen.pop();
            if self.aborted {
                return;
            }
        }
    }

    /// Adds `c`: extends the subset list and filters `rest` against the new subsets.
    fn include(
        &self,
        c: usize,
        rest: &[usize],
        subsets: &[(usize, AgreeState)],
    ) -> (Vec<(usize, AgreeState)>, Vec<usize>) {
        let mut fresh = vec![(1, self.packed.state_of(c))];
        for (size, state) in subsets {
            if size + 1 < self.params.k {
                let mut next = self.packed.empty_state();
                self.packed.extend_into(state, c, &mut next);
                fresh.push((size + 1, next));
            }
        }
        let filtered = rest
            .iter()
            .copied()
            .filter(|&d| fresh.iter().all(|(_, s)| self.packed.count_with(s, d) >= self.params.t))
            .collect();
        let mut all = subsets.to_vec();
        all.extend(fresh);
        (all, filtered)
    }
}

fn branch_and_bound(words: &[Word], params: AgreeParams, node_limit: u64) -> (Vec<usize>, bool, u64) {
    let packed = PackedWords::new(words);
    let mut bnb = Bnb {
        packed: &packed,
        params,
        node_limit,
        nodes: 1,
        aborted: false,
        best: Vec::new(),
        chosen: Vec::new(),
    };
    // Word 0 is 1^n; every nonempty family can be relabeled to contain it.
    let all: Vec<usize> = (1..words.len()).collect();
    let (subsets, rest) = bnb.include(0, &all, &[]);
    bnb.chosen.push(0);
    bnb.walk(&rest, &subsets);
    let exhaustive = !bnb.aborted;
    (bnb.best, exhaustive, bnb.nodes)
}

fn greedy(words: &[Word], params: AgreeParams, seed: u64, restarts: usize) -> (Vec<usize>, bool, u64) {
    let packed = PackedWords::new(words);
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0;
    for r in 0..restarts {
        let mut order: Vec<usize> = (0..words.len()).collect();
        order.shuffle(&mut rng::stream(seed, r as u64));
        let mut chosen: Vec<usize> = Vec::new();
        let mut subsets: Vec<(usize, AgreeState)> = Vec::new();
        for w in order {
            nodes += 1;
            if subsets.iter().all(|(_, s)| packed.count_with(s, w) >= params.t) {
                let mut fresh = vec![(1, packed.state_of(w))];
                for (size, state) in &subsets {
                    if size + 1 < params.k {
                        let mut next = packed.empty_state();
                        packed.extend_into(state, w, &mut next);
                        fresh.push((size + 1, next));
                    }
                }
                subsets.extend(fresh);
                chosen.push(w);
            }
        }
        if chosen.len() > best.len() {
            chosen.sort_unstable();
            best = chosen;
        }
    }
    (best, false, nodes)
}
