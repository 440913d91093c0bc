use rand::seq::SliceRandom;

use super::packed::{AgreeState, PackedWords};
use super::{AgreeParams, Family, FamilyError, Word};
use crate::rng;

/// Whether every subset of `family` with between 2 and `k` members agrees on at
/// least `t` coordinates. Families with at most one member are vacuously
/// agreeing.
pub fn is_k_wise_t_agreeing(family: &Family, params: AgreeParams) -> bool {
    let words = family.words();
    let packed = PackedWords::new(&words);
    scan_subsets(&packed, params.k, params.t).is_none_or(|(count, _)| count >= params.t)
}

/// The smallest agreement size over subsets of size `2..=k`, i.e. the largest
/// `t` for which `family` is k-wise t-agreeing. `None` when `|family| <= 1`.
pub fn min_agreement(family: &Family, k: usize) -> Option<usize> {
    let words = family.words();
    let packed = PackedWords::new(&words);
    scan_subsets(&packed, k, 0).map(|(count, _)| count)
}

/// Binary families only: whether every subset of size `2..=k` has at least `t`
/// coordinates where all members carry the digit `1`.
pub fn is_k_wise_t_intersecting(family: &Family, k: usize, t: usize) -> Result<bool, FamilyError> {
    require_binary(family)?;
    if k < 2 {
        return Err(FamilyError::InvalidParams(format!("k = {k}, need k >= 2")));
    }
    let words = family.words();
    let packed = PackedWords::ones(&words);
    Ok(scan_subsets(&packed, k, t).is_none_or(|(count, _)| count >= t))
}

/// Binary families only: smallest number of common ones over subsets of size `2..=k`.
pub fn min_common_ones(family: &Family, k: usize) -> Result<Option<usize>, FamilyError> {
    require_binary(family)?;
    let words = family.words();
    let packed = PackedWords::ones(&words);
    Ok(scan_subsets(&packed, k.max(2), 0).map(|(count, _)| count))
}

pub(crate) fn require_binary(family: &Family) -> Result<(), FamilyError> {
    if family.alphabet() != 2 {
        return Err(FamilyError::BinaryOnly { q: family.alphabet() as usize });
    }
    Ok(())
}

/// Scans subsets of size `min(k, len)`, returning the minimum agreement and a
/// witness. Stops early on the first subset (of any size >= 2) whose agreement
/// drops below `stop_below`, or on agreement zero.
fn scan_subsets(packed: &PackedWords, k: usize, stop_below: usize) -> Option<(usize, Vec<usize>)> {
    let len = packed.len();
    if len < 2 {
        return None;
    }
    let size = k.min(len);
    let mut scan = Scan {
        packed,
        size,
        stop_below,
        states: (0..=size).map(|_| packed.empty_state()).collect(),
        chosen: Vec::with_capacity(size),
        best: (usize::MAX, Vec::new()),
        done: false,
    };
    scan.walk(0, 0);
    Some(scan.best)
}

struct Scan<'a> {
    packed: &'a PackedWords,
    size: usize,
    stop_below: usize,
    states: Vec<AgreeState>,
    chosen: Vec<usize>,
    best: (usize, Vec<usize>),
    done: bool,
}

impl Scan<'_> {
    fn walk(&mut self, start: usize, depth: usize) {
        let len = self.packed.len();
        for w in start..=len - (self.size - depth) {
            if depth == 0 {
                self.states[1] = self.packed.state_of(w);
            } else {
                let (lo, hi) = self.states.split_at_mut(depth + 1);
                self.packed.extend_into(&lo[depth], w, &mut hi[0]);
            }
            self.chosen.push(w);
            let count = self.states[depth + 1].count();
            if depth >= 1 && (count < self.stop_below || count == 0) {
                self.best = (count, self.chosen.clone());
                self.done = true;
            } else if depth + 1 == self.size {
                if count < self.best.0 {
                    self.best = (count, self.chosen.clone());
                }
            } else {
                self.walk(w + 1, depth + 1);
            }
            self.chosen.pop();
            if self.done {
                return;
            }
        }
    }
}

/// A k-tuple of distinct family members together with its agreement set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowAgreementTuple {
    pub words: Vec<Word>,
    /// 1-based coordinates, ascending.
    pub agreement: Vec<usize>,
}

/// Outcome of [`find_low_agreement_tuple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleSearch {
    Found { tuple: LowAgreementTuple, nodes: u64 },
    /// The search finished: every k-subset agrees on more than `t` coordinates.
    NoneExists { nodes: u64 },
    /// The node budget ran out before the search finished.
    BudgetExhausted { nodes: u64 },
}

impl TupleSearch {
    pub fn tuple(&self) -> Option<&LowAgreementTuple> {
        match self {
            TupleSearch::Found { tuple, .. } => Some(tuple),
            _ => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match *self {
            TupleSearch::Found { nodes, .. }
            | TupleSearch::NoneExists { nodes }
            | TupleSearch::BudgetExhausted { nodes } => nodes,
        }
    }
}

/// Searches for `k` distinct members of `family` whose agreement has at most
/// `t` coordinates.
///
/// The root order is a seeded shuffle; below the root, children are tried in
/// order of the agreement they would leave. `budget = None` runs to completion,
/// in which case [`TupleSearch::NoneExists`] certifies that every k-subset
/// agrees on at least `t + 1` coordinates.
pub fn find_low_agreement_tuple(
    family: &Family,
    k: usize,
    t: usize,
    budget: Option<u64>,
    seed: u64,
) -> Result<TupleSearch, FamilyError> {
    if k < 2 {
        return Err(FamilyError::InvalidParams(format!("k = {k}, need k >= 2")));
    }
    if family.len() < k {
        return Err(FamilyError::FamilyTooSmall { size: family.len(), k });
    }
    let mut words = family.words();
    words.shuffle(&mut rng::seeded(seed));
    let packed = PackedWords::new(&words);
    let mut search = TupleDfs {
        packed: &packed,
        k,
        t,
        budget,
        nodes: 0,
        chosen: Vec::with_capacity(k),
        exhausted: false,
    };
    let root = packed.empty_state();
    let found = search.walk(&root, 0, 0);
    let nodes = search.nodes;
    Ok(match found {
        Some((indices, state)) => {
            let tuple = LowAgreementTuple {
                words: indices.iter().map(|&i| words[i].clone()).collect(),
                agreement: state.coords(packed.blocks()),
            };
            TupleSearch::Found { tuple, nodes }
        }
        None if search.exhausted => TupleSearch::BudgetExhausted { nodes },
        None => TupleSearch::NoneExists { nodes },
    })
}

struct TupleDfs<'a> {
    packed: &'a PackedWords,
    k: usize,
    t: usize,
    budget: Option<u64>,
    nodes: u64,
    chosen: Vec<usize>,
    exhausted: bool,
}

impl TupleDfs<'_> {
    fn walk(&mut self, state: &AgreeState, depth: usize, start: usize) -> Option<(Vec<usize>, AgreeState)> {
        let len = self.packed.len();
        if depth >= 1 && state.count() <= self.t {
            // Agreement only shrinks, so any completion works; take the next
            // indices and report the agreement of the full tuple.
            let mut full = state.clone();
            let mut scratch = self.packed.empty_state();
            let mut tuple = self.chosen.clone();
            for w in start..start + (self.k - depth) {
                self.packed.extend_into(&full, w, &mut scratch);
                std::mem::swap(&mut full, &mut scratch);
                tuple.push(w);
            }
            return Some((tuple, full));
        }
        if depth == self.k {
            return None;
        }
        let last = len - (self.k - depth);
        let mut children: Vec<usize> = (start..=last).collect();
        if depth >= 1 {
            children.sort_by_key(|&w| self.packed.count_with(state, w));
        }
        let mut next = self.packed.empty_state();
        for w in children {
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                self.exhausted = true;
                return None;
            }
            if depth == 0 {
                next = self.packed.state_of(w);
            } else {
                self.packed.extend_into(state, w, &mut next);
            }
            self.chosen.push(w);
            // Children come from positions after `w`, so each k-subset is visited once.
            let found = self.walk(&next, depth + 1, w + 1);
            self.chosen.pop();
            if found.is_some() || self.exhausted {
                return found;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::agreement;

    fn fam(q: u8, words: &[&str]) -> Family {
        Family::from_digit_strings(q, words).unwrap()
    }

    fn star5() -> Family {
        fam(2, &["0000", "1000", "0100", "0010", "0001"])
    }

    #[test]
    fn agreeing_examples() {
        assert!(is_k_wise_t_agreeing(&star5(), AgreeParams::new(2, 2).unwrap()));
        assert!(!is_k_wise_t_agreeing(&star5(), AgreeParams::new(3, 2).unwrap()));
        let single = fam(3, &["0212"]);
        assert!(is_k_wise_t_agreeing(&single, AgreeParams::new(5, 4).unwrap()));
        assert_eq!(min_agreement(&star5(), 2), Some(2));
        assert_eq!(min_agreement(&star5(), 3), Some(1));
        assert_eq!(min_agreement(&single, 2), None);
    }

    #[test]
    fn small_families_check_pairs_below_k() {
        // |F| = 2 < k = 3: the pair itself must still agree on t coordinates.
        let f = fam(2, &["0011", "1111"]);
        assert!(is_k_wise_t_agreeing(&f, AgreeParams::new(3, 2).unwrap()));
        assert!(!is_k_wise_t_agreeing(&f, AgreeParams::new(3, 3).unwrap()));
    }

    #[test]
    fn intersecting_examples() {
        let heavy: Vec<String> = (0..16u64)
            .map(|i| Word::from_index(2, 4, i))
            .filter(|w| w.weight() >= 3)
            .map(|w| w.to_digits())
            .collect();
        let refs: Vec<&str> = heavy.iter().map(String::as_str).collect();
        let f = fam(2, &refs);
        assert!(is_k_wise_t_intersecting(&f, 3, 1).unwrap());
        assert!(!is_k_wise_t_intersecting(&f, 3, 2).unwrap());
        let witness = fam(2, &["1110", "1101", "1011"]);
        assert!(!is_k_wise_t_intersecting(&witness, 3, 2).unwrap());
        assert!(is_k_wise_t_intersecting(&fam(2, &["111"]), 3, 3).unwrap());
        assert!(matches!(
            is_k_wise_t_intersecting(&fam(3, &["111"]), 3, 1),
            Err(FamilyError::BinaryOnly { q: 3 })
        ));
    }

    #[test]
    fn tuple_search_examples() {
        let cube = Family::full(2, 3).unwrap();
        let found = find_low_agreement_tuple(&cube, 2, 0, None, 1).unwrap();
        let tuple = found.tuple().unwrap();
        assert!(tuple.agreement.is_empty());
        assert_eq!(tuple.words[0].flipped(1).flipped(2).flipped(3), tuple.words[1]);

        let half = fam(2, &["000", "001", "010", "011"]);
        assert!(matches!(
            find_low_agreement_tuple(&half, 2, 0, None, 5).unwrap(),
            TupleSearch::NoneExists { .. }
        ));

        let found = find_low_agreement_tuple(&star5(), 3, 1, None, 9).unwrap();
        let tuple = found.tuple().unwrap();
        assert_eq!(tuple.agreement.len(), 1);
        assert_eq!(agreement(&tuple.words).unwrap(), tuple.agreement);

        assert!(matches!(
            find_low_agreement_tuple(&half, 5, 0, None, 0),
            Err(FamilyError::FamilyTooSmall { size: 4, k: 5 })
        ));
    }

    #[test]
    fn tuple_search_budget() {
        let half = fam(2, &["000", "001", "010", "011"]);
        assert!(matches!(
            find_low_agreement_tuple(&half, 2, 0, Some(2), 0).unwrap(),
            TupleSearch::BudgetExhausted { .. }
        ));
    }
}
