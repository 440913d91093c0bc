use serde::{Deserialize, Serialize};

use super::DecodeError;

/// Families up to this size get an exhaustive hypothesis check.
pub const STAR_EXHAUSTIVE_MAX: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarPick {
    pub element: u32,
    /// Number of sets containing `element`.
    pub count: usize,
    /// `|family| / (t (d - 1))`.
    pub bound: f64,
    /// Indices of the greedy maximal pairwise-disjoint subfamily.
    pub disjoint: Vec<usize>,
    /// True when the hypothesis was verified exhaustively.
    pub hypothesis_checked: bool,
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

fn normalized(sets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    sets.iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect()
}

/// Maximal pairwise-disjoint subfamily, scanning in input order.
fn greedy_disjoint(sets: &[Vec<u32>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        if chosen.iter().all(|&c| disjoint(&sets[c], s)) {
            chosen.push(i);
        }
    }
    chosen
}

/// A largest pairwise-disjoint subfamily (by position, so repeated sets may
/// both appear only if empty).
pub(crate) fn max_disjoint_subfamily(sets: &[Vec<u32>]) -> Vec<usize> {
    fn walk(sets: &[Vec<u32>], start: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if cur.len() + (sets.len() - start) <= best.len() {
            return;
        }
        for i in start..sets.len() {
            if cur.iter().all(|&c| disjoint(&sets[c], &sets[i])) {
                cur.push(i);
                walk(sets, i + 1, cur, best);
                cur.pop();
            }
        }
    }
    let sets = normalized(sets);
    let mut best = Vec::new();
    walk(&sets, 0, &mut Vec::new(), &mut best);
    best
}

/// Picks an element contained in at least `|sets| / (t (d - 1))` of the sets,
/// assuming that among any `d` sets two intersect.
///
/// Follows the counting argument: take a maximal pairwise-disjoint
/// subfamily (greedily, in input order), then return the element of its union
/// contained in the most sets (smallest on ties). The hypothesis is verified
/// exhaustively for at most [`STAR_EXHAUSTIVE_MAX`] sets; otherwise only a
/// greedy subfamily of size `>= d` is detected.
pub fn star_pick(sets: &[Vec<u32>], d: usize, t: usize) -> Result<StarPick, DecodeError> {
    if sets.is_empty() {
        return Err(DecodeError::EmptyFamily);
    }
    if d < 2 || t == 0 {
        return Err(DecodeError::InvalidParams(format!("need d >= 2 and t >= 1, got d = {d}, t = {t}")));
    }
    let sets = normalized(sets);
    if let Some(big) = sets.iter().position(|s| s.len() > t) {
        return Err(DecodeError::InvalidParams(format!("set {big} has more than t = {t} elements")));
    }
    let checked = sets.len() <= STAR_EXHAUSTIVE_MAX;
    if checked {
        let best = max_disjoint_subfamily(&sets);
        if best.len() >= d {
            return Err(DecodeError::HypothesisViolated(format!("sets {best:?} are pairwise disjoint, d = {d}")));
        }
    }
    let chosen = greedy_disjoint(&sets);
    if chosen.len() >= d {
        return Err(DecodeError::HypothesisViolated(format!("sets {chosen:?} are pairwise disjoint, d = {d}")));
    }
    let mut union: Vec<u32> = chosen.iter().flat_map(|&c| sets[c].iter().copied()).collect();
    union.sort_unstable();
    let mut best: Option<(u32, usize)> = None;
    for &e in &union {
        let count = sets.iter().filter(|s| s.binary_search(&e).is_ok()).count();
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((e, count));
        }
    }
    let (element, count) = best.ok_or_else(|| DecodeError::HypothesisViolated("every set is empty".into()))?;
    Ok(StarPick {
        element,
        count,
        bound: sets.len() as f64 / (t * (d - 1)) as f64,
        disjoint: chosen,
        hypothesis_checked: checked,
    })
}

/// The element in the most sets (smallest on ties), with its count.
pub(crate) fn most_covered(sets: &[Vec<u32>]) -> Option<(u32, usize)> {
    let mut all: Vec<u32> = normalized(sets).into_iter().flatten().collect();
    all.sort_unstable();
    let mut best: Option<(u32, usize)> = None;
    for chunk in all.chunk_by(|a, b| a == b) {
        if best.is_none_or(|(_, c)| chunk.len() > c) {
            best = Some((chunk[0], chunk.len()));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = star_pick(&[vec![1], vec![1, 2], vec![1, 3]], 2, 2).unwrap();
        assert_eq!((p.element, p.count), (1, 3));
        assert_eq!(p.bound, 1.5);

        let p = star_pick(&[vec![4, 7], vec![4, 7], vec![7, 4]], 2, 2).unwrap();
        assert_eq!(p.count, 3);
        assert!([4, 7].contains(&p.element));

        let p = star_pick(&[vec![1, 2], vec![1, 3], vec![2, 3], vec![4, 5]], 3, 2).unwrap();
        assert!([1, 2].contains(&p.element));
        assert_eq!(p.count, 2);
        assert!(p.count as f64 >= p.bound);
    }

    #[test]
    fn errors() {
        assert!(matches!(star_pick(&[], 2, 1), Err(DecodeError::EmptyFamily)));
        assert!(matches!(star_pick(&[vec![1], vec![2]], 2, 1), Err(DecodeError::HypothesisViolated(_))));
        assert!(matches!(star_pick(&[vec![1, 2, 3]], 2, 2), Err(DecodeError::InvalidParams(_))));
        assert!(matches!(star_pick(&[vec![]], 2, 1), Err(DecodeError::HypothesisViolated(_))));
        // Greedy takes {1,2} and {3,4}; the exact check also finds a size-3 subfamily.
        let sets = [vec![1, 2], vec![3, 4], vec![1, 3], vec![2, 5], vec![4, 6]];
        assert!(star_pick(&sets, 3, 2).is_err());
    }

    #[test]
    fn max_disjoint() {
        let sets = [vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 5]];
        // Greedy stops at 1 ({1,2} blocks... {3,5}), exact finds {1,3},{2,4}.
        assert_eq!(greedy_disjoint(&sets), vec![0, 3]);
        assert_eq!(max_disjoint_subfamily(&sets).len(), 2);
        assert_eq!(most_covered(&sets), Some((1, 2)));
        assert_eq!(most_covered(&[vec![]]), None);
    }
}
