use std::collections::BTreeSet;

use super::predicates::require_binary;
use super::{Family, FamilyError};

/// One shifting step on coordinate `i` (1-based): every member with digit `0`
/// at `i` moves to its flip unless the flip is already present.
pub fn shift_coordinate(family: &Family, i: usize) -> Result<Family, FamilyError> {
    require_binary(family)?;
    if i == 0 || i > family.word_length() {
        return Err(FamilyError::OutOfRange(format!(
            "coordinate {i} outside 1..={}",
            family.word_length()
        )));
    }
    let members = family.members();
    let shifted: BTreeSet<_> = members
        .iter()
        .map(|x| {
            if x.at(i) == 1 {
                let up = x.flipped(i);
                if !members.contains(&up) {
                    return up;
                }
            }
            x.clone()
        })
        .collect();
    debug_assert_eq!(shifted.len(), members.len());
    Ok(family.replace_members(shifted))
}

/// Repeats passes of [`shift_coordinate`] over `i = 1..=n` until a pass
/// changes nothing. The result is upward closed and has the same size.
pub fn monotonize(family: &Family) -> Result<Family, FamilyError> {
    monotonize_counting(family).map(|(f, _)| f)
}

/// [`monotonize`] that also reports the number of full passes performed
/// (including the final pass that confirmed the fixpoint).
pub fn monotonize_counting(family: &Family) -> Result<(Family, usize), FamilyError> {
    require_binary(family)?;
    let mut current = family.clone();
    let mut passes = 0;
    loop {
        passes += 1;
        let mut next = current.clone();
        for i in 1..=family.word_length() {
            next = shift_coordinate(&next, i)?;
        }
        if next == current {
            return Ok((current, passes));
        }
        current = next;
    }
}

/// Whether every member with a `0` at some coordinate also has its flip there
/// in the family.
pub fn is_upward_closed(family: &Family) -> Result<bool, FamilyError> {
    require_binary(family)?;
    Ok(family.iter().all(|x| {
        (1..=x.len())
            .filter(|&i| x.at(i) == 1)
            .all(|i| family.contains(&x.flipped(i)))
    }))
}
