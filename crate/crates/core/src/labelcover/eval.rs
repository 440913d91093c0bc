use serde::{Deserialize, Serialize};

use super::{Assignment, BipartiteInstance, Instance, LabelCoverError, LayeredInstance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSatisfaction {
    pub i: usize,
    pub j: usize,
    pub satisfied: usize,
    pub total: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatisfactionReport {
    pub satisfied: usize,
    pub total: usize,
    /// `satisfied / total`, or 1.0 when there are no constraints.
    pub fraction: f64,
    /// Per layer pair `(i, j)` with at least one constraint; empty for bipartite instances.
    pub per_pair: Vec<PairSatisfaction>,
}

pub(crate) fn fraction(satisfied: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        satisfied as f64 / total as f64
    }
}

/// Fraction of constraints satisfied by `assignment`. Constraints with an
/// unassigned endpoint count as unsatisfied.
pub fn eval_assignment(instance: &Instance, assignment: &Assignment) -> Result<SatisfactionReport, LabelCoverError> {
    match instance {
        Instance::Bipartite(b) => eval_bipartite(b, assignment),
        Instance::Layered(l) => eval_layered(l, assignment),
    }
}

pub fn eval_bipartite(
    instance: &BipartiteInstance,
    assignment: &Assignment,
) -> Result<SatisfactionReport, LabelCoverError> {
    assignment.validate(instance.var_count(), |v| {
        if v < instance.left_count() {
            instance.left_alphabet()
        } else {
            instance.right_alphabet()
        }
    })?;
    let satisfied = instance
        .edges()
        .iter()
        .filter(|e| match (assignment.get(e.u), assignment.get(instance.right_var(e.v))) {
            (Some(a), Some(b)) => e.map.apply(a) == b,
            _ => false,
        })
        .count();
    let total = instance.edges().len();
    Ok(SatisfactionReport { satisfied, total, fraction: fraction(satisfied, total), per_pair: Vec::new() })
}

pub fn eval_layered(
    instance: &LayeredInstance,
    assignment: &Assignment,
) -> Result<SatisfactionReport, LabelCoverError> {
    assignment.validate(instance.var_count(), |v| instance.alphabet_of(v))?;
    let ell = instance.layer_count();
    let mut counts = vec![(0usize, 0usize); ell * ell];
    for (id, e) in instance.edges().iter().enumerate() {
        let (x, y) = instance.endpoints(id);
        let ok = match (assignment.get(x), assignment.get(y)) {
            (Some(a), Some(b)) => e.map.apply(a) == b,
            _ => false,
        };
        let slot = &mut counts[e.i * ell + e.j];
        slot.1 += 1;
        if ok {
            slot.0 += 1;
        }
    }
    let mut per_pair = Vec::new();
    for i in 0..ell {
        for j in i + 1..ell {
            let (s, t) = counts[i * ell + j];
            if t > 0 {
                per_pair.push(PairSatisfaction { i, j, satisfied: s, total: t, fraction: fraction(s, t) });
            }
        }
    }
    let satisfied = per_pair.iter().map(|p| p.satisfied).sum();
    let total = instance.edges().len();
    Ok(SatisfactionReport { satisfied, total, fraction: fraction(satisfied, total), per_pair })
}
