use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use super::star::{most_covered, star_pick};
use super::{
    cloud_label_lists, summarize, verify, CrossReport, CrossViolation, DecodeError, DecodeParams, DecodeReport,
    LabelLists, RightPick, TrialResult,
};
use crate::labelcover::{Assignment, BipartiteInstance};
use crate::reduction::{GadgetHypergraph, GadgetKind};
use crate::rng;

/// Decodes a candidate independent set of a 2k-uniform gadget into labelings
/// of its bipartite instance.
///
/// Heavy clouds get lists `L_x`; every right variable adjacent to a listed
/// cloud gets a star pick over the images `φ_{x->y}(L_x)`, and each trial
/// labels every listed `x` by a uniform member of `L_x`. Variables without a
/// list or pick get label 1. The headline fraction counts constraints leaving
/// listed clouds.
pub fn decode_bipartite(g: &GadgetHypergraph, set: &[u64], params: &DecodeParams) -> Result<DecodeReport, DecodeError> {
    params.validate()?;
    let lc = g
        .bipartite()
        .ok_or_else(|| DecodeError::InvalidParams("decode_bipartite needs a two_k gadget".into()))?;
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let verification = verify(g, &set, params.verify)?;
    let lists = cloud_label_lists(g, &set, params)?;
    let cross = cross_intersection(g, lc, &lists)?;
    let picks = right_picks(lc, &lists, params.t);

    let listed: Vec<bool> = (0..lc.left_count()).map(|x| lists.get(x).is_some()).collect();
    let from_x: Vec<usize> = (0..lc.edges().len()).filter(|&e| listed[lc.edges()[e].u]).collect();
    let mut base = vec![Some(1u32); lc.var_count()];
    for p in &picks {
        base[p.y] = Some(p.label);
    }
    let runs: Vec<(TrialResult, Vec<Option<u32>>, f64)> = (0..params.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = rng::stream(params.seed, trial as u64);
            let mut labels = base.clone();
            for l in &lists.lists {
                labels[l.x] = Some(*l.labels.choose(&mut rng).unwrap_or(&1));
            }
            let (satisfied, overall) = score(lc, &labels, &from_x);
            let mut random = vec![None; lc.var_count()];
            for (v, slot) in random.iter_mut().enumerate() {
                let range = if v < lc.left_count() { lc.left_alphabet() } else { lc.right_alphabet() };
                *slot = Some(rng.gen_range(1..=range));
            }
            let (baseline, _) = score(lc, &random, &from_x);
            let result = TrialResult {
                trial,
                satisfied,
                total: from_x.len(),
                fraction: fraction(satisfied, from_x.len()),
                overall: fraction(overall, lc.edges().len()),
            };
            (result, labels, fraction(baseline, from_x.len()))
        })
        .collect();
    let trials: Vec<TrialResult> = runs.iter().map(|r| r.0.clone()).collect();
    let (best_trial, mean_fraction) = summarize(&trials);
    let baseline_fraction = runs.iter().map(|r| r.2).sum::<f64>() / runs.len() as f64;
    let labeling = to_map(&runs[best_trial].1);
    Ok(DecodeReport {
        kind: GadgetKind::TwoK,
        delta: params.delta,
        t: params.t,
        verification,
        heavy: lists.heavy,
        lists: lists.lists,
        dropped: lists.dropped,
        cross: Some(cross),
        layered: None,
        picks,
        trials,
        mean_fraction,
        best_trial,
        labeling,
        baseline_fraction,
    })
}

pub(crate) fn fraction(satisfied: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        satisfied as f64 / total as f64
    }
}

pub(crate) fn to_map(labels: &[Option<u32>]) -> BTreeMap<usize, u32> {
    labels.iter().enumerate().filter_map(|(v, l)| l.map(|l| (v, l))).collect()
}

/// Satisfied constraints among `subset`, and over all constraints.
fn score(lc: &BipartiteInstance, labels: &[Option<u32>], subset: &[usize]) -> (usize, usize) {
    let a = Assignment::from_labels(labels.to_vec());
    let ok = |e: usize| {
        let c = &lc.edges()[e];
        matches!((a.get(c.u), a.get(lc.right_var(c.v))), (Some(x), Some(y)) if c.map.apply(x) == y)
    };
    let inside = subset.iter().filter(|&&e| ok(e)).count();
    let all = (0..lc.edges().len()).filter(|&e| ok(e)).count();
    (inside, all)
}

/// Checks `φ(L_{x1}) ∩ φ(L_{x2}) != ∅` for every pair of listed clouds sharing
/// a right neighbor. A failing pair yields the union of the two tuples, which
/// is an edge of the gadget.
fn cross_intersection(g: &GadgetHypergraph, lc: &BipartiteInstance, lists: &LabelLists) -> Result<CrossReport, DecodeError> {
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for v in 0..lc.right_count() {
        let incoming: Vec<(usize, Vec<u32>)> = lc
            .right_edges(v)
            .iter()
            .filter_map(|&e| {
                let c = &lc.edges()[e];
                lists.get(c.u).map(|l| (c.u, c.map.image(l.labels.iter()).into_iter().collect()))
            })
            .collect();
        for a in 0..incoming.len() {
            for b in a + 1..incoming.len() {
                pairs_checked += 1;
                let (x1, s1) = &incoming[a];
                let (x2, s2) = &incoming[b];
                if s1.iter().any(|l| s2.contains(l)) {
                    continue;
                }
                let mut witness: Vec<u64> = lists.get(*x1).unwrap().tuple.clone();
                witness.extend_from_slice(&lists.get(*x2).unwrap().tuple);
                witness.sort_unstable();
                let vertices = witness.iter().map(|&w| g.vertex(w)).collect::<Result<Vec<_>, _>>()?;
                let witness_is_edge = g.is_edge(&vertices)?;
                violations.push(CrossViolation {
                    y: lc.right_var(v),
                    x1: *x1.min(x2),
                    x2: *x1.max(x2),
                    witness,
                    witness_is_edge,
                });
            }
        }
    }
    Ok(CrossReport { pairs_checked, holds: violations.is_empty(), violations })
}

fn right_picks(lc: &BipartiteInstance, lists: &LabelLists, t: usize) -> Vec<RightPick> {
    (0..lc.right_count())
        .into_par_iter()
        .filter_map(|v| {
            let family: Vec<Vec<u32>> = lc
                .right_edges(v)
                .iter()
                .filter_map(|&e| {
                    let c = &lc.edges()[e];
                    lists.get(c.u).map(|l| c.map.image(l.labels.iter()).into_iter().collect())
                })
                .collect();
            pick(lc.right_var(v), &family, 2, t)
        })
        .collect()
}

/// A star pick for `y`, falling back to the most covered label when the
/// hypothesis fails. `None` when every image is empty.
pub(crate) fn pick(y: usize, family: &[Vec<u32>], d: usize, t: usize) -> Option<RightPick> {
    if family.is_empty() {
        return None;
    }
    match star_pick(family, d, t.max(1)) {
        Ok(p) => Some(RightPick {
            y,
            family_size: family.len(),
            d,
            label: p.element,
            count: p.count,
            bound: p.bound,
            fallback: false,
        }),
        Err(_) => most_covered(family).map(|(label, count)| RightPick {
            y,
            family_size: family.len(),
            d,
            label,
            count,
            bound: family.len() as f64 / (t.max(1) * (d - 1)) as f64,
            fallback: true,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelcover::{eval_bipartite, gen_planted_bipartite, BipartiteGenConfig};
    use crate::reduction::{build_2k_gadget, completeness_coloring, VerifyMode, DEFAULT_EVALUATION_CAP};

    fn toy(seed: u64) -> (GadgetHypergraph, Assignment) {
        let config = BipartiteGenConfig {
            left_count: 6,
            right_count: 4,
            left_alphabet: 4,
            right_alphabet: 2,
            left_degree: 2,
            seed,
        };
        let (lc, planted) = gen_planted_bipartite(&config).unwrap();
        (build_2k_gadget(&lc, 3, 2).unwrap(), planted)
    }

    fn params(seed: u64) -> DecodeParams {
        DecodeParams {
            verify: Some(VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }),
            ..DecodeParams::new(1.0 / 3.0, 2, seed)
        }
    }

    #[test]
    fn color_class_yield() {
        let mut means = Vec::new();
        for seed in 0..20 {
            let (g, planted) = toy(seed);
            let class = completeness_coloring(&g, &planted).unwrap().class(1);
            let report = decode_bipartite(&g, &class, &params(seed)).unwrap();
            let cross = report.cross.as_ref().unwrap();
            assert!(cross.holds);
            assert!(cross.pairs_checked > 0);
            assert!(report.picks.iter().all(|p| !p.fallback && p.count as f64 >= p.bound));
            means.push(report.mean_fraction);

            // The reported labeling reproduces the best trial's overall fraction.
            let lc = g.bipartite().unwrap();
            let mut a = Assignment::unassigned(lc.var_count());
            for (&v, &l) in &report.labeling {
                a.set(v, l);
            }
            let eval = eval_bipartite(lc, &a).unwrap();
            assert_eq!(eval.fraction, report.trials[report.best_trial].overall);
        }
        let mean = means.iter().sum::<f64>() / means.len() as f64;
        assert!(mean >= 0.25, "mean {mean}");
    }

    #[test]
    fn deterministic() {
        let (g, planted) = toy(3);
        let class = completeness_coloring(&g, &planted).unwrap().class(2);
        let a = decode_bipartite(&g, &class, &params(11)).unwrap();
        let b = decode_bipartite(&g, &class, &params(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let (g, _) = toy(1);
        assert_eq!(decode_bipartite(&g, &[], &params(0)), Err(DecodeError::NoHeavyClouds));
        let all: Vec<u64> = (0..g.vertex_count()).collect();
        assert!(matches!(decode_bipartite(&g, &all, &params(0)), Err(DecodeError::NotIndependent { .. })));
    }

    #[test]
    fn violations_carry_edge_witnesses() {
        let (g, _) = toy(2);
        let all: Vec<u64> = (0..g.vertex_count()).collect();
        let p = DecodeParams { verify: None, ..params(0) };
        let report = decode_bipartite(&g, &all, &p).unwrap();
        let cross = report.cross.unwrap();
        assert!(!cross.holds);
        assert!(cross.violations.iter().all(|v| v.witness_is_edge));
    }
}
