use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use super::bipartite::{fraction, pick, to_map};
use super::star::max_disjoint_subfamily;
use super::{
    cloud_label_lists, summarize, verify, DecodeError, DecodeParams, DecodeReport, LayeredDetails, RightPick,
    TrialResult,
};
use crate::labelcover::LayeredInstance;
use crate::reduction::{GadgetHypergraph, GadgetKind};
use crate::rng;

/// Image families up to this size get an exact disjointness number.
const EXACT_DISJOINT_MAX: usize = 24;

/// The asymptotic bound `ln(1/delta) / delta^(2qc)` on pairwise-disjoint
/// subfamilies, written with `t = c ln(1/delta)` as `ln(1/delta) e^(2qt)`.
pub fn claim_formula(delta: f64, q: u8, t: usize) -> f64 {
    (1.0 / delta).ln() * (2.0 * q as f64 * t as f64).exp()
}

/// Decodes a candidate independent set of a (k+1)-uniform gadget into
/// labelings of its layered instance.
///
/// Heavy clouds form `Z_i` per layer; among layers where at least a `delta`
/// fraction is heavy, the pair `i < j` maximizing
/// `|Φ(Z_i, Z_j)| / |Φ(U_i, U_j)|` (first on ties) is chosen, using only
/// listed clouds of `Z_i`. Constraints that are not injective on `L_x` are
/// trimmed; each `y` in `Z_j` then gets a star pick with `d = s + 1`, where
/// `s` is the largest pairwise-disjoint subfamily of its incoming images.
/// Trials label every listed cloud outside layer `j` by a uniform member of
/// its list and report the fraction satisfied on the chosen pair.
pub fn decode_layered(g: &GadgetHypergraph, set: &[u64], params: &DecodeParams) -> Result<DecodeReport, DecodeError> {
    params.validate()?;
    let lc = g
        .layered()
        .ok_or_else(|| DecodeError::InvalidParams("decode_layered needs a k_plus_one gadget".into()))?;
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let verification = verify(g, &set, params.verify)?;
    let lists = cloud_label_lists(g, &set, params)?;
    let ell = lc.layer_count();

    let mut z: Vec<Vec<usize>> = vec![Vec::new(); ell];
    for &x in &lists.heavy {
        z[lc.locate(x).0].push(x);
    }
    let dense_layers: Vec<usize> = (0..ell)
        .filter(|&i| !z[i].is_empty() && z[i].len() as f64 >= params.delta * lc.layers()[i].size as f64)
        .collect();
    let heavy = |v: usize| lists.heavy.binary_search(&v).is_ok();
    let retained_of = |i: usize, j: usize| -> Vec<usize> {
        (0..lc.edges().len())
            .filter(|&e| {
                let c = &lc.edges()[e];
                let (x, y) = lc.endpoints(e);
                c.i == i && c.j == j && lists.get(x).is_some() && heavy(y)
            })
            .collect()
    };
    let mut best: Option<((usize, usize), f64, Vec<usize>)> = None;
    for (a, &i) in dense_layers.iter().enumerate() {
        for &j in &dense_layers[a + 1..] {
            let total = lc.pair_constraint_count(i, j);
            let retained = retained_of(i, j);
            if total == 0 || retained.is_empty() {
                continue;
            }
            let ratio = retained.len() as f64 / total as f64;
            if best.as_ref().is_none_or(|b| ratio > b.1) {
                best = Some(((i, j), ratio, retained));
            }
        }
    }
    let ((i, j), pair_ratio, retained) = best.ok_or(DecodeError::NoLayerPair)?;

    let good: Vec<usize> = retained
        .iter()
        .copied()
        .filter(|&e| {
            let labels = &lists.get(lc.endpoints(e).0).unwrap().labels;
            lc.edges()[e].map.image(labels.iter()).len() == labels.len()
        })
        .collect();
    let per_y: Vec<(RightPick, usize, bool)> = z[j]
        .par_iter()
        .filter_map(|&y| {
            let family: Vec<Vec<u32>> = good
                .iter()
                .filter(|&&e| lc.endpoints(e).1 == y)
                .map(|&e| {
                    let labels = &lists.get(lc.endpoints(e).0).unwrap().labels;
                    lc.edges()[e].map.image(labels.iter()).into_iter().collect()
                })
                .collect();
            let exact = family.len() <= EXACT_DISJOINT_MAX;
            let s = if exact { max_disjoint_subfamily(&family).len() } else { greedy_size(&family) };
            pick(y, &family, s + 1, params.t).map(|p| (p, s, exact))
        })
        .collect();
    let s = per_y.iter().map(|p| p.1).max().unwrap_or(0);
    let s_exact = per_y.iter().all(|p| p.2);
    let picks: Vec<RightPick> = per_y.into_iter().map(|p| p.0).collect();

    let pair_edges: Vec<usize> = (0..lc.edges().len()).filter(|&e| lc.edges()[e].i == i && lc.edges()[e].j == j).collect();
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
                if lc.locate(l.x).0 != j {
                    labels[l.x] = Some(*l.labels.choose(&mut rng).unwrap_or(&1));
                }
            }
            let (satisfied, overall) = score(lc, &labels, &pair_edges);
            let random: Vec<Option<u32>> = (0..lc.var_count()).map(|v| Some(rng.gen_range(1..=lc.alphabet_of(v)))).collect();
            let (baseline, _) = score(lc, &random, &pair_edges);
            let result = TrialResult {
                trial,
                satisfied,
                total: pair_edges.len(),
                fraction: fraction(satisfied, pair_edges.len()),
                overall: fraction(overall, lc.edges().len()),
            };
            (result, labels, fraction(baseline, pair_edges.len()))
        })
        .collect();
    let trials: Vec<TrialResult> = runs.iter().map(|r| r.0.clone()).collect();
    let (best_trial, mean_fraction) = summarize(&trials);
    let baseline_fraction = runs.iter().map(|r| r.2).sum::<f64>() / runs.len() as f64;
    let labeling = to_map(&runs[best_trial].1);
    let details = LayeredDetails {
        z,
        dense_layers,
        pair: (i, j),
        pair_ratio,
        pair_constraints: pair_edges.len(),
        retained: retained.len(),
        bad: retained.len() - good.len(),
        good: good.len(),
        s,
        s_exact,
        s_formula: claim_formula(params.delta, g.q(), params.t),
    };
    Ok(DecodeReport {
        kind: GadgetKind::KPlusOne,
        delta: params.delta,
        t: params.t,
        verification,
        heavy: lists.heavy,
        lists: lists.lists,
        dropped: lists.dropped,
        cross: None,
        layered: Some(details),
        picks,
        trials,
        mean_fraction,
        best_trial,
        labeling,
        baseline_fraction,
    })
}

fn greedy_size(family: &[Vec<u32>]) -> usize {
    let mut chosen: Vec<&Vec<u32>> = Vec::new();
    for s in family {
        if chosen.iter().all(|c| !c.iter().any(|l| s.contains(l))) {
            chosen.push(s);
        }
    }
    chosen.len()
}

/// Satisfied constraints among `subset`, and over all constraints.
fn score(lc: &LayeredInstance, labels: &[Option<u32>], subset: &[usize]) -> (usize, usize) {
    let ok = |e: usize| {
        let (x, y) = lc.endpoints(e);
        matches!((labels[x], labels[y]), (Some(a), Some(b)) if lc.edges()[e].map.apply(a) == b)
    };
    let inside = subset.iter().filter(|&&e| ok(e)).count();
    let all = (0..lc.edges().len()).filter(|&e| ok(e)).count();
    (inside, all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::check_disjoint_family_bound;
    use crate::labelcover::{eval_layered, gen_planted_layered, Assignment, LayeredGenConfig};
    use crate::reduction::{build_k1_gadget, completeness_coloring, VerifyMode, DEFAULT_EVALUATION_CAP};

    fn toy(seed: u64) -> (GadgetHypergraph, Assignment) {
        let config = LayeredGenConfig {
            layer_sizes: vec![3, 3, 3],
            alphabets: vec![4, 3, 2],
            degree: None,
            smoothness: None,
            seed,
        };
        let (lc, planted) = gen_planted_layered(&config).unwrap();
        (build_k1_gadget(&lc, 2, 3).unwrap(), planted)
    }

    fn params(seed: u64) -> DecodeParams {
        DecodeParams {
            verify: Some(VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }),
            ..DecodeParams::new(0.25, 2, seed)
        }
    }

    #[test]
    fn color_class_yield() {
        let mut total = 0.0;
        for seed in 0..20 {
            let (g, planted) = toy(seed);
            let class = completeness_coloring(&g, &planted).unwrap().class(1);
            let report = decode_layered(&g, &class, &params(seed)).unwrap();
            let details = report.layered.as_ref().unwrap();
            assert_eq!(details.bad, 0);
            assert!(details.pair.0 < details.pair.1);
            for l in &report.lists {
                assert!(l.labels.contains(&planted.get(l.x).unwrap()));
            }
            total += report.mean_fraction;

            let lc = g.layered().unwrap();
            let mut a = Assignment::unassigned(lc.var_count());
            for (&v, &l) in &report.labeling {
                a.set(v, l);
            }
            let eval = eval_layered(lc, &a).unwrap();
            let pair = eval.per_pair.iter().find(|p| (p.i, p.j) == details.pair).unwrap();
            assert_eq!(pair.fraction, report.trials[report.best_trial].fraction);
            assert_eq!(eval.fraction, report.trials[report.best_trial].overall);

            let claim = check_disjoint_family_bound(&g, &class, &report_lists(&report), 2, None).unwrap();
            assert!(claim.holds);
        }
        assert!(total / 20.0 >= 0.25, "mean {}", total / 20.0);
    }

    fn report_lists(r: &DecodeReport) -> crate::decode::LabelLists {
        crate::decode::LabelLists { heavy: r.heavy.clone(), lists: r.lists.clone(), dropped: r.dropped.clone() }
    }

    #[test]
    fn errors_and_determinism() {
        let (g, planted) = toy(4);
        assert_eq!(decode_layered(&g, &[], &params(0)), Err(DecodeError::NoHeavyClouds));
        let class = completeness_coloring(&g, &planted).unwrap().class(2);
        assert_eq!(decode_layered(&g, &class, &params(5)), decode_layered(&g, &class, &params(5)));
        // Only one layer heavy: no pair.
        let cloud0: Vec<u64> = (0..g.cloud_size(0)).filter(|r| r % 2 == 0).collect();
        let p = DecodeParams { verify: None, ..params(0) };
        assert_eq!(decode_layered(&g, &cloud0, &p), Err(DecodeError::NoLayerPair));
    }

    #[test]
    fn formula() {
        assert!((claim_formula(0.25, 2, 2) - 4f64.ln() * 8f64.exp()).abs() < 1e-9);
        assert_eq!(claim_formula(1.0, 3, 1), 0.0);
    }
}
