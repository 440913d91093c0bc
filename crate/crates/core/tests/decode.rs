use gadgetlab::decode::{
    check_disjoint_family_bound, cloud_label_lists, decode_bipartite, star_pick, DecodeError, DecodeParams,
};
use gadgetlab::labelcover::{gen_planted_bipartite, gen_planted_layered, BipartiteGenConfig, LayeredGenConfig};
use gadgetlab::reduction::{
    build_2k_gadget, build_k1_gadget, completeness_coloring, materialize, MaterializeCaps, VerifyMode,
    DEFAULT_EVALUATION_CAP,
};
use gadgetlab::solvers::{max_independent_set, MisMethod};
use proptest::prelude::*;

/// Largest number of pairwise-disjoint sets, by subset enumeration.
fn brute_disjoint(sets: &[Vec<u32>]) -> usize {
    let masks: Vec<u32> = sets.iter().map(|s| s.iter().fold(0, |m, &e| m | 1 << e)).collect();
    (0u32..1 << sets.len())
        .filter(|sel| {
            let mut seen = 0;
            (0..sets.len()).filter(|i| sel >> i & 1 == 1).all(|i| {
                let ok = seen & masks[i] == 0;
                seen |= masks[i];
                ok
            })
        })
        .map(|sel| sel.count_ones() as usize)
        .max()
        .unwrap()
}

fn family() -> impl Strategy<Value = (Vec<Vec<u32>>, usize)> {
    (1usize..4).prop_flat_map(|t| {
        let set = prop::collection::btree_set(1u32..=10, 1..=t).prop_map(|s| s.into_iter().collect::<Vec<_>>());
        (prop::collection::vec(set, 1..=12), Just(t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn star_pick_meets_its_bound((sets, t) in family(), extra in 0usize..2) {
        let s = brute_disjoint(&sets);
        let d = (s + 1).max(2) + extra;
        let pick = star_pick(&sets, d, t).unwrap();
        let count = sets.iter().filter(|x| x.contains(&pick.element)).count();
        prop_assert_eq!(pick.count, count);
        prop_assert!(count as f64 * (t * (d - 1)) as f64 >= sets.len() as f64);
        if s >= 2 {
            let violated = matches!(star_pick(&sets, s, t), Err(DecodeError::HypothesisViolated(_)));
            prop_assert!(violated);
        }
    }
}

#[test]
fn star_pick_equality_case() {
    let sets = vec![vec![1, 2], vec![1, 3], vec![2, 3]];
    let pick = star_pick(&sets, 2, 2).unwrap();
    assert_eq!(pick.count, 2);
    assert_eq!(pick.bound, 1.5);
}

#[test]
fn claim_holds_on_maximum_independent_sets() {
    let mut enumerated = 0;
    for (sizes, alphabets) in [(vec![1, 1], vec![4, 2]), (vec![2, 1], vec![3, 2]), (vec![1, 1, 1], vec![3, 3, 2])] {
        for seed in 0..3 {
            let cfg = LayeredGenConfig { layer_sizes: sizes.clone(), alphabets: alphabets.clone(), degree: None, smoothness: None, seed };
            let (lc, _) = gen_planted_layered(&cfg).unwrap();
            let g = build_k1_gadget(&lc, 2, 2).unwrap();
            let explicit = materialize(&g, MaterializeCaps::default()).unwrap();
            let mis = max_independent_set(&explicit.hypergraph, MisMethod::Exact { node_limit: 1 << 26 }, None).unwrap();
            assert!(mis.exact);
            let set: Vec<u64> = mis.vertices.iter().map(|&v| v as u64).collect();
            let t = 2;
            let params = DecodeParams { verify: Some(VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }), ..DecodeParams::new(0.05, t, seed) };
            let lists = cloud_label_lists(&g, &set, &params).unwrap();
            let report = check_disjoint_family_bound(&g, &set, &lists, t, None).unwrap();
            assert!(report.holds, "{:?}", report.violations);
            enumerated += report.subfamilies;
        }
    }
    assert!(enumerated > 0);
}

#[test]
fn mutated_sets_are_caught_with_edge_witnesses() {
    let cfg = BipartiteGenConfig { left_count: 6, right_count: 4, left_alphabet: 4, right_alphabet: 2, left_degree: 2, seed: 1 };
    let (lc, planted) = gen_planted_bipartite(&cfg).unwrap();
    let g = build_2k_gadget(&lc, 3, 2).unwrap();
    let class = completeness_coloring(&g, &planted).unwrap().class(1);
    let strict = DecodeParams { verify: Some(VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }), ..DecodeParams::new(1.0 / 3.0, 2, 1) };
    assert!(decode_bipartite(&g, &class, &strict).unwrap().cross.unwrap().holds);

    // Adding a second color class creates edges inside the set.
    let mut mutated = class.clone();
    mutated.extend(completeness_coloring(&g, &planted).unwrap().class(2));
    mutated.sort_unstable();
    match decode_bipartite(&g, &mutated, &strict) {
        Err(DecodeError::NotIndependent { witness }) => {
            let vertices: Vec<_> = witness.iter().map(|&v| g.vertex(v).unwrap()).collect();
            assert!(g.is_edge(&vertices).unwrap());
        }
        other => panic!("expected NotIndependent, got {other:?}"),
    }
}
