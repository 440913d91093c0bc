use std::collections::BTreeSet;

use gadgetlab::hypergraph::{read_hgr, write_hgr, Hypergraph};
use gadgetlab::labelcover::{
    gen_planted_bipartite, gen_planted_layered, BipartiteGenConfig, BipartiteInstance, Constraint, Layer,
    LayeredConstraint, LayeredGenConfig, LayeredInstance, ProjectionMap,
};
use gadgetlab::reduction::{
    build_2k_gadget, build_k1_gadget, completeness_coloring, materialize, read_vertex_map, verify_coloring,
    write_vertex_map, Coloring, GadgetHypergraph, MaterializeCaps, VerifyMode, DEFAULT_EVALUATION_CAP,
};
use gadgetlab::rng;
use gadgetlab::solvers::{exists_proper_coloring, is_independent_explicit, max_independent_set, MisMethod};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn combinations(items: &[u64], k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = combinations(&items[1..], k - 1);
    for c in &mut out {
        c.insert(0, items[0]);
    }
    out.extend(combinations(&items[1..], k));
    out
}

fn cloud(g: &GadgetHypergraph, x: usize) -> Vec<u64> {
    (g.cloud_offset(x)..g.cloud_offset(x) + g.cloud_size(x)).collect()
}

fn two_k_toy(l: u32, r: u32) -> GadgetHypergraph {
    let maps = |shift: u32| ProjectionMap::new((0..l).map(|i| (i + shift) % r + 1).collect(), r).unwrap();
    let edges = vec![Constraint { u: 0, v: 0, map: maps(0) }, Constraint { u: 1, v: 0, map: maps(1) }];
    build_2k_gadget(&BipartiteInstance::new(2, 1, l, r, edges).unwrap(), 2, 2).unwrap()
}

fn k1_toy() -> GadgetHypergraph {
    let layers = vec![Layer { size: 1, alphabet: 2 }, Layer { size: 1, alphabet: 2 }];
    let map = ProjectionMap::new(vec![2, 1], 2).unwrap();
    let lc = LayeredInstance::new(layers, vec![LayeredConstraint { i: 0, j: 1, u: 0, v: 0, map }]).unwrap();
    build_k1_gadget(&lc, 2, 2).unwrap()
}

/// Every legal edge shape, paired with the predicate value.
fn shapes(g: &GadgetHypergraph) -> Vec<(Vec<u64>, bool)> {
    let (left, right) = (cloud(g, 0), cloud(g, 1));
    let k = g.k();
    let right_k = if g.uniformity() == 2 * k { k } else { 1 };
    let mut out = Vec::new();
    for a in combinations(&left, k) {
        for b in combinations(&right, right_k) {
            let tuple: Vec<u64> = a.iter().chain(&b).copied().collect();
            let vertices: Vec<_> = tuple.iter().map(|&i| g.vertex(i).unwrap()).collect();
            out.push((tuple, g.is_edge(&vertices).unwrap()));
        }
    }
    out
}

#[test]
fn materialized_edges_match_the_predicate() {
    for g in [two_k_toy(2, 2), two_k_toy(3, 2), k1_toy()] {
        let explicit = materialize(&g, MaterializeCaps::default()).unwrap();
        let stored: BTreeSet<Vec<usize>> = explicit.hypergraph.edges().iter().cloned().collect();
        let predicted: BTreeSet<Vec<usize>> = shapes(&g)
            .into_iter()
            .filter(|(_, e)| *e)
            .map(|(t, _)| t.into_iter().map(|i| i as usize).collect())
            .collect();
        assert_eq!(stored, predicted);
    }
}

#[test]
fn is_edge_ignores_order_within_a_side() {
    let g = two_k_toy(3, 2);
    let mut rng = rng::seeded(3);
    for (tuple, edge) in shapes(&g) {
        let mut vertices: Vec<_> = tuple.iter().map(|&i| g.vertex(i).unwrap()).collect();
        vertices[..2].shuffle(&mut rng);
        vertices[2..].shuffle(&mut rng);
        assert_eq!(g.is_edge(&vertices).unwrap(), edge);
    }
}

#[test]
fn l1_toy_has_nine_edges_and_independence_four() {
    let edges = vec![
        Constraint { u: 0, v: 0, map: ProjectionMap::new(vec![1], 1).unwrap() },
        Constraint { u: 1, v: 0, map: ProjectionMap::new(vec![1], 1).unwrap() },
    ];
    let g = build_2k_gadget(&BipartiteInstance::new(2, 1, 1, 1, edges).unwrap(), 3, 2).unwrap();
    let explicit = materialize(&g, MaterializeCaps::default()).unwrap();
    assert_eq!(explicit.hypergraph.edges().len(), 9);
    let mis = max_independent_set(&explicit.hypergraph, MisMethod::Exact { node_limit: 1 << 20 }, None).unwrap();
    assert_eq!((mis.size, mis.exact), (4, true));
    let constant = Coloring::new(1, vec![1; 6]).unwrap();
    let report = verify_coloring(&g, &constant, VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }).unwrap();
    assert_eq!(report.monochromatic, 9);
}

#[test]
fn planted_gadgets_are_q_colorable_and_round_trip() {
    for seed in 0..4 {
        let cfg = BipartiteGenConfig {
            left_count: 2,
            right_count: 1,
            left_alphabet: 2,
            right_alphabet: 2,
            left_degree: 1,
            seed,
        };
        let (lc, planted) = gen_planted_bipartite(&cfg).unwrap();
        let g = build_2k_gadget(&lc, 3, 2).unwrap();
        let explicit = materialize(&g, MaterializeCaps::default()).unwrap();
        let h = &explicit.hypergraph;

        let chi = completeness_coloring(&g, &planted).unwrap();
        let class: Vec<usize> = chi.class(1).into_iter().map(|v| v as usize).collect();
        assert!(is_independent_explicit(h, &class).unwrap().independent);
        let alpha = max_independent_set(h, MisMethod::Exact { node_limit: 1 << 24 }, None).unwrap();
        assert!(alpha.size * 3 >= h.vertex_count());

        let found = exists_proper_coloring(h, 3, None).unwrap().expect("3 colors suffice");
        let report = verify_coloring(&g, &found, VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }).unwrap();
        assert!(report.proper);

        let text = write_hgr(h);
        assert_eq!(write_hgr(&read_hgr(&text).unwrap()), text);
        let map = write_vertex_map(&explicit);
        let (q, vertices) = read_vertex_map(&map).unwrap();
        assert_eq!((q, &vertices), (3, &explicit.vertices));
    }
}

#[test]
fn layered_completeness_is_proper() {
    for seed in 0..4 {
        let cfg = LayeredGenConfig {
            layer_sizes: vec![2, 2, 2],
            alphabets: vec![3, 3, 2],
            degree: None,
            smoothness: None,
            seed,
        };
        let (lc, planted) = gen_planted_layered(&cfg).unwrap();
        for (q, k) in [(2, 2), (3, 2), (2, 3)] {
            let g = build_k1_gadget(&lc, q, k).unwrap();
            let chi = completeness_coloring(&g, &planted).unwrap();
            let report = verify_coloring(&g, &chi, VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }).unwrap();
            assert_eq!(report.monochromatic, 0);
        }
    }
}

/// Subset enumeration oracle for the maximum independent set.
fn brute_alpha(h: &Hypergraph) -> usize {
    let n = h.vertex_count();
    let masks: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    (0u32..1 << n)
        .filter(|s| masks.iter().all(|&e| s & e != e))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

fn random_hypergraph(rng: &mut impl Rng) -> Hypergraph {
    let n = rng.gen_range(1..=16);
    let r = rng.gen_range(2..=3.min(n).max(2));
    if n < r {
        return Hypergraph::new(n, r, Vec::new()).unwrap();
    }
    let m = rng.gen_range(0..=2 * n);
    let verts: Vec<usize> = (0..n).collect();
    let edges: BTreeSet<Vec<usize>> = (0..m)
        .map(|_| {
            let mut e: Vec<usize> = verts.choose_multiple(rng, r).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    Hypergraph::new(n, r, edges.into_iter().collect()).unwrap()
}

#[test]
fn exact_mis_matches_brute_force() {
    let mut rng = rng::seeded(77);
    for _ in 0..100 {
        let h = random_hypergraph(&mut rng);
        let exact = max_independent_set(&h, MisMethod::Exact { node_limit: 1 << 24 }, None).unwrap();
        assert!(exact.exact);
        assert_eq!(exact.size, brute_alpha(&h));
        assert!(is_independent_explicit(&h, &exact.vertices).unwrap().independent);
        for method in [MisMethod::Greedy, MisMethod::LocalSearch { seed: 5, iterations: 200 }] {
            let r = max_independent_set(&h, method, None).unwrap();
            assert!(is_independent_explicit(&h, &r.vertices).unwrap().independent);
            assert!(r.size <= exact.size);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn found_colorings_are_proper(seed in any::<u64>(), c in 1u32..4) {
        let mut rng = rng::seeded(seed);
        let h = random_hypergraph(&mut rng);
        if let Some(chi) = exists_proper_coloring(&h, c, None).unwrap() {
            prop_assert!(h.edges().iter().all(|e| e.iter().any(|&v| chi.color(v) != chi.color(e[0]))));
        } else if h.vertex_count() <= 10 {
            // No proper c-coloring: brute force agrees.
            let n = h.vertex_count() as u32;
            let any = (0..(c as u64).pow(n)).any(|code| {
                let colors: Vec<u64> = (0..n).map(|i| code / (c as u64).pow(i) % c as u64).collect();
                h.edges().iter().all(|e| e.iter().any(|&v| colors[v] != colors[e[0]]))
            });
            prop_assert!(!any);
        }
    }

    #[test]
    fn planted_labels_split_every_edge(seed in any::<u64>()) {
        let cfg = BipartiteGenConfig { left_count: 2, right_count: 1, left_alphabet: 3, right_alphabet: 2, left_degree: 1, seed };
        let (lc, planted) = gen_planted_bipartite(&cfg).unwrap();
        let g = build_2k_gadget(&lc, 2, 2).unwrap();
        let chi = completeness_coloring(&g, &planted).unwrap();
        for (tuple, edge) in shapes(&g) {
            if edge {
                let colors: BTreeSet<u32> = tuple.iter().map(|&v| chi.color(v as usize)).collect();
                prop_assert!(colors.len() >= 2);
            }
        }
    }
}
