use gadgetlab::labelcover::{
    check_smoothness, eval_assignment, eval_bipartite, gen_planted_bipartite, gen_planted_layered, read_assignment,
    read_instance, regularity_fraction, write_assignment, write_instance, Assignment, BipartiteGenConfig,
    BipartiteInstance, Constraint, Instance, LayeredGenConfig,
};
use gadgetlab::rng;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn bipartite(left: usize, right: usize, l: u32, r: u32, degree: usize, seed: u64) -> (BipartiteInstance, Assignment) {
    let cfg = BipartiteGenConfig {
        left_count: left,
        right_count: right,
        left_alphabet: l,
        right_alphabet: r,
        left_degree: degree,
        seed,
    };
    gen_planted_bipartite(&cfg).unwrap()
}

fn random_assignment(lc: &BipartiteInstance, rng: &mut impl Rng) -> Assignment {
    let labels = (0..lc.var_count())
        .map(|v| {
            let alphabet = if v < lc.left_count() { lc.left_alphabet() } else { lc.right_alphabet() };
            Some(rng.gen_range(1..=alphabet))
        })
        .collect();
    Assignment::from_labels(labels)
}

#[test]
fn random_labels_satisfy_half_at_r2() {
    let (lc, _) = bipartite(20, 10, 5, 2, 3, 11);
    let mut rng = rng::seeded(2024);
    let trials = 1000;
    let mean: f64 = (0..trials)
        .map(|_| eval_bipartite(&lc, &random_assignment(&lc, &mut rng)).unwrap().fraction)
        .sum::<f64>()
        / trials as f64;
    assert!((mean - 0.5).abs() <= 0.05, "mean {mean}");
}

#[test]
fn planted_layered_is_fully_satisfied() {
    let cfg = LayeredGenConfig {
        layer_sizes: vec![6, 6, 6],
        alphabets: vec![8, 4, 2],
        degree: None,
        smoothness: None,
        seed: 5,
    };
    let (lc, planted) = gen_planted_layered(&cfg).unwrap();
    let report = eval_assignment(&Instance::Layered(lc), &planted).unwrap();
    assert_eq!(report.fraction, 1.0);
    assert!(report.per_pair.iter().all(|p| p.satisfied == p.total));
}

#[test]
fn smooth_generator_passes_its_target() {
    for seed in 0..16 {
        let cfg = LayeredGenConfig {
            layer_sizes: vec![4, 4, 4],
            alphabets: vec![6, 4, 3],
            degree: None,
            smoothness: Some(24.0),
            seed,
        };
        let (lc, _) = gen_planted_layered(&cfg).unwrap();
        assert!(check_smoothness(&lc, 24.0, 3, 0, seed).unwrap().passes, "seed {seed}");
    }
}

/// Applies permutations to both sides and maps the assignment along.
fn relabel(lc: &BipartiteInstance, a: &Assignment, pu: &[usize], pv: &[usize]) -> (BipartiteInstance, Assignment) {
    let edges = lc
        .edges()
        .iter()
        .map(|e| Constraint { u: pu[e.u], v: pv[e.v], map: e.map.clone() })
        .collect();
    let moved =
        BipartiteInstance::new(lc.left_count(), lc.right_count(), lc.left_alphabet(), lc.right_alphabet(), edges).unwrap();
    let mut b = Assignment::unassigned(lc.var_count());
    for (u, &to) in pu.iter().enumerate() {
        if let Some(l) = a.get(u) {
            b.set(to, l);
        }
    }
    for (v, &to) in pv.iter().enumerate() {
        if let Some(l) = a.get(lc.right_var(v)) {
            b.set(moved.right_var(to), l);
        }
    }
    (moved, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_bipartite_is_fully_satisfied(seed in any::<u64>(), l in 1u32..6, r in 1u32..5) {
        let (lc, planted) = bipartite(6, 3, l, r, 2, seed);
        prop_assert!(lc.is_biregular());
        prop_assert_eq!(eval_bipartite(&lc, &planted).unwrap().fraction, 1.0);
    }

    #[test]
    fn eval_is_relabel_invariant(seed in any::<u64>()) {
        let (lc, _) = bipartite(8, 4, 4, 3, 2, seed);
        let mut rng = rng::seeded(seed ^ 1);
        let a = random_assignment(&lc, &mut rng);
        let mut pu: Vec<usize> = (0..8).collect();
        let mut pv: Vec<usize> = (0..4).collect();
        pu.shuffle(&mut rng);
        pv.shuffle(&mut rng);
        let (moved, b) = relabel(&lc, &a, &pu, &pv);
        let before = eval_bipartite(&lc, &a).unwrap();
        let after = eval_bipartite(&moved, &b).unwrap();
        prop_assert_eq!(before.satisfied, after.satisfied);
        prop_assert_eq!(before.fraction, after.fraction);
    }

    #[test]
    fn regularity_identity(seed in any::<u64>(), mask in 0u32..(1 << 8)) {
        let (lc, _) = bipartite(8, 4, 3, 2, 2, seed);
        let left: Vec<usize> = (0..8).filter(|u| mask >> u & 1 == 1).collect();
        // Bi-regular: |Φ(X, V)| = d |X| and |Φ| = d |U|, so the ratio is exactly |X| / |U|.
        prop_assert_eq!(regularity_fraction(&lc, &left) * 8.0, left.len() as f64);
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>()) {
        let (lc, planted) = bipartite(6, 4, 4, 2, 2, seed);
        let text = write_instance(&Instance::Bipartite(lc.clone()));
        let back = read_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&back), text);
        prop_assert_eq!(back, Instance::Bipartite(lc));
        let a = write_assignment(&planted);
        prop_assert_eq!(write_assignment(&read_assignment(&a).unwrap()), a);

        let cfg = LayeredGenConfig { layer_sizes: vec![2, 3, 2], alphabets: vec![4, 3, 2], degree: None, smoothness: None, seed };
        let (layered, _) = gen_planted_layered(&cfg).unwrap();
        let text = write_instance(&Instance::Layered(layered));
        prop_assert_eq!(write_instance(&read_instance(&text).unwrap()), text);
    }
}
