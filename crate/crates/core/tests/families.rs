use gadgetlab::families::{
    agreement, ft_ternary_bound, golden_ratio_bound, is_k_wise_t_agreeing, is_k_wise_t_intersecting, is_upward_closed,
    max_agreeing_family, min_agreement, monotonize, read_family, write_family, AgreeParams, Family, SearchMethod, Word,
};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Naive agreement over digit strings.
fn agree(words: &[&Word]) -> usize {
    let n = words[0].len();
    (1..=n).filter(|&i| words.iter().all(|w| w.at(i) == words[0].at(i))).count()
}

/// Brute-force minimum agreement over all subsets of size 2..=k.
fn brute_min_agreement(family: &Family, k: usize) -> Option<usize> {
    let words = family.words();
    let len = words.len();
    if len < 2 {
        return None;
    }
    (1u32..1 << len)
        .filter(|m| (2..=k as u32).contains(&m.count_ones()))
        .map(|m| {
            let chosen: Vec<&Word> = (0..len).filter(|i| m >> i & 1 == 1).map(|i| &words[i]).collect();
            agree(&chosen)
        })
        .min()
}

fn binary_family(n: usize, indices: &[u64]) -> Family {
    Family::from_words(2, n, indices.iter().map(|&i| Word::from_index(2, n, i % (1 << n)))).unwrap()
}

fn naive_ft(n: u64, t: u64) -> BigUint {
    let m = 3 * t - 1;
    let mut sum = BigUint::from(0u32);
    for i in 0..t {
        // C(m, i) from the multiplicative formula.
        let mut c = BigUint::from(1u32);
        for j in 0..i {
            c = c * (m - j) / (j + 1);
        }
        sum += c * BigUint::from(2u32).pow(i as u32);
    }
    BigUint::from(3u32).pow((n - m) as u32) * sum
}

#[test]
fn ft_matches_naive_summation() {
    assert_eq!(ft_ternary_bound(7, 2).unwrap(), BigUint::from(99u32));
    for t in 1..=50 {
        assert_eq!(ft_ternary_bound(3 * t - 1, t).unwrap(), naive_ft(3 * t - 1, t), "t = {t}");
        assert_eq!(ft_ternary_bound(3 * t + 2, t).unwrap(), naive_ft(3 * t + 2, t), "t = {t}");
    }
}

#[test]
fn exact_search_matches_subset_enumeration() {
    // All 2^8 subfamilies of {0,1}^3.
    for t in 1..=3 {
        let params = AgreeParams::new(3, t).unwrap();
        let brute = (0u32..1 << 8)
            .filter(|m| {
                let idx: Vec<u64> = (0..8).filter(|i| m >> i & 1 == 1).collect();
                brute_min_agreement(&binary_family(3, &idx), 3).is_none_or(|a| a >= t)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap();
        let exact = max_agreeing_family(3, 2, params, SearchMethod::Exact).unwrap();
        assert_eq!(exact.max_size, brute, "t = {t}");
        assert!(exact.exhaustive);
        assert!(is_k_wise_t_agreeing(&exact.witness, params));
        assert!(exact.max_size as f64 <= golden_ratio_bound(3, t as u64).floor());
        let bnb = max_agreeing_family(3, 2, params, SearchMethod::BranchAndBound { node_limit: 1 << 20 }).unwrap();
        assert_eq!(bnb.max_size, brute);
        let greedy = max_agreeing_family(3, 2, params, SearchMethod::Greedy { seed: 1, restarts: 4 }).unwrap();
        assert!(greedy.max_size <= brute);
        assert!(is_k_wise_t_agreeing(&greedy.witness, params));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn agreement_matches_definition(q in 2u8..5, words in prop::collection::vec(prop::collection::vec(0u8..4, 5), 1..5)) {
        let words: Vec<Word> = words
            .into_iter()
            .map(|w| Word::new(q, w.into_iter().map(|s| s % q + 1).collect()).unwrap())
            .collect();
        let refs: Vec<&Word> = words.iter().collect();
        prop_assert_eq!(agreement(&words).unwrap().len(), agree(&refs));
    }

    #[test]
    fn min_agreement_matches_brute_force(n in 2usize..7, k in 2usize..4, idx in prop::collection::vec(any::<u64>(), 0..10)) {
        let f = binary_family(n, &idx);
        prop_assert_eq!(min_agreement(&f, k), brute_min_agreement(&f, k));
    }

    #[test]
    fn monotonize_preserves_size_and_agreement(n in 2usize..9, idx in prop::collection::vec(any::<u64>(), 1..24)) {
        let f = binary_family(n, &idx);
        let m = monotonize(&f).unwrap();
        prop_assert_eq!(m.len(), f.len());
        prop_assert!(is_upward_closed(&m).unwrap());
        if let Some(t) = min_agreement(&f, 3) {
            let params = AgreeParams::new(3, t).unwrap();
            prop_assert!(is_k_wise_t_agreeing(&m, params));
            prop_assert!(is_k_wise_t_intersecting(&m, 3, t).unwrap());
        }
        // Already monotone families are fixed points.
        prop_assert_eq!(monotonize(&m).unwrap(), m);
    }

    #[test]
    fn family_files_round_trip(q in 2u8..5, n in 1usize..5, idx in prop::collection::vec(any::<u64>(), 0..16)) {
        let size = (q as u64).pow(n as u32);
        let f = Family::from_words(q, n, idx.iter().map(|&i| Word::from_index(q, n, i % size))).unwrap();
        let text = write_family(&f);
        let back = read_family(&text).unwrap();
        prop_assert_eq!(write_family(&back), text);
        prop_assert_eq!(back, f);
    }
}
