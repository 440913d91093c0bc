//! Exhaustive edge enumeration restricted to a vertex set.
//!
//! Edges only depend on the k-side words through their profile (the value
//! shared at each coordinate, or 0), so k-subsets of a cloud are grouped by
//! profile and edge tests run once per pair of groups.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::gadget::{GadgetHypergraph, GadgetKind, Profile};
use super::ReductionError;

/// Default limit on predicate evaluations per exhaustive scan.
pub const DEFAULT_EVALUATION_CAP: u64 = 50_000_000;

/// k-subsets of one cloud's members sharing a profile.
#[derive(Clone, Debug)]
pub(crate) struct Group {
    pub profile: Profile,
    pub count: u64,
    /// Ranks of the lexicographically first subset, or of all subsets when
    /// collected with `keep_all`.
    pub subsets: Vec<Vec<u64>>,
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Groups the k-subsets of `ranks` (sorted, within cloud `x`) by profile.
pub(crate) fn cloud_groups(g: &GadgetHypergraph, x: usize, ranks: &[u64], size: usize, keep_all: bool) -> Vec<Group> {
    let symbols: Vec<Vec<u8>> = ranks.iter().map(|&r| g.symbols_of(x, r)).collect();
    let mut groups: BTreeMap<Profile, Group> = BTreeMap::new();
    if ranks.len() < size || size == 0 {
        return Vec::new();
    }
    let dim = g.cloud_dim(x);
    let mut profiles = vec![vec![0u8; dim]; size + 1];
    let mut chosen = Vec::with_capacity(size);

    fn walk(
        symbols: &[Vec<u8>],
        ranks: &[u64],
        size: usize,
        start: usize,
        profiles: &mut Vec<Vec<u8>>,
        chosen: &mut Vec<usize>,
        groups: &mut BTreeMap<Profile, Group>,
        keep_all: bool,
    ) {
        let depth = chosen.len();
        for m in start..=symbols.len() - (size - depth) {
            let next: Vec<u8> = if depth == 0 {
                symbols[m].clone()
            } else {
                profiles[depth].iter().zip(&symbols[m]).map(|(&p, &s)| if p == s { p } else { 0 }).collect()
            };
            profiles[depth + 1] = next;
            chosen.push(m);
            if depth + 1 == size {
                let subset = || chosen.iter().map(|&c| ranks[c]).collect::<Vec<u64>>();
                match groups.get_mut(&profiles[size]) {
                    Some(group) => {
                        group.count += 1;
                        if keep_all {
                            group.subsets.push(subset());
                        }
                    }
                    None => {
                        groups.insert(
                            profiles[size].clone(),
                            Group { profile: profiles[size].clone(), count: 1, subsets: vec![subset()] },
                        );
                    }
                }
            } else {
                walk(symbols, ranks, size, m + 1, profiles, chosen, groups, keep_all);
            }
            chosen.pop();
        }
    }

    walk(&symbols, ranks, size, 0, &mut profiles, &mut chosen, &mut groups, keep_all);
    groups.into_values().collect()
}

/// Result of an exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct EdgeScan {
    pub count: u64,
    /// Sorted global vertex indices of the first edge found.
    pub witness: Option<Vec<u64>>,
    pub evaluations: u64,
}

/// Upper estimate of the work [`count_edges_within`] would do.
pub(crate) fn scan_estimate(g: &GadgetHypergraph, members: &[Vec<u64>]) -> u64 {
    let k = g.k() as u64;
    let groups_bound = |x: usize| {
        let subsets = binomial(members[x].len() as u64, k);
        let profiles = (g.q() as u64 + 1).saturating_pow(g.cloud_dim(x) as u32);
        subsets.min(profiles)
    };
    let enumeration: u64 = (0..g.cloud_count())
        .map(|x| binomial(members[x].len() as u64, k))
        .fold(0, u64::saturating_add);
    let tests: u64 = match g.kind() {
        GadgetKind::TwoK => g
            .shared_pairs()
            .iter()
            .map(|(&(a, b), shared)| {
                groups_bound(a).saturating_mul(groups_bound(b)).saturating_mul(shared.len() as u64)
            })
            .fold(0, u64::saturating_add),
        GadgetKind::KPlusOne => g
            .layered_constraints()
            .iter()
            .map(|&(x, y, _)| groups_bound(x).saturating_mul(members[y].len() as u64))
            .fold(0, u64::saturating_add),
    };
    enumeration.saturating_add(tests)
}

/// Per-cloud sorted ranks of a vertex set given as sorted global indices.
pub(crate) fn split_by_cloud(g: &GadgetHypergraph, vertices: &[u64]) -> Result<Vec<Vec<u64>>, ReductionError> {
    let mut members = vec![Vec::new(); g.cloud_count()];
    for &v in vertices {
        if v >= g.vertex_count() {
            return Err(ReductionError::InvalidParams(format!("vertex {v} outside 0..{}", g.vertex_count())));
        }
        let (x, rank) = g.locate(v);
        members[x].push(rank);
    }
    for m in &mut members {
        m.sort_unstable();
        m.dedup();
    }
    Ok(members)
}

/// Counts the edges lying entirely inside the vertex set whose ranks per
/// cloud are `members`.
pub(crate) fn count_edges_within(
    g: &GadgetHypergraph,
    members: &[Vec<u64>],
    cap: u64,
) -> Result<EdgeScan, ReductionError> {
    let estimate = scan_estimate(g, members);
    if estimate > cap {
        return Err(ReductionError::Infeasible(format!(
            "exhaustive scan needs about {estimate} evaluations, cap is {cap}"
        )));
    }
    let groups: Vec<Vec<Group>> = (0..g.cloud_count())
        .into_par_iter()
        .map(|x| cloud_groups(g, x, &members[x], g.k(), false))
        .collect();
    let to_global = |x: usize, ranks: &[u64]| ranks.iter().map(|&r| g.cloud_offset(x) + r).collect::<Vec<u64>>();

    let parts: Vec<EdgeScan> = match g.kind() {
        GadgetKind::TwoK => {
            let pairs: Vec<_> = g.shared_pairs().iter().collect();
            pairs
                .par_iter()
                .map(|(&(a, b), shared)| {
                    let mut scan = EdgeScan { count: 0, witness: None, evaluations: 0 };
                    for ga in &groups[a] {
                        for gb in &groups[b] {
                            scan.evaluations += shared.len() as u64;
                            if g.two_k_edge(&ga.profile, &gb.profile, shared) {
                                scan.count += ga.count * gb.count;
                                if scan.witness.is_none() {
                                    let mut w = to_global(a, &ga.subsets[0]);
                                    w.extend(to_global(b, &gb.subsets[0]));
                                    scan.witness = Some(w);
                                }
                            }
                        }
                    }
                    scan
                })
                .collect()
        }
        GadgetKind::KPlusOne => {
            let lc = g.layered().expect("layered base");
            g.layered_constraints()
                .par_iter()
                .map(|&(x, y, e)| {
                    let map = &lc.edges()[e].map;
                    let mut scan = EdgeScan { count: 0, witness: None, evaluations: 0 };
                    for &b in &members[y] {
                        let bs = g.symbols_of(y, b);
                        for gx in &groups[x] {
                            scan.evaluations += 1;
                            if GadgetHypergraph::k1_edge(&gx.profile, &bs, map) {
                                scan.count += gx.count;
                                if scan.witness.is_none() {
                                    let mut w = to_global(x, &gx.subsets[0]);
                                    w.push(g.cloud_offset(y) + b);
                                    w.sort_unstable();
                                    scan.witness = Some(w);
                                }
                            }
                        }
                    }
                    scan
                })
                .collect()
        }
    };
    let enumeration: u64 = members.iter().map(|m| binomial(m.len() as u64, g.k() as u64)).sum();
    Ok(parts.into_iter().fold(
        EdgeScan { count: 0, witness: None, evaluations: enumeration },
        |mut acc, p| {
            acc.count += p.count;
            acc.evaluations += p.evaluations;
            if acc.witness.is_none() {
                acc.witness = p.witness;
            }
            acc
        },
    ))
}
