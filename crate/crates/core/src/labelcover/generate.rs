//! Planted-solution generators.
//!
//! Both generators draw a planted assignment first, then build each
//! projection so that it maps the planted left label to the planted right
//! label. The planted assignment therefore satisfies every constraint.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{
    Assignment, BipartiteInstance, Constraint, Layer, LabelCoverError, LayeredConstraint, LayeredInstance,
    ProjectionMap,
};
use crate::rng::{self, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteGenConfig {
    pub left_count: usize,
    pub right_count: usize,
    pub left_alphabet: u32,
    pub right_alphabet: u32,
    /// Degree of every left variable; right degrees are `|U| d / |V|`.
    pub left_degree: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayeredGenConfig {
    pub layer_sizes: Vec<usize>,
    pub alphabets: Vec<u32>,
    /// Neighbors of each variable in every later layer; `None` connects
    /// consecutive layer pairs completely.
    pub degree: Option<usize>,
    /// Smoothness target `T`. When set, projections are drawn so that every
    /// label set of size 2 or 3 is collapsed by at most a `|S|^2 ℓ / T`
    /// fraction of each variable's constraints into any later layer.
    pub smoothness: Option<f64>,
    pub seed: u64,
}

/// Label sets up to this size are controlled by the smooth generator.
pub const SMOOTH_GEN_MAX_SET: usize = 3;
const SMOOTH_GEN_ATTEMPTS: usize = 400;

/// Bi-regular edge pattern: slot `a` of `left` takes positions
/// `a d .. a d + d - 1` mod `right`, then both sides are shuffled.
fn biregular_edges(left: usize, right: usize, degree: usize, rng: &mut Rng) -> Result<Vec<(usize, usize)>, LabelCoverError> {
    if degree == 0 || degree > right {
        return Err(LabelCoverError::InvalidConfig(format!(
            "left degree {degree} must be in 1..={right}"
        )));
    }
    if !(left * degree).is_multiple_of(right) {
        return Err(LabelCoverError::InvalidConfig(format!(
            "{left} x {degree} edges cannot be spread evenly over {right} right variables"
        )));
    }
    let mut left_perm: Vec<usize> = (0..left).collect();
    let mut right_perm: Vec<usize> = (0..right).collect();
    left_perm.shuffle(rng);
    right_perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..left)
        .flat_map(|a| (0..degree).map(move |j| (a, (a * degree + j) % right)))
        .map(|(a, b)| (left_perm[a], right_perm[b]))
        .collect();
    edges.sort_unstable();
    Ok(edges)
}

fn uniform_patched_map(domain: u32, range: u32, from: u32, to: u32, rng: &mut Rng) -> ProjectionMap {
    let mut table: Vec<u32> = (0..domain).map(|_| rng.gen_range(1..=range)).collect();
    table[from as usize - 1] = to;
    ProjectionMap::from_table_unchecked(table)
}

pub fn gen_planted_bipartite(cfg: &BipartiteGenConfig) -> Result<(BipartiteInstance, Assignment), LabelCoverError> {
    if cfg.left_count == 0 || cfg.right_count == 0 {
        return Err(LabelCoverError::InvalidConfig("both sides need at least one variable".into()));
    }
    if cfg.left_alphabet == 0 || cfg.right_alphabet == 0 {
        return Err(LabelCoverError::InvalidConfig("alphabets must be nonempty".into()));
    }
    if cfg.left_alphabet < cfg.right_alphabet {
        log::warn!(
            "L = {} < R = {}: projections cannot be surjective",
            cfg.left_alphabet,
            cfg.right_alphabet
        );
    }
    let mut rng = rng::seeded(cfg.seed);
    let pairs = biregular_edges(cfg.left_count, cfg.right_count, cfg.left_degree, &mut rng)?;
    let mut assignment = Assignment::unassigned(cfg.left_count + cfg.right_count);
    for u in 0..cfg.left_count {
        assignment.set(u, rng.gen_range(1..=cfg.left_alphabet));
    }
    for v in 0..cfg.right_count {
        assignment.set(cfg.left_count + v, rng.gen_range(1..=cfg.right_alphabet));
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let from = assignment.get(u).unwrap_or(1);
            let to = assignment.get(cfg.left_count + v).unwrap_or(1);
            Constraint { u, v, map: uniform_patched_map(cfg.left_alphabet, cfg.right_alphabet, from, to, &mut rng) }
        })
        .collect();
    let instance = BipartiteInstance::new(
        cfg.left_count,
        cfg.right_count,
        cfg.left_alphabet,
        cfg.right_alphabet,
        edges,
    )?;
    Ok((instance, assignment))
}

pub fn gen_planted_layered(cfg: &LayeredGenConfig) -> Result<(LayeredInstance, Assignment), LabelCoverError> {
    let ell = cfg.layer_sizes.len();
    if ell < 2 {
        return Err(LabelCoverError::InvalidConfig(format!("need at least 2 layers, got {ell}")));
    }
    if cfg.alphabets.len() != ell {
        return Err(LabelCoverError::InvalidConfig(format!(
            "{} alphabets for {ell} layers",
            cfg.alphabets.len()
        )));
    }
    if cfg.layer_sizes.contains(&0) || cfg.alphabets.contains(&0) {
        return Err(LabelCoverError::InvalidConfig("layer sizes and alphabets must be positive".into()));
    }
    if let Some(t) = cfg.smoothness {
        if t.is_nan() || t <= 0.0 {
            return Err(LabelCoverError::InvalidConfig(format!("smoothness T = {t} must be positive")));
        }
    }
    if cfg.alphabets.windows(2).any(|w| w[0] < w[1]) {
        log::warn!("layer alphabets {:?} are not non-increasing", cfg.alphabets);
    }
    let layers: Vec<Layer> = cfg
        .layer_sizes
        .iter()
        .zip(&cfg.alphabets)
        .map(|(&size, &alphabet)| Layer { size, alphabet })
        .collect();
    let mut rng = rng::seeded(cfg.seed);
    let labels: Vec<Vec<u32>> = layers
        .iter()
        .map(|l| (0..l.size).map(|_| rng.gen_range(1..=l.alphabet)).collect())
        .collect();

    let mut edges = Vec::new();
    for i in 0..ell {
        for j in i + 1..ell {
            let pairs = match cfg.degree {
                Some(d) => biregular_edges(layers[i].size, layers[j].size, d.min(layers[j].size), &mut rng)?,
                None => (0..layers[i].size)
                    .flat_map(|u| (0..layers[j].size).map(move |v| (u, v)))
                    .collect(),
            };
            // Group by u so the smooth generator sees each variable's maps together.
            let mut start = 0;
            while start < pairs.len() {
                let u = pairs[start].0;
                let end = start + pairs[start..].iter().take_while(|p| p.0 == u).count();
                let targets: Vec<usize> = pairs[start..end].iter().map(|p| p.1).collect();
                let maps = match cfg.smoothness {
                    None => targets
                        .iter()
                        .map(|&v| {
                            uniform_patched_map(layers[i].alphabet, layers[j].alphabet, labels[i][u], labels[j][v], &mut rng)
                        })
                        .collect(),
                    Some(t) => smooth_maps(
                        layers[i].alphabet,
                        layers[j].alphabet,
                        labels[i][u],
                        &targets.iter().map(|&v| labels[j][v]).collect::<Vec<_>>(),
                        ell,
                        t,
                        &mut rng,
                    )
                    .ok_or_else(|| {
                        LabelCoverError::InvalidConfig(format!(
                            "cannot meet smoothness T = {t} for layers {i} -> {j} \
                             (alphabets {} -> {}, degree {})",
                            layers[i].alphabet,
                            layers[j].alphabet,
                            targets.len()
                        ))
                    })?,
                };
                for (v, map) in targets.into_iter().zip(maps) {
                    edges.push(LayeredConstraint { i, j, u, v, map });
                }
                start = end;
            }
        }
    }
    let instance = LayeredInstance::new(layers, edges)?;
    let mut assignment = Assignment::unassigned(instance.var_count());
    for (layer, ls) in labels.iter().enumerate() {
        for (u, &l) in ls.iter().enumerate() {
            assignment.set(instance.var(layer, u), l);
        }
    }
    Ok((instance, assignment))
}

/// All subsets of `1..=n` with size in `2..=max`, as sorted label lists.
pub(crate) fn small_label_sets(n: u32, max: usize) -> Vec<Vec<u32>> {
    fn rec(n: u32, size: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for l in start..=n {
            cur.push(l);
            rec(n, size, l + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 2..=max.min(n as usize) {
        rec(n, size, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// A balanced random map `[domain] -> [range]` (fibers differ in size by at
/// most one) with `from -> to`.
fn balanced_patched_map(domain: u32, range: u32, from: u32, to: u32, rng: &mut Rng) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..domain).collect();
    perm.shuffle(rng);
    let mut table: Vec<u32> = perm.iter().map(|&p| p % range + 1).collect();
    let current = table[from as usize - 1];
    if current != to {
        for entry in table.iter_mut() {
            if *entry == current {
                *entry = to;
            } else if *entry == to {
                *entry = current;
            }
        }
    }
    table
}

/// Draws one map per entry of `targets` so that each small label set is
/// collapsed by at most `floor(deg |S|^2 ℓ / T)` of them.
fn smooth_maps(
    domain: u32,
    range: u32,
    from: u32,
    targets: &[u32],
    ell: usize,
    smoothness: f64,
    rng: &mut Rng,
) -> Option<Vec<ProjectionMap>> {
    let sets = small_label_sets(domain, SMOOTH_GEN_MAX_SET);
    let degree = targets.len() as f64;
    let budget: Vec<usize> = sets
        .iter()
        .map(|s| {
            let allowed = degree * (s.len() * s.len() * ell) as f64 / smoothness;
            (allowed + 1e-9).floor() as usize
        })
        .collect();
    let mut used = vec![0usize; sets.len()];
    let mut maps = Vec::with_capacity(targets.len());
    for &to in targets {
        let mut accepted = None;
        for _ in 0..SMOOTH_GEN_ATTEMPTS {
            let table = balanced_patched_map(domain, range, from, to, rng);
            let map = ProjectionMap::from_table_unchecked(table);
            let hits: Vec<usize> = (0..sets.len()).filter(|&s| map.collapses(&sets[s])).collect();
            if hits.iter().all(|&s| used[s] < budget[s]) {
                for s in hits {
                    used[s] += 1;
                }
                accepted = Some(map);
                break;
            }
        }
        maps.push(accepted?);
    }
    Some(maps)
}
