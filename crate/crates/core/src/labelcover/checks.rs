//! Smoothness and weak-density checkers for layered instances, and the
//! regularity ratio for bipartite ones.

use rand::seq::index;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::small_label_sets;
use super::{BipartiteInstance, LabelCoverError, LayeredInstance, ProjectionMap};
use crate::rng;

/// At most this many violations are listed in a [`SmoothnessReport`].
pub const MAX_LISTED_VIOLATIONS: usize = 256;
/// Exhaustive weak-density checks run when the layers hold at most this many
/// variables in total.
pub const DENSITY_EXHAUSTIVE_MAX_VARS: usize = 16;
const DENSITY_EXHAUSTIVE_MAX_CASES: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessEntry {
    pub i: usize,
    pub j: usize,
    pub set_size: usize,
    /// Largest observed `Pr_y[|φ(S)| < |S|]` over tested `(x, S)`.
    pub max_probability: f64,
    /// `|S|^2 ℓ / T`.
    pub threshold: f64,
    /// True when every `S` of this size was tested.
    pub exhaustive: bool,
    pub tested: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessViolation {
    pub i: usize,
    pub j: usize,
    /// Global variable id of `x`.
    pub x: usize,
    pub labels: Vec<u32>,
    pub probability: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub smoothness: f64,
    pub layer_count: usize,
    pub entries: Vec<SmoothnessEntry>,
    pub violation_count: u64,
    pub violations: Vec<SmoothnessViolation>,
    pub passes: bool,
}

/// Fraction of `maps` that collapse `labels`.
fn collapse_probability(maps: &[&ProjectionMap], labels: &[u32]) -> f64 {
    let hits = maps.iter().filter(|m| m.collapses(labels)).count();
    hits as f64 / maps.len() as f64
}

/// Checks `Pr_{y ∈ N_{U_j}(x)}[|φ_{x->y}(S)| < |S|] <= |S|^2 ℓ / T`.
///
/// Label sets with `2 <= |S| <= s_max` are enumerated; larger sizes up to
/// `R_i` get `samples` random sets per variable (none when `samples = 0`).
pub fn check_smoothness(
    instance: &LayeredInstance,
    smoothness: f64,
    s_max: usize,
    samples: usize,
    seed: u64,
) -> Result<SmoothnessReport, LabelCoverError> {
    if smoothness.is_nan() || smoothness <= 0.0 {
        return Err(LabelCoverError::OutOfRange(format!("T = {smoothness} must be positive")));
    }
    let ell = instance.layer_count();
    let threshold = |size: usize| (size * size * ell) as f64 / smoothness;

    // (x, j) groups: the maps from x into layer j.
    let mut groups: Vec<(usize, usize, usize)> = Vec::new();
    for x in 0..instance.var_count() {
        let (i, _) = instance.locate(x);
        let mut targets: Vec<usize> = instance
            .incident(x)
            .iter()
            .map(|&e| &instance.edges()[e])
            .filter(|e| e.i == i && instance.var(e.i, e.u) == x)
            .map(|e| e.j)
            .collect();
        targets.sort_unstable();
        targets.dedup();
        groups.extend(targets.into_iter().map(|j| (x, i, j)));
    }

    let per_group: Vec<(Vec<(usize, f64, u64)>, Vec<SmoothnessViolation>, u64)> = groups
        .par_iter()
        .enumerate()
        .map(|(g, &(x, i, j))| {
            let maps: Vec<&ProjectionMap> = instance
                .incident(x)
                .iter()
                .map(|&e| &instance.edges()[e])
                .filter(|e| e.i == i && e.j == j && instance.var(e.i, e.u) == x)
                .map(|e| &e.map)
                .collect();
            let domain = instance.layers()[i].alphabet;
            let mut maxima: Vec<(usize, f64, u64)> = Vec::new();
            let mut violations = Vec::new();
            let mut violation_count = 0u64;
            let mut record = |labels: &[u32], maxima: &mut Vec<(usize, f64, u64)>| {
                let p = collapse_probability(&maps, labels);
                let size = labels.len();
                match maxima.iter_mut().find(|m| m.0 == size) {
                    Some(m) => {
                        m.1 = m.1.max(p);
                        m.2 += 1;
                    }
                    None => maxima.push((size, p, 1)),
                }
                if p > threshold(size) + 1e-12 {
                    violation_count += 1;
                    if violations.len() < MAX_LISTED_VIOLATIONS {
                        violations.push(SmoothnessViolation {
                            i,
                            j,
                            x,
                            labels: labels.to_vec(),
                            probability: p,
                            threshold: threshold(size),
                        });
                    }
                }
            };
            for labels in small_label_sets(domain, s_max) {
                record(&labels, &mut maxima);
            }
            if samples > 0 {
                let mut rng = rng::stream(seed, g as u64);
                for size in s_max.max(1) + 1..=domain as usize {
                    for _ in 0..samples {
                        let mut labels: Vec<u32> = index::sample(&mut rng, domain as usize, size)
                            .into_iter()
                            .map(|l| l as u32 + 1)
                            .collect();
                        labels.sort_unstable();
                        record(&labels, &mut maxima);
                    }
                }
            }
            (maxima, violations, violation_count)
        })
        .collect();

    let mut entries: Vec<SmoothnessEntry> = Vec::new();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for (&(_, i, j), (maxima, vs, count)) in groups.iter().zip(per_group) {
        for (size, p, tested) in maxima {
            match entries.iter_mut().find(|e| e.i == i && e.j == j && e.set_size == size) {
                Some(e) => {
                    e.max_probability = e.max_probability.max(p);
                    e.tested += tested;
                }
                None => entries.push(SmoothnessEntry {
                    i,
                    j,
                    set_size: size,
                    max_probability: p,
                    threshold: threshold(size),
                    exhaustive: size <= s_max,
                    tested,
                }),
            }
        }
        violation_count += count;
        for v in vs {
            if violations.len() < MAX_LISTED_VIOLATIONS {
                violations.push(v);
            }
        }
    }
    entries.sort_by_key(|e| (e.i, e.j, e.set_size));
    Ok(SmoothnessReport {
        smoothness,
        layer_count: ell,
        entries,
        violation_count,
        passes: violation_count == 0,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub layers: Vec<usize>,
    /// Per chosen layer, the in-layer indices of `S_j`.
    pub sets: Vec<Vec<usize>>,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub m: usize,
    /// `1 / m^2`.
    pub threshold: f64,
    /// Minimum over tested `(layers, sets)` of the best pairwise ratio
    /// `|Φ(S_k, S_k')| / |Φ(U_{i_k}, U_{i_k'})|`.
    pub min_ratio: f64,
    pub passes: bool,
    /// Every layer sequence and every minimal set choice was tested.
    pub proven: bool,
    /// No admissible choice exists (`m = 1`, or `2|U_i|/m > |U_i|`).
    pub vacuous: bool,
    pub cases: u64,
    /// The case achieving `min_ratio`.
    pub witness: Option<DensityWitness>,
}

/// Pair constraint counts `|Φ(S_a, S_b)|` for chosen layers and sets.
struct PairCounter<'a> {
    instance: &'a LayeredInstance,
    totals: Vec<Vec<usize>>,
}

impl<'a> PairCounter<'a> {
    fn new(instance: &'a LayeredInstance) -> Self {
        let ell = instance.layer_count();
        let mut totals = vec![vec![0; ell]; ell];
        for e in instance.edges() {
            totals[e.i][e.j] += 1;
        }
        PairCounter { instance, totals }
    }

    /// Best ratio over pairs of chosen layers; pairs without constraints count
    /// as ratio 1 since the inequality holds trivially for them.
    fn best_ratio(&self, layers: &[usize], members: &[Vec<bool>]) -> f64 {
        let mut counts = vec![vec![0usize; layers.len()]; layers.len()];
        let position: Vec<Option<usize>> = (0..self.instance.layer_count())
            .map(|l| layers.iter().position(|&x| x == l))
            .collect();
        for e in self.instance.edges() {
            if let (Some(a), Some(b)) = (position[e.i], position[e.j]) {
                if members[a][e.u] && members[b][e.v] {
                    counts[a][b] += 1;
                }
            }
        }
        let mut best = 0.0f64;
        for a in 0..layers.len() {
            for b in a + 1..layers.len() {
                let total = self.totals[layers[a]][layers[b]];
                let r = if total == 0 { 1.0 } else { counts[a][b] as f64 / total as f64 };
                best = best.max(r);
            }
        }
        best
    }
}

fn min_set_size(layer_size: usize, m: usize) -> usize {
    (2 * layer_size).div_ceil(m)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n - (k - cur.len()) {
            cur.push(x);
            rec(n, k, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

fn membership(size: usize, set: &[usize]) -> Vec<bool> {
    let mut v = vec![false; size];
    for &x in set {
        v[x] = true;
    }
    v
}

/// Tests the weak-density property at a fixed `m`: for layer sequences of
/// length `m` and sets `S_j` with `|S_j| >= 2|U_{i_j}|/m`, some pair must carry
/// at least `1/m^2` of its layer pair's constraints.
///
/// Only sets of the minimal admissible size are tested, since the count is
/// monotone in the sets. Small instances are checked exhaustively; otherwise
/// `trials` random cases are drawn.
pub fn check_weak_density(
    instance: &LayeredInstance,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<DensityReport, LabelCoverError> {
    let ell = instance.layer_count();
    if m == 0 || m > ell {
        return Err(LabelCoverError::OutOfRange(format!("m = {m} must be in 1..={ell}")));
    }
    let threshold = 1.0 / (m * m) as f64;
    let sizes: Vec<usize> = instance.layers().iter().map(|l| l.size).collect();
    let vacuous_report = || DensityReport {
        m,
        threshold,
        min_ratio: 1.0,
        passes: true,
        proven: true,
        vacuous: true,
        cases: 0,
        witness: None,
    };
    if m == 1 {
        return Ok(vacuous_report());
    }
    let layer_seqs: Vec<Vec<usize>> = combinations(ell, m)
        .into_iter()
        .filter(|seq| seq.iter().all(|&l| min_set_size(sizes[l], m) <= sizes[l]))
        .collect();
    if layer_seqs.is_empty() {
        return Ok(vacuous_report());
    }
    let counter = PairCounter::new(instance);

    let case_count: u64 = layer_seqs
        .iter()
        .map(|seq| {
            seq.iter()
                .fold(1u64, |acc, &l| acc.saturating_mul(binomial(sizes[l], min_set_size(sizes[l], m))))
        })
        .fold(0u64, u64::saturating_add);
    let exhaustive = sizes.iter().sum::<usize>() <= DENSITY_EXHAUSTIVE_MAX_VARS
        && case_count <= DENSITY_EXHAUSTIVE_MAX_CASES;

    let evaluate = |layers: &[usize], sets: Vec<Vec<usize>>| {
        let members: Vec<Vec<bool>> = layers.iter().zip(&sets).map(|(&l, s)| membership(sizes[l], s)).collect();
        let ratio = counter.best_ratio(layers, &members);
        DensityWitness { layers: layers.to_vec(), sets, ratio }
    };
    let pick_min = |a: DensityWitness, b: DensityWitness| if b.ratio < a.ratio { b } else { a };

    let (worst, cases) = if exhaustive {
        let mut worst: Option<DensityWitness> = None;
        let mut cases = 0u64;
        for seq in &layer_seqs {
            let choices: Vec<Vec<Vec<usize>>> =
                seq.iter().map(|&l| combinations(sizes[l], min_set_size(sizes[l], m))).collect();
            let mut idx = vec![0usize; seq.len()];
            'cases: loop {
                let sets = idx.iter().zip(&choices).map(|(&c, ch)| ch[c].clone()).collect();
                let w = evaluate(seq, sets);
                cases += 1;
                worst = Some(match worst {
                    None => w,
                    Some(cur) => pick_min(cur, w),
                });
                // Odometer over set choices.
                let mut pos = seq.len();
                loop {
                    if pos == 0 {
                        break 'cases;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        (worst, cases)
    } else {
        let results: Vec<DensityWitness> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = rng::stream(seed, trial as u64);
                let seq = layer_seqs.choose(&mut rng).expect("nonempty");
                let sets = seq
                    .iter()
                    .map(|&l| {
                        let mut s: Vec<usize> = index::sample(&mut rng, sizes[l], min_set_size(sizes[l], m)).into_vec();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                evaluate(seq, sets)
            })
            .collect();
        let worst = results.into_iter().reduce(pick_min);
        (worst, trials as u64)
    };

    let min_ratio = worst.as_ref().map_or(1.0, |w| w.ratio);
    Ok(DensityReport {
        m,
        threshold,
        min_ratio,
        passes: min_ratio >= threshold,
        proven: exhaustive,
        vacuous: false,
        cases,
        witness: worst,
    })
}

/// `|Φ(X, V)| / |Φ|` for a set `X` of left variables; 1.0 without constraints.
pub fn regularity_fraction(instance: &BipartiteInstance, left: &[usize]) -> f64 {
    super::eval::fraction(instance.constraints_from(left), instance.edges().len())
}
