use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gadget::{profile_of, GadgetHypergraph, GadgetKind};
use super::scan::{count_edges_within, DEFAULT_EVALUATION_CAP};
use super::ReductionError;
use crate::families::Word;
use crate::labelcover::Assignment;
use crate::rng;

/// Sampled scans are split into this many seed streams, independent of the
/// worker count.
const SAMPLE_CHUNKS: u64 = 64;

/// A vertex coloring with colors `1..=num_colors`, indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    #[serde(rename = "c")]
    num_colors: u32,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(num_colors: u32, colors: Vec<u32>) -> Result<Self, ReductionError> {
        if let Some((v, &c)) = colors.iter().enumerate().find(|(_, &c)| c == 0 || c > num_colors) {
            return Err(ReductionError::InvalidColoring(format!("vertex {v} has color {c} outside 1..={num_colors}")));
        }
        Ok(Coloring { num_colors, colors })
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    /// Vertices of color `c`, ascending.
    pub fn class(&self, c: u32) -> Vec<u64> {
        (0..self.colors.len()).filter(|&v| self.colors[v] == c).map(|v| v as u64).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let raw: Coloring = serde_json::from_str(text).map_err(|e| ReductionError::Parse(e.to_string()))?;
        Coloring::new(raw.num_colors, raw.colors)
    }
}

/// Colors `(x, a)` with `a(A(x))`.
pub fn completeness_coloring(g: &GadgetHypergraph, assignment: &Assignment) -> Result<Coloring, ReductionError> {
    let mut colors = Vec::with_capacity(g.vertex_count() as usize);
    for x in 0..g.cloud_count() {
        let label = assignment
            .get(x)
            .ok_or_else(|| ReductionError::InvalidAssignment(format!("variable {x} is unassigned")))?;
        if label == 0 || label as usize > g.cloud_dim(x) {
            return Err(ReductionError::InvalidAssignment(format!(
                "label {label} of variable {x} outside 1..={}",
                g.cloud_dim(x)
            )));
        }
        colors.extend((0..g.cloud_size(x)).map(|rank| g.symbol_at(x, rank, label as usize) as u32));
    }
    Coloring::new(g.q() as u32, colors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum VerifyMode {
    /// Scans every edge shape; fails with `Infeasible` above `cap` evaluations.
    Exhaustive { cap: u64 },
    /// Draws `probes` random edge shapes.
    Sampled { probes: u64, seed: u64 },
}

impl Default for VerifyMode {
    fn default() -> Self {
        VerifyMode::Exhaustive { cap: DEFAULT_EVALUATION_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringReport {
    pub mode: String,
    pub colors: u32,
    /// Exhaustive: the exact number of monochromatic edges. Sampled: the
    /// number of probes that hit one.
    pub monochromatic: u64,
    pub probes: u64,
    /// Sampled only: hit rate over the probe distribution.
    pub estimated_fraction: Option<f64>,
    /// Sorted vertex indices of a monochromatic edge.
    pub witness: Option<Vec<u64>>,
    pub proper: bool,
}

/// Counts (or samples) monochromatic edges of `coloring`.
pub fn verify_coloring(g: &GadgetHypergraph, coloring: &Coloring, mode: VerifyMode) -> Result<ColoringReport, ReductionError> {
    if coloring.colors().len() as u64 != g.vertex_count() {
        return Err(ReductionError::InvalidColoring(format!(
            "coloring covers {} vertices, gadget has {}",
            coloring.colors().len(),
            g.vertex_count()
        )));
    }
    match mode {
        VerifyMode::Exhaustive { cap } => {
            let mut monochromatic = 0;
            let mut probes = 0;
            let mut witness = None;
            let mut budget = cap;
            for c in 1..=coloring.num_colors() {
                let members = super::scan::split_by_cloud(g, &coloring.class(c))?;
                let scan = count_edges_within(g, &members, budget)?;
                budget = budget.saturating_sub(scan.evaluations);
                monochromatic += scan.count;
                probes += scan.evaluations;
                if witness.is_none() {
                    witness = scan.witness;
                }
            }
            Ok(ColoringReport {
                mode: "exhaustive".into(),
                colors: coloring.num_colors(),
                monochromatic,
                probes,
                estimated_fraction: None,
                witness,
                proper: monochromatic == 0,
            })
        }
        VerifyMode::Sampled { probes, seed } => {
            let members: Vec<Vec<u64>> = (0..g.cloud_count()).map(|x| (0..g.cloud_size(x)).collect()).collect();
            let sample = sample_edges_within(g, &members, probes, seed, |vs| {
                let c = coloring.color(vs[0] as usize);
                vs.iter().all(|&v| coloring.color(v as usize) == c)
            });
            Ok(ColoringReport {
                mode: "sampled".into(),
                colors: coloring.num_colors(),
                monochromatic: sample.hits,
                probes: sample.probes,
                estimated_fraction: Some(if sample.probes == 0 { 0.0 } else { sample.hits as f64 / sample.probes as f64 }),
                proper: sample.hits == 0,
                witness: sample.witness,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SampleScan {
    pub probes: u64,
    pub hits: u64,
    pub witness: Option<Vec<u64>>,
}

/// Draws random edge shapes whose vertices lie in `members` and counts those
/// that pass `accept` and are edges. Shapes: a uniform sharing pair (two-k)
/// or constraint (k+1) among those with enough members, then uniform vertices.
pub(crate) fn sample_edges_within(
    g: &GadgetHypergraph,
    members: &[Vec<u64>],
    probes: u64,
    seed: u64,
    accept: impl Fn(&[u64]) -> bool + Sync,
) -> SampleScan {
    let k = g.k();
    let shapes: Vec<(usize, usize, usize)> = match g.kind() {
        GadgetKind::TwoK => g
            .shared_pairs()
            .keys()
            .filter(|&&(a, b)| members[a].len() >= k && members[b].len() >= k)
            .map(|&(a, b)| (a, b, 0))
            .collect(),
        GadgetKind::KPlusOne => g
            .layered_constraints()
            .into_iter()
            .filter(|&(x, y, _)| members[x].len() >= k && !members[y].is_empty())
            .collect(),
    };
    if shapes.is_empty() || probes == 0 {
        return SampleScan { probes: 0, hits: 0, witness: None };
    }
    let words = |x: usize, ranks: &[u64]| -> Vec<Word> {
        ranks.iter().map(|&r| Word::from_index(g.q(), g.cloud_dim(x), r)).collect()
    };
    let parts: Vec<SampleScan> = (0..SAMPLE_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let quota = probes / SAMPLE_CHUNKS + u64::from(chunk < probes % SAMPLE_CHUNKS);
            let mut rng = rng::stream(seed, chunk);
            let mut scan = SampleScan { probes: quota, hits: 0, witness: None };
            for _ in 0..quota {
                let (a, b, e) = shapes[rng.gen_range(0..shapes.len())];
                let pick = |rng: &mut rng::Rng, x: usize, size: usize| -> Vec<u64> {
                    index::sample(rng, members[x].len(), size).into_iter().map(|i| members[x][i]).collect()
                };
                let side_a = pick(&mut rng, a, k);
                let side_b = pick(&mut rng, b, if g.kind() == GadgetKind::TwoK { k } else { 1 });
                let mut global: Vec<u64> = side_a
                    .iter()
                    .map(|&r| g.cloud_offset(a) + r)
                    .chain(side_b.iter().map(|&r| g.cloud_offset(b) + r))
                    .collect();
                if !accept(&global) {
                    continue;
                }
                let wa = words(a, &side_a);
                let pa = profile_of(&wa.iter().collect::<Vec<_>>());
                let is_edge = match g.kind() {
                    GadgetKind::TwoK => {
                        let wb = words(b, &side_b);
                        let pb = profile_of(&wb.iter().collect::<Vec<_>>());
                        g.two_k_edge(&pa, &pb, &g.shared_pairs()[&(a, b)])
                    }
                    GadgetKind::KPlusOne => {
                        let map = &g.layered().expect("layered base").edges()[e].map;
                        GadgetHypergraph::k1_edge(&pa, &g.symbols_of(b, side_b[0]), map)
                    }
                };
                if is_edge {
                    scan.hits += 1;
                    if scan.witness.is_none() {
                        global.sort_unstable();
                        scan.witness = Some(global);
                    }
                }
            }
            scan
        })
        .collect();
    parts.into_iter().fold(SampleScan { probes: 0, hits: 0, witness: None }, |mut acc, p| {
        acc.probes += p.probes;
        acc.hits += p.hits;
        if acc.witness.is_none() {
            acc.witness = p.witness;
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelcover::{gen_planted_bipartite, BipartiteGenConfig, BipartiteInstance, Constraint, ProjectionMap};
    use crate::reduction::build_2k_gadget;

    fn l1_toy() -> GadgetHypergraph {
        let edges = (0..2)
            .map(|u| Constraint { u, v: 0, map: ProjectionMap::new(vec![1], 1).unwrap() })
            .collect();
        build_2k_gadget(&BipartiteInstance::new(2, 1, 1, 1, edges).unwrap(), 3, 2).unwrap()
    }

    #[test]
    fn completeness_color_lookup() {
        let lc = BipartiteInstance::new(
            1,
            1,
            2,
            1,
            vec![Constraint { u: 0, v: 0, map: ProjectionMap::new(vec![1, 1], 1).unwrap() }],
        )
        .unwrap();
        let g = build_2k_gadget(&lc, 3, 2).unwrap();
        let a = Assignment::from_labels(vec![Some(2), Some(1)]);
        let chi = completeness_coloring(&g, &a).unwrap();
        // "02" is rank 2; its second coordinate is the digit 2, i.e. color 3.
        assert_eq!(chi.color(2), 3);
        let mut counts = [0; 3];
        for &c in chi.colors() {
            counts[c as usize - 1] += 1;
        }
        assert_eq!(counts, [3, 3, 3]);
        assert!(completeness_coloring(&g, &Assignment::unassigned(2)).is_err());
    }

    #[test]
    fn planted_coloring_is_proper() {
        let cfg = BipartiteGenConfig { left_count: 4, right_count: 2, left_alphabet: 3, right_alphabet: 2, left_degree: 1, seed: 3 };
        let (lc, a) = gen_planted_bipartite(&cfg).unwrap();
        let g = build_2k_gadget(&lc, 3, 2).unwrap();
        let chi = completeness_coloring(&g, &a).unwrap();
        let report = verify_coloring(&g, &chi, VerifyMode::default()).unwrap();
        assert_eq!(report.monochromatic, 0);
        assert!(report.proper && report.witness.is_none());
        let sampled = verify_coloring(&g, &chi, VerifyMode::Sampled { probes: 2000, seed: 1 }).unwrap();
        assert_eq!(sampled.monochromatic, 0);
        assert_eq!(sampled.probes, 2000);
    }

    #[test]
    fn constant_coloring_on_l1_toy() {
        let g = l1_toy();
        let chi = Coloring::new(1, vec![1; 6]).unwrap();
        let report = verify_coloring(&g, &chi, VerifyMode::default()).unwrap();
        assert_eq!(report.monochromatic, 9);
        let witness = report.witness.unwrap();
        let vs: Vec<_> = witness.iter().map(|&v| g.vertex(v).unwrap()).collect();
        assert!(g.is_edge(&vs).unwrap());
        let sampled = verify_coloring(&g, &chi, VerifyMode::Sampled { probes: 100, seed: 0 }).unwrap();
        assert_eq!(sampled.monochromatic, 100);
        assert_eq!(sampled.estimated_fraction, Some(1.0));
        assert_eq!(sampled, verify_coloring(&g, &chi, VerifyMode::Sampled { probes: 100, seed: 0 }).unwrap());
    }

    #[test]
    fn coloring_json() {
        let chi = Coloring::new(2, vec![1, 2, 2]).unwrap();
        let text = chi.to_json();
        assert_eq!(text, r#"{"c":2,"colors":[1,2,2]}"#);
        assert_eq!(Coloring::from_json(&text).unwrap(), chi);
        assert!(Coloring::from_json(r#"{"c":2,"colors":[3]}"#).is_err());
        assert!(Coloring::new(2, vec![0]).is_err());
    }
}
