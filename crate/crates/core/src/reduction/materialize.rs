use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gadget::{GadgetHypergraph, GadgetKind, GadgetVertex};
use super::scan::{binomial, cloud_groups, DEFAULT_EVALUATION_CAP};
use super::ReductionError;
use crate::families::Word;
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaterializeCaps {
    pub max_vertices: u64,
    pub max_edges: u64,
    /// Limit on candidate tuples examined.
    pub max_evaluations: u64,
}

impl Default for MaterializeCaps {
    fn default() -> Self {
        MaterializeCaps { max_vertices: 1_000_000, max_edges: 10_000_000, max_evaluations: DEFAULT_EVALUATION_CAP }
    }
}

/// A materialized gadget: the hypergraph plus the vertex each index stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitHypergraph {
    pub hypergraph: Hypergraph,
    pub vertices: Vec<GadgetVertex>,
    pub q: u8,
}

/// Number of candidate tuples an explicit enumeration of `g` examines.
pub fn materialize_estimate(g: &GadgetHypergraph) -> u64 {
    let k = g.k() as u64;
    match g.kind() {
        GadgetKind::TwoK => g
            .shared_pairs()
            .keys()
            .map(|&(a, b)| binomial(g.cloud_size(a), k).saturating_mul(binomial(g.cloud_size(b), k)))
            .fold(0, u64::saturating_add),
        GadgetKind::KPlusOne => g
            .layered_constraints()
            .iter()
            .map(|&(x, y, _)| binomial(g.cloud_size(x), k).saturating_mul(g.cloud_size(y)))
            .fold(0, u64::saturating_add),
    }
}

/// Lists every edge of `g`. Edges are sorted vertex lists, in lexicographic
/// order.
pub fn materialize(g: &GadgetHypergraph, caps: MaterializeCaps) -> Result<ExplicitHypergraph, ReductionError> {
    if g.vertex_count() > caps.max_vertices {
        return Err(ReductionError::Infeasible(format!(
            "{} vertices exceed the cap of {}",
            g.vertex_count(),
            caps.max_vertices
        )));
    }
    let estimate = materialize_estimate(g);
    if estimate > caps.max_evaluations {
        return Err(ReductionError::Infeasible(format!(
            "materializing examines about {estimate} tuples, cap is {}",
            caps.max_evaluations
        )));
    }
    let k = g.k();
    let groups: Vec<_> = (0..g.cloud_count())
        .into_par_iter()
        .map(|x| {
            let ranks: Vec<u64> = (0..g.cloud_size(x)).collect();
            cloud_groups(g, x, &ranks, k, true)
        })
        .collect();
    let global = |x: usize, ranks: &[u64]| ranks.iter().map(|&r| (g.cloud_offset(x) + r) as usize).collect::<Vec<_>>();

    let mut edges: Vec<Vec<usize>> = match g.kind() {
        GadgetKind::TwoK => {
            let pairs: Vec<_> = g.shared_pairs().iter().collect();
            pairs
                .par_iter()
                .flat_map_iter(|(&(a, b), shared)| {
                    let mut out = Vec::new();
                    for ga in &groups[a] {
                        for gb in &groups[b] {
                            if g.two_k_edge(&ga.profile, &gb.profile, shared) {
                                for sa in &ga.subsets {
                                    for sb in &gb.subsets {
                                        let mut e = global(a, sa);
                                        e.extend(global(b, sb));
                                        out.push(e);
                                    }
                                }
                            }
                        }
                    }
                    out
                })
                .collect()
        }
        GadgetKind::KPlusOne => {
            let lc = g.layered().expect("layered base");
            g.layered_constraints()
                .par_iter()
                .flat_map_iter(|&(x, y, e)| {
                    let map = &lc.edges()[e].map;
                    let mut out = Vec::new();
                    for b in 0..g.cloud_size(y) {
                        let bs = g.symbols_of(y, b);
                        for gx in &groups[x] {
                            if GadgetHypergraph::k1_edge(&gx.profile, &bs, map) {
                                for s in &gx.subsets {
                                    let mut edge = global(x, s);
                                    edge.push((g.cloud_offset(y) + b) as usize);
                                    edge.sort_unstable();
                                    out.push(edge);
                                }
                            }
                        }
                    }
                    out
                })
                .collect()
        }
    };
    if edges.len() as u64 > caps.max_edges {
        return Err(ReductionError::Infeasible(format!("{} edges exceed the cap of {}", edges.len(), caps.max_edges)));
    }
    edges.par_sort_unstable();
    let hypergraph = Hypergraph::new(g.vertex_count() as usize, g.uniformity(), edges)
        .map_err(|e| ReductionError::Infeasible(e.to_string()))?;
    let vertices = (0..g.vertex_count()).map(|v| g.vertex(v)).collect::<Result<Vec<_>, _>>()?;
    Ok(ExplicitHypergraph { hypergraph, vertices, q: g.q() })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexMapFile {
    q: u8,
    vertices: Vec<VertexEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    /// 1-based, matching the `p hgr` file.
    index: usize,
    var: usize,
    word: String,
}

/// The vertex map companion of a `p hgr` file, as JSON.
pub fn write_vertex_map(h: &ExplicitHypergraph) -> String {
    let file = VertexMapFile {
        q: h.q,
        vertices: h
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| VertexEntry { index: i + 1, var: v.var, word: v.word.to_digits() })
            .collect(),
    };
    serde_json::to_string(&file).expect("vertex map serialization cannot fail")
}

pub fn read_vertex_map(text: &str) -> Result<(u8, Vec<GadgetVertex>), ReductionError> {
    let file: VertexMapFile = serde_json::from_str(text).map_err(|e| ReductionError::Parse(e.to_string()))?;
    file.vertices
        .into_iter()
        .enumerate()
        .map(|(i, entry)| {
            if entry.index != i + 1 {
                return Err(ReductionError::Parse(format!("vertex entry {} has index {}", i + 1, entry.index)));
            }
            let word = Word::from_digits(file.q, &entry.word).map_err(|e| ReductionError::Parse(e.to_string()))?;
            Ok(GadgetVertex { var: entry.var, word })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|vs| (file.q, vs))
}

/// Pairs a hypergraph read from a `p hgr` file with its vertex map.
pub fn explicit_from_parts(hypergraph: Hypergraph, vertex_map: &str) -> Result<ExplicitHypergraph, ReductionError> {
    let (q, vertices) = read_vertex_map(vertex_map)?;
    if vertices.len() != hypergraph.vertex_count() {
        return Err(ReductionError::Parse(format!(
            "vertex map lists {} vertices, hypergraph has {}",
            vertices.len(),
            hypergraph.vertex_count()
        )));
    }
    Ok(ExplicitHypergraph { hypergraph, vertices, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{read_hgr, write_hgr};
    use crate::labelcover::{BipartiteInstance, Constraint, Layer, LayeredConstraint, LayeredInstance, ProjectionMap};
    use crate::reduction::{build_2k_gadget, build_k1_gadget};

    fn l1_toy() -> GadgetHypergraph {
        let edges = (0..2)
            .map(|u| Constraint { u, v: 0, map: ProjectionMap::new(vec![1], 1).unwrap() })
            .collect();
        build_2k_gadget(&BipartiteInstance::new(2, 1, 1, 1, edges).unwrap(), 3, 2).unwrap()
    }

    #[test]
    fn l1_toy_materializes_nine_edges() {
        let g = l1_toy();
        assert_eq!(materialize_estimate(&g), 9);
        let h = materialize(&g, MaterializeCaps::default()).unwrap();
        assert_eq!(h.hypergraph.vertex_count(), 6);
        assert_eq!(h.hypergraph.edges().len(), 9);
        assert_eq!(h.hypergraph.edges()[0], vec![0, 1, 3, 4]);
        assert_eq!(materialize(&g, MaterializeCaps::default()).unwrap(), h);
        let tight = MaterializeCaps { max_evaluations: 8, ..MaterializeCaps::default() };
        assert!(matches!(materialize(&g, tight), Err(ReductionError::Infeasible(_))));
    }

    #[test]
    fn materialized_edges_match_predicate() {
        let layers = vec![Layer { size: 1, alphabet: 2 }, Layer { size: 1, alphabet: 2 }];
        let map = ProjectionMap::new(vec![2, 2], 2).unwrap();
        let lc = LayeredInstance::new(layers, vec![LayeredConstraint { i: 0, j: 1, u: 0, v: 0, map }]).unwrap();
        let g = build_k1_gadget(&lc, 2, 2).unwrap();
        let h = materialize(&g, MaterializeCaps::default()).unwrap();
        let edges: std::collections::BTreeSet<Vec<usize>> = h.hypergraph.edges().iter().cloned().collect();
        // All (2 from cloud 0) x (1 from cloud 1) tuples.
        let mut count = 0;
        for a in 0..4u64 {
            for b in a + 1..4 {
                for c in 4..8u64 {
                    let vs: Vec<_> = [a, b, c].iter().map(|&v| g.vertex(v).unwrap()).collect();
                    let expected = g.is_edge(&vs).unwrap();
                    assert_eq!(edges.contains(&vec![a as usize, b as usize, c as usize]), expected);
                    count += usize::from(expected);
                }
            }
        }
        assert_eq!(count, edges.len());
    }

    #[test]
    fn zero_constraints_zero_edges() {
        let lc = LayeredInstance::new(vec![Layer { size: 2, alphabet: 2 }; 2], vec![]).unwrap();
        let h = materialize(&build_k1_gadget(&lc, 3, 2).unwrap(), MaterializeCaps::default()).unwrap();
        assert!(h.hypergraph.edges().is_empty());
        assert_eq!(h.hypergraph.vertex_count(), 36);
    }

    #[test]
    fn files_round_trip() {
        let h = materialize(&l1_toy(), MaterializeCaps::default()).unwrap();
        let hgr = write_hgr(&h.hypergraph);
        let map = write_vertex_map(&h);
        assert!(map.starts_with(r#"{"q":3,"vertices":[{"index":1,"var":0,"word":"0"}"#));
        let back = explicit_from_parts(read_hgr(&hgr).unwrap(), &map).unwrap();
        assert_eq!(back, h);
        assert_eq!(write_hgr(&back.hypergraph), hgr);
        assert_eq!(write_vertex_map(&back), map);
    }
}
