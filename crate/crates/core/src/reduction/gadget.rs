use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::families::Word;
use crate::labelcover::{BipartiteInstance, Instance, LayeredInstance, ProjectionMap};

/// Largest supported alphabet; words use single decimal digits in text form.
pub const MAX_Q: u8 = 10;
/// Largest supported total vertex count.
pub const MAX_VERTICES: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    /// 2k-uniform, clouds on the left variables of a bipartite instance.
    TwoK,
    /// (k+1)-uniform, clouds on every variable of a layered instance.
    KPlusOne,
}

/// A vertex `(x, a)`: variable `x` (global id) and a word of its cloud.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GadgetVertex {
    pub var: usize,
    pub word: Word,
}

/// A pair of constraints `φ_{x1 -> y}`, `φ_{x2 -> y}` sharing a right variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SharedNeighbor {
    pub y: usize,
    pub first: usize,
    pub second: usize,
}

/// A gadget hypergraph given by its clouds and an edge predicate; edges are
/// never stored.
///
/// Cloud ids coincide with global variable ids of the base instance. Vertex
/// `(x, a)` has index `offset(x) + rank(a)`, where `rank` is the lexicographic
/// rank of `a` in `[q]^dim(x)`.
#[derive(Clone, Debug)]
pub struct GadgetHypergraph {
    kind: GadgetKind,
    base: Arc<Instance>,
    q: u8,
    k: usize,
    dims: Vec<usize>,
    offsets: Vec<u64>,
    /// Two-k only: for each left pair `x1 < x2`, the right variables they share.
    shared: BTreeMap<(usize, usize), Vec<SharedNeighbor>>,
}

fn check_params(q: u8, k: usize) -> Result<(), ReductionError> {
    if !(2..=MAX_Q).contains(&q) {
        return Err(ReductionError::InvalidParams(format!("q = {q} must be in 2..={MAX_Q}")));
    }
    if k < 2 {
        return Err(ReductionError::InvalidParams(format!("k = {k} must be at least 2")));
    }
    Ok(())
}

fn offsets_for(q: u8, dims: &[usize]) -> Result<Vec<u64>, ReductionError> {
    let mut offsets = Vec::with_capacity(dims.len() + 1);
    let mut total = 0u64;
    offsets.push(0);
    for &d in dims {
        let size = u32::try_from(d)
            .ok()
            .and_then(|d| (q as u64).checked_pow(d))
            .filter(|&s| s <= MAX_VERTICES)
            .ok_or_else(|| ReductionError::Infeasible(format!("cloud [{q}]^{d} is too large")))?;
        total = total
            .checked_add(size)
            .filter(|&t| t <= MAX_VERTICES)
            .ok_or_else(|| ReductionError::Infeasible(format!("more than {MAX_VERTICES} vertices")))?;
        offsets.push(total);
    }
    Ok(offsets)
}

/// The 2k-uniform gadget: a cloud `[q]^L` per left variable. `2k` vertices,
/// `k` from each of two clouds `x1 != x2` with a common neighbor `y`, form an
/// edge when for some such `y`, every `(i1, i2)` with
/// `φ_{x1->y}(i1) = φ_{x2->y}(i2)` sees at least two distinct values among
/// `a_j(i1), b_j(i2)`.
pub fn build_2k_gadget(lc: &BipartiteInstance, q: u8, k: usize) -> Result<GadgetHypergraph, ReductionError> {
    check_params(q, k)?;
    let dims = vec![lc.left_alphabet() as usize; lc.left_count()];
    let offsets = offsets_for(q, &dims)?;
    let mut shared: BTreeMap<(usize, usize), Vec<SharedNeighbor>> = BTreeMap::new();
    for y in 0..lc.right_count() {
        let incident = lc.right_edges(y);
        for (a, &e1) in incident.iter().enumerate() {
            for &e2 in &incident[a + 1..] {
                let (x1, x2) = (lc.edges()[e1].u, lc.edges()[e2].u);
                let (first, second, key) = if x1 < x2 { (e1, e2, (x1, x2)) } else { (e2, e1, (x2, x1)) };
                shared.entry(key).or_default().push(SharedNeighbor { y, first, second });
            }
        }
    }
    Ok(GadgetHypergraph {
        kind: GadgetKind::TwoK,
        base: Arc::new(Instance::Bipartite(lc.clone())),
        q,
        k,
        dims,
        offsets,
        shared,
    })
}

/// The (k+1)-uniform gadget: a cloud `[q]^{R_i}` per variable of layer `i`.
/// `k` vertices of cloud `x` and one vertex `(y, b)` with a constraint
/// `φ_{x->y}` form an edge when for every `r`, the values
/// `a_1(r), .., a_k(r), b(φ(r))` are not all equal.
pub fn build_k1_gadget(lc: &LayeredInstance, q: u8, k: usize) -> Result<GadgetHypergraph, ReductionError> {
    check_params(q, k)?;
    let dims: Vec<usize> = (0..lc.var_count()).map(|x| lc.alphabet_of(x) as usize).collect();
    let offsets = offsets_for(q, &dims)?;
    Ok(GadgetHypergraph {
        kind: GadgetKind::KPlusOne,
        base: Arc::new(Instance::Layered(lc.clone())),
        q,
        k,
        dims,
        offsets,
        shared: BTreeMap::new(),
    })
}

/// For each coordinate, the value shared by all words, or 0.
pub(crate) type Profile = Vec<u8>;

impl GadgetHypergraph {
    pub fn kind(&self) -> GadgetKind {
        self.kind
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn uniformity(&self) -> usize {
        match self.kind {
            GadgetKind::TwoK => 2 * self.k,
            GadgetKind::KPlusOne => self.k + 1,
        }
    }

    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn bipartite(&self) -> Option<&BipartiteInstance> {
        match &*self.base {
            Instance::Bipartite(b) => Some(b),
            Instance::Layered(_) => None,
        }
    }

    pub fn layered(&self) -> Option<&LayeredInstance> {
        match &*self.base {
            Instance::Layered(l) => Some(l),
            Instance::Bipartite(_) => None,
        }
    }

    pub fn cloud_count(&self) -> usize {
        self.dims.len()
    }

    pub fn cloud_dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn cloud_size(&self, x: usize) -> u64 {
        self.offsets[x + 1] - self.offsets[x]
    }

    pub fn cloud_offset(&self, x: usize) -> u64 {
        self.offsets[x]
    }

    pub fn vertex_count(&self) -> u64 {
        *self.offsets.last().unwrap_or(&0)
    }

    /// `(cloud, rank)` of a vertex index.
    pub fn locate(&self, index: u64) -> (usize, u64) {
        let x = self.offsets.partition_point(|&o| o <= index) - 1;
        (x, index - self.offsets[x])
    }

    pub fn vertex(&self, index: u64) -> Result<GadgetVertex, ReductionError> {
        if index >= self.vertex_count() {
            return Err(ReductionError::InvalidParams(format!(
                "vertex {index} outside 0..{}",
                self.vertex_count()
            )));
        }
        let (x, rank) = self.locate(index);
        Ok(GadgetVertex { var: x, word: Word::from_index(self.q, self.dims[x], rank) })
    }

    pub fn vertex_index(&self, v: &GadgetVertex) -> Result<u64, ReductionError> {
        self.check_vertex(v)?;
        Ok(self.offsets[v.var] + v.word.index())
    }

    /// The 1-based symbol at 1-based coordinate `coord` of the word with `rank`.
    pub(crate) fn symbol_at(&self, x: usize, rank: u64, coord: usize) -> u8 {
        let shift = (self.dims[x] - coord) as u32;
        ((rank / (self.q as u64).pow(shift)) % self.q as u64) as u8 + 1
    }

    pub(crate) fn symbols_of(&self, x: usize, rank: u64) -> Vec<u8> {
        Word::from_index(self.q, self.dims[x], rank).symbols().to_vec()
    }

    fn check_vertex(&self, v: &GadgetVertex) -> Result<(), ReductionError> {
        if v.var >= self.cloud_count() {
            return Err(ReductionError::NotAnEdgeShape(format!("variable {} carries no cloud", v.var)));
        }
        if v.word.alphabet() != self.q || v.word.len() != self.dims[v.var] {
            return Err(ReductionError::NotAnEdgeShape(format!(
                "word {} does not belong to cloud [{}]^{} of variable {}",
                v.word, self.q, self.dims[v.var], v.var
            )));
        }
        Ok(())
    }

    pub(crate) fn shared_pairs(&self) -> &BTreeMap<(usize, usize), Vec<SharedNeighbor>> {
        &self.shared
    }

    pub(crate) fn bipartite_map(&self, edge: usize) -> &ProjectionMap {
        &self.bipartite().expect("two-k gadget").edges()[edge].map
    }

    /// Two-k edge rule on profiles: an edge when some shared `y` admits no
    /// monochromatic coordinate pair.
    pub(crate) fn two_k_edge(&self, first: &[u8], second: &[u8], shared: &[SharedNeighbor]) -> bool {
        shared.iter().any(|s| {
            let (m1, m2) = (self.bipartite_map(s.first), self.bipartite_map(s.second));
            let mut seen = vec![0u16; self.bipartite().map_or(0, |b| b.right_alphabet() as usize) + 1];
            for (i, &c) in first.iter().enumerate() {
                if c != 0 {
                    seen[m1.apply(i as u32 + 1) as usize] |= 1 << c;
                }
            }
            !second
                .iter()
                .enumerate()
                .any(|(i, &c)| c != 0 && seen[m2.apply(i as u32 + 1) as usize] & (1 << c) != 0)
        })
    }

    /// (k+1) edge rule on a profile of the k-side and the symbols of `b`.
    pub(crate) fn k1_edge(profile: &[u8], b: &[u8], map: &ProjectionMap) -> bool {
        !profile
            .iter()
            .enumerate()
            .any(|(r, &c)| c != 0 && b[map.apply(r as u32 + 1) as usize - 1] == c)
    }

    /// Layered constraints as `(x, y, edge id)` with global ids.
    pub(crate) fn layered_constraints(&self) -> Vec<(usize, usize, usize)> {
        self.layered()
            .map(|l| {
                (0..l.edges().len())
                    .map(|e| {
                        let (x, y) = l.endpoints(e);
                        (x, y, e)
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Whether `vertices` form an edge. Tuples that cannot be an edge for
    /// structural reasons (wrong arity, repeated vertices, wrong clouds, no
    /// constraint) give [`ReductionError::NotAnEdgeShape`].
    pub fn is_edge(&self, vertices: &[GadgetVertex]) -> Result<bool, ReductionError> {
        if vertices.len() != self.uniformity() {
            return Err(ReductionError::NotAnEdgeShape(format!(
                "{} vertices, uniformity is {}",
                vertices.len(),
                self.uniformity()
            )));
        }
        let mut sides: BTreeMap<usize, Vec<&Word>> = BTreeMap::new();
        for v in vertices {
            self.check_vertex(v)?;
            sides.entry(v.var).or_default().push(&v.word);
        }
        for words in sides.values_mut() {
            words.sort();
            if words.windows(2).any(|w| w[0] == w[1]) {
                return Err(ReductionError::NotAnEdgeShape("repeated vertex".into()));
            }
        }
        if sides.len() != 2 {
            return Err(ReductionError::NotAnEdgeShape(format!("{} clouds involved, need 2", sides.len())));
        }
        let mut it = sides.into_iter();
        let (xa, wa) = it.next().expect("two sides");
        let (xb, wb) = it.next().expect("two sides");
        match self.kind {
            GadgetKind::TwoK => {
                if wa.len() != self.k || wb.len() != self.k {
                    return Err(ReductionError::NotAnEdgeShape(format!(
                        "split {} + {}, need {} + {}",
                        wa.len(),
                        wb.len(),
                        self.k,
                        self.k
                    )));
                }
                let shared = self
                    .shared
                    .get(&(xa, xb))
                    .ok_or_else(|| ReductionError::NotAnEdgeShape(format!("{xa} and {xb} share no neighbor")))?;
                Ok(self.two_k_edge(&profile_of(&wa), &profile_of(&wb), shared))
            }
            GadgetKind::KPlusOne => {
                let ((x, wx), (y, wy)) = if wa.len() == self.k && wb.len() == 1 {
                    ((xa, wa), (xb, wb))
                } else if wb.len() == self.k && wa.len() == 1 {
                    ((xb, wb), (xa, wa))
                } else {
                    return Err(ReductionError::NotAnEdgeShape(format!(
                        "split {} + {}, need {} + 1",
                        wa.len(),
                        wb.len(),
                        self.k
                    )));
                };
                let lc = self.layered().expect("layered base");
                let edge = lc
                    .incident(x)
                    .iter()
                    .copied()
                    .find(|&e| lc.endpoints(e) == (x, y))
                    .ok_or_else(|| ReductionError::NotAnEdgeShape(format!("no constraint from {x} to {y}")))?;
                Ok(Self::k1_edge(&profile_of(&wx), wy[0].symbols(), &lc.edges()[edge].map))
            }
        }
    }
}

pub(crate) fn profile_of(words: &[&Word]) -> Profile {
    let first = words[0].symbols();
    (0..first.len())
        .map(|i| if words.iter().all(|w| w.symbols()[i] == first[i]) { first[i] } else { 0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelcover::{Constraint, Layer, LayeredConstraint};

    fn w(q: u8, d: &str) -> Word {
        Word::from_digits(q, d).unwrap()
    }

    fn v(var: usize, q: u8, d: &str) -> GadgetVertex {
        GadgetVertex { var, word: w(q, d) }
    }

    /// Left variables `0..left` all adjacent to one right variable through `map`.
    pub(crate) fn star(left: usize, l: u32, r: u32, table: &[u32]) -> BipartiteInstance {
        let edges = (0..left)
            .map(|u| Constraint { u, v: 0, map: ProjectionMap::new(table.to_vec(), r).unwrap() })
            .collect();
        BipartiteInstance::new(left, 1, l, r, edges).unwrap()
    }

    #[test]
    fn vertex_counts() {
        let g = build_2k_gadget(&star(2, 2, 2, &[1, 2]), 3, 2).unwrap();
        assert_eq!((g.vertex_count(), g.uniformity()), (18, 4));
        let g = build_2k_gadget(&star(3, 1, 1, &[1]), 2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.uniformity()), (6, 6));
        let layers = vec![Layer { size: 2, alphabet: 2 }, Layer { size: 2, alphabet: 1 }];
        let lc = LayeredInstance::new(layers, vec![]).unwrap();
        let g = build_k1_gadget(&lc, 2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.uniformity()), (12, 4));
        assert!(build_k1_gadget(&lc, 1, 3).is_err());
        assert!(build_k1_gadget(&lc, 2, 1).is_err());
    }

    #[test]
    fn vertex_indexing() {
        let g = build_2k_gadget(&star(2, 2, 2, &[1, 2]), 3, 2).unwrap();
        for i in 0..g.vertex_count() {
            let vx = g.vertex(i).unwrap();
            assert_eq!(g.vertex_index(&vx).unwrap(), i);
            let (x, rank) = g.locate(i);
            for c in 1..=2 {
                assert_eq!(g.symbol_at(x, rank, c), vx.word.at(c));
            }
        }
        assert!(g.vertex(18).is_err());
    }

    #[test]
    fn two_k_examples() {
        let g = build_2k_gadget(&star(2, 1, 1, &[1]), 3, 2).unwrap();
        let t = [v(0, 3, "0"), v(0, 3, "1"), v(1, 3, "2"), v(1, 3, "0")];
        assert!(g.is_edge(&t).unwrap());

        let g = build_2k_gadget(&star(2, 2, 2, &[1, 2]), 3, 2).unwrap();
        let t = [v(0, 3, "00"), v(0, 3, "01"), v(1, 3, "00"), v(1, 3, "02")];
        assert!(!g.is_edge(&t).unwrap());
        let t = [v(0, 3, "00"), v(0, 3, "11"), v(1, 3, "00"), v(1, 3, "02")];
        assert!(g.is_edge(&t).unwrap());
    }

    #[test]
    fn shape_errors() {
        let g = build_2k_gadget(&star(2, 1, 1, &[1]), 3, 2).unwrap();
        let dup = [v(0, 3, "0"), v(0, 3, "0"), v(1, 3, "2"), v(1, 3, "0")];
        assert!(matches!(g.is_edge(&dup), Err(ReductionError::NotAnEdgeShape(_))));
        let one_cloud = [v(0, 3, "0"), v(0, 3, "1"), v(0, 3, "2"), v(1, 3, "0")];
        assert!(g.is_edge(&one_cloud).is_err());
        assert!(g.is_edge(&one_cloud[..3]).is_err());
        let wrong_word = [v(0, 3, "00"), v(0, 3, "1"), v(1, 3, "2"), v(1, 3, "0")];
        assert!(g.is_edge(&wrong_word).is_err());

        // k = 3 needs three distinct words in a cloud of size 2.
        let layers = vec![Layer { size: 1, alphabet: 1 }, Layer { size: 1, alphabet: 1 }];
        let map = ProjectionMap::new(vec![1], 1).unwrap();
        let lc = LayeredInstance::new(layers, vec![LayeredConstraint { i: 0, j: 1, u: 0, v: 0, map }]).unwrap();
        let g = build_k1_gadget(&lc, 2, 3).unwrap();
        let t = [v(0, 2, "0"), v(0, 2, "1"), v(0, 2, "1"), v(1, 2, "0")];
        assert!(g.is_edge(&t).is_err());
        let g = build_k1_gadget(&lc, 2, 2).unwrap();
        assert!(g.is_edge(&[v(0, 2, "0"), v(0, 2, "1"), v(1, 2, "0")]).unwrap());
        // Reversed direction: two words in the later layer, one in the earlier.
        assert!(g.is_edge(&[v(1, 2, "0"), v(1, 2, "1"), v(0, 2, "0")]).is_err());
    }

    #[test]
    fn k1_rule() {
        let layers = vec![Layer { size: 1, alphabet: 2 }, Layer { size: 1, alphabet: 1 }];
        let map = ProjectionMap::new(vec![1, 1], 1).unwrap();
        let lc = LayeredInstance::new(layers, vec![LayeredConstraint { i: 0, j: 1, u: 0, v: 0, map }]).unwrap();
        let g = build_k1_gadget(&lc, 2, 2).unwrap();
        // Words agree at coordinate 1 with value 0; b = 0 makes r = 1 monochromatic.
        assert!(!g.is_edge(&[v(0, 2, "00"), v(0, 2, "01"), v(1, 2, "0")]).unwrap());
        assert!(g.is_edge(&[v(0, 2, "00"), v(0, 2, "01"), v(1, 2, "1")]).unwrap());
        assert!(g.is_edge(&[v(0, 2, "00"), v(0, 2, "11"), v(1, 2, "1")]).unwrap());
    }
}
