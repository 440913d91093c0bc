use std::collections::{BTreeSet, HashSet};

use super::LabelCoverError;

/// A projection `[L] -> [R]`, stored as the table `i -> φ(i)` with 1-based
/// labels on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectionMap {
    table: Vec<u32>,
}

impl ProjectionMap {
    pub fn new(table: Vec<u32>, range: u32) -> Result<Self, LabelCoverError> {
        if table.is_empty() {
            return Err(LabelCoverError::InvalidInstance("projection with empty domain".into()));
        }
        if let Some(&bad) = table.iter().find(|&&r| r == 0 || r > range) {
            return Err(LabelCoverError::InvalidInstance(format!(
                "projection entry {bad} outside 1..={range}"
            )));
        }
        Ok(ProjectionMap { table })
    }

    pub(crate) fn from_table_unchecked(table: Vec<u32>) -> Self {
        ProjectionMap { table }
    }

    /// `φ(label)`, both 1-based.
    pub fn apply(&self, label: u32) -> u32 {
        self.table[label as usize - 1]
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// `φ(labels)` as a set.
    pub fn image<'a, I>(&self, labels: I) -> BTreeSet<u32>
    where
        I: IntoIterator<Item = &'a u32>,
    {
        labels.into_iter().map(|&l| self.apply(l)).collect()
    }

    /// Whether `φ` maps two labels of `labels` to the same value.
    pub fn collapses(&self, labels: &[u32]) -> bool {
        let mut seen = HashSet::with_capacity(labels.len());
        !labels.iter().all(|&l| seen.insert(self.apply(l)))
    }
}

/// A constraint `φ_{u -> v}` of a bipartite instance; `u` and `v` index the
/// left and right sides (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub u: usize,
    pub v: usize,
    pub map: ProjectionMap,
}

/// A bipartite Label Cover instance `(U, V, E, [L], [R], Φ)`.
///
/// Variables also have global ids: left variable `u` is `u`, right variable
/// `v` is `|U| + v`. Assignments are indexed by global id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInstance {
    left_count: usize,
    right_count: usize,
    left_alphabet: u32,
    right_alphabet: u32,
    edges: Vec<Constraint>,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteInstance {
    pub fn new(
        left_count: usize,
        right_count: usize,
        left_alphabet: u32,
        right_alphabet: u32,
        edges: Vec<Constraint>,
    ) -> Result<Self, LabelCoverError> {
        if left_alphabet == 0 || right_alphabet == 0 {
            return Err(LabelCoverError::InvalidInstance("alphabets must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        let mut left_adj = vec![Vec::new(); left_count];
        let mut right_adj = vec![Vec::new(); right_count];
        for (id, e) in edges.iter().enumerate() {
            if e.u >= left_count || e.v >= right_count {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "edge ({}, {}) references a missing variable",
                    e.u, e.v
                )));
            }
            if !seen.insert((e.u, e.v)) {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "duplicate constraint between u{} and v{}",
                    e.u, e.v
                )));
            }
            if e.map.domain_size() != left_alphabet as usize {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "projection on ({}, {}) has domain {}, expected {left_alphabet}",
                    e.u,
                    e.v,
                    e.map.domain_size()
                )));
            }
            if e.map.table().iter().any(|&r| r == 0 || r > right_alphabet) {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "projection on ({}, {}) leaves 1..={right_alphabet}",
                    e.u, e.v
                )));
            }
            left_adj[e.u].push(id);
            right_adj[e.v].push(id);
        }
        Ok(BipartiteInstance {
            left_count,
            right_count,
            left_alphabet,
            right_alphabet,
            edges,
            left_adj,
            right_adj,
        })
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }

    pub fn left_alphabet(&self) -> u32 {
        self.left_alphabet
    }

    pub fn right_alphabet(&self) -> u32 {
        self.right_alphabet
    }

    pub fn edges(&self) -> &[Constraint] {
        &self.edges
    }

    /// Edge ids incident to left variable `u`.
    pub fn left_edges(&self, u: usize) -> &[usize] {
        &self.left_adj[u]
    }

    /// Edge ids incident to right variable `v`.
    pub fn right_edges(&self, v: usize) -> &[usize] {
        &self.right_adj[v]
    }

    pub fn var_count(&self) -> usize {
        self.left_count + self.right_count
    }

    pub fn right_var(&self, v: usize) -> usize {
        self.left_count + v
    }

    /// Whether all left degrees are equal and all right degrees are equal.
    pub fn is_biregular(&self) -> bool {
        let uniform = |adj: &[Vec<usize>]| adj.windows(2).all(|w| w[0].len() == w[1].len());
        uniform(&self.left_adj) && uniform(&self.right_adj)
    }

    /// `|Φ(X, V)|` for a set `X` of left variables.
    pub fn constraints_from(&self, left: &[usize]) -> usize {
        let set: BTreeSet<usize> = left.iter().copied().collect();
        set.iter().map(|&u| self.left_adj[u].len()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layer {
    pub size: usize,
    pub alphabet: u32,
}

/// A constraint from variable `u` of layer `i` to variable `v` of layer `j`
/// (`i < j`, all 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredConstraint {
    pub i: usize,
    pub j: usize,
    pub u: usize,
    pub v: usize,
    pub map: ProjectionMap,
}

/// An ℓ-layered Label Cover instance. Global variable ids enumerate layer 0
/// first, then layer 1, and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredInstance {
    layers: Vec<Layer>,
    offsets: Vec<usize>,
    edges: Vec<LayeredConstraint>,
    adj: Vec<Vec<usize>>,
}

impl LayeredInstance {
    pub fn new(layers: Vec<Layer>, edges: Vec<LayeredConstraint>) -> Result<Self, LabelCoverError> {
        if layers.iter().any(|l| l.alphabet == 0) {
            return Err(LabelCoverError::InvalidInstance("layer alphabets must be nonempty".into()));
        }
        let mut offsets = Vec::with_capacity(layers.len() + 1);
        let mut total = 0;
        for l in &layers {
            offsets.push(total);
            total += l.size;
        }
        offsets.push(total);
        let mut adj = vec![Vec::new(); total];
        let mut seen = HashSet::new();
        for (id, e) in edges.iter().enumerate() {
            if e.i >= e.j || e.j >= layers.len() {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "constraint between layers {} and {} (need i < j < {})",
                    e.i,
                    e.j,
                    layers.len()
                )));
            }
            if e.u >= layers[e.i].size || e.v >= layers[e.j].size {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "constraint ({}:{}, {}:{}) references a missing variable",
                    e.i, e.u, e.j, e.v
                )));
            }
            if e.map.domain_size() != layers[e.i].alphabet as usize
                || e.map.table().iter().any(|&r| r == 0 || r > layers[e.j].alphabet)
            {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "projection on ({}:{}, {}:{}) is not a map [{}] -> [{}]",
                    e.i, e.u, e.j, e.v, layers[e.i].alphabet, layers[e.j].alphabet
                )));
            }
            let x = offsets[e.i] + e.u;
            let y = offsets[e.j] + e.v;
            if !seen.insert((x, y)) {
                return Err(LabelCoverError::InvalidInstance(format!(
                    "duplicate constraint between {}:{} and {}:{}",
                    e.i, e.u, e.j, e.v
                )));
            }
            adj[x].push(id);
            adj[y].push(id);
        }
        Ok(LayeredInstance { layers, offsets, edges, adj })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn edges(&self) -> &[LayeredConstraint] {
        &self.edges
    }

    pub fn var_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Global id of variable `u` in layer `layer`.
    pub fn var(&self, layer: usize, u: usize) -> usize {
        self.offsets[layer] + u
    }

    /// `(layer, index)` of a global variable id.
    pub fn locate(&self, var: usize) -> (usize, usize) {
        let layer = self.offsets.partition_point(|&o| o <= var) - 1;
        (layer, var - self.offsets[layer])
    }

    pub fn alphabet_of(&self, var: usize) -> u32 {
        self.layers[self.locate(var).0].alphabet
    }

    /// Edge ids incident to a global variable (as either endpoint).
    pub fn incident(&self, var: usize) -> &[usize] {
        &self.adj[var]
    }

    /// Global ids `(x, y)` of an edge's endpoints.
    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        let e = &self.edges[edge];
        (self.var(e.i, e.u), self.var(e.j, e.v))
    }

    /// `|Φ(U_i, U_j)|`.
    pub fn pair_constraint_count(&self, i: usize, j: usize) -> usize {
        self.edges.iter().filter(|e| e.i == i && e.j == j).count()
    }
}

/// A bipartite or layered instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Bipartite(BipartiteInstance),
    Layered(LayeredInstance),
}

impl Instance {
    pub fn var_count(&self) -> usize {
        match self {
            Instance::Bipartite(b) => b.var_count(),
            Instance::Layered(l) => l.var_count(),
        }
    }

    pub fn alphabet_of(&self, var: usize) -> u32 {
        match self {
            Instance::Bipartite(b) if var < b.left_count() => b.left_alphabet(),
            Instance::Bipartite(b) => b.right_alphabet(),
            Instance::Layered(l) => l.alphabet_of(var),
        }
    }
}

/// A possibly partial labeling, indexed by global variable id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<Option<u32>>,
}

impl Assignment {
    pub fn unassigned(var_count: usize) -> Self {
        Assignment { labels: vec![None; var_count] }
    }

    pub fn from_labels(labels: Vec<Option<u32>>) -> Self {
        Assignment { labels }
    }

    pub fn get(&self, var: usize) -> Option<u32> {
        self.labels.get(var).copied().flatten()
    }

    pub fn set(&mut self, var: usize, label: u32) {
        if var >= self.labels.len() {
            self.labels.resize(var + 1, None);
        }
        self.labels[var] = Some(label);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Option<u32>] {
        &self.labels
    }

    /// Checks every assigned label against `alphabet_of(var)`.
    pub fn validate(&self, var_count: usize, alphabet_of: impl Fn(usize) -> u32) -> Result<(), LabelCoverError> {
        for (var, label) in self.labels.iter().enumerate() {
            if let Some(l) = *label {
                if var >= var_count {
                    return Err(LabelCoverError::InvalidAssignment(format!(
                        "variable {var} does not exist"
                    )));
                }
                let range = alphabet_of(var);
                if l == 0 || l > range {
                    return Err(LabelCoverError::InvalidAssignment(format!(
                        "label {l} of variable {var} outside 1..={range}"
                    )));
                }
            }
        }
        Ok(())
    }
}
