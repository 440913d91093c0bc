use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::hypergraph::Hypergraph;
use crate::rng;

/// Default node limit for exact searches.
pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum MisMethod {
    Exact { node_limit: u64 },
    Greedy,
    LocalSearch { seed: u64, iterations: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsResult {
    /// Ascending vertex indices.
    pub vertices: Vec<usize>,
    pub size: usize,
    /// True only when an exact search completed.
    pub exact: bool,
    /// `size / vertex count` (0 for an empty hypergraph).
    pub alpha: f64,
    pub nodes: u64,
}

fn result(h: &Hypergraph, mut vertices: Vec<usize>, exact: bool, nodes: u64) -> IsResult {
    vertices.sort_unstable();
    let size = vertices.len();
    let alpha = if h.vertex_count() == 0 { 0.0 } else { size as f64 / h.vertex_count() as f64 };
    IsResult { vertices, size, exact, alpha, nodes }
}

/// Tracks, per edge, how many of its vertices are chosen.
struct Tracker<'a> {
    h: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
    chosen_in_edge: Vec<usize>,
    chosen: Vec<bool>,
}

impl<'a> Tracker<'a> {
    fn new(h: &'a Hypergraph) -> Self {
        Tracker {
            h,
            incidence: h.incidence(),
            chosen_in_edge: vec![0; h.edges().len()],
            chosen: vec![false; h.vertex_count()],
        }
    }

    /// Whether adding `v` keeps the set independent.
    fn can_add(&self, v: usize) -> bool {
        !self.chosen[v] && self.incidence[v].iter().all(|&e| self.chosen_in_edge[e] + 1 < self.h.edges()[e].len())
    }

    fn add(&mut self, v: usize) {
        self.chosen[v] = true;
        for &e in &self.incidence[v] {
            self.chosen_in_edge[e] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.chosen[v] = false;
        for &e in &self.incidence[v] {
            self.chosen_in_edge[e] -= 1;
        }
    }

    fn members(&self) -> Vec<usize> {
        (0..self.chosen.len()).filter(|&v| self.chosen[v]).collect()
    }
}

/// Maximum independent set of an explicit hypergraph. `initial`, when given,
/// must be independent; greedy and local search start from it.
pub fn max_independent_set(h: &Hypergraph, method: MisMethod, initial: Option<&[usize]>) -> Result<IsResult, SolverError> {
    let mut tracker = Tracker::new(h);
    if let Some(init) = initial {
        for &v in init {
            if v >= h.vertex_count() {
                return Err(SolverError::InvalidInput(format!("vertex {v} outside 0..{}", h.vertex_count())));
            }
            if tracker.chosen[v] {
                continue;
            }
            if !tracker.can_add(v) {
                return Err(SolverError::InvalidInput("initial set is not independent".into()));
            }
            tracker.add(v);
        }
    }
    match method {
        MisMethod::Greedy => {
            greedy_fill(&mut tracker, None);
            Ok(result(h, tracker.members(), false, 0))
        }
        MisMethod::LocalSearch { seed, iterations } => Ok(local_search(tracker, seed, iterations)),
        MisMethod::Exact { node_limit } => exact(h, node_limit, tracker.members()),
    }
}

/// Adds vertices in order of fewest incident edges (ties by index), or in the
/// given order, while independence allows.
fn greedy_fill(tracker: &mut Tracker, order: Option<&[usize]>) {
    let default_order;
    let order = match order {
        Some(o) => o,
        None => {
            let mut o: Vec<usize> = (0..tracker.chosen.len()).collect();
            o.sort_by_key(|&v| (tracker.incidence[v].len(), v));
            default_order = o;
            &default_order
        }
    };
    for &v in order {
        if tracker.can_add(v) {
            tracker.add(v);
        }
    }
}

fn local_search(mut tracker: Tracker, seed: u64, iterations: u64) -> IsResult {
    greedy_fill(&mut tracker, None);
    let h = tracker.h;
    let mut best = tracker.members();
    let mut rng = rng::seeded(seed);
    let mut order: Vec<usize> = (0..h.vertex_count()).collect();
    for _ in 0..iterations {
        let current = tracker.members();
        if current.is_empty() {
            break;
        }
        let drop = rng.gen_range(1..=2.min(current.len()));
        let removed: Vec<usize> = current.choose_multiple(&mut rng, drop).copied().collect();
        for &v in &removed {
            tracker.remove(v);
        }
        order.shuffle(&mut rng);
        greedy_fill(&mut tracker, Some(&order));
        let size = tracker.chosen.iter().filter(|&&c| c).count();
        if size < current.len() {
            for v in tracker.members() {
                tracker.remove(v);
            }
            for &v in &current {
                tracker.add(v);
            }
        } else if size > best.len() {
            best = tracker.members();
        }
    }
    result(h, best, false, iterations)
}

fn exact(h: &Hypergraph, node_limit: u64, initial_best: Vec<usize>) -> Result<IsResult, SolverError> {
    let n = h.vertex_count();
    let incidence = h.incidence();
    // Highest degree first, ties by index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(incidence[v].len()), v));

    let mut greedy = Tracker::new(h);
    greedy_fill(&mut greedy, None);
    let start = greedy.members();
    let best = if start.len() >= initial_best.len() { start } else { initial_best };

    let mut search = Exact {
        h,
        incidence,
        order,
        state: vec![VState::Open; n],
        chosen_in_edge: vec![0; h.edges().len()],
        chosen_count: 0,
        open_count: n,
        best,
        nodes: 0,
        node_limit,
        mark: vec![0; n],
        stamp: 0,
    };
    let complete = search.branch(0);
    if !complete {
        return Err(SolverError::Infeasible(format!(
            "exact search exceeded {node_limit} nodes (best so far {})",
            search.best.len()
        )));
    }
    let nodes = search.nodes;
    Ok(result(h, search.best, true, nodes))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VState {
    Open,
    In,
    Out,
}

struct Exact<'a> {
    h: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
    order: Vec<usize>,
    state: Vec<VState>,
    chosen_in_edge: Vec<usize>,
    chosen_count: usize,
    open_count: usize,
    best: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    mark: Vec<u32>,
    stamp: u32,
}

impl Exact<'_> {
    /// Upper bound: chosen + open, minus a greedy packing of live edges whose
    /// open parts are disjoint (each such edge must lose an open vertex).
    fn bound(&mut self) -> usize {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        let mut packing = 0;
        for (e, edge) in self.h.edges().iter().enumerate() {
            if edge.iter().any(|&v| self.state[v] == VState::Out) || self.chosen_in_edge[e] == edge.len() {
                continue;
            }
            if edge.iter().any(|&v| self.state[v] == VState::Open && self.mark[v] == self.stamp) {
                continue;
            }
            for &v in edge {
                if self.state[v] == VState::Open {
                    self.mark[v] = self.stamp;
                }
            }
            packing += 1;
        }
        self.chosen_count + self.open_count - packing
    }

    fn set(&mut self, v: usize, s: VState) {
        if s == VState::In {
            self.chosen_count += 1;
            for &e in &self.incidence[v] {
                self.chosen_in_edge[e] += 1;
            }
        }
        self.open_count -= 1;
        self.state[v] = s;
    }

    fn unset(&mut self, v: usize) {
        if self.state[v] == VState::In {
            self.chosen_count -= 1;
            for &e in &self.incidence[v] {
                self.chosen_in_edge[e] -= 1;
            }
        }
        self.open_count += 1;
        self.state[v] = VState::Open;
    }

    fn can_add(&self, v: usize) -> bool {
        self.incidence[v].iter().all(|&e| self.chosen_in_edge[e] + 1 < self.h.edges()[e].len())
    }

    /// Returns false when the node limit is hit.
    fn branch(&mut self, pos: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return false;
        }
        if self.chosen_count > self.best.len() {
            self.best = (0..self.state.len()).filter(|&v| self.state[v] == VState::In).collect();
        }
        if pos == self.order.len() || self.bound() <= self.best.len() {
            return true;
        }
        let v = self.order[pos];
        if self.can_add(v) {
            self.set(v, VState::In);
            let ok = self.branch(pos + 1);
            self.unset(v);
            if !ok {
                return false;
            }
        }
        self.set(v, VState::Out);
        let ok = self.branch(pos + 1);
        self.unset(v);
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(h: &Hypergraph) -> usize {
        let n = h.vertex_count();
        let masks: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
        (0u32..1 << n)
            .filter(|&s| masks.iter().all(|&m| s & m != m))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn random_hypergraph(seed: u64) -> Hypergraph {
        let mut rng = rng::seeded(seed);
        let n = rng.gen_range(1..=12);
        let u = rng.gen_range(2..=4.min(n.max(2)));
        let mut edges = std::collections::BTreeSet::new();
        if n >= u {
            for _ in 0..rng.gen_range(0..3 * n) {
                let mut e: Vec<usize> = rand::seq::index::sample(&mut rng, n, u).into_vec();
                e.sort_unstable();
                edges.insert(e);
            }
        }
        Hypergraph::new(n, u, edges.into_iter().collect()).unwrap()
    }

    #[test]
    fn examples() {
        let empty = Hypergraph::new(5, 3, vec![]).unwrap();
        let r = max_independent_set(&empty, MisMethod::Exact { node_limit: DEFAULT_NODE_LIMIT }, None).unwrap();
        assert_eq!(r.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(r.alpha, 1.0);
        let single = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        let r = max_independent_set(&single, MisMethod::Exact { node_limit: DEFAULT_NODE_LIMIT }, None).unwrap();
        assert_eq!(r.size, 1);
        assert!(r.exact);
    }

    #[test]
    fn exact_matches_brute_force() {
        for seed in 0..60 {
            let h = random_hypergraph(seed);
            let expected = brute_force(&h);
            let r = max_independent_set(&h, MisMethod::Exact { node_limit: DEFAULT_NODE_LIMIT }, None).unwrap();
            assert_eq!(r.size, expected, "seed {seed}");
            let greedy = max_independent_set(&h, MisMethod::Greedy, None).unwrap();
            let local = max_independent_set(&h, MisMethod::LocalSearch { seed, iterations: 50 }, None).unwrap();
            for res in [&r, &greedy, &local] {
                let mask: u32 = res.vertices.iter().fold(0, |m, &v| m | 1 << v);
                assert!(h.edges().iter().all(|e| e.iter().any(|&v| mask & (1 << v) == 0)));
                assert!(res.size <= expected);
            }
        }
    }

    #[test]
    fn node_limit_and_initial_sets() {
        let h = Hypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(matches!(
            max_independent_set(&h, MisMethod::Exact { node_limit: 0 }, None),
            Err(SolverError::Infeasible(_))
        ));
        let r = max_independent_set(&h, MisMethod::Greedy, Some(&[1])).unwrap();
        assert_eq!(r.vertices, vec![1]);
        assert!(max_independent_set(&h, MisMethod::Greedy, Some(&[0, 1])).is_err());
    }
}
