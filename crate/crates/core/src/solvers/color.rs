use super::mis::DEFAULT_NODE_LIMIT;
use super::SolverError;
use crate::hypergraph::Hypergraph;
use crate::reduction::Coloring;

/// Searches for a proper `c`-coloring (no monochromatic edge) by
/// backtracking; a new color is only opened once all lower ones are in use.
/// `Ok(None)` proves that none exists.
pub fn exists_proper_coloring(h: &Hypergraph, c: u32, node_limit: Option<u64>) -> Result<Option<Coloring>, SolverError> {
    if c == 0 {
        return Err(SolverError::InvalidInput("need at least one color".into()));
    }
    let n = h.vertex_count();
    let incidence = h.incidence();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(incidence[v].len()), v));
    let mut search = ColorSearch {
        h,
        incidence,
        order,
        c,
        colors: vec![0; n],
        // Per edge and color, the number of vertices with that color.
        counts: vec![0u32; h.edges().len() * c as usize],
        nodes: 0,
        node_limit: node_limit.unwrap_or(DEFAULT_NODE_LIMIT),
    };
    match search.assign(0, 0) {
        Some(true) => Coloring::new(c, search.colors).map(Some).map_err(|e| SolverError::InvalidInput(e.to_string())),
        Some(false) => Ok(None),
        None => Err(SolverError::Infeasible(format!("coloring search exceeded {} nodes", search.node_limit))),
    }
}

struct ColorSearch<'a> {
    h: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
    order: Vec<usize>,
    c: u32,
    colors: Vec<u32>,
    counts: Vec<u32>,
    nodes: u64,
    node_limit: u64,
}

impl ColorSearch<'_> {
    fn slot(&self, e: usize, color: u32) -> usize {
        e * self.c as usize + color as usize - 1
    }

    /// `Some(found)`, or `None` when the node limit is hit.
    fn assign(&mut self, pos: usize, used: u32) -> Option<bool> {
        if pos == self.order.len() {
            return Some(true);
        }
        let v = self.order[pos];
        for color in 1..=(used + 1).min(self.c) {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return None;
            }
            let conflict = self.incidence[v]
                .iter()
                .any(|&e| self.counts[self.slot(e, color)] as usize + 1 == self.h.edges()[e].len());
            if conflict {
                continue;
            }
            for i in 0..self.incidence[v].len() {
                let s = self.slot(self.incidence[v][i], color);
                self.counts[s] += 1;
            }
            self.colors[v] = color;
            let result = self.assign(pos + 1, used.max(color));
            for i in 0..self.incidence[v].len() {
                let s = self.slot(self.incidence[v][i], color);
                self.counts[s] -= 1;
            }
            match result {
                Some(false) => {}
                other => return other,
            }
        }
        self.colors[v] = 0;
        Some(false)
    }
}
