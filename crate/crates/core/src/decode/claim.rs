use serde::{Deserialize, Serialize};

use super::{DecodeError, LabelLists};
use crate::reduction::scan::split_by_cloud;
use crate::reduction::GadgetHypergraph;

/// Default cap on the number of enumerated subfamilies.
pub const DEFAULT_SUBFAMILY_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimViolation {
    pub y: usize,
    pub xs: Vec<usize>,
    pub members: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub t: usize,
    pub ys_checked: usize,
    /// Nonempty pairwise-disjoint subfamilies enumerated.
    pub subfamilies: u64,
    pub max_s: usize,
    pub holds: bool,
    pub violations: Vec<ClaimViolation>,
}

/// Checks, for a (k+1)-uniform gadget, that every `y` and every subfamily
/// `x_1..x_s` of listed in-neighbors with injective, pairwise-disjoint images
/// `φ_{x_i->y}(L_{x_i})` satisfy
/// `|I_y| <= (1 - ((q-1)/q)^t)^s |cloud(y)|`.
///
/// Holds whenever `set` is independent and every list has at most `t` labels.
pub fn check_disjoint_family_bound(
    g: &GadgetHypergraph,
    set: &[u64],
    lists: &LabelLists,
    t: usize,
    cap: Option<u64>,
) -> Result<ClaimReport, DecodeError> {
    let lc = g
        .layered()
        .ok_or_else(|| DecodeError::InvalidParams("the disjoint-family bound needs a k_plus_one gadget".into()))?;
    let members = split_by_cloud(g, set)?;
    let cap = cap.unwrap_or(DEFAULT_SUBFAMILY_CAP);
    let miss = (g.q() as f64 - 1.0) / g.q() as f64;
    let factor = 1.0 - miss.powi(t as i32);
    let mut report = ClaimReport { t, ys_checked: 0, subfamilies: 0, max_s: 0, holds: true, violations: Vec::new() };
    for y in 0..lc.var_count() {
        let mut family: Vec<(usize, Vec<u32>)> = Vec::new();
        for &e in lc.incident(y) {
            let (x, target) = lc.endpoints(e);
            if target != y {
                continue;
            }
            let Some(list) = lists.get(x) else { continue };
            let image: Vec<u32> = lc.edges()[e].map.image(list.labels.iter()).into_iter().collect();
            if image.len() == list.labels.len() {
                family.push((x, image));
            }
        }
        if family.is_empty() {
            continue;
        }
        report.ys_checked += 1;
        let size = g.cloud_size(y) as f64;
        let have = members[y].len();
        let mut stack: Vec<usize> = Vec::new();
        let mut walk = Walk { family: &family, report: &mut report, cap, y, have, size, factor };
        walk.run(0, &mut stack)?;
    }
    report.holds = report.violations.is_empty();
    Ok(report)
}

struct Walk<'a> {
    family: &'a [(usize, Vec<u32>)],
    report: &'a mut ClaimReport,
    cap: u64,
    y: usize,
    have: usize,
    size: f64,
    factor: f64,
}

impl Walk<'_> {
    fn run(&mut self, start: usize, stack: &mut Vec<usize>) -> Result<(), DecodeError> {
        for i in start..self.family.len() {
            let img = &self.family[i].1;
            if stack.iter().any(|&j| self.family[j].1.iter().any(|l| img.contains(l))) {
                continue;
            }
            stack.push(i);
            self.report.subfamilies += 1;
            if self.report.subfamilies > self.cap {
                return Err(DecodeError::Infeasible(format!("more than {} disjoint subfamilies", self.cap)));
            }
            let s = stack.len();
            self.report.max_s = self.report.max_s.max(s);
            let bound = self.factor.powi(s as i32) * self.size;
            if self.have as f64 > bound + 1e-9 {
                self.report.violations.push(ClaimViolation {
                    y: self.y,
                    xs: stack.iter().map(|&j| self.family[j].0).collect(),
                    members: self.have,
                    bound,
                });
            }
            self.run(i + 1, stack)?;
            stack.pop();
        }
        Ok(())
    }
}
