//! Exact h-pcf and h-odd chromatic numbers of small graphs by backtracking.
//!
//! For each palette size `k` from a trivial lower bound upward, a depth-first
//! search either finds a certificate or refutes `k` exhaustively. Colours are
//! introduced in order (a vertex may only open colour `max_used + 1`), and a
//! partial colouring is pruned as soon as some vertex `u` has
//! `good(u) + uncoloured(u) < min(h, deg u)`: each further neighbour changes
//! the solitary (or odd) count of `u` by at most one.

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::colouring::{check_conflict_free, check_h_odd, Colouring, ThresholdSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Pcf,
    Odd,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pcf" => Ok(Target::Pcf),
            "odd" => Ok(Target::Odd),
            other => Err(Error::InvalidParameter(format!("unknown target {other:?}"))),
        }
    }
}

/// Limits on a single oracle call; `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SearchResult {
    /// `value` colours suffice (certificate) and `value - 1` were refuted.
    Exact {
        value: usize,
        certificate: Colouring,
        nodes: u64,
    },
    /// Budget ran out; every palette below `proven_lower_bound` was refuted.
    Exhausted { proven_lower_bound: usize, nodes: u64 },
}

impl SearchResult {
    pub fn value(&self) -> Option<usize> {
        match self {
            SearchResult::Exact { value, .. } => Some(*value),
            SearchResult::Exhausted { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchResult::Exact { nodes, .. } | SearchResult::Exhausted { nodes, .. } => *nodes,
        }
    }
}

pub fn exact_chi_pcf(g: &Graph, h: usize, budget: SearchBudget) -> Result<SearchResult> {
    exact_chi(g, h, Target::Pcf, budget)
}

pub fn exact_chi_odd(g: &Graph, h: usize, budget: SearchBudget) -> Result<SearchResult> {
    exact_chi(g, h, Target::Odd, budget)
}

/// Smallest `k` with every vertex seeing `min(h, deg)` solitary (or odd)
/// colours under some proper `k`-colouring.
pub fn exact_chi(g: &Graph, h: usize, target: Target, budget: SearchBudget) -> Result<SearchResult> {
    let n = g.n();
    if n == 0 {
        return Ok(SearchResult::Exact {
            value: 0,
            certificate: Colouring::new(Vec::new())?,
            nodes: 0,
        });
    }
    // A vertex and its required witnesses carry pairwise distinct colours.
    let lower = (0..n)
        .filter(|&v| g.degree(v) > 0)
        .map(|v| h.min(g.degree(v)).max(1) + 1)
        .max()
        .unwrap_or(1);

    let mut search = Search::new(g, h, target, budget);
    // The rainbow colouring always works, so the loop ends by `k = n`.
    for k in lower..=n {
        match search.run(k) {
            Outcome::Found(colours) => {
                let certificate = Colouring::new(colours)?;
                verify_certificate(g, &certificate, h, target)?;
                return Ok(SearchResult::Exact {
                    value: k,
                    certificate,
                    nodes: search.nodes,
                });
            }
            Outcome::Refuted => {}
            Outcome::Aborted => {
                return Ok(SearchResult::Exhausted {
                    proven_lower_bound: k,
                    nodes: search.nodes,
                })
            }
        }
    }
    Err(Error::Invariant("rainbow colouring was refuted".into()))
}

fn verify_certificate(g: &Graph, c: &Colouring, h: usize, target: Target) -> Result<()> {
    let report = match target {
        Target::Pcf => check_conflict_free(g, c, &ThresholdSpec::uniform(g.n(), h))?,
        Target::Odd => check_h_odd(g, c, h)?,
    };
    if report.all_pass {
        Ok(())
    } else {
        Err(Error::Invariant("oracle certificate failed verification".into()))
    }
}

enum Outcome {
    Found(Vec<u32>),
    Refuted,
    Aborted,
}

struct Search<'g> {
    g: &'g Graph,
    target: Target,
    budget: SearchBudget,
    started: Instant,
    nodes: u64,
    order: Vec<usize>,
    demand: Vec<usize>,
    // Per-k state.
    k: usize,
    colours: Vec<u32>,
    /// `count[u * (k+1) + c]`: neighbours of `u` coloured `c`.
    count: Vec<u32>,
    good: Vec<usize>,
    uncoloured: Vec<usize>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, h: usize, target: Target, budget: SearchBudget) -> Self {
        let n = g.n();
        Search {
            g,
            target,
            budget,
            started: Instant::now(),
            nodes: 0,
            order: max_cardinality_order(g),
            demand: (0..n).map(|v| h.min(g.degree(v))).collect(),
            k: 0,
            colours: vec![0; n],
            count: Vec::new(),
            good: vec![0; n],
            uncoloured: vec![0; n],
        }
    }

    fn run(&mut self, k: usize) -> Outcome {
        let n = self.g.n();
        self.k = k;
        self.colours.iter_mut().for_each(|c| *c = 0);
        self.count = vec![0; n * (k + 1)];
        self.good.iter_mut().for_each(|x| *x = 0);
        for v in 0..n {
            self.uncoloured[v] = self.g.degree(v);
        }
        match self.descend(0, 0) {
            Some(true) => Outcome::Found(self.colours.clone()),
            Some(false) => Outcome::Refuted,
            None => Outcome::Aborted,
        }
    }

    fn over_budget(&self) -> bool {
        if self.budget.max_nodes.is_some_and(|m| self.nodes >= m) {
            return true;
        }
        self.nodes.is_multiple_of(4096) && self.budget.time_limit.is_some_and(|t| self.started.elapsed() >= t)
    }

    /// `Some(true)` on success, `Some(false)` when the subtree is refuted,
    /// `None` when the budget runs out.
    fn descend(&mut self, depth: usize, max_used: u32) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let v = self.order[depth];
        let top = (max_used + 1).min(self.k as u32);
        for c in 1..=top {
            if self.g.neighbours(v).iter().any(|&u| self.colours[u] == c) {
                continue;
            }
            self.nodes += 1;
            if self.over_budget() {
                return None;
            }
            let feasible = self.assign(v, c);
            if feasible {
                match self.descend(depth + 1, max_used.max(c)) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => return None,
                }
            }
            self.unassign(v, c);
        }
        Some(false)
    }

    fn slot(&self, u: usize, c: u32) -> usize {
        u * (self.k + 1) + c as usize
    }

    /// Colours `v` with `c`, returning whether every neighbour can still
    /// reach its demand.
    fn assign(&mut self, v: usize, c: u32) -> bool {
        self.colours[v] = c;
        let mut feasible = true;
        for i in 0..self.g.degree(v) {
            let u = self.g.neighbours(v)[i];
            let s = self.slot(u, c);
            let before = self.count[s];
            self.count[s] += 1;
            match self.target {
                Target::Pcf => match before {
                    0 => self.good[u] += 1,
                    1 => self.good[u] -= 1,
                    _ => {}
                },
                Target::Odd => {
                    if before.is_multiple_of(2) {
                        self.good[u] += 1;
                    } else {
                        self.good[u] -= 1;
                    }
                }
            }
            self.uncoloured[u] -= 1;
            feasible &= self.good[u] + self.uncoloured[u] >= self.demand[u];
        }
        feasible
    }

    fn unassign(&mut self, v: usize, c: u32) {
        self.colours[v] = 0;
        for i in 0..self.g.degree(v) {
            let u = self.g.neighbours(v)[i];
            let s = self.slot(u, c);
            self.count[s] -= 1;
            let after = self.count[s];
            match self.target {
                Target::Pcf => match after {
                    0 => self.good[u] -= 1,
                    1 => self.good[u] += 1,
                    _ => {}
                },
                Target::Odd => {
                    if after.is_multiple_of(2) {
                        self.good[u] -= 1;
                    } else {
                        self.good[u] += 1;
                    }
                }
            }
            self.uncoloured[u] += 1;
        }
    }
}

/// Repeatedly picks the vertex with the most already-ordered neighbours
/// (ties: higher degree, then lower index), so neighbourhoods fill early.
fn max_cardinality_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut weight = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (weight[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("an unplaced vertex remains");
        placed[v] = true;
        order.push(v);
        for &u in g.neighbours(v) {
            weight[u] += 1;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    fn pcf(g: &Graph, h: usize) -> usize {
        exact_chi_pcf(g, h, SearchBudget::default()).unwrap().value().unwrap()
    }

    fn odd(g: &Graph, h: usize) -> usize {
        exact_chi_odd(g, h, SearchBudget::default()).unwrap().value().unwrap()
    }

    #[test]
    fn cycles() {
        assert_eq!(pcf(&gen_cycle(5).unwrap(), 1), 5);
        assert_eq!(pcf(&gen_cycle(6).unwrap(), 1), 3);
        for n in [4, 7, 8] {
            assert_eq!(pcf(&gen_cycle(n).unwrap(), 1), 4, "C_{n}");
        }
    }

    #[test]
    fn subdivided_k5_is_tight() {
        let g = gen_subdivided_complete(5, &Subdivide::All).unwrap();
        assert_eq!(pcf(&g, 1), 5);
    }

    #[test]
    fn small_graphs() {
        let k2 = gen_complete(2);
        assert_eq!(pcf(&k2, 1), 2);
        assert_eq!(odd(&k2, 1), 2);
        assert_eq!(odd(&gen_complete(3), 1), 3);
        assert_eq!(pcf(&Graph::empty(3), 2), 1);
        assert_eq!(pcf(&Graph::empty(0), 1), 0);
        assert_eq!(pcf(&gen_complete(5), 3), 5);
        assert!(odd(&gen_cycle(5).unwrap(), 1) <= 5);
    }

    #[test]
    fn certificates_verify() {
        let g = gen_petersen();
        for h in 1..=3 {
            for target in [Target::Pcf, Target::Odd] {
                match exact_chi(&g, h, target, SearchBudget::default()).unwrap() {
                    SearchResult::Exact { value, certificate, .. } => {
                        assert_eq!(certificate.colours_used(), value);
                        verify_certificate(&g, &certificate, h, target).unwrap();
                    }
                    other => panic!("{other:?}"),
                }
            }
        }
    }

    #[test]
    fn odd_never_exceeds_pcf() {
        for seed in 0..20 {
            let g = gen_random_graph(9, 0.35, seed).unwrap();
            for h in 1..=2 {
                assert!(odd(&g, h) <= pcf(&g, h), "seed {seed} h {h}");
            }
        }
    }

    #[test]
    fn budget_exhaustion() {
        let g = gen_cycle(5).unwrap();
        let budget = SearchBudget {
            max_nodes: Some(3),
            time_limit: None,
        };
        match exact_chi_pcf(&g, 1, budget).unwrap() {
            SearchResult::Exhausted { proven_lower_bound, .. } => assert_eq!(proven_lower_bound, 2),
            other => panic!("{other:?}"),
        }
        assert_eq!("odd".parse::<Target>().unwrap(), Target::Odd);
        assert!("xyz".parse::<Target>().is_err());
    }
}
