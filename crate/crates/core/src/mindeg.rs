//! Random precolouring for graphs of large minimum degree.
//!
//! With `k = Δ + 3d` colours, every vertex always has at least `3d` colours
//! not used on its neighbourhood, so resampling a neighbour of a vertex of
//! degree at most `d` creates a new solitary colour with probability at least
//! 2/3 and destroys one with probability at most 1/3. Starting from a greedy
//! proper colouring, a few full resampling sweeps are run and the result is
//! accepted once it is `f_[V_{<=d}](2h, 0)`-conflict-free.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::colouring::{check_conflict_free, first_fit, is_proper_slice, Colouring, ThresholdSpec};
use crate::error::{Error, Result};
use crate::graph::{positions, Graph};
use crate::seed;

/// A proper colouring with palette `1..=k` that is resampled in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResampleState {
    colours: Vec<u32>,
    k: u32,
    max_degree: usize,
    stamp: Vec<usize>,
    epoch: usize,
}

impl ResampleState {
    pub fn new(g: &Graph, start: Colouring, k: u32) -> Result<Self> {
        if start.n() != g.n() {
            return Err(Error::SizeMismatch {
                graph: g.n(),
                colouring: start.n(),
            });
        }
        if (k as usize) <= g.max_degree() {
            return Err(Error::InvalidParameter(format!(
                "palette of {k} colours cannot resample a graph of maximum degree {}",
                g.max_degree()
            )));
        }
        if start.max_colour() > k || !is_proper_slice(g, start.as_slice()) {
            return Err(Error::InvalidParameter(format!(
                "starting colouring must be proper within 1..={k}"
            )));
        }
        Ok(ResampleState {
            colours: start.into_vec(),
            k,
            max_degree: g.max_degree(),
            stamp: vec![0; k as usize + 1],
            epoch: 0,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn colouring(&self) -> Colouring {
        Colouring::new(self.colours.clone()).expect("colours stay positive")
    }

    /// `L(v) = [k] \ σ(N(v))`, ascending.
    pub fn available(&mut self, g: &Graph, v: usize) -> Vec<u32> {
        self.mark_neighbourhood(g, v);
        let epoch = self.epoch;
        (1..=self.k).filter(|&c| self.stamp[c as usize] != epoch).collect()
    }

    fn mark_neighbourhood(&mut self, g: &Graph, v: usize) {
        self.epoch += 1;
        for &u in g.neighbours(v) {
            self.stamp[self.colours[u] as usize] = self.epoch;
        }
    }

    /// Recolours `v` uniformly from `L(v)`.
    pub fn resample<R: Rng + ?Sized>(&mut self, g: &Graph, v: usize, rng: &mut R) {
        let available = self.available(g, v);
        assert!(
            available.len() + self.max_degree >= self.k as usize,
            "|L({v})| = {} below k - Δ",
            available.len()
        );
        self.colours[v] = available[rng.gen_range(0..available.len())];
    }

    /// Resamples every vertex once, in `order`.
    pub fn sweep<R: Rng + ?Sized>(&mut self, g: &Graph, order: &[usize], rng: &mut R) -> Result<()> {
        positions(g.n(), order)?;
        for &v in order {
            self.resample(g, v, rng);
        }
        if !is_proper_slice(g, &self.colours) {
            return Err(Error::Invariant("resampling sweep broke properness".into()));
        }
        Ok(())
    }
}

/// One seeded sweep over `order`.
pub fn resample_sweep(g: &Graph, mut state: ResampleState, order: &[usize], seed: u64) -> Result<ResampleState> {
    let mut rng = seed::rng(seed);
    state.sweep(g, order, &mut rng)?;
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MindegConfig {
    pub max_restarts: usize,
    /// Sweeps per attempt; `None` means `⌈10 ln n⌉`.
    pub sweeps: Option<usize>,
    /// Reject (rather than report) violated hypotheses `h >= 20 ln Δ`, `δ >= 16h`.
    pub strict: bool,
}

impl Default for MindegConfig {
    fn default() -> Self {
        MindegConfig {
            max_restarts: 20,
            sweeps: None,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MindegOutcome {
    pub colouring: Colouring,
    pub spec: ThresholdSpec,
    /// Palette size `Δ + 3d`.
    pub k: u32,
    pub attempts: usize,
    pub warnings: Vec<String>,
}

/// Proper `(Δ+3d)`-colouring that is `f_[V_{<=d}](2h, 0)`-conflict-free.
pub fn precolour_mindeg(g: &Graph, h: usize, d: usize, seed: u64, config: &MindegConfig) -> Result<MindegOutcome> {
    let (delta, min_deg) = (g.max_degree(), g.min_degree());
    if d < min_deg || d > delta {
        return Err(Error::InvalidParameter(format!(
            "d = {d} must satisfy δ = {min_deg} <= d <= Δ = {delta}"
        )));
    }
    if config.max_restarts == 0 {
        return Err(Error::InvalidParameter("max_restarts must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let ln_delta = (delta.max(1) as f64).ln();
    if (h as f64) < 20.0 * ln_delta {
        warnings.push(format!("h = {h} is below 20 ln Δ = {:.1}", 20.0 * ln_delta));
    }
    if min_deg < 16 * h {
        warnings.push(format!("δ = {min_deg} is below 16h = {}", 16 * h));
    }
    if config.strict && !warnings.is_empty() {
        return Err(Error::InvalidParameter(warnings.join("; ")));
    }

    let k = (delta + 3 * d) as u32;
    let spec = ThresholdSpec::low_degree(g, d as f64, 2 * h, 0);
    let sweeps = config
        .sweeps
        .unwrap_or_else(|| ((g.n().max(2) as f64).ln() * 10.0).ceil() as usize)
        .max(1);
    let order: Vec<usize> = (0..g.n()).collect();
    let start = first_fit(g);

    for t in 0..config.max_restarts {
        let mut rng = seed::rng(seed::mix(seed, t as u64));
        let mut state = ResampleState::new(g, start.clone(), k.max(1))?;
        for _ in 0..sweeps {
            state.sweep(g, &order, &mut rng)?;
        }
        let colouring = state.colouring();
        if check_conflict_free(g, &colouring, &spec)?.all_pass {
            return Ok(MindegOutcome {
                colouring,
                spec,
                k,
                attempts: t + 1,
                warnings,
            });
        }
    }
    Err(Error::RestartsExhausted {
        attempts: config.max_restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{check_conflict_free, is_proper};
    use crate::graph::*;

    #[test]
    fn k4_succeeds_first_attempt() {
        let g = gen_complete(4);
        let out = precolour_mindeg(&g, 1, 3, 5, &MindegConfig::default()).unwrap();
        assert_eq!(out.k, 12);
        assert_eq!(out.attempts, 1);
        assert!(check_conflict_free(&g, &out.colouring, &out.spec).unwrap().all_pass);
        assert!(!out.warnings.is_empty());
    }

    #[test]
    fn zero_demand_always_passes() {
        let g = gen_cycle(5).unwrap();
        let out = precolour_mindeg(&g, 0, 2, 1, &MindegConfig::default()).unwrap();
        assert_eq!(out.attempts, 1);
        assert!(is_proper(&g, &out.colouring).unwrap());
        assert!(out.colouring.max_colour() <= 8);
    }

    #[test]
    fn regular_graph_run() {
        let g = gen_random_regular(200, 50, 17).unwrap();
        let out = precolour_mindeg(&g, 3, 50, 4, &MindegConfig::default()).unwrap();
        assert!(out.colouring.max_colour() <= 200);
        assert!(check_conflict_free(&g, &out.colouring, &out.spec).unwrap().all_pass);
    }

    #[test]
    fn preconditions() {
        let g = gen_random_regular(30, 4, 1).unwrap();
        assert!(precolour_mindeg(&g, 1, 3, 0, &MindegConfig::default()).is_err());
        assert!(precolour_mindeg(&g, 1, 5, 0, &MindegConfig::default()).is_err());
        let strict = MindegConfig {
            strict: true,
            ..MindegConfig::default()
        };
        assert!(precolour_mindeg(&g, 1, 4, 0, &strict).is_err());
        let zero = MindegConfig {
            max_restarts: 0,
            ..MindegConfig::default()
        };
        assert!(precolour_mindeg(&g, 1, 4, 0, &zero).is_err());
    }

    #[test]
    fn sweep_examples() {
        let k2 = gen_complete(2);
        let st = ResampleState::new(&k2, Colouring::new(vec![1, 2]).unwrap(), 4).unwrap();
        let st = resample_sweep(&k2, st, &[0, 1], 3).unwrap();
        assert_ne!(st.colours()[0], st.colours()[1]);

        let single = Graph::empty(1);
        let mut seen = [0usize; 5];
        let mut st = ResampleState::new(&single, Colouring::new(vec![1]).unwrap(), 4).unwrap();
        let mut rng = seed::rng(1);
        for _ in 0..4000 {
            st.sweep(&single, &[0], &mut rng).unwrap();
            seen[st.colours()[0] as usize] += 1;
        }
        assert_eq!(seen[0], 0);
        assert!(seen[1..].iter().all(|&c| (850..1150).contains(&c)), "{seen:?}");

        let c5 = gen_cycle(5).unwrap();
        let mut st = ResampleState::new(&c5, first_fit(&c5), 8).unwrap();
        let mut rng = seed::rng(2);
        for _ in 0..1000 {
            st.sweep(&c5, &[0, 1, 2, 3, 4], &mut rng).unwrap();
            assert!(is_proper(&c5, &st.colouring()).unwrap());
        }
    }

    #[test]
    fn available_list_lower_bound() {
        let g = gen_random_graph(60, 0.3, 6).unwrap();
        let d = g.min_degree() + 2;
        let k = (g.max_degree() + 3 * d) as u32;
        let mut st = ResampleState::new(&g, first_fit(&g), k).unwrap();
        let order: Vec<usize> = (0..60).collect();
        let mut rng = seed::rng(8);
        for _ in 0..20 {
            st.sweep(&g, &order, &mut rng).unwrap();
            for v in 0..60 {
                assert!(st.available(&g, v).len() >= 3 * d);
            }
        }
    }

    #[test]
    fn rejects_bad_start() {
        let g = gen_path(3);
        assert!(ResampleState::new(&g, Colouring::new(vec![1, 1, 2]).unwrap(), 5).is_err());
        assert!(ResampleState::new(&g, Colouring::new(vec![1, 2, 1]).unwrap(), 2).is_err());
        assert!(ResampleState::new(&g, Colouring::new(vec![1, 6, 1]).unwrap(), 5).is_err());
    }
}
