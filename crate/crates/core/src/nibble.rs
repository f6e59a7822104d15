//! Randomized nibble recolouring.
//!
//! Starting from a proper precolouring `σ0` with `k` colours, `m` rounds each
//! sample a vertex set `A_i` (every vertex independently with probability `p`)
//! and keep `C_i = A_i \ S_i`, where `S_i` holds every vertex whose blocking
//! neighbourhood meets `A_i` plus everything kept since the last fail-safe
//! reset. The kept sets `C_{i0}, ..., C_m` are then recoloured with the fresh
//! colours `k + i`.
//!
//! Variant A blocks on `N(u) ∪ W(N(u)) \ {u}` so that every reserved witness
//! set `W(v)` survives; it adds witnesses to high-degree vertices without
//! destroying any. Variant B blocks on `N(u)` only and merely expects most of
//! `W(v)` to survive, which makes it much cheaper in colours.
//!
//! The existence argument behind the procedure is non-constructive, so
//! [`restart_driver`] simply resamples everything until no bad event occurs.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::colouring::{check_conflict_free, is_proper_slice, Colouring, NeighbourhoodTally, ThresholdSpec};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Witness-preserving recolouring for precolourings with `h` / `h0` witnesses.
    A,
    /// Cheaper recolouring that may destroy a minority of the reserved witnesses.
    B,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            _ => Err(Error::InvalidParameter(format!("unknown nibble variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NibbleParams {
    pub variant: Variant,
    pub h: usize,
    pub h0: usize,
    /// Degree threshold separating `V_{<=d}` from `V_{>d}`.
    pub d: f64,
    pub eta: usize,
    /// Sampling probability per vertex and round.
    pub p: f64,
    /// Number of rounds, i.e. of extra colours.
    pub m: usize,
    /// Palette size `k` of the precolouring.
    pub base_colours: u32,
    pub max_degree: usize,
    pub min_degree: usize,
    /// Whether every hypothesis of the underlying existence argument holds.
    pub strict: bool,
    pub strict_violations: Vec<String>,
}

impl NibbleParams {
    /// `p` and `m` follow the variant:
    ///
    /// * A: `p = 1/((h+2)Δ)`, `m = ⌈8e(h+2)Δη/d⌉`
    /// * B: `p = 1/(2Δ)`, `m = ⌈8eΔη/d⌉`
    ///
    /// For variant B the value of `h` is informational only.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        variant: Variant,
        h: usize,
        h0: usize,
        d: f64,
        eta: usize,
        max_degree: usize,
        min_degree: usize,
        base_colours: u32,
    ) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidParameter(format!("d must be positive, got {d}")));
        }
        if eta == 0 {
            return Err(Error::InvalidParameter("eta must be at least 1".into()));
        }
        if max_degree == 0 {
            return Err(Error::InvalidParameter("the graph has no edges".into()));
        }
        if variant == Variant::A && h0 > h {
            return Err(Error::InvalidParameter(format!("need h >= h0, got h = {h}, h0 = {h0}")));
        }
        let delta = max_degree as f64;
        let eta_f = eta as f64;
        let e = std::f64::consts::E;
        let (p, m) = match variant {
            Variant::A => {
                let hp2 = (h + 2) as f64;
                (1.0 / (hp2 * delta), (8.0 * e * hp2 * delta * eta_f / d).ceil() as usize)
            }
            Variant::B => (1.0 / (2.0 * delta), (8.0 * e * delta * eta_f / d).ceil() as usize),
        };

        let ln_delta = delta.ln();
        let mut violations = Vec::new();
        let mut require = |ok: bool, what: &str| {
            if !ok {
                violations.push(what.to_string());
            }
        };
        match variant {
            Variant::A => {
                require(max_degree >= 30_000, "Δ >= 30000");
                require(h0 as f64 <= d / 4.0, "h0 <= d/4");
                require(28.0 * ln_delta <= eta_f, "η >= 28 ln Δ");
                require(eta_f <= d / 100.0, "η <= d/100");
            }
            Variant::B => {
                require(max_degree >= 20_000, "Δ >= 20000");
                require(20.0 * ln_delta <= eta_f, "η >= 20 ln Δ");
                require(eta_f <= d / 100.0, "η <= d/100");
                require(min_degree >= h0, "δ >= h0");
                require(h0 as f64 >= 20.0 * ln_delta, "h0 >= 20 ln Δ");
                require(d >= min_degree as f64, "d >= δ");
            }
        }
        Ok(NibbleParams {
            variant,
            h,
            h0,
            d,
            eta,
            p,
            m,
            base_colours,
            max_degree,
            min_degree,
            strict: violations.is_empty(),
            strict_violations: violations,
        })
    }

    /// Witness demand the precolouring must meet: `f_[V_{<=d}](h, h0)` for A,
    /// `f_[V_{<=d}](h0, 0)` for B.
    pub fn precolouring_spec(&self, g: &Graph) -> ThresholdSpec {
        match self.variant {
            Variant::A => ThresholdSpec::low_degree(g, self.d, self.h, self.h0),
            Variant::B => ThresholdSpec::low_degree(g, self.d, self.h0, 0),
        }
    }

    /// Witness demand met after a successful run: `f_[V_{<=d}](h, h0+η)` for A,
    /// `f_[V_{<=d}](⌈h0/2⌉, η)` for B.
    pub fn target_spec(&self, g: &Graph) -> ThresholdSpec {
        match self.variant {
            Variant::A => ThresholdSpec::low_degree(g, self.d, self.h, self.h0 + self.eta),
            Variant::B => ThresholdSpec::low_degree(g, self.d, self.h0.div_ceil(2), self.eta),
        }
    }

    /// Largest colour a run can produce.
    pub fn colour_budget(&self) -> usize {
        self.base_colours as usize + self.m
    }
}

/// [`NibbleParams::new`] with `Δ` and `δ` read from `g`.
pub fn make_params(
    variant: Variant,
    h: usize,
    h0: usize,
    d: f64,
    eta: usize,
    g: &Graph,
    k: u32,
) -> Result<NibbleParams> {
    NibbleParams::new(variant, h, h0, d, eta, g.max_degree(), g.min_degree(), k)
}

/// Chooses `W(v)`: the `min(f0(v), deg(v))` lowest-indexed witnesses of `v` in `σ0`.
pub fn select_witness_sets(g: &Graph, sigma0: &Colouring, f0: &ThresholdSpec) -> Result<Vec<Vec<usize>>> {
    if sigma0.n() != g.n() || f0.n() != g.n() {
        return Err(Error::SizeMismatch {
            graph: g.n(),
            colouring: sigma0.n(),
        });
    }
    let mut tally = NeighbourhoodTally::new();
    (0..g.n())
        .map(|v| {
            let required = f0.demanded(g, v);
            let mut w = tally.witnesses(g, sigma0.as_slice(), v);
            if w.len() < required {
                return Err(Error::MissingWitnesses {
                    vertex: v,
                    available: w.len(),
                    required,
                });
            }
            w.truncate(required);
            Ok(w)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NibbleRound {
    /// Sampled set `A_i`, ascending.
    pub a: Vec<usize>,
    /// Kept set `C_i ⊆ A_i`, ascending.
    pub c: Vec<usize>,
}

/// Occurrences of the bad events of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadEvents {
    /// `v ∈ V_{>d}` with more than `deg(v)/2` neighbours in `A_1 ∪ ... ∪ A_m`.
    pub overloaded: usize,
    /// `v ∈ V_{>d}` with `X_v < η`.
    pub short_of_witnesses: usize,
    /// Variant B, `v ∈ V_{<=d}`: fewer than `min(⌈h0/2⌉, deg v)` members of `W(v)`
    /// avoid every `A_i`.
    pub reserved_lost: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NibbleOutcome {
    pub colouring: Colouring,
    /// First kept round (1-based); rounds before it are discarded.
    pub i0: usize,
    pub rounds: Vec<NibbleRound>,
    /// `X_v = Σ_{i=1..m} X_v^i` for `v ∈ V_{>d}`, zero elsewhere.
    pub x_total: Vec<usize>,
    /// `Σ_{i=i0..m} X_v^i`.
    pub x_kept: Vec<usize>,
    pub failsafe_triggers: usize,
    pub bad_events: BadEvents,
    /// No bad event occurred and the fail-safe never fired.
    pub success: bool,
    /// The final colouring meets [`NibbleParams::target_spec`] (checked by the verifier).
    pub verified: bool,
    /// Set by the restart driver according to its acceptance rule.
    pub accepted: bool,
    pub attempts: usize,
    pub seed: u64,
}

/// Condensed, serializable view of an outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NibbleSummary {
    pub attempts: usize,
    pub seed: u64,
    pub i0: usize,
    pub rounds: usize,
    pub failsafe_triggers: usize,
    pub success: bool,
    pub verified: bool,
    pub accepted: bool,
    pub bad_events: BadEvents,
    pub max_colour: u32,
    /// Histogram `X_v -> #vertices` over `V_{>d}`.
    pub x_histogram: BTreeMap<usize, usize>,
}

impl NibbleOutcome {
    pub fn x_histogram(&self, g: &Graph, params: &NibbleParams) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for v in 0..g.n() {
            if g.degree(v) as f64 > params.d {
                *hist.entry(self.x_total[v]).or_insert(0) += 1;
            }
        }
        hist
    }

    pub fn summary(&self, g: &Graph, params: &NibbleParams) -> NibbleSummary {
        NibbleSummary {
            attempts: self.attempts,
            seed: self.seed,
            i0: self.i0,
            rounds: self.rounds.len(),
            failsafe_triggers: self.failsafe_triggers,
            success: self.success,
            verified: self.verified,
            accepted: self.accepted,
            bad_events: self.bad_events,
            max_colour: self.colouring.max_colour(),
            x_histogram: self.x_histogram(g, params),
        }
    }

    /// Re-checks the structural guarantees of a run against the graph:
    /// independence of every `C_i`, disjointness of the kept sets, witness
    /// preservation (all of `W(v)` for A, `W(v)` minus sampled vertices for B),
    /// the witness gain of high-degree vertices, the colour budget and properness.
    pub fn check_invariants(&self, g: &Graph, w: &[Vec<usize>], params: &NibbleParams) -> Result<()> {
        let n = g.n();
        let fail = |msg: String| Err(Error::Invariant(msg));
        let mut owner = vec![0usize; n];
        let mut sampled = vec![false; n];
        for (idx, round) in self.rounds.iter().enumerate() {
            let i = idx + 1;
            for &u in &round.a {
                sampled[u] = true;
            }
            for &u in &round.c {
                if round.a.binary_search(&u).is_err() {
                    return fail(format!("C_{i} contains {u} which is not in A_{i}"));
                }
                if let Some(&x) = g.neighbours(u).iter().find(|&&x| round.c.binary_search(&x).is_ok()) {
                    return fail(format!("C_{i} contains the edge ({u}, {x})"));
                }
                if i >= self.i0 {
                    if owner[u] != 0 {
                        return fail(format!("vertex {u} kept in rounds {} and {i}", owner[u]));
                    }
                    owner[u] = i;
                }
            }
        }
        if !is_proper_slice(g, self.colouring.as_slice()) {
            return fail("final colouring is not proper".into());
        }
        if self.colouring.max_colour() as usize > params.colour_budget() {
            return fail(format!(
                "colour {} exceeds the budget k + m = {}",
                self.colouring.max_colour(),
                params.colour_budget()
            ));
        }
        let mut tally = NeighbourhoodTally::new();
        for v in 0..n {
            let wit = tally.witnesses(g, self.colouring.as_slice(), v);
            let is_witness = |u: &usize| wit.binary_search(u).is_ok();
            let must_survive: Vec<usize> = match params.variant {
                Variant::A => w[v].clone(),
                Variant::B => w[v].iter().copied().filter(|&u| !sampled[u]).collect(),
            };
            if let Some(u) = must_survive.iter().find(|u| !is_witness(u)) {
                return fail(format!("reserved witness {u} of {v} was lost"));
            }
            if g.degree(v) as f64 > params.d {
                let floor = match params.variant {
                    Variant::A => w[v].len() + self.x_kept[v],
                    Variant::B => self.x_kept[v],
                };
                if wit.len() < floor {
                    return fail(format!(
                        "vertex {v} has {} witnesses, fewer than the guaranteed {floor}",
                        wit.len()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One run of the nibble procedure.
///
/// `sigma0` must be proper with colours in `1..=k`; `w` are the reserved
/// witness sets, e.g. from [`select_witness_sets`].
pub fn nibble_run(
    g: &Graph,
    sigma0: &Colouring,
    w: &[Vec<usize>],
    params: &NibbleParams,
    seed: u64,
) -> Result<NibbleOutcome> {
    let n = g.n();
    if sigma0.n() != n || w.len() != n {
        return Err(Error::SizeMismatch {
            graph: n,
            colouring: sigma0.n(),
        });
    }
    if !is_proper_slice(g, sigma0.as_slice()) {
        return Err(Error::InvalidParameter("precolouring is not proper".into()));
    }
    if sigma0.max_colour() > params.base_colours {
        return Err(Error::InvalidParameter(format!(
            "precolouring uses colour {} but k = {}",
            sigma0.max_colour(),
            params.base_colours
        )));
    }
    for (v, wv) in w.iter().enumerate() {
        if let Some(u) = wv.iter().find(|&&u| !g.has_edge(v, u)) {
            return Err(Error::InvalidParameter(format!("W({v}) contains non-neighbour {u}")));
        }
        if wv.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidParameter(format!("W({v}) is not strictly increasing")));
        }
    }

    let high: Vec<bool> = (0..n).map(|v| g.degree(v) as f64 > params.d).collect();
    let blocking = blocking_neighbourhoods(g, w, params.variant);
    let block_of = |u: usize| -> &[usize] {
        match &blocking {
            Some(b) => &b[u],
            None => g.neighbours(u),
        }
    };

    // Initialisation: all A_i are drawn up front.
    let mut rng = seed::rng(seed);
    let mut rounds: Vec<NibbleRound> = (0..params.m)
        .map(|_| NibbleRound {
            a: (0..n).filter(|_| rng.gen::<f64>() < params.p).collect(),
            c: Vec::new(),
        })
        .collect();

    let mut in_a = vec![false; n];
    let mut kept = vec![false; n];
    let mut kept_list: Vec<usize> = Vec::new();
    let mut hits = vec![0usize; n];
    let mut i0 = 1;
    let mut failsafe_triggers = 0;
    for (idx, round) in rounds.iter_mut().enumerate() {
        let i = idx + 1;
        for &u in &round.a {
            in_a[u] = true;
        }
        round.c = round
            .a
            .iter()
            .copied()
            .filter(|&u| !kept[u] && !block_of(u).iter().any(|&x| in_a[x]))
            .collect();
        for &u in &round.a {
            in_a[u] = false;
        }

        let mut tripped = false;
        for &u in &round.c {
            kept[u] = true;
            kept_list.push(u);
            for &x in g.neighbours(u) {
                hits[x] += 1;
                if high[x] && 2 * hits[x] > g.degree(x) {
                    tripped = true;
                }
            }
        }
        if tripped {
            i0 = i + 1;
            failsafe_triggers += 1;
            for u in kept_list.drain(..) {
                kept[u] = false;
                for &x in g.neighbours(u) {
                    hits[x] = 0;
                }
            }
        }
    }

    let mut colours = sigma0.as_slice().to_vec();
    for (idx, round) in rounds.iter().enumerate().skip(i0 - 1) {
        let colour = params.base_colours + (idx + 1) as u32;
        for &u in &round.c {
            colours[u] = colour;
        }
    }
    let colouring = Colouring::new(colours)?;

    // X_v^i = 1 iff N(v) ∩ C_i = {u} (variant A: with u ∉ W(v)).
    let mut x_total = vec![0usize; n];
    let mut x_kept = vec![0usize; n];
    let mut count = vec![0u32; n];
    let mut last = vec![0usize; n];
    let mut touched = Vec::new();
    for (idx, round) in rounds.iter().enumerate() {
        for &u in &round.c {
            for &v in g.neighbours(u) {
                if count[v] == 0 {
                    touched.push(v);
                }
                count[v] += 1;
                last[v] = u;
            }
        }
        for v in touched.drain(..) {
            let new_witness = params.variant == Variant::B || w[v].binary_search(&last[v]).is_err();
            if high[v] && count[v] == 1 && new_witness {
                x_total[v] += 1;
                if idx + 1 >= i0 {
                    x_kept[v] += 1;
                }
            }
            count[v] = 0;
        }
    }

    let mut sampled = vec![false; n];
    for round in &rounds {
        for &u in &round.a {
            sampled[u] = true;
        }
    }
    let mut bad = BadEvents::default();
    for v in 0..n {
        if high[v] {
            let in_union = g.neighbours(v).iter().filter(|&&u| sampled[u]).count();
            bad.overloaded += (2 * in_union > g.degree(v)) as usize;
            bad.short_of_witnesses += (x_total[v] < params.eta) as usize;
        } else if params.variant == Variant::B {
            let leftover = w[v].iter().filter(|&&u| !sampled[u]).count();
            bad.reserved_lost += (leftover < params.h0.div_ceil(2).min(g.degree(v))) as usize;
        }
    }
    let success = i0 == 1 && bad.short_of_witnesses == 0 && bad.reserved_lost == 0;
    let verified = check_conflict_free(g, &colouring, &params.target_spec(g))?.all_pass;

    Ok(NibbleOutcome {
        colouring,
        i0,
        rounds,
        x_total,
        x_kept,
        failsafe_triggers,
        bad_events: bad,
        success,
        verified,
        accepted: false,
        attempts: 1,
        seed,
    })
}

/// `N(u) ∪ W(N(u)) \ {u}` for every `u` (variant A); `None` means plain `N(u)`.
fn blocking_neighbourhoods(g: &Graph, w: &[Vec<usize>], variant: Variant) -> Option<Vec<Vec<usize>>> {
    if variant == Variant::B {
        return None;
    }
    Some(
        (0..g.n())
            .map(|u| {
                let mut set: Vec<usize> = g.neighbours(u).to_vec();
                for &x in g.neighbours(u) {
                    set.extend(w[x].iter().copied().filter(|&y| y != u));
                }
                set.sort_unstable();
                set.dedup();
                set
            })
            .collect(),
    )
}

/// When the restart driver stops resampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acceptance {
    /// No bad event and no fail-safe reset (`success`).
    #[default]
    BadEventFree,
    /// The final colouring passes the target threshold spec (`verified`).
    Verified,
}

/// Resamples [`nibble_run`] until an attempt is acceptable, using seed
/// `mix(seed, t)` for attempt `t`. Exhaustion is reported through
/// `accepted == false` on the last outcome, not as an error.
pub fn restart_driver(
    g: &Graph,
    sigma0: &Colouring,
    f0: &ThresholdSpec,
    params: &NibbleParams,
    max_restarts: usize,
    seed: u64,
) -> Result<NibbleOutcome> {
    restart_driver_with(g, sigma0, f0, params, max_restarts, Acceptance::BadEventFree, seed)
}

pub fn restart_driver_with(
    g: &Graph,
    sigma0: &Colouring,
    f0: &ThresholdSpec,
    params: &NibbleParams,
    max_restarts: usize,
    acceptance: Acceptance,
    seed: u64,
) -> Result<NibbleOutcome> {
    if max_restarts == 0 {
        return Err(Error::InvalidParameter("max_restarts must be at least 1".into()));
    }
    let w = select_witness_sets(g, sigma0, f0)?;
    let mut last = None;
    for t in 0..max_restarts {
        let mut out = nibble_run(g, sigma0, &w, params, seed::mix(seed, t as u64))?;
        out.attempts = t + 1;
        if out.success && !out.verified {
            return Err(Error::Invariant(
                "bad-event-free run failed the target threshold check".into(),
            ));
        }
        out.accepted = match acceptance {
            Acceptance::BadEventFree => out.success,
            Acceptance::Verified => out.verified,
        };
        if out.accepted {
            return Ok(out);
        }
        last = Some(out);
    }
    Ok(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::witnesses;
    use crate::graph::*;
    use crate::greedy::partial_greedy;

    #[test]
    fn params_formulas() {
        let a = NibbleParams::new(Variant::A, 1, 0, 100.0, 1, 100, 1, 101).unwrap();
        assert_eq!(a.p, 1.0 / 300.0);
        assert_eq!(a.m, 66);
        let b = NibbleParams::new(Variant::B, 2, 2, 100.0, 1, 100, 1, 101).unwrap();
        assert_eq!(b.p, 1.0 / 200.0);
        assert_eq!(b.m, 22);
        assert!(!a.strict && !b.strict);

        let eta = (28.0 * 70000f64.ln()).ceil() as usize;
        let strict = NibbleParams::new(Variant::A, 1, 0, 35000.0, eta, 70000, 1, 70001).unwrap();
        assert!(strict.strict, "{:?}", strict.strict_violations);
    }

    #[test]
    fn params_reject_bad_input() {
        assert!(NibbleParams::new(Variant::A, 1, 0, 0.0, 1, 10, 1, 11).is_err());
        assert!(NibbleParams::new(Variant::A, 1, 0, -3.0, 1, 10, 1, 11).is_err());
        assert!(NibbleParams::new(Variant::A, 1, 0, 5.0, 0, 10, 1, 11).is_err());
        assert!(NibbleParams::new(Variant::A, 1, 2, 5.0, 1, 10, 1, 11).is_err());
        assert!(NibbleParams::new(Variant::B, 1, 2, 5.0, 1, 10, 1, 11).is_ok());
    }

    #[test]
    fn witness_sets() {
        let c5 = gen_cycle(5).unwrap();
        let rainbow = Colouring::new(vec![1, 2, 3, 4, 5]).unwrap();
        let f0 = ThresholdSpec::low_degree(&c5, 2.0, 1, 0);
        let w = select_witness_sets(&c5, &rainbow, &f0).unwrap();
        assert!(w.iter().all(|wv| wv.len() == 1));
        assert_eq!(w[0], vec![1]);

        let k4 = gen_complete(4);
        let rainbow = Colouring::new(vec![1, 2, 3, 4]).unwrap();
        let f0 = ThresholdSpec::low_degree(&k4, 3.0, 2, 0);
        let w = select_witness_sets(&k4, &rainbow, &f0).unwrap();
        assert_eq!(w, vec![vec![1, 2], vec![0, 2], vec![0, 1], vec![0, 1]]);

        // The centre of a star with leaves coloured 2,2,3 has exactly one witness.
        let star = gen_star(3);
        let c = Colouring::new(vec![1, 2, 2, 3]).unwrap();
        let f0 = ThresholdSpec::uniform(4, 1);
        assert_eq!(select_witness_sets(&star, &c, &f0).unwrap()[0], vec![3]);
        let f2 = ThresholdSpec::uniform(4, 2);
        assert!(matches!(
            select_witness_sets(&star, &c, &f2),
            Err(Error::MissingWitnesses { vertex: 0, available: 1, required: 2 })
        ));
    }

    #[test]
    fn no_high_degree_vertices_never_trips() {
        let g = gen_random_graph(80, 0.1, 2).unwrap();
        let delta = g.max_degree();
        // d = Δ puts every vertex in V_{<=d}, demanding h = 1 witness each.
        let (sigma0, _) = crate::greedy::greedy_hpcf(&g, 1, None).unwrap();
        let params = make_params(Variant::A, 1, 0, delta as f64, 1, &g, sigma0.max_colour()).unwrap();
        let w = select_witness_sets(&g, &sigma0, &params.precolouring_spec(&g)).unwrap();
        for s in 0..20 {
            let out = nibble_run(&g, &sigma0, &w, &params, s).unwrap();
            assert_eq!(out.failsafe_triggers, 0);
            assert_eq!(out.i0, 1);
            assert!(out.success);
            out.check_invariants(&g, &w, &params).unwrap();
        }
    }

    #[test]
    fn empty_samples_leave_the_precolouring_alone() {
        let g = gen_random_regular(40, 6, 3).unwrap();
        let (sigma0, _, f0) = partial_greedy(&g, 1).unwrap();
        let mut params = make_params(Variant::A, 1, 0, 3.0, 1, &g, 7).unwrap();
        params.p = 0.0;
        let w = select_witness_sets(&g, &sigma0, &f0).unwrap();
        let out = nibble_run(&g, &sigma0, &w, &params, 9).unwrap();
        assert!(out.rounds.iter().all(|r| r.a.is_empty() && r.c.is_empty()));
        assert_eq!(out.colouring, sigma0);
        assert!(!out.success);
    }

    #[test]
    fn variant_a_keeps_reserved_witnesses_on_c5() {
        let c5 = gen_cycle(5).unwrap();
        let rainbow = Colouring::new(vec![1, 2, 3, 4, 5]).unwrap();
        let params = make_params(Variant::A, 1, 0, 2.0, 1, &c5, 5).unwrap();
        let w = select_witness_sets(&c5, &rainbow, &params.precolouring_spec(&c5)).unwrap();
        for s in 0..200 {
            let out = nibble_run(&c5, &rainbow, &w, &params, s).unwrap();
            out.check_invariants(&c5, &w, &params).unwrap();
            for v in 0..5 {
                let wit = witnesses(&c5, &out.colouring, v).unwrap();
                assert!(w[v].iter().all(|u| wit.contains(u)));
            }
        }
    }

    #[test]
    fn driver_rejects_zero_restarts() {
        let c5 = gen_cycle(5).unwrap();
        let rainbow = Colouring::new(vec![1, 2, 3, 4, 5]).unwrap();
        let params = make_params(Variant::A, 1, 0, 2.0, 1, &c5, 5).unwrap();
        let f0 = params.precolouring_spec(&c5);
        assert!(restart_driver(&c5, &rainbow, &f0, &params, 0, 1).is_err());
        let out = restart_driver(&c5, &rainbow, &f0, &params, 3, 1).unwrap();
        assert!(out.attempts >= 1 && out.attempts <= 3);
    }

    #[test]
    fn rejects_improper_or_oversized_precolouring() {
        let g = gen_path(3);
        let params = make_params(Variant::B, 1, 0, 1.0, 1, &g, 2).unwrap();
        let w = vec![vec![]; 3];
        let bad = Colouring::new(vec![1, 1, 2]).unwrap();
        assert!(nibble_run(&g, &bad, &w, &params, 0).is_err());
        let wide = Colouring::new(vec![1, 2, 3]).unwrap();
        assert!(nibble_run(&g, &wide, &w, &params, 0).is_err());
    }
}
