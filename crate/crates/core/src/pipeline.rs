//! End-to-end h-pcf colouring pipelines, closed-form colour bounds, and the
//! per-vertex counting check relating odd and solitary colours.
//!
//! * [`hpcf_colour`]: partial greedy precolouring with `hΔ+1` colours, then a
//!   witness-preserving nibble (variant A) that tops up high-degree vertices.
//! * [`hpcf_colour_mindeg`]: random `(Δ+3d)`-precolouring with `d = ⌈3√(hΔ)⌉`,
//!   then the cheaper nibble (variant B) with `h0 = 2h`, `η = h`.
//!
//! Every returned colouring has passed the h-pcf verifier.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colouring::{check_conflict_free, NeighbourhoodTally, ThresholdSpec};
use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::greedy::{greedy_hpcf, partial_greedy, partial_threshold};
use crate::mindeg::{precolour_mindeg, MindegConfig};
use crate::nibble::{make_params, restart_driver_with, Acceptance, NibbleParams, Variant};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundName {
    /// `(h+1)Δ + 1`
    Greedy,
    /// `(h+1)Δ - 1`
    Cho,
    /// `hΔ + 700(h+5) ln Δ`
    Cor13,
    /// `Δ + 17√(hΔ)`
    Cor17,
    /// `Δ + 30hΔ/δ`
    Kamyczura,
}

impl BoundName {
    pub const ALL: [BoundName; 5] = [
        BoundName::Greedy,
        BoundName::Cho,
        BoundName::Cor13,
        BoundName::Cor17,
        BoundName::Kamyczura,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Greedy => "greedy",
            BoundName::Cho => "cho",
            BoundName::Cor13 => "cor13",
            BoundName::Cor17 => "cor17",
            BoundName::Kamyczura => "kamyczura",
        }
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound {s:?}")))
    }
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed-form colour bound; `min_degree` is only read by [`BoundName::Kamyczura`].
pub fn bound_value(name: BoundName, h: usize, max_degree: usize, min_degree: usize) -> Result<f64> {
    bound_formula(name, h as f64, max_degree as f64, min_degree as f64)
}

/// [`bound_value`] over real arguments; natural logarithm throughout.
pub fn bound_formula(name: BoundName, h: f64, delta: f64, min_degree: f64) -> Result<f64> {
    if !(h > 0.0 && delta > 0.0) {
        return Err(Error::InvalidParameter("h and Δ must be positive".into()));
    }
    Ok(match name {
        BoundName::Greedy => (h + 1.0) * delta + 1.0,
        BoundName::Cho => (h + 1.0) * delta - 1.0,
        BoundName::Cor13 => h * delta + 700.0 * (h + 5.0) * delta.ln(),
        BoundName::Cor17 => delta + 17.0 * (h * delta).sqrt(),
        BoundName::Kamyczura => {
            if min_degree <= 0.0 {
                return Err(Error::InvalidParameter("δ must be positive".into()));
            }
            delta + 30.0 * h * delta / min_degree
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Scaled-down parameters; acceptance is the final verifier pass.
    #[default]
    Desk,
    /// Parameters exactly as in the existence arguments; hypotheses enforced.
    Strict,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Mode::Desk),
            "strict" => Ok(Mode::Strict),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub mode: Mode,
    /// Overrides the default `η` of the nibble stage.
    pub eta: Option<usize>,
    /// Restart budget of each randomized stage.
    pub max_restarts: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            mode: Mode::Desk,
            eta: None,
            max_restarts: 20,
        }
    }
}

impl PipelineConfig {
    fn acceptance(&self) -> Acceptance {
        match self.mode {
            Mode::Desk => Acceptance::Verified,
            Mode::Strict => Acceptance::BadEventFree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_name: BoundName,
    /// Stages actually run, e.g. `partial-greedy+nibble-A`.
    pub algorithm: String,
    pub h: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub d: Option<f64>,
    pub eta: Option<usize>,
    pub bound_value: f64,
    pub achieved_colours: usize,
    /// `achieved_colours <= ⌊bound_value⌋`.
    pub within_bound: bool,
    pub strict_hypotheses_met: bool,
    pub attempts: usize,
    pub warnings: Vec<String>,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        bound_name: BoundName,
        algorithm: &str,
        g: &Graph,
        h: usize,
        d: Option<f64>,
        eta: Option<usize>,
        colouring: &Colouring,
        strict_hypotheses_met: bool,
        attempts: usize,
        warnings: Vec<String>,
    ) -> Result<Self> {
        let bound = bound_value(bound_name, h, g.max_degree().max(1), g.min_degree())?;
        let achieved = colouring.max_colour() as usize;
        Ok(BoundReport {
            bound_name,
            algorithm: algorithm.to_string(),
            h,
            max_degree: g.max_degree(),
            min_degree: g.min_degree(),
            d,
            eta,
            bound_value: bound,
            achieved_colours: achieved,
            within_bound: achieved as f64 <= bound.floor(),
            strict_hypotheses_met,
            attempts,
            warnings,
        })
    }
}

/// Default nibble `η` at desk scale: `max(1, min(η_full, ⌊d/100⌋, 5))`.
pub fn desk_eta(eta_full: usize, d: f64) -> usize {
    eta_full.min((d / 100.0).floor() as usize).clamp(1, 5)
}

fn ceil_28_ln(max_degree: usize) -> usize {
    ((28.0 * (max_degree as f64).ln()).ceil() as usize).max(1)
}

fn verify_hpcf(g: &Graph, c: &Colouring, h: usize) -> Result<()> {
    let report = check_conflict_free(g, c, &ThresholdSpec::uniform(g.n(), h))?;
    if report.all_pass {
        Ok(())
    } else {
        let bad: Vec<usize> = report.failing().map(|r| r.vertex).take(10).collect();
        Err(Error::Invariant(format!("pipeline output is not {h}-pcf at vertices {bad:?}")))
    }
}

fn check_h(h: usize) -> Result<()> {
    if h == 0 {
        Err(Error::InvalidParameter("h must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Parameters of the variant A stage for `(h, Δ)`: `k = hΔ+1`,
/// `d = hΔ/(h+1)`, `h0 = h-1`, and `η` from `eta`.
pub fn cor13_params(h: usize, max_degree: usize, min_degree: usize, eta: usize) -> Result<NibbleParams> {
    NibbleParams::new(
        Variant::A,
        h,
        h - 1,
        partial_threshold(h, max_degree),
        eta,
        max_degree,
        min_degree,
        (h * max_degree + 1) as u32,
    )
}

/// h-pcf colouring within `hΔ + 700(h+5) ln Δ` colours (for large `Δ`).
///
/// When `8h > Δ` plain greedy already meets that bound and is used instead.
pub fn hpcf_colour(g: &Graph, h: usize, seed: u64, config: &PipelineConfig) -> Result<(Colouring, BoundReport)> {
    check_h(h)?;
    let delta = g.max_degree();
    if delta == 0 || 8 * h > delta {
        if config.mode == Mode::Strict {
            return Err(Error::InvalidParameter(format!("strict mode needs h <= Δ/8, got h = {h}, Δ = {delta}")));
        }
        let (c, _) = greedy_hpcf(g, h, None)?;
        verify_hpcf(g, &c, h)?;
        let warnings = vec![format!("h = {h} > Δ/8: greedy fallback")];
        let report = BoundReport::new(BoundName::Cor13, "greedy", g, h, None, None, &c, false, 1, warnings)?;
        return Ok((c, report));
    }

    let (sigma0, _, spec0) = partial_greedy(g, h)?;
    let d = partial_threshold(h, delta);
    let eta_full = ceil_28_ln(delta);
    let eta = config.eta.unwrap_or(match config.mode {
        Mode::Desk => desk_eta(eta_full, d),
        Mode::Strict => eta_full,
    });
    let params = cor13_params(h, delta, g.min_degree(), eta)?;
    let mut warnings = params.strict_violations.clone();
    if config.mode == Mode::Strict && !params.strict {
        return Err(Error::InvalidParameter(format!(
            "strict hypotheses violated: {}",
            warnings.join("; ")
        )));
    }
    let out = restart_driver_with(
        g,
        &sigma0,
        &spec0,
        &params,
        config.max_restarts,
        config.acceptance(),
        seed::mix(seed, 1),
    )?;
    if !out.accepted {
        return Err(Error::RestartsExhausted { attempts: out.attempts });
    }
    verify_hpcf(g, &out.colouring, h)?;
    if out.i0 > 0 {
        warnings.push(format!("fail-safe discarded {} rounds", out.i0));
    }
    let report = BoundReport::new(
        BoundName::Cor13,
        "partial-greedy+nibble-A",
        g,
        h,
        Some(d),
        Some(eta),
        &out.colouring,
        params.strict,
        out.attempts,
        warnings,
    )?;
    Ok((out.colouring, report))
}

/// Degree threshold `⌈3√(hΔ)⌉` of the minimum-degree pipeline.
pub fn cor17_threshold(h: usize, max_degree: usize) -> usize {
    (3.0 * ((h * max_degree) as f64).sqrt()).ceil() as usize
}

/// Hypotheses under which the minimum-degree pipeline is guaranteed to work.
pub fn cor17_violations(h: usize, max_degree: usize, min_degree: usize) -> Vec<String> {
    let (hf, delta, dmin) = (h as f64, max_degree as f64, min_degree as f64);
    let ln_delta = delta.ln();
    let mut v = Vec::new();
    if max_degree < 40_000 {
        v.push("Δ >= 40000".to_string());
    }
    if dmin < 3000.0 * ln_delta {
        v.push("δ >= 3000 ln Δ".to_string());
    }
    if hf < 20.0 * ln_delta {
        v.push("h >= 20 ln Δ".to_string());
    }
    if hf > dmin / 100.0 {
        v.push("h <= δ/100".to_string());
    }
    if dmin > (hf * delta).sqrt() {
        v.push("δ <= √(hΔ)".to_string());
    }
    v
}

/// h-pcf colouring within `Δ + 17√(hΔ)` colours for graphs of large minimum degree.
pub fn hpcf_colour_mindeg(
    g: &Graph,
    h: usize,
    seed: u64,
    config: &PipelineConfig,
) -> Result<(Colouring, BoundReport)> {
    check_h(h)?;
    let (delta, min_deg) = (g.max_degree(), g.min_degree());
    if delta == 0 {
        return Err(Error::InvalidParameter("the graph has no edges".into()));
    }
    let violations = cor17_violations(h, delta, min_deg);
    let strict = config.mode == Mode::Strict;
    if strict && !violations.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "strict hypotheses violated: {}",
            violations.join("; ")
        )));
    }
    let mut d = cor17_threshold(h, delta);
    if !strict {
        d = d.clamp(min_deg, delta);
    } else if d > delta {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds Δ = {delta}")));
    }
    let mut warnings = violations;

    let mindeg_config = MindegConfig {
        max_restarts: config.max_restarts,
        sweeps: None,
        strict,
    };
    let pre = precolour_mindeg(g, h, d, seed::mix(seed, 1), &mindeg_config)?;
    warnings.extend(pre.warnings.iter().cloned());

    let eta = config.eta.unwrap_or(h);
    let params = make_params(Variant::B, h, 2 * h, d as f64, eta, g, pre.k)?;
    let out = restart_driver_with(
        g,
        &pre.colouring,
        &pre.spec,
        &params,
        config.max_restarts,
        config.acceptance(),
        seed::mix(seed, 2),
    )?;
    if !out.accepted {
        return Err(Error::RestartsExhausted { attempts: out.attempts });
    }
    verify_hpcf(g, &out.colouring, h)?;
    let report = BoundReport::new(
        BoundName::Cor17,
        "mindeg+nibble-B",
        g,
        h,
        Some(d as f64),
        Some(eta),
        &out.colouring,
        warnings.is_empty() && params.strict,
        pre.attempts + out.attempts,
        warnings,
    )?;
    Ok((out.colouring, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddPcfCheck {
    pub solitary: usize,
    pub odd: usize,
    /// `⌈(3·odd - deg)/2⌉`, possibly negative.
    pub lower_bound: i64,
    /// `solitary >= lower_bound`.
    pub ok: bool,
}

/// Checks `solitary(v) >= ⌈(3·odd(v) - deg(v))/2⌉`: odd colours that are not
/// solitary occur at least three times each, so they use at least
/// `3(odd - solitary)` of the `deg - solitary` remaining neighbours.
pub fn odd_to_pcf_check(g: &Graph, c: &Colouring, v: usize) -> Result<OddPcfCheck> {
    g.check_vertex(v)?;
    if c.n() != g.n() {
        return Err(Error::SizeMismatch {
            graph: g.n(),
            colouring: c.n(),
        });
    }
    let s = NeighbourhoodTally::new().summary(g, c.as_slice(), v);
    let numerator = 3 * s.odd as i64 - g.degree(v) as i64;
    let lower_bound = numerator.div_euclid(2) + numerator.rem_euclid(2);
    Ok(OddPcfCheck {
        solitary: s.solitary,
        odd: s.odd,
        lower_bound,
        ok: s.solitary as i64 >= lower_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticCheck {
    pub h: usize,
    pub max_degree: usize,
    pub k: usize,
    pub d: f64,
    pub eta: usize,
    pub m: usize,
    /// `k + m`.
    pub colours: usize,
    pub bound: f64,
    pub holds: bool,
}

/// `k + m <= hΔ + 700(h+5) ln Δ` with the full-scale parameters of
/// [`hpcf_colour`] (`η = ⌈28 ln Δ⌉`).
pub fn cor13_arithmetic(h: usize, max_degree: usize) -> Result<ArithmeticCheck> {
    check_h(h)?;
    let eta = ceil_28_ln(max_degree);
    let params = cor13_params(h, max_degree, 1, eta)?;
    let colours = params.colour_budget();
    let bound = bound_value(BoundName::Cor13, h, max_degree, 1)?;
    Ok(ArithmeticCheck {
        h,
        max_degree,
        k: params.base_colours as usize,
        d: params.d,
        eta,
        m: params.m,
        colours,
        bound,
        holds: colours as f64 <= bound,
    })
}

/// `k + m <= Δ + 17√(hΔ)` with `k = Δ + 3d`, `d = ⌈3√(hΔ)⌉`, `η = h`.
pub fn cor17_arithmetic(h: usize, max_degree: usize) -> Result<ArithmeticCheck> {
    check_h(h)?;
    let d = cor17_threshold(h, max_degree);
    let k = max_degree + 3 * d;
    let params = NibbleParams::new(Variant::B, h, 2 * h, d as f64, h, max_degree, 1, k as u32)?;
    let colours = params.colour_budget();
    let bound = bound_value(BoundName::Cor17, h, max_degree, 1)?;
    Ok(ArithmeticCheck {
        h,
        max_degree,
        k,
        d: d as f64,
        eta: h,
        m: params.m,
        colours,
        bound,
        holds: colours as f64 <= bound,
    })
}

/// Runs `run` for `h = 1..=h_max` and warns wherever the colour count drops
/// as `h` grows (the true chromatic numbers are monotone in `h`).
pub fn monotonicity_warnings<F>(h_max: usize, mut run: F) -> Result<Vec<String>>
where
    F: FnMut(usize) -> Result<usize>,
{
    let mut warnings = Vec::new();
    let mut previous: Option<usize> = None;
    for h in 1..=h_max {
        let colours = run(h)?;
        if let Some(p) = previous {
            if colours < p {
                warnings.push(format!("h = {h} used {colours} colours, fewer than {p} at h = {}", h - 1));
            }
        }
        previous = Some(colours);
    }
    Ok(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::is_proper;
    use crate::graph::*;

    #[test]
    fn bound_examples() {
        assert_eq!(bound_value(BoundName::Greedy, 1, 2, 1).unwrap(), 5.0);
        assert_eq!(bound_value(BoundName::Cho, 1, 2, 1).unwrap(), 3.0);
        assert_eq!(bound_value(BoundName::Cor17, 4, 100, 1).unwrap(), 440.0);
        assert_eq!(bound_value(BoundName::Kamyczura, 1, 100, 50).unwrap(), 160.0);
        let e = std::f64::consts::E;
        let v = bound_formula(BoundName::Cor13, 1.0, e, 1.0).unwrap();
        assert!((v - (e + 4200.0)).abs() < 1e-9);
        assert!(bound_value(BoundName::Kamyczura, 1, 5, 0).is_err());
        assert!(bound_value(BoundName::Greedy, 0, 5, 1).is_err());
        assert_eq!("cor17".parse::<BoundName>().unwrap(), BoundName::Cor17);
        assert!("nope".parse::<BoundName>().is_err());
    }

    #[test]
    fn desk_eta_floor() {
        assert_eq!(desk_eta(300, 30.0), 1);
        assert_eq!(desk_eta(300, 250.0), 2);
        assert_eq!(desk_eta(300, 5000.0), 5);
        assert_eq!(desk_eta(3, 5000.0), 3);
    }

    #[test]
    fn small_graphs_fall_back_to_greedy() {
        let c5 = gen_cycle(5).unwrap();
        let (c, report) = hpcf_colour(&c5, 1, 3, &PipelineConfig::default()).unwrap();
        assert!(is_proper(&c5, &c).unwrap());
        assert_eq!(report.algorithm, "greedy");
        assert!(report.within_bound);
        let strict = PipelineConfig {
            mode: Mode::Strict,
            ..PipelineConfig::default()
        };
        assert!(hpcf_colour(&c5, 1, 3, &strict).is_err());
        assert!(hpcf_colour(&c5, 0, 3, &PipelineConfig::default()).is_err());
        let (c, _) = hpcf_colour(&Graph::empty(4), 2, 0, &PipelineConfig::default()).unwrap();
        assert_eq!(c.max_colour(), 1);
    }

    #[test]
    fn random_graph_runs_the_nibble() {
        let g = gen_random_graph(500, 0.09, 21).unwrap();
        let config = PipelineConfig {
            eta: Some(2),
            ..PipelineConfig::default()
        };
        let (c, report) = hpcf_colour(&g, 1, 5, &config).unwrap();
        assert_eq!(report.algorithm, "partial-greedy+nibble-A");
        let delta = g.max_degree();
        let params = cor13_params(1, delta, g.min_degree(), 2).unwrap();
        assert!(report.achieved_colours <= delta + 1 + params.m);
        assert!(!report.strict_hypotheses_met);
        verify_hpcf(&g, &c, 1).unwrap();
    }

    #[test]
    fn mindeg_pipeline_runs() {
        let k4 = gen_complete(4);
        let (c, report) = hpcf_colour_mindeg(&k4, 1, 1, &PipelineConfig::default()).unwrap();
        verify_hpcf(&k4, &c, 1).unwrap();
        assert!(!report.strict_hypotheses_met);

        let g = gen_random_regular(400, 60, 2).unwrap();
        let (c, report) = hpcf_colour_mindeg(&g, 2, 9, &PipelineConfig::default()).unwrap();
        verify_hpcf(&g, &c, 2).unwrap();
        let d = report.d.unwrap();
        let params = make_params(Variant::B, 2, 4, d, report.eta.unwrap(), &g, (60 + 3 * d as usize) as u32).unwrap();
        assert!(report.achieved_colours <= params.colour_budget());
    }

    #[test]
    fn odd_to_pcf_examples() {
        // Star centre 0 with leaf colours given after the centre's colour.
        let star = gen_star(5);
        let check = |leaves: &[u32]| {
            let mut colours = vec![9];
            colours.extend_from_slice(leaves);
            odd_to_pcf_check(&star, &Colouring::new(colours).unwrap(), 0).unwrap()
        };
        let r = check(&[1, 2, 3, 4, 5]);
        assert_eq!((r.solitary, r.odd, r.lower_bound, r.ok), (5, 5, 5, true));
        let r = check(&[1, 1, 1, 2, 3]);
        assert_eq!((r.solitary, r.odd, r.lower_bound, r.ok), (2, 3, 2, true));

        let p3 = gen_path(3);
        let r = odd_to_pcf_check(&p3, &Colouring::new(vec![1, 2, 1]).unwrap(), 1).unwrap();
        assert_eq!((r.solitary, r.odd, r.ok), (0, 0, true));
        assert!(r.lower_bound <= 0);
        assert!(odd_to_pcf_check(&p3, &Colouring::new(vec![1, 2, 1]).unwrap(), 3).is_err());
    }

    #[test]
    fn arithmetic_checks() {
        assert!(cor13_arithmetic(1, 70_000).unwrap().holds);
        assert!(cor13_arithmetic(8750, 70_000).unwrap().holds);
        let c = cor17_arithmetic(300, 40_000).unwrap();
        assert!(c.holds, "{c:?}");
    }

    #[test]
    fn monotonicity_harness() {
        let w = monotonicity_warnings(3, |h| Ok([5, 4, 6][h - 1])).unwrap();
        assert_eq!(w.len(), 1);
        assert!(monotonicity_warnings(3, Ok).unwrap().is_empty());
    }
}
