use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use pcf::colouring::{check_conflict_free, check_odd, ThresholdSpec, WitnessReport};
use pcf::graph::{self, Graph, Subdivide};
use pcf::greedy::{greedy_hpcf, greedy_hpcf_degenerate, partial_greedy, partial_threshold};
use pcf::mindeg::{precolour_mindeg, MindegConfig};
use pcf::nibble::{make_params, restart_driver_with, Acceptance, NibbleSummary, Variant};
use pcf::oracle::{exact_chi, SearchBudget, SearchResult, Target};
use pcf::pipeline::{
    bound_value, cor17_threshold, hpcf_colour, hpcf_colour_mindeg, BoundName, BoundReport, Mode, PipelineConfig,
};
use pcf::probtools::{
    binomial_cdf, binomial_double_upper, binomial_half_lower, binomial_sf, binomial_tail_upper, chernoff_lower,
    chernoff_upper, dominance_mc, BernoulliProcess, DominanceReport, TailBound,
};
use pcf::Colouring;

use crate::output::{emit, read_colouring, read_graph, read_text, resolve_seed, write_out, CliError, CliResult, Format};
use crate::{
    AcceptanceArg, ColourArgs, GenArgs, GraphKind, GreedyAlgo, NibbleArgs, OracleArgs, PipelineArgs, PipelineKind,
    PrecolourArgs, ProbArgs, ProbQuery, ProcessArg, TargetArg, VariantArg, VerifyArgs,
};

fn parse_edge_list(s: &str) -> CliResult<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t
                .trim()
                .split_once('-')
                .ok_or_else(|| CliError::BadInput(format!("edge {t:?} is not of the form u-v")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::BadInput(format!("bad vertex {x:?} in edge {t:?}")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

pub fn gen(a: &GenArgs, out: Option<&Path>) -> CliResult<()> {
    let g = match a.kind {
        GraphKind::Cycle => graph::gen_cycle(a.n)?,
        GraphKind::Path => graph::gen_path(a.n),
        GraphKind::Complete => graph::gen_complete(a.n),
        GraphKind::Star => graph::gen_star(a.n),
        GraphKind::Petersen => graph::gen_petersen(),
        GraphKind::Subdivided => {
            let which = match &a.edges {
                Some(list) => Subdivide::Edges(parse_edge_list(list)?),
                None => Subdivide::All,
            };
            graph::gen_subdivided_complete(a.n, &which)?
        }
        GraphKind::Random => graph::gen_random_graph(a.n, a.p, resolve_seed(a.seed.seed)?)?,
        GraphKind::Tree => graph::gen_random_tree(a.n, resolve_seed(a.seed.seed)?),
        GraphKind::Regular => graph::gen_random_regular(a.n, a.d, resolve_seed(a.seed.seed)?)?,
    };
    write_out(&g.to_dimacs(), out)
}

#[derive(Serialize)]
struct ColourDoc {
    command: &'static str,
    algorithm: &'static str,
    h: usize,
    n: usize,
    max_degree: usize,
    /// Back-degree bound of the ordering (degenerate only).
    degeneracy: Option<usize>,
    /// Degree threshold of the low-degree class (partial only).
    threshold: Option<f64>,
    bound: f64,
    colours_used: usize,
    max_colour: u32,
    within_bound: bool,
    verified: bool,
    colouring: Colouring,
}

fn read_ordering(path: &Path) -> CliResult<Vec<usize>> {
    read_text(path)?
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::BadInput(format!("{}: bad vertex {t:?}", path.display())))
        })
        .collect()
}

fn verification_gate(ok: bool, what: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(what.to_string()))
    }
}

pub fn colour(a: &ColourArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let (h, delta) = (a.h, g.max_degree());
    let ordering = a.ordering.as_deref().map(read_ordering).transpose()?;
    if ordering.is_some() && a.algo != GreedyAlgo::Greedy {
        return Err(CliError::BadInput("--ordering applies to --algo greedy only".into()));
    }
    let (algorithm, c, spec, bound, degeneracy, threshold) = match a.algo {
        GreedyAlgo::Greedy => {
            let (c, _) = greedy_hpcf(&g, h, ordering.as_deref())?;
            ("greedy", c, ThresholdSpec::uniform(g.n(), h), (h + 1) * delta + 1, None, None)
        }
        GreedyAlgo::Degenerate => {
            let (order, _) = g.degeneracy_ordering();
            let (c, _, d) = greedy_hpcf_degenerate(&g, h, &order)?;
            ("degenerate", c, ThresholdSpec::uniform(g.n(), h), h * delta + d + 1, Some(d), None)
        }
        GreedyAlgo::Partial => {
            let (c, _, spec) = partial_greedy(&g, h)?;
            ("partial", c, spec, h * delta + 1, None, Some(partial_threshold(h, delta)))
        }
    };
    let verified = check_conflict_free(&g, &c, &spec)?.all_pass;
    let doc = ColourDoc {
        command: "colour",
        algorithm,
        h,
        n: g.n(),
        max_degree: delta,
        degeneracy,
        threshold,
        bound: bound as f64,
        colours_used: c.colours_used(),
        max_colour: c.max_colour(),
        within_bound: c.max_colour() as usize <= bound,
        verified,
        colouring: c,
    };
    emit(&doc, fmt, out)?;
    verification_gate(doc.verified && doc.within_bound, "greedy output failed its check")
}

#[derive(Serialize)]
struct PrecolourDoc {
    command: &'static str,
    seed: u64,
    h: usize,
    d: usize,
    k: u32,
    attempts: usize,
    warnings: Vec<String>,
    max_colour: u32,
    verified: bool,
    colouring: Colouring,
}

fn default_mindeg_threshold(g: &Graph, h: usize) -> usize {
    cor17_threshold(h, g.max_degree()).clamp(g.min_degree(), g.max_degree())
}

pub fn precolour(a: &PrecolourArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let seed = resolve_seed(a.seed.seed)?;
    let d = a.d.unwrap_or_else(|| default_mindeg_threshold(&g, a.h));
    let config = MindegConfig {
        max_restarts: a.max_restarts,
        sweeps: a.sweeps,
        strict: a.strict,
    };
    let res = precolour_mindeg(&g, a.h, d, seed, &config)?;
    let verified = check_conflict_free(&g, &res.colouring, &res.spec)?.all_pass;
    let doc = PrecolourDoc {
        command: "precolour",
        seed,
        h: a.h,
        d,
        k: res.k,
        attempts: res.attempts,
        warnings: res.warnings,
        max_colour: res.colouring.max_colour(),
        verified,
        colouring: res.colouring,
    };
    emit(&doc, fmt, out)?;
    verification_gate(doc.verified, "precolouring failed its threshold check")
}

#[derive(Serialize)]
struct NibbleDoc {
    command: &'static str,
    variant: String,
    h: usize,
    h0: usize,
    d: f64,
    eta: usize,
    p: f64,
    m: usize,
    k: u32,
    strict: bool,
    strict_violations: Vec<String>,
    summary: NibbleSummary,
    colouring: Colouring,
}

pub fn nibble(a: &NibbleArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let seed = resolve_seed(a.seed.seed)?;
    let delta = g.max_degree();
    let supplied = a.precolouring.as_deref().map(read_colouring).transpose()?;
    let (variant, sigma0, h0, d, k) = match a.variant {
        VariantArg::A => {
            if a.h == 0 {
                return Err(CliError::BadInput("h must be at least 1".into()));
            }
            let h0 = a.h0.unwrap_or(a.h - 1);
            let d = a.d.unwrap_or_else(|| partial_threshold(a.h, delta));
            let sigma0 = match supplied {
                Some(c) => c,
                None => partial_greedy(&g, a.h)?.0,
            };
            let k = a.k.unwrap_or_else(|| sigma0.max_colour().max((a.h * delta + 1) as u32));
            (Variant::A, sigma0, h0, d, k)
        }
        VariantArg::B => {
            let h0 = a.h0.unwrap_or(2 * a.h);
            let d = a.d.unwrap_or_else(|| default_mindeg_threshold(&g, h0.div_ceil(2)) as f64);
            match supplied {
                Some(c) => {
                    let k = a.k.unwrap_or_else(|| c.max_colour());
                    (Variant::B, c, h0, d, k)
                }
                None => {
                    let pre = precolour_mindeg(
                        &g,
                        h0.div_ceil(2),
                        d.floor() as usize,
                        pcf::seed::mix(seed, 1),
                        &MindegConfig::default(),
                    )?;
                    (Variant::B, pre.colouring, h0, d, pre.k)
                }
            }
        }
    };
    if sigma0.max_colour() > k {
        return Err(CliError::BadInput(format!(
            "precolouring uses colour {} above k = {k}",
            sigma0.max_colour()
        )));
    }
    let params = make_params(variant, a.h, h0, d, a.eta, &g, k)?;
    let acceptance = match a.acceptance {
        AcceptanceArg::BadEventFree => Acceptance::BadEventFree,
        AcceptanceArg::Verified => Acceptance::Verified,
    };
    let f0 = params.precolouring_spec(&g);
    let res = restart_driver_with(&g, &sigma0, &f0, &params, a.max_restarts, acceptance, seed)?;
    let accepted = res.accepted;
    let doc = NibbleDoc {
        command: "nibble",
        variant: format!("{variant:?}"),
        h: a.h,
        h0,
        d,
        eta: a.eta,
        p: params.p,
        m: params.m,
        k,
        strict: params.strict,
        strict_violations: params.strict_violations.clone(),
        summary: res.summary(&g, &params),
        colouring: res.colouring,
    };
    emit(&doc, fmt, out)?;
    if accepted {
        Ok(())
    } else {
        Err(CliError::Exhausted(format!("no acceptable run within {} restarts", a.max_restarts)))
    }
}

#[derive(Serialize)]
struct PipelineDoc {
    command: &'static str,
    pipeline: &'static str,
    seed: u64,
    mode: Mode,
    report: BoundReport,
    colouring: Colouring,
}

pub fn pipeline(a: &PipelineArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let seed = resolve_seed(a.seed.seed)?;
    let config = PipelineConfig {
        mode: if a.strict { Mode::Strict } else { Mode::Desk },
        eta: a.eta,
        max_restarts: a.max_restarts,
    };
    let (name, (colouring, report)) = match a.kind {
        PipelineKind::Cor13 => ("cor13", hpcf_colour(&g, a.h, seed, &config)?),
        PipelineKind::Cor17 => ("cor17", hpcf_colour_mindeg(&g, a.h, seed, &config)?),
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let doc = PipelineDoc {
        command: "pipeline",
        pipeline: name,
        seed,
        mode: config.mode,
        report,
        colouring,
    };
    emit(&doc, fmt, out)
}

#[derive(Serialize)]
struct VerifyDoc {
    command: &'static str,
    target: &'static str,
    h: usize,
    report: WitnessReport,
}

pub fn verify(a: &VerifyArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let c = read_colouring(&a.colouring)?;
    let spec = match a.low_degree {
        Some(d) => ThresholdSpec::low_degree(&g, d, a.h, a.h_outside),
        None => ThresholdSpec::uniform(g.n(), a.h),
    };
    let (target, report) = match a.target {
        TargetArg::Pcf => ("pcf", check_conflict_free(&g, &c, &spec)?),
        TargetArg::Odd => ("odd", check_odd(&g, &c, &spec)?),
    };
    let pass = report.all_pass;
    emit(
        &VerifyDoc {
            command: "verify",
            target,
            h: a.h,
            report,
        },
        fmt,
        out,
    )?;
    verification_gate(pass, "colouring does not meet the demand")
}

#[derive(Serialize)]
struct OracleDoc {
    command: &'static str,
    target: Target,
    h: usize,
    n: usize,
    result: SearchResult,
}

pub fn oracle(a: &OracleArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    let g = read_graph(&a.graph)?;
    let target = match a.target {
        TargetArg::Pcf => Target::Pcf,
        TargetArg::Odd => Target::Odd,
    };
    let time_limit = match a.timeout {
        Some(t) if t.is_finite() && t >= 0.0 => Some(Duration::from_secs_f64(t)),
        Some(t) => return Err(CliError::BadInput(format!("bad timeout {t}"))),
        None => None,
    };
    let budget = SearchBudget {
        max_nodes: a.max_nodes,
        time_limit,
    };
    let result = exact_chi(&g, a.h, target, budget)?;
    let exhausted = result.value().is_none();
    emit(
        &OracleDoc {
            command: "oracle",
            target,
            h: a.h,
            n: g.n(),
            result,
        },
        fmt,
        out,
    )?;
    if exhausted {
        Err(CliError::Exhausted("search budget ran out".into()))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct BoundDoc {
    command: &'static str,
    query: &'static str,
    parameters: serde_json::Value,
    bound: f64,
    probability: f64,
    vacuous: bool,
    /// Exact tail probability the bound is compared with, where defined.
    exact: Option<f64>,
    holds: Option<bool>,
}

fn bound_doc(query: &'static str, parameters: serde_json::Value, b: TailBound, exact: Option<f64>) -> BoundDoc {
    BoundDoc {
        command: "prob",
        query,
        parameters,
        bound: b.raw,
        probability: b.probability(),
        vacuous: b.is_vacuous(),
        exact,
        holds: exact.map(|e| e <= b.raw),
    }
}

#[derive(Serialize)]
struct DominanceDoc {
    command: &'static str,
    query: &'static str,
    seed: u64,
    report: DominanceReport,
}

pub fn prob(a: &ProbArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    use serde_json::json;
    let docs = match a.query {
        ProbQuery::ChernoffLower { mu, delta } => vec![bound_doc(
            "chernoff-lower",
            json!({"mu": mu, "delta": delta}),
            chernoff_lower(mu, delta)?,
            None,
        )],
        ProbQuery::ChernoffUpper { mu, delta } => vec![bound_doc(
            "chernoff-upper",
            json!({"mu": mu, "delta": delta}),
            chernoff_upper(mu, delta)?,
            None,
        )],
        ProbQuery::Tail { n, p, t } => vec![bound_doc(
            "tail",
            json!({"n": n, "p": p, "t": t}),
            binomial_tail_upper(n, p, t)?,
            Some(binomial_sf(n, p, t)?),
        )],
        ProbQuery::Binomial { n, p } => {
            let mu = n as f64 * p;
            let half = (mu / 2.0 + 1e-9).floor() as u64;
            let double = (2.0 * mu - 1e-9).ceil().max(0.0) as u64;
            vec![
                bound_doc(
                    "binomial-half",
                    json!({"n": n, "p": p, "t": half}),
                    binomial_half_lower(n, p)?,
                    Some(binomial_cdf(n, p, half)?),
                ),
                bound_doc(
                    "binomial-double",
                    json!({"n": n, "p": p, "t": double}),
                    binomial_double_upper(n, p)?,
                    Some(binomial_sf(n, p, double)?),
                ),
            ]
        }
        ProbQuery::Dominance {
            process,
            n,
            p,
            trials,
            seed,
        } => {
            let seed = resolve_seed(seed.seed)?;
            let process = match process {
                ProcessArg::Independent => BernoulliProcess::Independent { p },
                ProcessArg::Sticky => BernoulliProcess::Sticky { p },
                ProcessArg::CatchUp => BernoulliProcess::CatchUp { p },
                ProcessArg::Momentum => BernoulliProcess::Momentum { p },
                ProcessArg::AlwaysOne => BernoulliProcess::AlwaysOne,
            };
            let report = dominance_mc(&process, n, p, trials, seed)?;
            let pass = report.pass;
            emit(
                &DominanceDoc {
                    command: "prob",
                    query: "dominance",
                    seed,
                    report,
                },
                fmt,
                out,
            )?;
            return verification_gate(pass, "empirical CDF exceeds the binomial CDF by more than 3 SE");
        }
    };
    let all_hold = docs.iter().all(|d| d.holds != Some(false));
    if docs.len() == 1 {
        emit(&docs[0], fmt, out)?;
    } else {
        emit(&docs, fmt, out)?;
    }
    verification_gate(all_hold, "an exact tail exceeds its bound")
}

/// Value of a named bound for the bench tables; `None` where undefined.
pub fn named_bound(name: BoundName, h: usize, g: &Graph) -> Option<f64> {
    bound_value(name, h, g.max_degree(), g.min_degree()).ok()
}
