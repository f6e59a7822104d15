//! Bound-comparison tables. Jobs run concurrently; rows are sorted before
//! emission so the output depends only on the arguments and the seed.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use pcf::colouring::{check_conflict_free, ThresholdSpec};
use pcf::graph::{self, Graph, Subdivide};
use pcf::greedy::greedy_hpcf;
use pcf::oracle::{exact_chi_pcf, SearchBudget, SearchResult};
use pcf::pipeline::{hpcf_colour, hpcf_colour_mindeg, BoundName, PipelineConfig};
use pcf::seed::mix;
use pcf::Colouring;

use crate::commands::named_bound;
use crate::output::{emit, resolve_seed, write_out, CliError, CliResult, Format};
use crate::{BenchArgs, Suite};

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub graph: String,
    pub n: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub h: usize,
    pub algorithm: String,
    /// Largest colour used; `None` when the oracle ran out of budget.
    pub colours: Option<usize>,
    pub bound_name: BoundName,
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
    pub verified: bool,
    pub note: String,
    #[serde(skip)]
    order: usize,
}

#[derive(Serialize)]
struct BenchDoc {
    command: &'static str,
    suite: String,
    seed: u64,
    h: usize,
    rows: Vec<Row>,
    verified: usize,
    within_bound: usize,
    total: usize,
}

#[derive(Clone, Copy)]
enum Algo {
    Oracle,
    Greedy,
    Cor13,
    Cor17,
}

struct Job {
    order: usize,
    id: String,
    g: Graph,
    algo: Algo,
    seed: u64,
    note: String,
}

fn base_row(job: &Job, h: usize, algorithm: &str, bound_name: BoundName) -> Row {
    Row {
        graph: job.id.clone(),
        n: job.g.n(),
        max_degree: job.g.max_degree(),
        min_degree: job.g.min_degree(),
        h,
        algorithm: algorithm.to_string(),
        colours: None,
        bound_name,
        bound: named_bound(bound_name, h, &job.g),
        within_bound: None,
        verified: false,
        note: job.note.clone(),
        order: job.order,
    }
}

fn finish(mut row: Row, g: &Graph, h: usize, c: &Colouring) -> Row {
    let colours = c.max_colour() as usize;
    row.colours = Some(colours);
    row.within_bound = row.bound.map(|b| colours as f64 <= b.floor());
    row.verified = check_conflict_free(g, c, &ThresholdSpec::uniform(g.n(), h))
        .map(|r| r.all_pass)
        .unwrap_or(false);
    row
}

fn run_job(job: &Job, h: usize, oracle_timeout: Duration) -> Row {
    let g = &job.g;
    match job.algo {
        Algo::Oracle => {
            let row = base_row(job, h, "oracle", BoundName::Greedy);
            let budget = SearchBudget {
                max_nodes: None,
                time_limit: Some(oracle_timeout),
            };
            match exact_chi_pcf(g, h, budget) {
                Ok(SearchResult::Exact { certificate, .. }) => finish(row, g, h, &certificate),
                Ok(SearchResult::Exhausted { proven_lower_bound, .. }) => Row {
                    note: format!("exhausted, chi >= {proven_lower_bound}"),
                    verified: true,
                    ..row
                },
                Err(e) => Row {
                    note: format!("error: {e}"),
                    ..row
                },
            }
        }
        Algo::Greedy => {
            let row = base_row(job, h, "greedy", BoundName::Greedy);
            match greedy_hpcf(g, h, None) {
                Ok((c, _)) => finish(row, g, h, &c),
                Err(e) => Row {
                    note: format!("error: {e}"),
                    ..row
                },
            }
        }
        Algo::Cor13 | Algo::Cor17 => {
            let (name, bound) = match job.algo {
                Algo::Cor13 => ("cor13", BoundName::Cor13),
                _ => ("cor17", BoundName::Cor17),
            };
            let row = base_row(job, h, name, bound);
            let config = PipelineConfig::default();
            let res = match job.algo {
                Algo::Cor13 => hpcf_colour(g, h, job.seed, &config),
                _ => hpcf_colour_mindeg(g, h, job.seed, &config),
            };
            match res {
                Ok((c, report)) => {
                    let mut row = finish(row, g, h, &c);
                    if row.note.is_empty() {
                        row.note = report.algorithm;
                    }
                    row
                }
                Err(e) => Row {
                    note: format!("error: {e}"),
                    ..row
                },
            }
        }
    }
}

fn jobs(a: &BenchArgs, seed: u64) -> CliResult<Vec<Job>> {
    let mut jobs = Vec::new();
    let mut push = |order: usize, id: String, g: Graph, algos: &[Algo], job_seed: u64, note: String| {
        for &algo in algos {
            jobs.push(Job {
                order,
                id: id.clone(),
                g: g.clone(),
                algo,
                seed: job_seed,
                note: note.clone(),
            });
        }
    };
    match a.suite {
        Suite::Cycles => {
            let top = a.n.unwrap_or(12);
            for n in 4..=top.max(4) {
                push(n, format!("C{n}"), graph::gen_cycle(n)?, &[Algo::Oracle, Algo::Greedy], 0, String::new());
            }
        }
        Suite::Subdivisions => {
            let top = a.n.unwrap_or(5);
            for n in 3..=top.max(3) {
                let g = graph::gen_subdivided_complete(n, &Subdivide::All)?;
                let note = format!("Delta+1 = {}", g.max_degree() + 1);
                push(n, format!("K{n}-subdivided"), g, &[Algo::Oracle, Algo::Greedy], 0, note);
            }
        }
        Suite::Random => {
            let n = a.n.unwrap_or(200);
            for i in 0..a.seeds {
                let g = graph::gen_random_graph(n, a.p, mix(seed, i))?;
                let id = format!("gnp({n},{})#{i}", a.p);
                push(i as usize, id, g, &[Algo::Greedy, Algo::Cor13], mix(seed, 1_000_000 + i), String::new());
            }
        }
        Suite::Regular => {
            let n = a.n.unwrap_or(400);
            for i in 0..a.seeds {
                let g = graph::gen_random_regular(n, a.d, mix(seed, i))?;
                let id = format!("regular({n},{})#{i}", a.d);
                push(i as usize, id, g, &[Algo::Greedy, Algo::Cor17], mix(seed, 1_000_000 + i), String::new());
            }
        }
    }
    Ok(jobs)
}

fn table(rows: &[Row]) -> String {
    let header = [
        "graph", "n", "Delta", "delta", "h", "algorithm", "colours", "bound", "value", "within", "verified", "note",
    ];
    let fmt_opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.graph.clone(),
                r.n.to_string(),
                r.max_degree.to_string(),
                r.min_degree.to_string(),
                r.h.to_string(),
                r.algorithm.clone(),
                fmt_opt(r.colours.map(|c| c.to_string())),
                r.bound_name.to_string(),
                fmt_opt(r.bound.map(|b| format!("{b:.1}"))),
                fmt_opt(r.within_bound.map(|w| w.to_string())),
                r.verified.to_string(),
                r.note.clone(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|j| cells.iter().map(|c| c[j].len()).chain([header[j].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |cols: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cols.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for c in &cells {
        line(c.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn run(a: &BenchArgs, fmt: Format, out: Option<&Path>) -> CliResult<()> {
    if a.h == 0 {
        return Err(CliError::BadInput("h must be at least 1".into()));
    }
    if !(a.oracle_timeout.is_finite() && a.oracle_timeout >= 0.0) {
        return Err(CliError::BadInput(format!("bad oracle timeout {}", a.oracle_timeout)));
    }
    let seed = resolve_seed(a.seed.seed)?;
    let timeout = Duration::from_secs_f64(a.oracle_timeout);
    let jobs = jobs(a, seed)?;
    let mut rows: Vec<Row> = jobs.par_iter().map(|j| run_job(j, a.h, timeout)).collect();
    rows.sort_by(|x, y| (x.order, &x.algorithm).cmp(&(y.order, &y.algorithm)));

    let verified = rows.iter().filter(|r| r.verified).count();
    let within = rows.iter().filter(|r| r.within_bound != Some(false)).count();
    let total = rows.len();
    match fmt {
        Format::Text => {
            let mut text = table(&rows);
            let _ = writeln!(text, "verified {verified}/{total}, within bound {within}/{total}");
            write_out(&text, out)?;
        }
        Format::Json => emit(
            &BenchDoc {
                command: "bench",
                suite: format!("{:?}", a.suite).to_lowercase(),
                seed,
                h: a.h,
                rows,
                verified,
                within_bound: within,
                total,
            },
            fmt,
            out,
        )?,
    }
    if verified == total {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{} of {total} rows failed verification", total - verified)))
    }
}
