//! Tail bounds for binomial variables, exact binomial probabilities, and a
//! Monte Carlo harness for sums of history-dependent Bernoulli variables.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// A closed-form tail bound. Formulas can exceed 1 outside their useful
/// range; the bound is then vacuous rather than wrong.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub raw: f64,
}

impl TailBound {
    /// The bound clamped to `[0, 1]`.
    pub fn probability(&self) -> f64 {
        self.raw.min(1.0)
    }

    pub fn is_vacuous(&self) -> bool {
        self.raw > 1.0
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
    }
}

/// `Pr[S <= (1-δ)μ] <= exp(-δ²μ/2)` for `0 < δ < 1`.
pub fn chernoff_lower(mu: f64, delta: f64) -> Result<TailBound> {
    check_positive("mu", mu)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(TailBound {
        raw: (-delta * delta * mu / 2.0).exp(),
    })
}

/// `Pr[S >= (1+δ)μ] <= exp(-δ²μ/(2+δ))` for `δ > 0`.
pub fn chernoff_upper(mu: f64, delta: f64) -> Result<TailBound> {
    check_positive("mu", mu)?;
    check_positive("delta", delta)?;
    Ok(TailBound {
        raw: (-delta * delta * mu / (2.0 + delta)).exp(),
    })
}

/// `Pr[B(n,p) <= np/2] <= exp(-np/8)`.
pub fn binomial_half_lower(n: u64, p: f64) -> Result<TailBound> {
    check_probability(p)?;
    Ok(TailBound {
        raw: (-(n as f64) * p / 8.0).exp(),
    })
}

/// `Pr[B(n,p) >= 2np] <= exp(-np/3)`.
pub fn binomial_double_upper(n: u64, p: f64) -> Result<TailBound> {
    check_probability(p)?;
    Ok(TailBound {
        raw: (-(n as f64) * p / 3.0).exp(),
    })
}

/// `Pr[B(n,p) >= t] <= (enp/t)^t`, and 1 for `t = 0`.
pub fn binomial_tail_upper(n: u64, p: f64, t: u64) -> Result<TailBound> {
    check_probability(p)?;
    if t > n {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds n = {n}")));
    }
    if t == 0 {
        return Ok(TailBound { raw: 1.0 });
    }
    let t_f = t as f64;
    Ok(TailBound {
        raw: (std::f64::consts::E * n as f64 * p / t_f).powf(t_f),
    })
}

/// `ln Pr[B(n,p) = k]` for `k = 0..=n` (`-inf` for impossible outcomes).
pub fn binomial_ln_pmf(n: u64, p: f64) -> Result<Vec<f64>> {
    check_probability(p)?;
    let n_us = n as usize;
    if p == 0.0 || p == 1.0 {
        let mut v = vec![f64::NEG_INFINITY; n_us + 1];
        v[if p == 0.0 { 0 } else { n_us }] = 0.0;
        return Ok(v);
    }
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let mut ln_choose = 0.0f64;
    let mut out = Vec::with_capacity(n_us + 1);
    for k in 0..=n {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        out.push(ln_choose + k as f64 * lp + (n - k) as f64 * lq);
    }
    Ok(out)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return 0.0;
    }
    let s: f64 = terms.iter().map(|&x| (x - max).exp()).sum();
    (max + s.ln()).exp()
}

/// Exact `Pr[B(n,p) <= t]`, accumulated in the log domain.
pub fn binomial_cdf(n: u64, p: f64, t: u64) -> Result<f64> {
    let pmf = binomial_ln_pmf(n, p)?;
    let upto = (t.min(n)) as usize;
    Ok(log_sum_exp(&pmf[..=upto]).min(1.0))
}

/// Exact `Pr[B(n,p) >= t]`, summed directly over the upper tail.
pub fn binomial_sf(n: u64, p: f64, t: u64) -> Result<f64> {
    if t == 0 {
        check_probability(p)?;
        return Ok(1.0);
    }
    if t > n {
        check_probability(p)?;
        return Ok(0.0);
    }
    let pmf = binomial_ln_pmf(n, p)?;
    Ok(log_sum_exp(&pmf[t as usize..]).min(1.0))
}

/// A sequence of Bernoulli variables whose success probability may depend on
/// the outcomes so far, but never drops below [`floor`](Self::floor).
pub trait ConditionalProcess {
    fn name(&self) -> String;
    fn floor(&self) -> f64;
    /// `Pr[X_i = 1 | X_1..X_{i-1} = history]`.
    fn success_probability(&self, history: &[bool]) -> f64;
}

/// Built-in processes used by the dominance checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BernoulliProcess {
    /// Independent Bernoulli(p).
    Independent { p: f64 },
    /// `p` right after a success, `2p` otherwise.
    Sticky { p: f64 },
    /// `p` while the running sum is at least `p·i`, `3p` while behind.
    CatchUp { p: f64 },
    /// `p + 0.1·(successes among the last three)`.
    Momentum { p: f64 },
    /// Always succeeds.
    AlwaysOne,
}

impl ConditionalProcess for BernoulliProcess {
    fn name(&self) -> String {
        match self {
            BernoulliProcess::Independent { .. } => "independent",
            BernoulliProcess::Sticky { .. } => "sticky",
            BernoulliProcess::CatchUp { .. } => "catch-up",
            BernoulliProcess::Momentum { .. } => "momentum",
            BernoulliProcess::AlwaysOne => "always-one",
        }
        .to_string()
    }

    fn floor(&self) -> f64 {
        match *self {
            BernoulliProcess::Independent { p }
            | BernoulliProcess::Sticky { p }
            | BernoulliProcess::CatchUp { p }
            | BernoulliProcess::Momentum { p } => p,
            BernoulliProcess::AlwaysOne => 1.0,
        }
    }

    fn success_probability(&self, history: &[bool]) -> f64 {
        let prob = match *self {
            BernoulliProcess::Independent { p } => p,
            BernoulliProcess::Sticky { p } => {
                if history.last() == Some(&true) {
                    p
                } else {
                    2.0 * p
                }
            }
            BernoulliProcess::CatchUp { p } => {
                let successes = history.iter().filter(|&&x| x).count() as f64;
                if successes >= p * history.len() as f64 {
                    p
                } else {
                    3.0 * p
                }
            }
            BernoulliProcess::Momentum { p } => {
                let recent = history.iter().rev().take(3).filter(|&&x| x).count() as f64;
                p + 0.1 * recent
            }
            BernoulliProcess::AlwaysOne => 1.0,
        };
        prob.min(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub process: String,
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    /// Empirical `Pr[ΣX <= t]`, `t = 0..=n`.
    pub empirical_cdf: Vec<f64>,
    /// Exact `Pr[B(n,p) <= t]`.
    pub binomial_cdf: Vec<f64>,
    /// Monte Carlo standard error of an empirical CDF value equal to the binomial one.
    pub standard_error: Vec<f64>,
    /// Empirical CDF of the coupled independent sum `ΣY`.
    pub coupled_cdf: Vec<f64>,
    /// Trials where some `Y_i = 1` but `X_i = 0` (impossible under the floor).
    pub coupling_violations: usize,
    /// `empirical <= binomial + 3·SE` for every `t`.
    pub pass: bool,
}

/// Slack for rounding in the exact CDF, which sums to 1 only up to ulps.
const CDF_ROUNDING: f64 = 1e-12;

/// Simulates `X` through the uniform-threshold coupling: with `U_i` uniform,
/// `X_i = [U_i <= Pr[X_i = 1 | history]]` and `Y_i = [U_i <= p]`, so `ΣY` is
/// binomial and `Y_i <= X_i` pointwise.
pub fn dominance_mc<P: ConditionalProcess + ?Sized>(
    process: &P,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<DominanceReport> {
    check_probability(p)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mut rng = seed::rng(seed);
    let mut x_hist = vec![0usize; n + 1];
    let mut y_hist = vec![0usize; n + 1];
    let mut coupling_violations = 0;
    let mut history = Vec::with_capacity(n);
    for _ in 0..trials {
        history.clear();
        let mut y_sum = 0;
        let mut violated = false;
        for _ in 0..n {
            let q = process.success_probability(&history);
            if q < p {
                return Err(Error::InvalidParameter(format!(
                    "process {} has conditional probability {q} below the floor {p}",
                    process.name()
                )));
            }
            let u: f64 = rng.gen();
            let x = u <= q;
            let y = u <= p;
            violated |= y && !x;
            y_sum += y as usize;
            history.push(x);
        }
        coupling_violations += violated as usize;
        x_hist[history.iter().filter(|&&x| x).count()] += 1;
        y_hist[y_sum] += 1;
    }

    let cumulative = |hist: &[usize]| -> Vec<f64> {
        hist.iter()
            .scan(0usize, |acc, &c| {
                *acc += c;
                Some(*acc as f64 / trials as f64)
            })
            .collect()
    };
    let empirical_cdf = cumulative(&x_hist);
    let coupled_cdf = cumulative(&y_hist);
    let binomial_cdf = (0..=n as u64)
        .map(|t| binomial_cdf(n as u64, p, t))
        .collect::<Result<Vec<_>>>()?;
    // Standard error under equality with the binomial, which stays positive
    // where the empirical frequency saturates at 0 or 1.
    let standard_error: Vec<f64> = binomial_cdf
        .iter()
        .map(|&f| (f * (1.0 - f) / trials as f64).sqrt())
        .collect();
    let pass = coupling_violations == 0
        && empirical_cdf
            .iter()
            .zip(&binomial_cdf)
            .zip(&standard_error)
            .all(|((&e, &b), &se)| e <= b + 3.0 * se + CDF_ROUNDING);
    Ok(DominanceReport {
        process: process.name(),
        n,
        p,
        trials,
        empirical_cdf,
        binomial_cdf,
        standard_error,
        coupled_cdf,
        coupling_violations,
        pass,
    })
}
