//! Greedy colourings with reserved witness sets.
//!
//! Every vertex `v` reserves `W(v)`: its first few neighbours in the colouring
//! order. A vertex being coloured avoids the colours of its neighbours *and*
//! the colours of `W(u)` for every neighbour `u`; since `W(u)` is coloured
//! before the rest of `N(u)`, the members of `W(u)` end up as witnesses of `u`.

use serde::{Deserialize, Serialize};

use crate::colouring::{Colouring, ThresholdSpec};
use crate::error::{Error, Result};
use crate::graph::{positions, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub ordering: Vec<usize>,
    pub reserved_witnesses: Vec<Vec<usize>>,
    pub colours_used: usize,
    /// Largest number of distinct colours forbidden at any step.
    pub max_forbidden: usize,
}

/// Runs the reservation greedy on `ordering`, reserving `quota(v)` witnesses
/// for each `v` (clamped to `deg(v)`).
fn reservation_greedy(
    g: &Graph,
    ordering: Vec<usize>,
    quota: impl Fn(usize) -> usize,
) -> Result<(Colouring, GreedyTrace)> {
    let n = g.n();
    let pos = positions(n, &ordering)?;

    let reserved: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut nb = g.neighbours(v).to_vec();
            nb.sort_unstable_by_key(|&u| pos[u]);
            nb.truncate(quota(v).min(g.degree(v)));
            nb
        })
        .collect();

    let mut colours = vec![0u32; n];
    // stamp[c] == step marks colour c forbidden at the current step.
    let mut stamp: Vec<usize> = vec![usize::MAX; 2];
    let mut max_forbidden = 0;
    for (step, &v) in ordering.iter().enumerate() {
        let mut forbidden = 0;
        let mut forbid = |c: u32, stamp: &mut Vec<usize>| {
            if c == 0 {
                return;
            }
            let c = c as usize;
            if c >= stamp.len() {
                stamp.resize(c + 1, usize::MAX);
            }
            if stamp[c] != step {
                stamp[c] = step;
                forbidden += 1;
            }
        };
        for &u in g.neighbours(v) {
            forbid(colours[u], &mut stamp);
            for &w in &reserved[u] {
                forbid(colours[w], &mut stamp);
            }
        }
        max_forbidden = max_forbidden.max(forbidden);
        let c = (1..).find(|&c| c >= stamp.len() || stamp[c] != step).unwrap();
        colours[v] = c as u32;
    }

    let colouring = Colouring::new(colours)?;
    let trace = GreedyTrace {
        ordering,
        reserved_witnesses: reserved,
        colours_used: colouring.colours_used(),
        max_forbidden,
    };
    Ok((colouring, trace))
}

/// h-pcf greedy colouring with at most `(h+1)Δ + 1` colours.
///
/// The default ordering is ascending vertex index.
pub fn greedy_hpcf(g: &Graph, h: usize, ordering: Option<&[usize]>) -> Result<(Colouring, GreedyTrace)> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let ordering = ordering.map_or_else(|| (0..g.n()).collect(), <[usize]>::to_vec);
    reservation_greedy(g, ordering, |_| h)
}

/// Greedy along a low back-degree ordering: at most `hΔ + d + 1` colours,
/// where `d` is the ordering's maximum back-degree (returned alongside).
pub fn greedy_hpcf_degenerate(
    g: &Graph,
    h: usize,
    degeneracy_ordering: &[usize],
) -> Result<(Colouring, GreedyTrace, usize)> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let d = g.back_degree(degeneracy_ordering)?;
    let (c, trace) = reservation_greedy(g, degeneracy_ordering.to_vec(), |_| h)?;
    Ok((c, trace, d))
}

/// Degree threshold `hΔ/(h+1)` separating the two classes of [`partial_greedy`].
pub fn partial_threshold(h: usize, max_degree: usize) -> f64 {
    (h * max_degree) as f64 / (h + 1) as f64
}

/// Proper `(hΔ+1)`-colouring that is `f_[V_{<=hΔ/(h+1)}](h, h-1)`-conflict-free.
///
/// High-degree vertices are coloured first (decreasing degree, ties by index),
/// and reserve one witness fewer than low-degree vertices.
pub fn partial_greedy(g: &Graph, h: usize) -> Result<(Colouring, GreedyTrace, ThresholdSpec)> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be at least 1".into()));
    }
    let max_degree = g.max_degree();
    let d = partial_threshold(h, max_degree);
    let spec = ThresholdSpec::low_degree(g, d, h, h - 1);

    let mut ordering: Vec<usize> = (0..g.n()).collect();
    ordering.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let (c, trace) = reservation_greedy(g, ordering, |v| spec.value(v))?;
    if trace.max_forbidden > h * max_degree {
        return Err(Error::Invariant(format!(
            "{} colours forbidden at one step, more than hΔ = {}",
            trace.max_forbidden,
            h * max_degree
        )));
    }
    Ok((c, trace, spec))
}
