//! Colourings and the verification primitives every algorithm is gated by.
//!
//! Verifiers never assume the colouring is proper: properness is reported as
//! its own flag so a failing test can tell the two conditions apart.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Total assignment of positive colours to the vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ColouringRepr", into = "ColouringRepr")]
pub struct Colouring {
    colours: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ColouringRepr {
    n: usize,
    colours: Vec<u32>,
}

impl TryFrom<ColouringRepr> for Colouring {
    type Error = Error;

    fn try_from(repr: ColouringRepr) -> Result<Self> {
        if repr.n != repr.colours.len() {
            return Err(Error::SizeMismatch {
                graph: repr.n,
                colouring: repr.colours.len(),
            });
        }
        Colouring::new(repr.colours)
    }
}

impl From<Colouring> for ColouringRepr {
    fn from(c: Colouring) -> Self {
        ColouringRepr {
            n: c.colours.len(),
            colours: c.colours,
        }
    }
}

impl Colouring {
    /// Rejects colour 0; colours are `1, 2, ...`.
    pub fn new(colours: Vec<u32>) -> Result<Self> {
        if let Some(v) = colours.iter().position(|&c| c == 0) {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} has colour 0; colours start at 1"
            )));
        }
        Ok(Colouring { colours })
    }

    pub fn n(&self) -> usize {
        self.colours.len()
    }

    #[inline]
    pub fn colour(&self, v: usize) -> u32 {
        self.colours[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colours
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.colours
    }

    pub fn max_colour(&self) -> u32 {
        self.colours.iter().copied().max().unwrap_or(0)
    }

    pub fn colours_used(&self) -> usize {
        let mut seen = self.colours.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    fn check_size(&self, g: &Graph) -> Result<()> {
        if self.n() == g.n() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                graph: g.n(),
                colouring: self.n(),
            })
        }
    }
}

/// Threshold function `f_[U](a, b)`: demands `a` witnesses on `U` and `b` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdSpec {
    in_u: Vec<bool>,
    value_in_u: usize,
    value_outside: usize,
}

impl ThresholdSpec {
    pub fn new(in_u: Vec<bool>, value_in_u: usize, value_outside: usize) -> Self {
        ThresholdSpec {
            in_u,
            value_in_u,
            value_outside,
        }
    }

    /// The constant function `f ≡ h` on `n` vertices.
    pub fn uniform(n: usize, h: usize) -> Self {
        Self::new(vec![true; n], h, h)
    }

    /// `f_[V_{<=d}](a, b)` for the graph `g`.
    pub fn low_degree(g: &Graph, d: f64, value_in_u: usize, value_outside: usize) -> Self {
        Self::new(g.low_degree_mask(d), value_in_u, value_outside)
    }

    pub fn n(&self) -> usize {
        self.in_u.len()
    }

    #[inline]
    pub fn in_subset(&self, v: usize) -> bool {
        self.in_u[v]
    }

    pub fn value_in_u(&self) -> usize {
        self.value_in_u
    }

    pub fn value_outside(&self) -> usize {
        self.value_outside
    }

    #[inline]
    pub fn value(&self, v: usize) -> usize {
        if self.in_u[v] {
            self.value_in_u
        } else {
            self.value_outside
        }
    }

    /// `min(f(v), deg(v))`.
    #[inline]
    pub fn demanded(&self, g: &Graph, v: usize) -> usize {
        self.value(v).min(g.degree(v))
    }
}

/// Which neighbourhood statistic a report judges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Solitary,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub vertex: usize,
    pub degree: usize,
    pub solitary_count: usize,
    pub odd_count: usize,
    pub demanded: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub proper: bool,
    /// Every vertex meets its demand; properness is *not* folded in.
    pub witnesses_ok: bool,
    /// `proper && witnesses_ok`.
    pub all_pass: bool,
    /// Smallest `count - demanded` over all vertices (0 on the empty graph).
    pub min_margin: i64,
    pub vertices: Vec<VertexRecord>,
}

impl WitnessReport {
    pub fn failing(&self) -> impl Iterator<Item = &VertexRecord> {
        self.vertices.iter().filter(|r| !r.pass)
    }
}

/// Scratch space for exact per-neighbourhood colour multiplicities.
///
/// Counts are dense integers indexed by colour and reset after each use.
#[derive(Debug, Default, Clone)]
pub struct NeighbourhoodTally {
    counts: Vec<u32>,
    touched: Vec<u32>,
}

/// Multiplicity summary of one neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TallySummary {
    pub solitary: usize,
    pub odd: usize,
}

impl NeighbourhoodTally {
    pub fn new() -> Self {
        Self::default()
    }

    fn load(&mut self, g: &Graph, colours: &[u32], v: usize) {
        for &u in g.neighbours(v) {
            let c = colours[u] as usize;
            if c >= self.counts.len() {
                self.counts.resize(c + 1, 0);
            }
            if self.counts[c] == 0 {
                self.touched.push(c as u32);
            }
            self.counts[c] += 1;
        }
    }

    fn clear(&mut self) {
        for &c in &self.touched {
            self.counts[c as usize] = 0;
        }
        self.touched.clear();
    }

    pub fn summary(&mut self, g: &Graph, colours: &[u32], v: usize) -> TallySummary {
        self.load(g, colours, v);
        let mut s = TallySummary { solitary: 0, odd: 0 };
        for &c in &self.touched {
            let k = self.counts[c as usize];
            s.solitary += (k == 1) as usize;
            s.odd += (k % 2 == 1) as usize;
        }
        self.clear();
        s
    }

    /// Neighbours of `v` whose colour is solitary in `N(v)`, ascending.
    pub fn witnesses(&mut self, g: &Graph, colours: &[u32], v: usize) -> Vec<usize> {
        self.load(g, colours, v);
        let w = g
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&u| self.counts[colours[u] as usize] == 1)
            .collect();
        self.clear();
        w
    }

    fn colour_set(&mut self, g: &Graph, colours: &[u32], v: usize, keep: impl Fn(u32) -> bool) -> Vec<u32> {
        self.load(g, colours, v);
        let mut out: Vec<u32> = self
            .touched
            .iter()
            .copied()
            .filter(|&c| keep(self.counts[c as usize]))
            .collect();
        self.clear();
        out.sort_unstable();
        out
    }
}

pub fn is_proper(g: &Graph, c: &Colouring) -> Result<bool> {
    c.check_size(g)?;
    Ok(is_proper_slice(g, c.as_slice()))
}

pub(crate) fn is_proper_slice(g: &Graph, colours: &[u32]) -> bool {
    g.edges().all(|(u, v)| colours[u] != colours[v])
}

/// Colours with multiplicity exactly one in `N(v)`, ascending.
pub fn solitary_colours(g: &Graph, c: &Colouring, v: usize) -> Result<Vec<u32>> {
    c.check_size(g)?;
    g.check_vertex(v)?;
    Ok(NeighbourhoodTally::new().colour_set(g, c.as_slice(), v, |k| k == 1))
}

/// Colours with odd multiplicity in `N(v)`, ascending.
pub fn odd_colours(g: &Graph, c: &Colouring, v: usize) -> Result<Vec<u32>> {
    c.check_size(g)?;
    g.check_vertex(v)?;
    Ok(NeighbourhoodTally::new().colour_set(g, c.as_slice(), v, |k| k % 2 == 1))
}

/// Witnesses of `v`: neighbours whose colour is solitary in `N(v)`.
pub fn witnesses(g: &Graph, c: &Colouring, v: usize) -> Result<Vec<usize>> {
    c.check_size(g)?;
    g.check_vertex(v)?;
    Ok(NeighbourhoodTally::new().witnesses(g, c.as_slice(), v))
}

pub fn check_conflict_free(g: &Graph, c: &Colouring, f: &ThresholdSpec) -> Result<WitnessReport> {
    build_report(g, c, f, WitnessKind::Solitary)
}

/// h-odd check: every vertex needs `min(h, deg)` colours of odd multiplicity.
pub fn check_h_odd(g: &Graph, c: &Colouring, h: usize) -> Result<WitnessReport> {
    build_report(g, c, &ThresholdSpec::uniform(g.n(), h), WitnessKind::Odd)
}

/// [`check_h_odd`] against an arbitrary threshold function.
pub fn check_odd(g: &Graph, c: &Colouring, f: &ThresholdSpec) -> Result<WitnessReport> {
    build_report(g, c, f, WitnessKind::Odd)
}

fn build_report(g: &Graph, c: &Colouring, f: &ThresholdSpec, kind: WitnessKind) -> Result<WitnessReport> {
    c.check_size(g)?;
    if f.n() != g.n() {
        return Err(Error::SizeMismatch {
            graph: g.n(),
            colouring: f.n(),
        });
    }
    let mut tally = NeighbourhoodTally::new();
    let mut vertices = Vec::with_capacity(g.n());
    let mut min_margin: Option<i64> = None;
    for v in 0..g.n() {
        let s = tally.summary(g, c.as_slice(), v);
        let demanded = f.demanded(g, v);
        let count = match kind {
            WitnessKind::Solitary => s.solitary,
            WitnessKind::Odd => s.odd,
        };
        let margin = count as i64 - demanded as i64;
        min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
        vertices.push(VertexRecord {
            vertex: v,
            degree: g.degree(v),
            solitary_count: s.solitary,
            odd_count: s.odd,
            demanded,
            pass: count >= demanded,
        });
    }
    let proper = is_proper_slice(g, c.as_slice());
    let witnesses_ok = vertices.iter().all(|r| r.pass);
    Ok(WitnessReport {
        kind,
        proper,
        witnesses_ok,
        all_pass: proper && witnesses_ok,
        min_margin: min_margin.unwrap_or(0),
        vertices,
    })
}

/// Greedy first-fit proper colouring in vertex-index order.
pub fn first_fit(g: &Graph) -> Colouring {
    let mut colours = vec![0u32; g.n()];
    let mut stamp = vec![usize::MAX; g.max_degree() + 2];
    for v in 0..g.n() {
        for &u in g.neighbours(v) {
            let c = colours[u] as usize;
            if c != 0 && c < stamp.len() {
                stamp[c] = v;
            }
        }
        colours[v] = (1..).find(|&c| stamp[c] != v).unwrap() as u32;
    }
    Colouring { colours }
}
