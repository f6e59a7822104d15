//! Immutable simple undirected graphs and the generators used throughout the crate.
//!
//! Vertices are dense indices `0..n`. Adjacency lists are kept sorted, so every
//! iteration order in the crate is deterministic.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

/// Retry budget for random regular generation.
pub const REGULAR_RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// endpoints outside `0..n`. Edge orientation is irrelevant.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({v}, {})",
                    w[0]
                )));
            }
        }
        let g = Graph { adj, edge_count };
        debug_assert!(g.check_invariants().is_ok());
        Ok(g)
    }

    /// Re-checks symmetry, absence of loops and duplicates, and sortedness.
    pub fn check_invariants(&self) -> Result<()> {
        let mut half_degree_sum = 0;
        for (v, list) in self.adj.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "adjacency of {v} is not strictly increasing"
                )));
            }
            for &u in list {
                if u == v {
                    return Err(Error::InvalidGraph(format!("self-loop at {v}")));
                }
                if u >= self.n() || self.adj[u].binary_search(&v).is_err() {
                    return Err(Error::InvalidGraph(format!("asymmetric edge ({v}, {u})")));
                }
            }
            half_degree_sum += list.len();
        }
        if half_degree_sum != 2 * self.edge_count {
            return Err(Error::InvalidGraph("edge count disagrees with degrees".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Minimum degree; 0 for the graph with no vertices.
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Partitions the vertices into degree `<= d` and degree `> d`.
    pub fn vertex_split(&self, d: f64) -> (Vec<usize>, Vec<usize>) {
        (0..self.n()).partition(|&v| self.degree(v) as f64 <= d)
    }

    /// Membership mask of the vertices of degree at most `d`.
    pub fn low_degree_mask(&self, d: f64) -> Vec<bool> {
        (0..self.n()).map(|v| self.degree(v) as f64 <= d).collect()
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            let mut it = self.adj[u].iter().peekable();
            for v in u + 1..n {
                while it.peek().is_some_and(|&&w| w < v) {
                    it.next();
                }
                if it.peek() != Some(&&v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, edges).expect("complement of a simple graph is simple")
    }

    /// Smallest-last ordering. Returns the ordering (every vertex has at most
    /// `degeneracy` neighbours earlier in it) and the degeneracy.
    pub fn degeneracy_ordering(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
        let mut removed = vec![false; n];
        let mut removal = Vec::with_capacity(n);
        let mut degeneracy = 0;
        while let Some((d, v)) = queue.pop_first() {
            degeneracy = degeneracy.max(d);
            removed[v] = true;
            removal.push(v);
            for &u in &self.adj[v] {
                if !removed[u] {
                    queue.remove(&(deg[u], u));
                    deg[u] -= 1;
                    queue.insert((deg[u], u));
                }
            }
        }
        removal.reverse();
        (removal, degeneracy)
    }

    /// Largest number of neighbours that precede a vertex in `ordering`.
    pub fn back_degree(&self, ordering: &[usize]) -> Result<usize> {
        let pos = positions(self.n(), ordering)?;
        Ok((0..self.n())
            .map(|v| self.adj[v].iter().filter(|&&u| pos[u] < pos[v]).count())
            .max()
            .unwrap_or(0))
    }

    /// Parses DIMACS `.col` text (`p edge n m`, `e u v` with 1-based vertices).
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let mut fields = line.split_ascii_whitespace();
            match fields.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if header.is_some() {
                        return Err(parse_err("duplicate problem line".into()));
                    }
                    match fields.next() {
                        Some("edge") | Some("col") => {}
                        other => return Err(parse_err(format!("unsupported format {other:?}"))),
                    }
                    let n = parse_field(fields.next(), "vertex count").map_err(parse_err)?;
                    let m = parse_field(fields.next(), "edge count").map_err(parse_err)?;
                    header = Some((n, m));
                }
                Some("e") => {
                    let (n, _) = header.ok_or_else(|| parse_err("edge before problem line".into()))?;
                    let u = parse_field(fields.next(), "endpoint").map_err(parse_err)?;
                    let v = parse_field(fields.next(), "endpoint").map_err(parse_err)?;
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(parse_err(format!("endpoint outside 1..={n}")));
                    }
                    edges.push((u - 1, v - 1));
                }
                Some(tag) => return Err(parse_err(format!("unknown line type {tag:?}"))),
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            message: "missing problem line".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    /// Canonical DIMACS text: header then `e` lines sorted by `(u, v)` with `u < v`.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 * (self.edge_count + 1));
        writeln!(out, "p edge {} {}", self.n(), self.edge_count).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }
}

fn parse_field(field: Option<&str>, what: &str) -> std::result::Result<usize, String> {
    let s = field.ok_or_else(|| format!("missing {what}"))?;
    s.parse().map_err(|_| format!("invalid {what} {s:?}"))
}

/// Inverse permutation of `ordering`, validating that it is a permutation of `0..n`.
pub fn positions(n: usize, ordering: &[usize]) -> Result<Vec<usize>> {
    if ordering.len() != n {
        return Err(Error::InvalidOrdering(format!(
            "length {} instead of {n}",
            ordering.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in ordering.iter().enumerate() {
        if v >= n {
            return Err(Error::InvalidOrdering(format!("vertex {v} out of range")));
        }
        if pos[v] != usize::MAX {
            return Err(Error::InvalidOrdering(format!("vertex {v} repeated")));
        }
        pos[v] = i;
    }
    Ok(pos)
}

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn gen_path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

pub fn gen_complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        .expect("complete graph is simple")
}

/// Star `K_{1,leaves}` with centre 0.
pub fn gen_star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
}

pub fn gen_petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
}

/// Which edges of `K_n` to subdivide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subdivide {
    All,
    Edges(Vec<(usize, usize)>),
}

/// `K_n` with the selected edges replaced by paths of length two. The
/// subdivision vertices are numbered `n, n+1, ...` in the order of the
/// (normalized, sorted) selected edges.
pub fn gen_subdivided_complete(n: usize, which: &Subdivide) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "subdivided complete graph needs n >= 2, got {n}"
        )));
    }
    let selected: BTreeSet<(usize, usize)> = match which {
        Subdivide::All => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        Subdivide::Edges(list) => {
            let mut set = BTreeSet::new();
            for &(u, v) in list {
                if u >= n || v >= n || u == v {
                    return Err(Error::InvalidParameter(format!(
                        "({u}, {v}) is not an edge of K_{n}"
                    )));
                }
                if !set.insert((u.min(v), u.max(v))) {
                    return Err(Error::InvalidParameter(format!("edge ({u}, {v}) listed twice")));
                }
            }
            set
        }
    };
    let total = n + selected.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !selected.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    for (i, &(u, v)) in selected.iter().enumerate() {
        let w = n + i;
        edges.push((u, w));
        edges.push((w, v));
    }
    Graph::from_edges(total, edges)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = seed::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Uniform random labelled tree (random attachment to an earlier vertex).
pub fn gen_random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = seed::rng(seed);
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    Graph::from_edges(n, edges).expect("tree is simple")
}

/// Simple `d`-regular graph on `n` vertices from the configuration model.
///
/// Stubs are paired one pair at a time; a pair that would create a loop or a
/// parallel edge is rejected and redrawn, and a pairing that gets stuck is
/// restarted (attempt `t` draws from `mix(seed, t)`). For `d > (n-1)/2` the
/// complement of an `(n-1-d)`-regular graph is returned instead.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::InvalidParameter(format!("degree {d} must be below n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n·d = {} is odd", n * d)));
    }
    if 2 * d > n.saturating_sub(1) {
        return gen_random_regular(n, n - 1 - d, seed).map(|g| g.complement());
    }
    for attempt in 0..REGULAR_RETRY_BUDGET {
        let mut rng = seed::rng(seed::mix(seed, attempt as u64));
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            let g = Graph::from_edges(n, edges)?;
            debug_assert!((0..n).all(|v| g.degree(v) == d));
            return Ok(g);
        }
    }
    Err(Error::RegularGenerationFailed(REGULAR_RETRY_BUDGET))
}

fn try_pairing(n: usize, d: usize, rng: &mut impl Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    stubs.shuffle(rng);
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut misses = 0usize;
    while !stubs.is_empty() {
        let len = stubs.len();
        let i = rng.gen_range(0..len);
        let mut j = rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (stubs[i], stubs[j]);
        let key = (u.min(v), u.max(v));
        if u != v && !present.contains(&key) {
            present.insert(key);
            edges.push(key);
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            misses = 0;
            continue;
        }
        misses += 1;
        if misses > 64 * len {
            // Stuck unless some valid pair remains among the leftover stubs.
            let mut vs: Vec<usize> = stubs.clone();
            vs.sort_unstable();
            vs.dedup();
            let any_valid = vs.iter().enumerate().any(|(a, &x)| {
                vs[a + 1..].iter().any(|&y| !present.contains(&(x, y)))
            });
            if !any_valid {
                return None;
            }
            misses = 0;
        }
    }
    Some(edges)
}
