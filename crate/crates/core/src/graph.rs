//! Simple undirected graphs with bit-packed adjacency rows, Erdős–Rényi
//! sampling, and the local path statistics used by the edge counters.
//!
//! Nodes are `0..n` in the library. The edge-list text format and all
//! `Display` output use `1..=n`.
//!
//! A G(n, p) realization is equivalently a vector of Rademacher variables
//! indexed by the C(n, 2) potential arcs: `+1` (present, probability `p`)
//! and `-1` (absent, probability `q = 1 - p`).

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

pub type Node = usize;

/// An undirected arc `{u, v}` with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    u: Node,
    v: Node,
}

impl Arc {
    pub fn new(a: Node, b: Node) -> Result<Self> {
        if a == b {
            return Err(Error::Loop(a));
        }
        Ok(Arc { u: a.min(b), v: a.max(b) })
    }

    pub fn u(self) -> Node {
        self.u
    }

    pub fn v(self) -> Node {
        self.v
    }

    pub fn contains(self, x: Node) -> bool {
        self.u == x || self.v == x
    }

    /// Node shared with `other`, if exactly one is shared.
    pub fn shared_node(self, other: Arc) -> Option<Node> {
        if self == other {
            return None;
        }
        if other.contains(self.u) {
            Some(self.u)
        } else if other.contains(self.v) {
            Some(self.v)
        } else {
            None
        }
    }

    pub fn is_disjoint(self, other: Arc) -> bool {
        !other.contains(self.u) && !other.contains(self.v)
    }

    /// Endpoint of the arc other than `x`. `x` must be an endpoint.
    pub fn other(self, x: Node) -> Node {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u + 1, self.v + 1)
    }
}

/// The directed arc `tail -> head`, i.e. the polytope vertex `e_tail - e_head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DirectedArc {
    pub tail: Node,
    pub head: Node,
}

impl DirectedArc {
    pub fn new(tail: Node, head: Node) -> Result<Self> {
        if tail == head {
            return Err(Error::Loop(tail));
        }
        Ok(DirectedArc { tail, head })
    }

    pub fn arc(self) -> Arc {
        Arc { u: self.tail.min(self.head), v: self.tail.max(self.head) }
    }

    pub fn reversed(self) -> Self {
        DirectedArc { tail: self.head, head: self.tail }
    }
}

impl fmt::Display for DirectedArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.tail + 1, self.head + 1)
    }
}

/// Number of potential arcs on `n` nodes.
pub fn potential_arcs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `arc` in the lexicographic list of all potential arcs on `n` nodes.
pub fn arc_index(n: usize, arc: Arc) -> usize {
    let (u, v) = (arc.u, arc.v);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// All potential arcs on `n` nodes in lexicographic order.
pub fn all_arcs(n: usize) -> impl Iterator<Item = Arc> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| Arc { u, v }))
}

/// Parameters of a G(n, p) ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    n: usize,
    p: f64,
    seed: u64,
}

impl SimParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoNodes);
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(SimParams { n, p, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Samples replicate `replicate` of G(n, p). Pure in `(seed, replicate)`.
pub fn erdos_renyi(params: &SimParams, replicate: u64) -> Graph {
    let mut rng = rng::stream(params.seed, Purpose::Graph, replicate);
    sample_gnp(params.n, params.p, &mut rng)
}

pub(crate) fn sample_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n).expect("n >= 1");
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.insert(u, v);
            }
        }
    }
    g.debug_check();
    g
}

/// Undirected simple graph. Immutable from the outside; modifications return
/// new values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, arcs=[", self.n)?;
        for (i, a) in self.arcs().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", a.u + 1, a.v + 1)?;
        }
        write!(f, "])")
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoNodes);
        }
        let words = n.div_ceil(64);
        Ok(Graph { n, words, rows: vec![0; n * words], m: 0 })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        Ok(g)
    }

    pub fn from_arcs<I: IntoIterator<Item = (Node, Node)>>(n: usize, arcs: I) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for (a, b) in arcs {
            g.check_node(a)?;
            g.check_node(b)?;
            let arc = Arc::new(a, b)?;
            g.insert(arc.u, arc.v);
        }
        Ok(g)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        Graph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        Graph::from_arcs(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Graph on `n` nodes whose arc set is the bitmask `mask` over
    /// [`all_arcs`] order.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for (i, a) in all_arcs(n).enumerate() {
            if mask >> i & 1 == 1 {
                g.insert(a.u, a.v);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.m
    }

    fn check_node(&self, x: Node) -> Result<()> {
        if x >= self.n {
            Err(Error::NodeOutOfRange { node: x, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_arc(&self, a: Arc) -> Result<()> {
        self.check_node(a.u)?;
        self.check_node(a.v)
    }

    #[inline]
    pub(crate) fn row(&self, u: Node) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub(crate) fn adjacent(&self, u: Node, v: Node) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn set_bit(&mut self, u: Node, v: Node, on: bool) {
        let w = &mut self.rows[u * self.words + v / 64];
        if on {
            *w |= 1 << (v % 64);
        } else {
            *w &= !(1 << (v % 64));
        }
    }

    fn insert(&mut self, u: Node, v: Node) {
        if !self.adjacent(u, v) {
            self.set_bit(u, v, true);
            self.set_bit(v, u, true);
            self.m += 1;
        }
    }

    fn remove(&mut self, u: Node, v: Node) {
        if self.adjacent(u, v) {
            self.set_bit(u, v, false);
            self.set_bit(v, u, false);
            self.m -= 1;
        }
    }

    pub(crate) fn set_arc(&mut self, a: Arc, present: bool) {
        if present {
            self.insert(a.u, a.v)
        } else {
            self.remove(a.u, a.v)
        }
    }

    pub fn has_arc(&self, a: Arc) -> Result<bool> {
        self.check_arc(a)?;
        Ok(self.adjacent(a.u, a.v))
    }

    /// Copy of `self` with `a` forced to the given state.
    pub fn toggle_arc(&self, a: Arc, present: bool) -> Result<Graph> {
        self.check_arc(a)?;
        let mut g = self.clone();
        g.set_arc(a, present);
        Ok(g)
    }

    pub fn degree(&self, u: Node) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: Node) -> impl Iterator<Item = Node> + '_ {
        bits(self.row(u))
    }

    /// Present arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| Arc { u, v }))
    }

    /// Number of nodes `w` outside `{u, v, excluded}` adjacent to both `u` and `v`.
    pub fn common_neighbor_count(&self, u: Node, v: Node, excluded: Option<Node>) -> Result<usize> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        if let Some(x) = excluded {
            self.check_node(x)?;
        }
        Ok(self.common_neighbors_unchecked(u, v, excluded))
    }

    #[inline]
    pub(crate) fn common_neighbors_unchecked(&self, u: Node, v: Node, excluded: Option<Node>) -> usize {
        // no loops, so u and v never appear in both rows
        let c: usize = self.row(u).iter().zip(self.row(v)).map(|(a, b)| (a & b).count_ones() as usize).sum();
        match excluded {
            Some(x) if x != u && x != v && self.adjacent(u, x) && self.adjacent(v, x) => c - 1,
            _ => c,
        }
    }

    /// Common neighbors of `u` and `v`, in increasing order.
    pub(crate) fn common_neighbors(&self, u: Node, v: Node) -> impl Iterator<Item = Node> + '_ {
        let (ru, rv) = (self.row(u), self.row(v));
        (0..self.words).flat_map(move |i| {
            let mut w = ru[i] & rv[i];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Number of `s`–`t` paths with `len` arcs and distinct nodes (`len` ∈ {2, 3}).
    pub fn path_count(&self, s: Node, t: Node, len: usize) -> Result<u64> {
        self.check_node(s)?;
        self.check_node(t)?;
        if s == t {
            return Err(Error::Loop(s));
        }
        match len {
            2 => Ok(self.common_neighbors_unchecked(s, t, None) as u64),
            3 => Ok(self
                .neighbors(s)
                .filter(|&v1| v1 != t)
                .map(|v1| self.common_neighbors_unchecked(v1, t, Some(s)) as u64)
                .sum()),
            other => Err(Error::UnsupportedPathLength(other)),
        }
    }

    /// Graph with node `u` renamed to `perm[u]`.
    pub fn relabel(&self, perm: &[Node]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n).expect("n >= 1");
        for a in self.arcs() {
            g.insert(perm[a.u].min(perm[a.v]), perm[a.u].max(perm[a.v]));
        }
        g
    }

    pub(crate) fn debug_check(&self) {
        if cfg!(debug_assertions) {
            let mut m = 0;
            for u in 0..self.n {
                assert!(!self.adjacent(u, u), "loop at {u}");
                for v in 0..self.n {
                    assert_eq!(self.adjacent(u, v), self.adjacent(v, u), "asymmetric at {u},{v}");
                    if u < v && self.adjacent(u, v) {
                        m += 1;
                    }
                }
            }
            assert_eq!(m, self.m);
        }
    }

    /// Parses the edge-list format; see [`parse_edge_list`].
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        parse_edge_list(text).map(|p| p.graph)
    }

    /// Edge-list text: `n=<int>` then one `u v` per line (1-based).
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for a in self.arcs() {
            s.push_str(&format!("{} {}\n", a.u + 1, a.v + 1));
        }
        s
    }
}

fn bits(row: &[u64]) -> impl Iterator<Item = Node> + '_ {
    row.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

#[derive(Debug, Clone)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    /// Arcs listed more than once. They are kept once.
    pub duplicates: Vec<Arc>,
}

/// Parses `n=<int>` followed by whitespace-separated `u v` lines with
/// `1 <= u, v <= n`. Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, message: "missing `n=<int>` header".into() })?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse { line: hline, message: format!("malformed header `{header}`") })?;
    let mut graph =
        Graph::empty(n).map_err(|_| Error::Parse { line: hline, message: "n must be at least 1".into() })?;
    let mut duplicates = Vec::new();

    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: lineno, message: format!("expected `u v`, got `{line}`") });
        }
        let mut ends = [0usize; 2];
        for (slot, f) in ends.iter_mut().zip(&fields) {
            let x: usize = f.parse().map_err(|_| Error::Parse { line: lineno, message: format!("bad node `{f}`") })?;
            if x == 0 || x > n {
                return Err(Error::Parse { line: lineno, message: format!("node {x} out of range 1..={n}") });
            }
            *slot = x - 1;
        }
        if ends[0] == ends[1] {
            return Err(Error::Parse { line: lineno, message: format!("loop at node {}", ends[0] + 1) });
        }
        let arc = Arc::new(ends[0], ends[1])?;
        if graph.adjacent(arc.u, arc.v) {
            duplicates.push(arc);
        }
        graph.insert(arc.u, arc.v);
    }
    Ok(ParsedEdgeList { graph, duplicates })
}
