//! Edges of the symmetric edge polytope `P_G = conv{±(e_i - e_j) : {i,j} ∈ E}`.
//!
//! Vertices of `P_G` are the directed arcs of `G`. Two vertices span an edge
//! iff they are not antipodal and no directed 3- or 4-cycle of `G` contains
//! both directed arcs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Arc, DirectedArc, Graph};
use crate::pairs::Rule;

/// Unordered pair of distinct, non-antipodal directed arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedArcPair {
    x: DirectedArc,
    y: DirectedArc,
}

impl DirectedArcPair {
    pub fn new(x: DirectedArc, y: DirectedArc) -> Result<Self> {
        if x == y {
            return Err(Error::IdenticalArcs);
        }
        if x == y.reversed() {
            return Err(Error::Antipodal);
        }
        Ok(DirectedArcPair { x: x.min(y), y: x.max(y) })
    }

    pub fn first(&self) -> DirectedArc {
        self.x
    }

    pub fn second(&self) -> DirectedArc {
        self.y
    }

    pub fn reversed(&self) -> Self {
        DirectedArcPair::new(self.x.reversed(), self.y.reversed()).expect("reversal keeps the pair valid")
    }

    pub(crate) fn check_present(&self, g: &Graph) -> Result<()> {
        for a in [self.x.arc(), self.y.arc()] {
            if !g.has_arc(a)? {
                return Err(Error::ArcAbsent(a));
            }
        }
        Ok(())
    }
}

/// Directed arcs of `g` in a fixed order: for each present arc `{u,v}`
/// (lexicographic), `u->v` then `v->u`.
pub fn directed_arcs(g: &Graph) -> Vec<DirectedArc> {
    g.arcs()
        .flat_map(|a| [DirectedArc { tail: a.u(), head: a.v() }, DirectedArc { tail: a.v(), head: a.u() }])
        .collect()
}

/// Edge count `K` of `P_G`, split by how the two underlying arcs meet.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCountReport {
    pub total: u64,
    pub disjoint_pairs: u64,
    pub adjacent_same_direction: u64,
    pub adjacent_opposite: u64,
}

/// Every directed 3- and 4-cycle through `pair.first()`, as its list of steps.
pub(crate) fn cycles_through(g: &Graph, x: DirectedArc) -> Vec<Vec<DirectedArc>> {
    let n = g.n();
    let (s, t) = (x.tail, x.head);
    let mut out = Vec::new();
    for w in 0..n {
        if w == s || w == t || !g.adjacent(t, w) {
            continue;
        }
        if g.adjacent(w, s) {
            out.push(vec![x, DirectedArc { tail: t, head: w }, DirectedArc { tail: w, head: s }]);
        }
        for z in 0..n {
            if z == s || z == t || z == w || !g.adjacent(w, z) || !g.adjacent(z, s) {
                continue;
            }
            out.push(vec![
                x,
                DirectedArc { tail: t, head: w },
                DirectedArc { tail: w, head: z },
                DirectedArc { tail: z, head: s },
            ]);
        }
    }
    out
}

/// Edge test by exhaustive search over directed 3- and 4-cycles.
pub fn is_edge_naive(g: &Graph, pair: &DirectedArcPair) -> Result<bool> {
    pair.check_present(g)?;
    let y = pair.second();
    Ok(!cycles_through(g, pair.first()).iter().any(|c| c.contains(&y)))
}

/// Edge test by the local rules: disjoint arcs need their unique completing
/// pair; arcs meeting head-to-head or tail-to-tail always form an edge; arcs
/// passing through the shared node need no closing arc and no other common
/// neighbor of their far ends.
pub fn is_edge_fast(g: &Graph, pair: &DirectedArcPair) -> Result<bool> {
    pair.check_present(g)?;
    let (x, y) = (pair.first(), pair.second());
    let (e, f) = (x.arc(), y.arc());
    Ok(match e.shared_node(f) {
        None => !(g.adjacent(x.head, y.tail) && g.adjacent(y.head, x.tail)),
        Some(v) => {
            let through = (x.head == v && y.tail == v) || (y.head == v && x.tail == v);
            if !through {
                true
            } else {
                let (u1, u2) = (e.other(v), f.other(v));
                !g.adjacent(u1, u2) && g.common_neighbors_unchecked(u1, u2, Some(v)) == 0
            }
        }
    })
}

/// Number of edges of `P_G` by enumeration of arc pairs.
pub fn count_edges(g: &Graph) -> EdgeCountReport {
    let t = Rule::Polytope.tally_all(g);
    EdgeCountReport {
        total: t.total(),
        disjoint_pairs: t.disjoint,
        adjacent_same_direction: t.same,
        adjacent_opposite: t.opposite,
    }
}

/// Number of edges of `P_G` from subgraph counts:
/// `4·(disjoint arc pairs) − 4·(4-cycles) + 2·(2-paths)
///  + 2·(non-adjacent node pairs with exactly one common neighbor)`.
pub fn count_edges_by_subgraphs(g: &Graph) -> u64 {
    let n = g.n();
    let m = g.arc_count() as u64;
    let two_paths: u64 = (0..n)
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let disjoint = m * m.saturating_sub(1) / 2 - two_paths;
    let mut diag = 0u64;
    let mut lonely = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            let c = g.common_neighbors_unchecked(u, v, None) as u64;
            diag += c * c.saturating_sub(1) / 2;
            if c == 1 && !g.adjacent(u, v) {
                lonely += 1;
            }
        }
    }
    let four_cycles = diag / 2;
    4 * disjoint - 4 * four_cycles + 2 * two_paths + 2 * lonely
}

/// Edges over pairs in which at least one arc touches `arcs`' endpoints.
/// Differences of this count under toggles of `arcs` equal differences of
/// the full count.
pub(crate) fn count_edges_touching(g: &Graph, arcs: &[Arc]) -> u64 {
    let nodes: Vec<usize> = arcs.iter().flat_map(|a| [a.u(), a.v()]).collect();
    Rule::Polytope.tally_touching(g, &nodes).total()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(t: usize, h: usize) -> DirectedArc {
        DirectedArc::new(t - 1, h - 1).unwrap()
    }

    fn pair(x: DirectedArc, y: DirectedArc) -> DirectedArcPair {
        DirectedArcPair::new(x, y).unwrap()
    }

    fn g(n: usize, arcs: &[(usize, usize)]) -> Graph {
        Graph::from_arcs(n, arcs.iter().map(|&(a, b)| (a - 1, b - 1))).unwrap()
    }

    #[test]
    fn pair_construction() {
        assert_eq!(DirectedArcPair::new(d(1, 2), d(2, 1)), Err(Error::Antipodal));
        assert_eq!(DirectedArcPair::new(d(1, 2), d(1, 2)), Err(Error::IdenticalArcs));
        assert_eq!(pair(d(3, 4), d(1, 2)), pair(d(1, 2), d(3, 4)));
    }

    #[test]
    fn edge_test_examples() {
        let tri = g(3, &[(1, 2), (1, 3), (2, 3)]);
        let path = g(4, &[(1, 2), (2, 3), (3, 4)]);
        let c4 = g(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]);
        let star = g(4, &[(1, 2), (1, 3), (1, 4)]);
        let k4 = Graph::complete(4).unwrap();
        let cases = [
            (&tri, pair(d(1, 2), d(2, 3)), false),
            (&path, pair(d(1, 2), d(3, 4)), true),
            (&c4, pair(d(1, 2), d(3, 4)), false),
            (&star, pair(d(2, 1), d(1, 3)), true),
            (&k4, pair(d(1, 2), d(2, 3)), false),
        ];
        for (graph, p, expected) in cases {
            assert_eq!(is_edge_naive(graph, &p).unwrap(), expected, "naive {p:?}");
            assert_eq!(is_edge_fast(graph, &p).unwrap(), expected, "fast {p:?}");
        }
    }

    #[test]
    fn absent_arc_is_an_error() {
        let path = g(4, &[(1, 2), (2, 3)]);
        let p = pair(d(1, 2), d(3, 4));
        assert!(matches!(is_edge_fast(&path, &p), Err(Error::ArcAbsent(_))));
        assert!(matches!(is_edge_naive(&path, &p), Err(Error::ArcAbsent(_))));
    }

    #[test]
    fn small_counts() {
        let tri = Graph::cycle(3).unwrap();
        assert_eq!(count_edges(&tri).total, 6);
        assert_eq!(count_edges(&Graph::complete(4).unwrap()).total, 24);
        assert_eq!(count_edges(&Graph::path(4).unwrap()).total, 12);
        assert_eq!(count_edges(&g(2, &[(1, 2)])).total, 0);
        assert_eq!(count_edges(&Graph::empty(5).unwrap()).total, 0);
    }

    #[test]
    fn report_categories_sum() {
        let k5 = Graph::complete(5).unwrap();
        let r = count_edges(&k5);
        assert_eq!(r.total, r.disjoint_pairs + r.adjacent_same_direction + r.adjacent_opposite);
        // K_n at p = 1: 12 C(n,4) (1 - 1) + 6 C(n,3) (1 + 0)
        assert_eq!(r.disjoint_pairs, 0);
        assert_eq!(r.total, 60);
    }

    #[test]
    fn subgraph_route_matches_small_cases() {
        for graph in
            [Graph::cycle(3).unwrap(), Graph::complete(4).unwrap(), Graph::path(4).unwrap(), Graph::cycle(5).unwrap()]
        {
            assert_eq!(count_edges_by_subgraphs(&graph), count_edges(&graph).total);
        }
    }
}
