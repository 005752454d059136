//! Edges of the unimodular triangulation of `P_G` induced by a total order on
//! arcs.
//!
//! The triangulation is a cone from the origin over a triangulated boundary,
//! so every polytope vertex is joined to the origin. Two non-antipodal
//! vertices are joined iff no directed 3-cycle contains both arcs and every
//! directed 4-cycle containing both has its order-minimal arc among the two.
//! The resulting count does not depend on the order.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_arcs, arc_index, potential_arcs, Arc, Graph, Node};
use crate::pairs::Rule;
use crate::rng::{self, Purpose};
use crate::sep::{cycles_through, DirectedArcPair};

/// Ranks for all potential arcs on `n` nodes, present or not, so that
/// toggling arcs never invalidates the order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcOrder {
    n: usize,
    ranks: Vec<u32>,
}

impl ArcOrder {
    /// `ranks[i]` is the rank of the `i`-th arc in lexicographic order.
    pub fn from_ranks(n: usize, ranks: Vec<u32>) -> Result<Self> {
        let len = potential_arcs(n);
        if ranks.len() != len {
            return Err(Error::OrderSize { expected: ranks.len(), found: len });
        }
        let mut seen = vec![false; len];
        for &r in &ranks {
            let r = r as usize;
            if r >= len || seen[r] {
                return Err(Error::NotAPermutation(len));
            }
            seen[r] = true;
        }
        Ok(ArcOrder { n, ranks })
    }

    /// Order listing `sequence` first (in that order), then the remaining
    /// arcs lexicographically.
    pub fn from_sequence(n: usize, sequence: &[Arc]) -> Result<Self> {
        let len = potential_arcs(n);
        let mut ranks = vec![u32::MAX; len];
        let mut next = 0u32;
        for &a in sequence {
            if a.v() >= n {
                return Err(Error::NodeOutOfRange { node: a.v(), n });
            }
            let i = arc_index(n, a);
            if ranks[i] != u32::MAX {
                return Err(Error::NotAPermutation(len));
            }
            ranks[i] = next;
            next += 1;
        }
        for r in ranks.iter_mut().filter(|r| **r == u32::MAX) {
            *r = next;
            next += 1;
        }
        Ok(ArcOrder { n, ranks })
    }

    pub fn lexicographic(n: usize) -> Self {
        ArcOrder { n, ranks: (0..potential_arcs(n) as u32).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self, a: Arc) -> u32 {
        self.ranks[arc_index(self.n, a)]
    }

    #[inline]
    pub(crate) fn rank_of(&self, a: Node, b: Node) -> u32 {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.ranks[u * self.n - u * (u + 1) / 2 + (v - u - 1)]
    }

    /// Arcs sorted by rank.
    pub fn sequence(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = all_arcs(self.n).collect();
        arcs.sort_by_key(|&a| self.rank(a));
        arcs
    }

    /// Order with the arcs at ranks `r` and `r + 1` exchanged.
    pub fn swap_adjacent(&self, r: u32) -> Self {
        let mut ranks = self.ranks.clone();
        for x in ranks.iter_mut() {
            if *x == r {
                *x = r + 1;
            } else if *x == r + 1 {
                *x = r;
            }
        }
        ArcOrder { n: self.n, ranks }
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.n() != self.n {
            return Err(Error::OrderSize { expected: potential_arcs(self.n), found: potential_arcs(g.n()) });
        }
        Ok(())
    }
}

/// Uniformly random order of all arcs on `n` nodes, deterministic in `seed`.
pub fn random_arc_order(n: usize, seed: u64) -> ArcOrder {
    shuffled_order(n, &mut rng::stream(seed, Purpose::Order, 0))
}

pub(crate) fn shuffled_order<R: rand::Rng>(n: usize, rng: &mut R) -> ArcOrder {
    let mut arcs: Vec<Arc> = all_arcs(n).collect();
    arcs.shuffle(rng);
    let mut ranks = vec![0u32; arcs.len()];
    for (r, a) in arcs.iter().enumerate() {
        ranks[arc_index(n, *a)] = r as u32;
    }
    ArcOrder { n, ranks }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriEdgeReport {
    pub total: u64,
    /// One edge from the origin to each of the `2m` polytope vertices.
    pub origin_edges: u64,
    pub pair_edges: u64,
    pub disjoint_pairs: u64,
    pub adjacent_same_direction: u64,
    pub adjacent_opposite: u64,
}

/// Edge test by the local rules (see module docs).
pub fn is_tri_edge(g: &Graph, order: &ArcOrder, pair: &DirectedArcPair) -> Result<bool> {
    order.check_graph(g)?;
    pair.check_present(g)?;
    let (x, y) = (pair.first(), pair.second());
    let (e, f) = (x.arc(), y.arc());
    let pair_min = order.rank(e).min(order.rank(f));
    Ok(match e.shared_node(f) {
        None => {
            let (g1, g2) = ((x.head, y.tail), (y.head, x.tail));
            !(g.adjacent(g1.0, g1.1) && g.adjacent(g2.0, g2.1))
                || pair_min < order.rank_of(g1.0, g1.1).min(order.rank_of(g2.0, g2.1))
        }
        Some(v) => {
            let through = (x.head == v && y.tail == v) || (y.head == v && x.tail == v);
            if !through {
                true
            } else {
                let (u1, u2) = (e.other(v), f.other(v));
                !g.adjacent(u1, u2)
                    && g.common_neighbors(u1, u2)
                        .filter(|&w| w != v)
                        .all(|w| pair_min < order.rank_of(u1, w).min(order.rank_of(u2, w)))
            }
        }
    })
}

/// Edge test by exhaustive search over directed 3- and 4-cycles.
pub fn is_tri_edge_naive(g: &Graph, order: &ArcOrder, pair: &DirectedArcPair) -> Result<bool> {
    order.check_graph(g)?;
    pair.check_present(g)?;
    let (x, y) = (pair.first(), pair.second());
    for cycle in cycles_through(g, x).iter().filter(|c| c.contains(&y)) {
        if cycle.len() == 3 {
            return Ok(false);
        }
        let min_arc = cycle.iter().map(|s| s.arc()).min_by_key(|&a| order.rank(a)).expect("non-empty cycle");
        if min_arc != x.arc() && min_arc != y.arc() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn count_tri_edges(g: &Graph, order: &ArcOrder) -> Result<TriEdgeReport> {
    order.check_graph(g)?;
    let t = Rule::Triangulation(order).tally_all(g);
    let origin = 2 * g.arc_count() as u64;
    Ok(TriEdgeReport {
        total: origin + t.total(),
        origin_edges: origin,
        pair_edges: t.total(),
        disjoint_pairs: t.disjoint,
        adjacent_same_direction: t.same,
        adjacent_opposite: t.opposite,
    })
}

/// Triangulation edges over pairs touching the endpoints of `arcs`, plus the
/// origin edges of arcs touching them.
pub(crate) fn count_tri_edges_touching(g: &Graph, order: &ArcOrder, arcs: &[Arc]) -> u64 {
    let nodes: Vec<Node> = arcs.iter().flat_map(|a| [a.u(), a.v()]).collect();
    let origin = 2 * g.arcs().filter(|a| nodes.iter().any(|&x| a.contains(x))).count() as u64;
    origin + Rule::Triangulation(order).tally_touching(g, &nodes).total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DirectedArc;

    fn arc(a: usize, b: usize) -> Arc {
        Arc::new(a - 1, b - 1).unwrap()
    }

    fn d(t: usize, h: usize) -> DirectedArc {
        DirectedArc::new(t - 1, h - 1).unwrap()
    }

    #[test]
    fn order_construction() {
        let o = ArcOrder::from_sequence(2, &[]).unwrap();
        assert_eq!(o.rank(arc(1, 2)), 0);
        assert_eq!(random_arc_order(2, 99).rank(arc(1, 2)), 0);
        assert_eq!(random_arc_order(6, 5), random_arc_order(6, 5));
        assert!(ArcOrder::from_ranks(3, vec![0, 0, 1]).is_err());
        assert!(ArcOrder::from_ranks(3, vec![0, 1]).is_err());
        let o = ArcOrder::from_ranks(3, vec![2, 0, 1]).unwrap();
        assert_eq!(o.sequence(), vec![arc(1, 3), arc(2, 3), arc(1, 2)]);
        let s = o.swap_adjacent(0);
        assert_eq!(s.sequence(), vec![arc(2, 3), arc(1, 3), arc(1, 2)]);
    }

    #[test]
    fn rank_zero_is_uniform() {
        let seeds = 10_000u64;
        let mut hits = [0u32; 6];
        for s in 0..seeds {
            let o = random_arc_order(4, s);
            let first = o.sequence()[0];
            hits[arc_index(4, first)] += 1;
        }
        let p = 1.0 / 6.0;
        let se = (p * (1.0 - p) / seeds as f64).sqrt();
        for h in hits {
            let freq = h as f64 / seeds as f64;
            assert!((freq - p).abs() <= 4.0 * se, "{hits:?}");
        }
    }

    #[test]
    fn tri_edge_examples() {
        let tri = Graph::cycle(3).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        let lex = ArcOrder::lexicographic(3);
        let p = DirectedArcPair::new(d(1, 2), d(2, 3)).unwrap();
        assert!(!is_tri_edge(&tri, &lex, &p).unwrap());
        assert!(!is_tri_edge_naive(&tri, &lex, &p).unwrap());

        let p = DirectedArcPair::new(d(1, 2), d(3, 4)).unwrap();
        let min12 = ArcOrder::from_sequence(4, &[arc(1, 2)]).unwrap();
        let min23 = ArcOrder::from_sequence(4, &[arc(2, 3)]).unwrap();
        assert!(is_tri_edge(&c4, &min12, &p).unwrap());
        assert!(is_tri_edge_naive(&c4, &min12, &p).unwrap());
        assert!(!is_tri_edge(&c4, &min23, &p).unwrap());
        assert!(!is_tri_edge_naive(&c4, &min23, &p).unwrap());
    }

    #[test]
    fn tri_counts() {
        let tri = Graph::cycle(3).unwrap();
        assert_eq!(count_tri_edges(&tri, &ArcOrder::lexicographic(3)).unwrap().total, 12);
        let single = Graph::from_arcs(2, [(0, 1)]).unwrap();
        let r = count_tri_edges(&single, &ArcOrder::lexicographic(2)).unwrap();
        assert_eq!((r.total, r.origin_edges, r.pair_edges), (2, 2, 0));
        // cuboctahedron: 24 edges + 6 square diagonals, coned: + 12 spokes
        let k4 = Graph::complete(4).unwrap();
        for seed in 0..3 {
            assert_eq!(count_tri_edges(&k4, &random_arc_order(4, seed)).unwrap().total, 42);
        }
    }

    #[test]
    fn order_must_match_graph() {
        let g = Graph::cycle(4).unwrap();
        assert!(count_tri_edges(&g, &ArcOrder::lexicographic(5)).is_err());
    }
}
