//! Shared enumeration of unordered arc pairs for the polytope and
//! triangulation edge counters.
//!
//! For an unordered pair of present arcs `{e, f}` the four orientation
//! combinations are expanded inline:
//!
//! * disjoint `e = {a, b}`, `f = {c, d}`: the orientations split into two
//!   classes of two, each with one completing pair of arcs that closes the
//!   unique directed 4-cycle: `(a→b, c→d)` and `(b→a, d→c)` need `{b,c}` and
//!   `{d,a}`; `(a→b, d→c)` and `(b→a, c→d)` need `{b,d}` and `{c,a}`.
//! * sharing node `v` with other ends `u1`, `u2`: two orientations point the
//!   same way at `v` and never lie on a directed cycle; the two opposite
//!   orientations are closed by `{u1, u2}` (3-cycle) or by `{u1, w}, {w, u2}`
//!   (4-cycles).

use crate::graph::{Arc, Graph, Node};
use crate::tri::ArcOrder;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Rule<'a> {
    Polytope,
    Triangulation(&'a ArcOrder),
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Tally {
    pub disjoint: u64,
    pub same: u64,
    pub opposite: u64,
}

impl Tally {
    pub fn total(&self) -> u64 {
        self.disjoint + self.same + self.opposite
    }
}

impl Rule<'_> {
    /// Edges among the 4 directed pairs over disjoint arcs `(a,b)`, `(c,d)`.
    #[inline]
    fn disjoint(&self, g: &Graph, e: Arc, f: Arc) -> u64 {
        let (a, b, c, d) = (e.u(), e.v(), f.u(), f.v());
        let mut count = 0;
        for (g1, g2) in [((b, c), (d, a)), ((b, d), (c, a))] {
            let closed = g.adjacent(g1.0, g1.1) && g.adjacent(g2.0, g2.1);
            let survives = match self {
                Rule::Polytope => !closed,
                Rule::Triangulation(order) => {
                    !closed || {
                        let pair_min = order.rank(e).min(order.rank(f));
                        let other_min = order.rank_of(g1.0, g1.1).min(order.rank_of(g2.0, g2.1));
                        pair_min < other_min
                    }
                }
            };
            if survives {
                count += 2;
            }
        }
        count
    }

    /// Edges among the 2 directed pairs with opposite orientation at `v`.
    #[inline]
    fn opposite(&self, g: &Graph, v: Node, u1: Node, u2: Node) -> u64 {
        if g.adjacent(u1, u2) {
            return 0;
        }
        let survives = match self {
            Rule::Polytope => g.common_neighbors_unchecked(u1, u2, Some(v)) == 0,
            Rule::Triangulation(order) => {
                let pair_min = order.rank_of(u1, v).min(order.rank_of(u2, v));
                g.common_neighbors(u1, u2)
                    .filter(|&w| w != v)
                    .all(|w| pair_min < order.rank_of(u1, w).min(order.rank_of(u2, w)))
            }
        };
        if survives {
            2
        } else {
            0
        }
    }

    #[inline]
    fn pair(&self, g: &Graph, e: Arc, f: Arc, tally: &mut Tally) {
        match e.shared_node(f) {
            None => tally.disjoint += self.disjoint(g, e, f),
            Some(v) => {
                tally.same += 2;
                tally.opposite += self.opposite(g, v, e.other(v), f.other(v));
            }
        }
    }

    pub fn tally_all(&self, g: &Graph) -> Tally {
        let arcs: Vec<Arc> = g.arcs().collect();
        let mut t = Tally::default();
        for (i, &e) in arcs.iter().enumerate() {
            for &f in &arcs[i + 1..] {
                self.pair(g, e, f, &mut t);
            }
        }
        t
    }

    /// Edges over pairs in which at least one arc touches `nodes`.
    ///
    /// The edge status of a pair can only depend on the presence of arcs that
    /// touch one of the pair's endpoints, so this partial count changes
    /// exactly like the full count when arcs inside `nodes` are toggled.
    pub fn tally_touching(&self, g: &Graph, nodes: &[Node]) -> Tally {
        let arcs: Vec<Arc> = g.arcs().collect();
        let touches = |a: Arc| nodes.iter().any(|&x| a.contains(x));
        let mut t = Tally::default();
        for (i, &e) in arcs.iter().enumerate() {
            if !touches(e) {
                continue;
            }
            for (j, &f) in arcs.iter().enumerate() {
                if j == i || (j < i && touches(f)) {
                    continue;
                }
                self.pair(g, e, f, &mut t);
            }
        }
        t
    }
}
