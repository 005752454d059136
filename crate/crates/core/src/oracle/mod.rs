//! Geometric ground truth for small graphs.
//!
//! Vertices `v_i` and `v_j` of a polytope span an edge iff some linear
//! functional `c` is maximised exactly on `[v_i, v_j]`; scaling lets us ask
//! for `c·v_i = c·v_j ≥ c·v_k + 1` for every other vertex `v_k`. Feasibility
//! is decided exactly over the rationals, so the test relies on nothing but
//! the definition of a face. Only proper faces count: a segment has two
//! vertices and no edges.

mod lp;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{potential_arcs, Graph};
use crate::sep::{directed_arcs, is_edge_fast, DirectedArcPair};
use crate::tri::{count_tri_edges, ArcOrder};

pub use lp::feasible;

/// Largest `n` accepted by [`enumerate_edges`] without an override.
pub const MAX_ORACLE_NODES: usize = 7;
/// Largest `n` accepted by [`exhaustive_expectation`].
pub const MAX_EXHAUSTIVE_NODES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector {
    coords: Vec<BigRational>,
}

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalVector { coords }
    }

    pub fn from_integers(xs: &[i64]) -> Self {
        RationalVector { coords: xs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect() }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn dot(&self, other: &RationalVector) -> BigRational {
        self.coords.iter().zip(&other.coords).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn coordinate_sum(&self) -> BigRational {
        self.coords.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }
}

/// `e_tail − e_head` for every directed arc, in the order of
/// [`directed_arcs`].
pub fn embed_vertices(g: &Graph) -> Result<Vec<RationalVector>> {
    if g.arc_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(directed_arcs(g)
        .into_iter()
        .map(|d| {
            let mut x = vec![0i64; g.n()];
            x[d.tail] = 1;
            x[d.head] = -1;
            RationalVector::from_integers(&x)
        })
        .collect())
}

fn check_vertices(vertices: &[RationalVector], indices: &[usize]) -> Result<()> {
    for &i in indices {
        if i >= vertices.len() {
            return Err(Error::VertexIndex { index: i, len: vertices.len() });
        }
    }
    for (a, x) in vertices.iter().enumerate() {
        if vertices[a + 1..].contains(x) {
            return Err(Error::DuplicateVertex(a));
        }
    }
    Ok(())
}

/// Feasibility of the separating functional over the other vertices, with
/// `tied` required to share the maximum with `top`. Faces are proper, so
/// without another vertex to separate from there is nothing to find.
fn separates(vertices: &[RationalVector], top: usize, tied: Option<usize>) -> bool {
    let others = vertices.len() - 1 - usize::from(tied.is_some());
    if others == 0 {
        return false;
    }
    let d = vertices[top].dim();
    let eq: Vec<Vec<BigRational>> = tied.map(|j| vertices[top].sub(&vertices[j]).coords).into_iter().collect();
    let ge: Vec<Vec<BigRational>> = (0..vertices.len())
        .filter(|&k| k != top && Some(k) != tied)
        .map(|k| vertices[top].sub(&vertices[k]).coords)
        .collect();
    feasible(d, &eq, &ge)
}

/// Whether `v_i` and `v_j` span an edge of `conv(vertices)`.
pub fn is_geometric_edge(vertices: &[RationalVector], i: usize, j: usize) -> Result<bool> {
    check_vertices(vertices, &[i, j])?;
    if i == j {
        return Err(Error::IdenticalArcs);
    }
    Ok(separates(vertices, i, Some(j)))
}

/// Whether `v_i` is a vertex of `conv(vertices)`.
pub fn is_vertex(vertices: &[RationalVector], i: usize) -> Result<bool> {
    check_vertices(vertices, &[i])?;
    Ok(separates(vertices, i, None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub vertex_set: Vec<RationalVector>,
    /// Index pairs `(i, j)`, `i < j`, into `vertex_set`.
    pub edge_pairs: BTreeSet<(usize, usize)>,
    pub combinatorial_match: bool,
}

pub fn enumerate_edges(g: &Graph) -> Result<OracleResult> {
    enumerate_edges_with(g, false)
}

/// As [`enumerate_edges`]; `allow_large` lifts the `n ≤ 7` guard.
pub fn enumerate_edges_with(g: &Graph, allow_large: bool) -> Result<OracleResult> {
    if g.n() > MAX_ORACLE_NODES && !allow_large {
        return Err(Error::SizeGuard { n: g.n(), max: MAX_ORACLE_NODES });
    }
    let vertex_set = embed_vertices(g)?;
    let arcs = directed_arcs(g);
    let v = vertex_set.len();
    let mut edge_pairs = BTreeSet::new();
    let mut combinatorial = BTreeSet::new();
    for i in 0..v {
        for j in i + 1..v {
            if separates(&vertex_set, i, Some(j)) {
                edge_pairs.insert((i, j));
            }
            if let Ok(pair) = DirectedArcPair::new(arcs[i], arcs[j]) {
                if is_edge_fast(g, &pair)? {
                    combinatorial.insert((i, j));
                }
            }
        }
    }
    let combinatorial_match = edge_pairs == combinatorial;
    Ok(OracleResult { vertex_set, edge_pairs, combinatorial_match })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectationModel {
    PolytopeOracle,
    PolytopeCombinatorial,
    /// Lexicographic arc order, two origin edges per arc.
    TriangulationCombinatorial,
}

fn count(g: &Graph, model: ExpectationModel) -> Result<u64> {
    Ok(match model {
        ExpectationModel::PolytopeOracle => {
            if g.arc_count() == 0 {
                0
            } else {
                enumerate_edges(g)?.edge_pairs.len() as u64
            }
        }
        ExpectationModel::PolytopeCombinatorial => crate::sep::count_edges(g).total,
        ExpectationModel::TriangulationCombinatorial => count_tri_edges(g, &ArcOrder::lexicographic(g.n()))?.total,
    })
}

/// `Σ_S p^{|S|} q^{C(n,2)−|S|} K(S)` over all arc subsets `S`, exactly.
pub fn exhaustive_expectation(n: usize, p: &BigRational, model: ExpectationModel) -> Result<BigRational> {
    if n > MAX_EXHAUSTIVE_NODES {
        return Err(Error::SizeGuard { n, max: MAX_EXHAUSTIVE_NODES });
    }
    if n == 0 {
        return Err(Error::NoNodes);
    }
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::ProbabilityOutOfRange(num_traits::ToPrimitive::to_f64(p).unwrap_or(f64::NAN)));
    }
    let m = potential_arcs(n);
    let q = BigRational::one() - p;
    let counts: Vec<(u32, u64)> = (0..1u64 << m)
        .into_par_iter()
        .map(|mask| {
            let g = Graph::from_mask(n, mask)?;
            Ok((mask.count_ones(), count(&g, model)?))
        })
        .collect::<Result<_>>()?;
    let mut total = BigRational::zero();
    for (size, k) in counts {
        if k == 0 {
            continue;
        }
        let weight = num_traits::pow(p.clone(), size as usize) * num_traits::pow(q.clone(), m - size as usize);
        total += weight * BigRational::from_integer(BigInt::from(k));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn embedding() {
        let single = Graph::from_arcs(2, [(0, 1)]).unwrap();
        let v = embed_vertices(&single).unwrap();
        assert_eq!(v, vec![RationalVector::from_integers(&[1, -1]), RationalVector::from_integers(&[-1, 1])]);
        let tri = embed_vertices(&Graph::cycle(3).unwrap()).unwrap();
        assert_eq!(tri.len(), 6);
        assert!(tri.iter().all(|x| x.coordinate_sum().is_zero()));
        assert_eq!(embed_vertices(&Graph::empty(3).unwrap()), Err(Error::EmptyGraph));
    }

    #[test]
    fn geometric_edges_of_the_hexagon() {
        let g = Graph::cycle(3).unwrap();
        let v = embed_vertices(&g).unwrap();
        let find = |x: &[i64]| v.iter().position(|y| *y == RationalVector::from_integers(x)).unwrap();
        let (e12, e13, e21) = (find(&[1, -1, 0]), find(&[1, 0, -1]), find(&[-1, 1, 0]));
        assert!(is_geometric_edge(&v, e12, e13).unwrap());
        assert!(!is_geometric_edge(&v, e12, e21).unwrap());
        assert!((0..v.len()).all(|i| is_vertex(&v, i).unwrap()));
        assert!(is_geometric_edge(&v, e12, e12).is_err());
        assert!(is_geometric_edge(&v, e12, 99).is_err());
        let mut dup = v.clone();
        dup.push(v[0].clone());
        assert_eq!(is_geometric_edge(&dup, 0, 1), Err(Error::DuplicateVertex(0)));
    }

    #[test]
    fn small_enumerations() {
        let single = enumerate_edges(&Graph::from_arcs(2, [(0, 1)]).unwrap()).unwrap();
        assert!(single.edge_pairs.is_empty() && single.combinatorial_match);
        for (g, edges) in
            [(Graph::cycle(3).unwrap(), 6), (Graph::complete(4).unwrap(), 24), (Graph::path(4).unwrap(), 12)]
        {
            let r = enumerate_edges(&g).unwrap();
            assert_eq!(r.edge_pairs.len(), edges);
            assert!(r.combinatorial_match);
        }
        assert!(matches!(enumerate_edges(&Graph::cycle(8).unwrap()), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn exhaustive_small_cases() {
        assert_eq!(exhaustive_expectation(4, &ratio(1, 2), ExpectationModel::PolytopeOracle).unwrap(), ratio(21, 2));
        assert_eq!(
            exhaustive_expectation(2, &ratio(1, 2), ExpectationModel::TriangulationCombinatorial).unwrap(),
            ratio(1, 1)
        );
        for model in [ExpectationModel::PolytopeOracle, ExpectationModel::PolytopeCombinatorial] {
            assert_eq!(exhaustive_expectation(3, &ratio(1, 1), model).unwrap(), ratio(6, 1));
        }
        assert!(exhaustive_expectation(6, &ratio(1, 2), ExpectationModel::PolytopeCombinatorial).is_err());
    }
}
