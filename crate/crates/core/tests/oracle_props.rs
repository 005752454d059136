use proptest::prelude::*;
use seplab::graph::{erdos_renyi, Graph, SimParams};
use seplab::oracle::{embed_vertices, enumerate_edges, is_vertex, RationalVector};
use seplab::sep::count_edges;

#[test]
fn every_graph_on_four_nodes_matches() {
    for mask in 1..64u64 {
        let g = Graph::from_mask(4, mask).unwrap();
        let r = enumerate_edges(&g).unwrap();
        assert!(r.combinatorial_match, "mask {mask:#b}");
        assert_eq!(r.edge_pairs.len() as u64, count_edges(&g).total);
        let origin = RationalVector::from_integers(&[0; 4]);
        for &(i, j) in &r.edge_pairs {
            assert_ne!(r.vertex_set[i], origin.sub(&r.vertex_set[j]), "antipodal pair {i} {j}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_matches_on_random_graphs(n in 2usize..7, p in 0.2f64..0.9, seed: u64) {
        let g = erdos_renyi(&SimParams::new(n, p, seed).unwrap(), 0);
        prop_assume!(g.arc_count() > 0);
        let r = enumerate_edges(&g).unwrap();
        prop_assert!(r.combinatorial_match);
    }

    #[test]
    fn generators_are_vertices(n in 2usize..7, p in 0.2f64..0.9, seed: u64) {
        let g = erdos_renyi(&SimParams::new(n, p, seed).unwrap(), 0);
        prop_assume!(g.arc_count() > 1);
        let v = embed_vertices(&g).unwrap();
        for i in 0..v.len() {
            prop_assert!(is_vertex(&v, i).unwrap());
        }
    }
}
