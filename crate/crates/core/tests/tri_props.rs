use proptest::prelude::*;
use seplab::graph::{erdos_renyi, Graph, SimParams};
use seplab::sep::{count_edges, directed_arcs, is_edge_fast, DirectedArcPair};
use seplab::tri::{count_tri_edges, is_tri_edge, is_tri_edge_naive, random_arc_order};

fn graph(n: usize, p: f64, seed: u64) -> Graph {
    erdos_renyi(&SimParams::new(n, p, seed).unwrap(), 0)
}

fn pairs(g: &Graph) -> Vec<DirectedArcPair> {
    let arcs = directed_arcs(g);
    let mut out = Vec::new();
    for (i, &x) in arcs.iter().enumerate() {
        for &y in &arcs[i + 1..] {
            if let Ok(p) = DirectedArcPair::new(x, y) {
                out.push(p);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn local_rules_match_cycle_search(n in 2usize..9, p in 0.1f64..0.95, seed: u64, oseed: u64) {
        let g = graph(n, p, seed);
        let order = random_arc_order(n, oseed);
        for pair in pairs(&g) {
            prop_assert_eq!(is_tri_edge(&g, &order, &pair).unwrap(), is_tri_edge_naive(&g, &order, &pair).unwrap());
        }
    }

    #[test]
    fn polytope_edges_are_triangulation_edges(n in 2usize..9, p in 0.1f64..0.95, seed: u64, oseed: u64) {
        let g = graph(n, p, seed);
        let order = random_arc_order(n, oseed);
        for pair in pairs(&g) {
            if is_edge_fast(&g, &pair).unwrap() {
                prop_assert!(is_tri_edge(&g, &order, &pair).unwrap());
            }
        }
        let t = count_tri_edges(&g, &order).unwrap();
        prop_assert!(t.pair_edges >= count_edges(&g).total);
        prop_assert_eq!(t.origin_edges, 2 * g.arc_count() as u64);
        prop_assert_eq!(t.pair_edges, t.disjoint_pairs + t.adjacent_same_direction + t.adjacent_opposite);
    }

    #[test]
    fn total_does_not_depend_on_the_order(n in 2usize..13, p in 0.05f64..0.95, seed: u64, a: u64, b: u64) {
        let g = graph(n, p, seed);
        let x = count_tri_edges(&g, &random_arc_order(n, a)).unwrap();
        let y = count_tri_edges(&g, &random_arc_order(n, b)).unwrap();
        prop_assert_eq!(x.total, y.total);
    }

    #[test]
    fn adjacent_transpositions_keep_the_total(n in 3usize..9, p in 0.2f64..0.95, seed: u64, oseed: u64, r in 0u32..20) {
        let g = graph(n, p, seed);
        let order = random_arc_order(n, oseed);
        let len = (n * (n - 1) / 2) as u32;
        let swapped = order.swap_adjacent(r % (len - 1));
        prop_assert_eq!(count_tri_edges(&g, &order).unwrap().total, count_tri_edges(&g, &swapped).unwrap().total);
    }
}
