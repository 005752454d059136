use proptest::prelude::*;
use seplab::graph::{erdos_renyi, Graph, SimParams};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_paths_match_degree_handshake(n in 2usize..14, p in 0.05f64..0.95, seed: u64) {
        let g = erdos_renyi(&SimParams::new(n, p, seed).unwrap(), 0);
        let mut total = 0u64;
        for s in 0..n {
            for t in 0..n {
                if s != t {
                    total += g.path_count(s, t, 2).unwrap();
                }
            }
        }
        let handshake: u64 = (0..n).map(|v| { let d = g.degree(v) as u64; d * d.saturating_sub(1) }).sum();
        prop_assert_eq!(total, handshake);
    }

    #[test]
    fn three_paths_match_enumeration(n in 2usize..10, p in 0.1f64..0.9, seed: u64) {
        let g = erdos_renyi(&SimParams::new(n, p, seed).unwrap(), 1);
        for s in 0..n {
            for t in 0..n {
                if s == t { continue; }
                let mut brute = 0u64;
                for a in 0..n {
                    for b in 0..n {
                        let distinct = a != b && ![s, t].contains(&a) && ![s, t].contains(&b);
                        if distinct && g.has_arc(arc(s, a)).unwrap() && g.has_arc(arc(a, b)).unwrap() && g.has_arc(arc(b, t)).unwrap() {
                            brute += 1;
                        }
                    }
                }
                prop_assert_eq!(g.path_count(s, t, 3).unwrap(), brute);
            }
        }
    }

    #[test]
    fn sampled_graphs_are_simple_and_symmetric(n in 1usize..80, p in 0.01f64..0.99, seed: u64, idx: u64) {
        let g = erdos_renyi(&SimParams::new(n, p, seed).unwrap(), idx);
        let mut m = 0;
        for u in 0..n {
            prop_assert_eq!(g.common_neighbor_count(u, (u + 1) % n.max(2), None).is_ok(), n >= 2);
            for v in g.neighbors(u) {
                prop_assert!(v != u);
                prop_assert!(g.neighbors(v).any(|w| w == u));
                if u < v { m += 1; }
            }
        }
        prop_assert_eq!(m, g.arc_count());
        prop_assert_eq!(g.arcs().count(), g.arc_count());
    }
}

fn arc(a: usize, b: usize) -> seplab::graph::Arc {
    seplab::graph::Arc::new(a, b).unwrap()
}

#[test]
fn relabel_preserves_arc_count() {
    let g = Graph::path(5).unwrap();
    let h = g.relabel(&[4, 3, 2, 1, 0]);
    assert_eq!(h.arc_count(), 4);
    assert_eq!(h, g);
}
