#[path = "support/oracles.rs"]
mod oracles;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use route_core::{
    augment_to_even, chinese_postman, fleury_euler_circuit, hierholzer_euler_circuit, odd_nodes,
    Error,
};

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn postman_is_optimal(seed in any::<u64>(), n in 2usize..14, extra in 0usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = oracles::random_graph_few_odd(&mut rng, n, extra, 8);
        let depot = g.node_ids()[rng.gen_range(0..n)];
        let walk = chinese_postman(&g, depot).unwrap();
        let edge_sum: f64 = g.edges().map(|e| e.weight).sum();
        prop_assert!((walk.total_cost - oracles::brute_force_postman(&g)).abs() <= TOL);
        prop_assert!(walk.total_cost + TOL >= edge_sum);
        let all_even = odd_nodes(&g).nodes.is_empty();
        prop_assert_eq!((walk.total_cost - edge_sum).abs() <= TOL, all_even);
        // every original edge covered, nothing else reported
        for e in g.edges() {
            prop_assert!(walk.edge_sequence.contains(&e.id));
        }
        prop_assert!(walk.edge_sequence.iter().all(|&e| g.edge(e).is_ok()));
        prop_assert_eq!(walk.node_sequence.first(), Some(&depot));
        prop_assert_eq!(walk.node_sequence.last(), Some(&depot));
        // deterministic
        prop_assert_eq!(chinese_postman(&g, depot).unwrap(), walk);
    }

    #[test]
    fn augmentation_invariants(seed in any::<u64>(), n in 2usize..14, extra in 0usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = oracles::random_graph_few_odd(&mut rng, n, extra, 8);
        let aug = augment_to_even(&g).unwrap();
        prop_assert!(odd_nodes(aug.graph()).nodes.is_empty());
        prop_assert!((aug.added_cost() - aug.pairing.total_cost).abs() <= TOL);
        for e in &aug.added_edges {
            let orig = g.edge(e.duplicated_from.unwrap()).unwrap();
            prop_assert_eq!(orig.weight, e.weight);
            prop_assert!((orig.u, orig.v) == (e.u, e.v));
        }
        let fleury = fleury_euler_circuit(aug.graph(), g.node_ids()[0]).unwrap();
        prop_assert_eq!(oracles::check_euler_circuit(aug.graph(), &fleury), Ok(()));
    }

    #[test]
    fn fleury_and_hierholzer_agree(seed in any::<u64>(), n in 3usize..16, walks in 0usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = oracles::random_eulerian_multigraph(&mut rng, n, walks);
        let start = g.node_ids()[rng.gen_range(0..n)];
        let f = fleury_euler_circuit(&g, start).unwrap();
        let h = hierholzer_euler_circuit(&g, start).unwrap();
        prop_assert_eq!(oracles::check_euler_circuit(&g, &f), Ok(()));
        prop_assert_eq!(oracles::check_euler_circuit(&g, &h), Ok(()));
        prop_assert!((f.total_cost - h.total_cost).abs() <= TOL);
    }

    #[test]
    fn odd_graphs_have_no_circuit(seed in any::<u64>(), n in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = oracles::random_connected_graph(&mut rng, n, 2, 0.1, 10.0);
        let odd = odd_nodes(&g).nodes;
        prop_assert_eq!(odd.len() % 2, 0);
        let res = fleury_euler_circuit(&g, g.node_ids()[0]);
        if odd.is_empty() {
            prop_assert!(res.is_ok());
        } else {
            prop_assert_eq!(res, Err(Error::OddDegreePresent(odd)));
        }
    }
}
