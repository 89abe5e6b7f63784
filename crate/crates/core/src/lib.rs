//! Routing algorithms over weighted undirected multigraphs whose nodes live in
//! the pixel space of a raster map.
//!
//! The crate covers single-source and all-pairs shortest paths, Prim's minimum
//! spanning tree, exact minimum-weight perfect matching, the Chinese Postman
//! tour (with a bridge-avoiding Euler circuit) and Christofides' metric TSP
//! approximation with 2-opt/3-opt improvement.

pub mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod matching;
pub mod postman;
pub mod shortest_paths;
pub mod spanning;
pub mod tsp;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, Mutation, MutationOutcome, Node, NodeId, Overlay};
pub use matching::{min_weight_perfect_matching, Pairing, PairDistance};
pub use postman::{
    augment_to_even, chinese_postman, fleury_euler_circuit, hierholzer_euler_circuit, odd_nodes,
    ClosedWalk, EulerianAugmentation, OddNodeSet,
};
pub use shortest_paths::{
    dijkstra, floyd_warshall, reconstruct_path, route_via_waypoints, Distance, DistanceMatrix,
    Route, ShortestPathTree,
};
pub use spanning::{prim_mst, SpanningTree};
pub use tsp::{
    christofides, held_karp_exact, metric_closure, shortcut_to_hamiltonian, three_opt, two_opt,
    MetricInstance, Tour,
};

/// Absolute tolerance used for every cost comparison in the crate.
pub const COST_TOLERANCE: f64 = 1e-9;
