//! Small canonical graphs used throughout the tests, the CLI examples and the
//! README.

use crate::graph::{Graph, NodeId};

/// Node ids of [`koenigsberg`]: north bank A, south bank B, island C, east D.
pub const KOENIGSBERG_NODES: [NodeId; 4] = [NodeId(0), NodeId(1), NodeId(2), NodeId(3)];

fn nodes(g: &mut Graph, coords: &[(f64, f64)], labels: &[&str]) -> Vec<NodeId> {
    coords
        .iter()
        .zip(labels)
        .map(|(&(x, y), l)| g.add_node(x, y, Some(l.to_string())).expect("fixture node"))
        .collect()
}

/// Triangle a, b, c with w(a,b) = 1, w(b,c) = 2, w(a,c) = 4.
pub fn triangle() -> Graph {
    let mut g = Graph::new();
    let n = nodes(&mut g, &[(10.0, 10.0), (60.0, 10.0), (35.0, 50.0)], &["a", "b", "c"]);
    g.add_edge(n[0], n[1], Some(1.0)).unwrap();
    g.add_edge(n[1], n[2], Some(2.0)).unwrap();
    g.add_edge(n[0], n[2], Some(4.0)).unwrap();
    g
}

/// Path a - b - c with unit weights.
pub fn path() -> Graph {
    let mut g = Graph::new();
    let n = nodes(&mut g, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], &["a", "b", "c"]);
    g.add_edge(n[0], n[1], Some(1.0)).unwrap();
    g.add_edge(n[1], n[2], Some(1.0)).unwrap();
    g
}

/// The seven bridges of Königsberg with unit weights:
/// A–C twice, B–C twice, A–D, B–D, C–D.
pub fn koenigsberg() -> Graph {
    let mut g = Graph::new();
    let n = nodes(
        &mut g,
        &[(200.0, 40.0), (200.0, 260.0), (150.0, 150.0), (380.0, 150.0)],
        &["A", "B", "C", "D"],
    );
    let (a, b, c, d) = (n[0], n[1], n[2], n[3]);
    for (u, v) in [(a, c), (a, c), (b, c), (b, c), (a, d), (b, d), (c, d)] {
        g.add_edge(u, v, Some(1.0)).unwrap();
    }
    g
}

/// Complete graph on the corners of the unit square, Euclidean weights.
pub fn unit_square() -> Graph {
    let mut g = Graph::new();
    let n = nodes(&mut g, &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], &["A", "B", "C", "D"]);
    for i in 0..4 {
        for j in i + 1..4 {
            g.add_edge(n[i], n[j], None).unwrap();
        }
    }
    g
}

/// Two disjoint unit edges a–b and c–d.
pub fn two_components() -> Graph {
    let mut g = Graph::new();
    let n = nodes(
        &mut g,
        &[(0.0, 0.0), (1.0, 0.0), (5.0, 5.0), (6.0, 5.0)],
        &["a", "b", "c", "d"],
    );
    g.add_edge(n[0], n[1], Some(1.0)).unwrap();
    g.add_edge(n[2], n[3], Some(1.0)).unwrap();
    g
}
