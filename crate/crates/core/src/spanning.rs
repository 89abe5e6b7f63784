//! Minimum spanning tree by Prim's node-growing method.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: NodeId,
    pub edges: BTreeSet<EdgeId>,
    pub total_weight: f64,
}

/// Candidate edge into the tree, ordered by (weight, node id, edge id).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    weight: f64,
    node: NodeId,
    edge: EdgeId,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.node.cmp(&other.node))
            .then(self.edge.cmp(&other.edge))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Grows a tree from `root` (default: the smallest node id), each step
/// attaching the unvisited node closest to the tree.
pub fn prim_mst(g: &Graph, root: Option<NodeId>) -> Result<SpanningTree> {
    let root = match root {
        Some(r) => {
            g.node(r)?;
            r
        }
        None => g.nodes().next().ok_or(Error::EmptyGraph)?.id,
    };
    let adj = g.adjacency(None);
    let mut visited = HashSet::from([root]);
    let mut edges = BTreeSet::new();
    let mut total_weight = 0.0;
    let mut heap = BinaryHeap::new();

    let push_from = |n: NodeId, visited: &HashSet<NodeId>, heap: &mut BinaryHeap<_>| {
        for &(m, e) in adj.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
            if !visited.contains(&m) {
                let weight = g.edge(e).expect("adjacent edge").weight;
                heap.push(Reverse(Candidate { weight, node: m, edge: e }));
            }
        }
    };
    push_from(root, &visited, &mut heap);

    while let Some(Reverse(c)) = heap.pop() {
        if !visited.insert(c.node) {
            continue;
        }
        edges.insert(c.edge);
        total_weight += c.weight;
        push_from(c.node, &visited, &mut heap);
    }

    if visited.len() != g.node_count() {
        return Err(Error::Disconnected);
    }
    Ok(SpanningTree { root, edges, total_weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_tree() {
        let t = prim_mst(&fixtures::triangle(), None).unwrap();
        assert_eq!(t.edges, BTreeSet::from([EdgeId(0), EdgeId(1)]));
        assert_eq!(t.total_weight, 3.0);
        assert_eq!(t.root, NodeId(0));
    }

    #[test]
    fn single_node_and_errors() {
        let mut g = Graph::new();
        let n = g.add_node(0.0, 0.0, None).unwrap();
        let t = prim_mst(&g, None).unwrap();
        assert!(t.edges.is_empty());
        assert_eq!(t.total_weight, 0.0);
        assert_eq!(t.root, n);

        assert_eq!(prim_mst(&fixtures::two_components(), None), Err(Error::Disconnected));
        assert_eq!(prim_mst(&Graph::new(), None), Err(Error::EmptyGraph));
        assert_eq!(
            prim_mst(&fixtures::triangle(), Some(NodeId(8))),
            Err(Error::UnknownNode(NodeId(8)))
        );
    }

    #[test]
    fn isolated_node_is_disconnected() {
        let mut g = fixtures::triangle();
        g.add_node(3.0, 3.0, None).unwrap();
        assert_eq!(prim_mst(&g, None), Err(Error::Disconnected));
    }

    #[test]
    fn cheapest_parallel_edge_wins() {
        let mut g = fixtures::path();
        let cheap = g.add_edge(NodeId(1), NodeId(0), Some(0.5)).unwrap();
        let t = prim_mst(&g, Some(NodeId(2))).unwrap();
        assert!(t.edges.contains(&cheap));
        assert_eq!(t.total_weight, 1.5);
    }

    #[test]
    fn ties_prefer_smaller_node_then_edge() {
        // all unit weights: from root 0, node 1 beats node 3, and of the two
        // parallel 0-1 edges the smaller id is kept
        let mut g = Graph::new();
        let n: Vec<_> = (0..4).map(|i| g.add_node(i as f64, 0.0, None).unwrap()).collect();
        let e03 = g.add_edge(n[0], n[3], Some(1.0)).unwrap();
        let e01 = g.add_edge(n[0], n[1], Some(1.0)).unwrap();
        let e01c = g.add_edge(n[1], n[0], Some(1.0)).unwrap();
        let e12 = g.add_edge(n[1], n[2], Some(1.0)).unwrap();
        let t = prim_mst(&g, None).unwrap();
        assert_eq!(t.edges, BTreeSet::from([e03, e01, e12]));
        assert!(!t.edges.contains(&e01c));
    }
}
