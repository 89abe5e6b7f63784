//! Chinese Postman tours.
//!
//! The odd-degree nodes are paired by a minimum-weight perfect matching over
//! shortest-path distances, the edges of each pair's shortest path are
//! duplicated, and an Euler circuit of the now all-even multigraph is traced
//! with Fleury's rule: never cross a bridge of the untraversed remainder while
//! another edge is available.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph, NodeId, NodeIndex};
use crate::matching::{min_weight_perfect_matching, Pairing};
use crate::shortest_paths::{floyd_warshall, reconstruct_path};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddNodeSet {
    pub nodes: Vec<NodeId>,
}

/// A connected graph plus the parallel copies that make every degree even.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerianAugmentation {
    pub base: Graph,
    pub added_edges: Vec<Edge>,
    pub pairing: Pairing,
    augmented: Graph,
}

impl EulerianAugmentation {
    /// Base graph with the added copies in place.
    pub fn graph(&self) -> &Graph {
        &self.augmented
    }

    pub fn added_cost(&self) -> f64 {
        self.added_edges.iter().map(|e| e.weight).sum()
    }
}

/// Closed walk given both as nodes and as the edges between them:
/// `edge_sequence[i]` joins `node_sequence[i]` and `node_sequence[i + 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedWalk {
    pub start: NodeId,
    pub node_sequence: Vec<NodeId>,
    pub edge_sequence: Vec<EdgeId>,
    pub total_cost: f64,
}

impl ClosedWalk {
    fn trivial(start: NodeId) -> Self {
        ClosedWalk { start, node_sequence: vec![start], edge_sequence: Vec::new(), total_cost: 0.0 }
    }
}

/// All odd-degree nodes, ascending by id.
pub fn odd_nodes(g: &Graph) -> OddNodeSet {
    OddNodeSet {
        nodes: g.degrees().into_iter().filter(|&(_, d)| d % 2 == 1).map(|(n, _)| n).collect(),
    }
}

/// Duplicates shortest paths between optimally paired odd nodes so that
/// every degree becomes even. Each copy duplicates the cheapest edge between
/// consecutive path nodes.
pub fn augment_to_even(g: &Graph) -> Result<EulerianAugmentation> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let odd = odd_nodes(g);
    let mut augmented = g.clone();
    if odd.nodes.is_empty() {
        return Ok(EulerianAugmentation {
            base: g.clone(),
            added_edges: Vec::new(),
            pairing: Pairing::empty(),
            augmented,
        });
    }

    let dist = floyd_warshall(g);
    let pairing = min_weight_perfect_matching(&odd.nodes, &dist)?;
    let mut added_edges = Vec::new();
    for &(a, b) in &pairing.pairs {
        let route = reconstruct_path(&dist, a, b)?;
        for step in route.nodes.windows(2) {
            let original = g.cheapest_edge_between(step[0], step[1]).expect("path steps are adjacent");
            let copy = augmented.duplicate_edge(original.id)?;
            added_edges.push(augmented.edge(copy)?.clone());
        }
    }
    Ok(EulerianAugmentation { base: g.clone(), added_edges, pairing, augmented })
}

/// Shared preconditions for Euler circuits. `Ok(None)` means there is nothing
/// to traverse.
fn check_eulerian(g: &Graph, start: NodeId) -> Result<Option<()>> {
    g.node(start)?;
    let odd = odd_nodes(g);
    if !odd.nodes.is_empty() {
        return Err(Error::OddDegreePresent(odd.nodes));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.edge_count() == 0 {
        return Ok(None);
    }
    if g.degree(start)? == 0 {
        return Err(Error::Disconnected);
    }
    Ok(Some(()))
}

/// Fleury's algorithm. From the current node take the incident edge with the
/// smallest (neighbour id, edge id) that is not a bridge of the untraversed
/// remainder; cross a bridge only when nothing else is left. Stops when the
/// current node has no edges left.
pub fn fleury_euler_circuit(g: &Graph, start: NodeId) -> Result<ClosedWalk> {
    if check_eulerian(g, start)?.is_none() {
        return Ok(ClosedWalk::trivial(start));
    }
    let mut residual = g.clone();
    let mut walk = ClosedWalk::trivial(start);
    let mut cur = start;
    loop {
        let mut options: Vec<(NodeId, EdgeId)> =
            residual.incident_edges(cur)?.iter().map(|e| (e.other(cur), e.id)).collect();
        if options.is_empty() {
            break;
        }
        options.sort_unstable();
        let (next, edge) = match options.as_slice() {
            [only] => *only,
            _ => {
                let mut chosen = options[0];
                for &opt in &options {
                    if !residual.is_bridge(opt.1)? {
                        chosen = opt;
                        break;
                    }
                }
                chosen
            }
        };
        let e = residual.remove_edge(edge)?;
        walk.total_cost += e.weight;
        walk.edge_sequence.push(edge);
        walk.node_sequence.push(next);
        cur = next;
    }
    debug_assert_eq!(residual.edge_count(), 0, "connected even graph is fully traversed");
    Ok(walk)
}

/// Hierholzer's splice-the-subcircuits algorithm, linear in the edge count.
/// Neighbours are tried in (neighbour id, edge id) order.
pub fn hierholzer_euler_circuit(g: &Graph, start: NodeId) -> Result<ClosedWalk> {
    if check_eulerian(g, start)?.is_none() {
        return Ok(ClosedWalk::trivial(start));
    }
    let index = NodeIndex::of(g);
    let edge_ids: Vec<EdgeId> = g.edges().map(|e| e.id).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); index.len()];
    for (k, e) in g.edges().enumerate() {
        let (u, v) = (index.get(e.u)?, index.get(e.v)?);
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut used = vec![false; edge_ids.len()];
    let mut cursor = vec![0usize; index.len()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(index.get(start)?, None)];
    let mut nodes = Vec::with_capacity(edge_ids.len() + 1);
    let mut edges = Vec::with_capacity(edge_ids.len());
    while let Some(&(v, _)) = stack.last() {
        while cursor[v] < adj[v].len() && used[adj[v][cursor[v]].1] {
            cursor[v] += 1;
        }
        if let Some(&(w, k)) = adj[v].get(cursor[v]) {
            used[k] = true;
            stack.push((w, Some(k)));
        } else {
            let (v, via) = stack.pop().expect("non-empty");
            nodes.push(index.ids[v]);
            edges.extend(via.map(|k| edge_ids[k]));
        }
    }
    nodes.reverse();
    edges.reverse();
    let total_cost = edges.iter().map(|&e| g.edge(e).map(|e| e.weight)).sum::<Result<f64>>()?;
    Ok(ClosedWalk { start, node_sequence: nodes, edge_sequence: edges, total_cost })
}

/// Minimum-cost closed walk from `depot` covering every edge at least once.
/// Edges traversed a second time are reported under their original ids.
pub fn chinese_postman(g: &Graph, depot: NodeId) -> Result<ClosedWalk> {
    g.node(depot)?;
    let aug = augment_to_even(g)?;
    let walk = fleury_euler_circuit(aug.graph(), depot)?;
    let edge_sequence = walk
        .edge_sequence
        .iter()
        .map(|&e| aug.graph().edge(e).map(Edge::original_id))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosedWalk { edge_sequence, ..walk })
}
