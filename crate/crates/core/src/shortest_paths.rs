//! Single-source (Dijkstra) and all-pairs (Floyd–Warshall) shortest paths,
//! path reconstruction and routing through an ordered list of waypoints.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeIndex};
use crate::COST_TOLERANCE;

/// Shortest-path distance, or the marker for "no path".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "Option<f64>", into = "Option<f64>")]
pub enum Distance {
    Finite(f64),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<f64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_reachable(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl From<Option<f64>> for Distance {
    fn from(d: Option<f64>) -> Self {
        d.map_or(Distance::Unreachable, Distance::Finite)
    }
}

impl From<Distance> for Option<f64> {
    fn from(d: Distance) -> Self {
        d.finite()
    }
}

/// A walk through the graph and what it costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub nodes: Vec<NodeId>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathTree {
    pub source: NodeId,
    pub dist: BTreeMap<NodeId, Distance>,
    /// Predecessor on the chosen shortest path. Absent for the source and for
    /// unreachable nodes.
    pub pred: BTreeMap<NodeId, NodeId>,
    /// Reachable nodes in the order they were settled, nearest first.
    pub settle_order: Vec<NodeId>,
}

impl ShortestPathTree {
    /// Walks the predecessor chain back from `target`.
    pub fn path_to(&self, target: NodeId) -> Result<Vec<NodeId>> {
        match self.dist.get(&target) {
            None => return Err(Error::UnknownNode(target)),
            Some(Distance::Unreachable) => {
                return Err(Error::Unreachable { from: self.source, to: target })
            }
            Some(Distance::Finite(_)) => {}
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Some(&p) = self.pred.get(&cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Ok(path)
    }
}

/// Heap key ordered by distance, then node id.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier(f64, NodeId);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra's algorithm: settles nodes one at a time, always the closest
/// unsettled one, ties broken by node id. Among equal-cost predecessors the
/// smallest node id wins.
pub fn dijkstra(g: &Graph, source: NodeId) -> Result<ShortestPathTree> {
    g.node(source)?;
    let adj = g.adjacency(None);
    let mut best: BTreeMap<NodeId, f64> = BTreeMap::from([(source, 0.0)]);
    let mut pred: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut settled: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut settle_order = Vec::new();
    let mut heap = BinaryHeap::from([Reverse(Frontier(0.0, source))]);

    while let Some(Reverse(Frontier(d, u))) = heap.pop() {
        if settled.contains_key(&u) || best.get(&u) != Some(&d) {
            continue;
        }
        settled.insert(u, d);
        settle_order.push(u);
        for &(v, e) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if settled.contains_key(&v) {
                continue;
            }
            let cand = d + g.edge(e)?.weight;
            match best.get(&v) {
                Some(&cur) if cand > cur => {}
                Some(&cur) if cand == cur => {
                    if pred.get(&v).is_some_and(|&p| u < p) {
                        pred.insert(v, u);
                    }
                }
                _ => {
                    best.insert(v, cand);
                    pred.insert(v, u);
                    heap.push(Reverse(Frontier(cand, v)));
                }
            }
        }
    }

    let dist = g
        .node_ids()
        .into_iter()
        .map(|n| (n, settled.get(&n).copied().into()))
        .collect();
    Ok(ShortestPathTree { source, dist, pred, settle_order })
}

/// All-pairs distances plus a successor matrix for path reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub order: Vec<NodeId>,
    pub d: Vec<Vec<Distance>>,
    /// `next[i][j]` is the node after `order[i]` on the chosen shortest path
    /// to `order[j]`; `None` on the diagonal and for unreachable pairs.
    pub next: Vec<Vec<Option<NodeId>>>,
    /// Cheapest direct edge weight per pair.
    direct: Vec<Vec<Option<f64>>>,
    index: NodeIndex,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, id: NodeId) -> Result<usize> {
        self.index.get(id)
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<Distance> {
        Ok(self.d[self.index_of(u)?][self.index_of(v)?])
    }

    /// Cheapest direct edge between two nodes, if any.
    pub fn direct_weight(&self, u: NodeId, v: NodeId) -> Result<Option<f64>> {
        Ok(self.direct[self.index_of(u)?][self.index_of(v)?])
    }

    /// Shortest route visiting `stops` in the given order. Legs are
    /// independent, so nodes and edges may repeat across legs.
    pub fn route_through(&self, stops: &[NodeId]) -> Result<Route> {
        let Some((&first, rest)) = stops.split_first() else {
            return Ok(Route { nodes: Vec::new(), cost: 0.0 });
        };
        let mut route = reconstruct_path(self, first, first)?;
        let mut from = first;
        for &to in rest {
            let leg = reconstruct_path(self, from, to)?;
            route.nodes.extend_from_slice(&leg.nodes[1..]);
            route.cost += leg.cost;
            from = to;
        }
        Ok(route)
    }
}

/// Floyd–Warshall over the graph's nodes in ascending id order. Parallel edges
/// collapse to the cheapest one.
///
/// The successor matrix follows the shortest path with the fewest edges and,
/// among those, the smallest next node id.
pub fn floyd_warshall(g: &Graph) -> DistanceMatrix {
    let index = NodeIndex::of(g);
    let n = index.len();
    let mut direct: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for e in g.edges() {
        let (i, j) = (index.get(e.u).expect("edge endpoint"), index.get(e.v).expect("edge endpoint"));
        let w = direct[i][j].map_or(e.weight, |cur: f64| cur.min(e.weight));
        direct[i][j] = Some(w);
        direct[j][i] = Some(w);
    }

    let mut d = direct.clone();
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0.0);
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i][k] else { continue };
            for j in 0..n {
                let Some(dkj) = d[k][j] else { continue };
                let via = dik + dkj;
                if d[i][j].is_none_or(|cur| via < cur) {
                    d[i][j] = Some(via);
                }
            }
        }
    }

    let next = successors(&d, &direct, &index);
    DistanceMatrix {
        order: index.ids.clone(),
        d: d.into_iter().map(|row| row.into_iter().map(Distance::from).collect()).collect(),
        next,
        direct,
        index,
    }
}

/// For each target, ranks nodes by the fewest edges on a shortest path to it
/// and points every node at the smallest-id neighbour one edge closer.
fn successors(
    d: &[Vec<Option<f64>>],
    direct: &[Vec<Option<f64>>],
    index: &NodeIndex,
) -> Vec<Vec<Option<NodeId>>> {
    let n = index.len();
    let nbrs: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| (0..n).filter_map(|s| direct[i][s].map(|w| (s, w))).collect())
        .collect();
    let mut next = vec![vec![None; n]; n];
    for j in 0..n {
        // i -> s lies on a shortest path to j
        let tight = |i: usize, s: usize, w: f64| match (d[i][j], d[s][j]) {
            (Some(dij), Some(dsj)) => (w + dsj - dij).abs() <= COST_TOLERANCE,
            _ => false,
        };
        let mut hops: Vec<Option<usize>> = vec![None; n];
        hops[j] = Some(0);
        let mut queue = VecDeque::from([j]);
        while let Some(s) = queue.pop_front() {
            let h = hops[s].expect("queued nodes are ranked");
            for &(i, w) in &nbrs[s] {
                if hops[i].is_none() && tight(i, s, w) {
                    hops[i] = Some(h + 1);
                    queue.push_back(i);
                }
            }
        }
        for i in 0..n {
            let Some(hi) = hops[i].filter(|&h| h > 0) else { continue };
            next[i][j] = nbrs[i]
                .iter()
                .find(|&&(s, w)| hops[s] == Some(hi - 1) && tight(i, s, w))
                .map(|&(s, _)| index.ids[s]);
        }
    }
    next
}

/// Recovers the stored shortest path from `u` to `v`. The cost is re-summed
/// from edge weights, taking the cheapest parallel edge at each step.
pub fn reconstruct_path(m: &DistanceMatrix, u: NodeId, v: NodeId) -> Result<Route> {
    let (mut i, j) = (m.index_of(u)?, m.index_of(v)?);
    if !m.d[i][j].is_reachable() {
        return Err(Error::Unreachable { from: u, to: v });
    }
    let mut nodes = vec![u];
    let mut cost = 0.0;
    while i != j {
        let s = m.next[i][j].expect("reachable pairs have a successor");
        let si = m.index_of(s)?;
        cost += m.direct[i][si].expect("successor is adjacent");
        nodes.push(s);
        i = si;
    }
    Ok(Route { nodes, cost })
}

/// Shortest route from `start` through `waypoints` (in the given order) to
/// `end`.
pub fn route_via_waypoints(
    g: &Graph,
    start: NodeId,
    waypoints: &[NodeId],
    end: NodeId,
) -> Result<Route> {
    let stops: Vec<NodeId> =
        std::iter::once(start).chain(waypoints.iter().copied()).chain([end]).collect();
    for &s in &stops {
        g.node(s)?;
    }
    floyd_warshall(g).route_through(&stops)
}
