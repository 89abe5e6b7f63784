//! Algorithm requests and the results handed to clients.

use std::collections::BTreeMap;
use std::time::Instant;

use route_core::{
    chinese_postman, christofides, dijkstra, floyd_warshall, metric_closure, prim_mst, three_opt,
    two_opt, Distance, EdgeId, Error, Graph, NodeId,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum AlgorithmRequest {
    /// Shortest-path tree from `source`, or a single route when `target` is set.
    Dijkstra {
        source: NodeId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<NodeId>,
    },
    /// Shortest route through `waypoints` in order; the first is the start and
    /// the last the destination.
    FloydRoute { waypoints: Vec<NodeId> },
    Prim {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        root: Option<NodeId>,
    },
    ChinesePostman { depot: NodeId },
    Christofides {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start: Option<NodeId>,
        #[serde(default)]
        opt2: bool,
        #[serde(default)]
        opt3: bool,
        /// Nodes the tour must visit; all nodes when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        targets: Option<Vec<NodeId>>,
    },
}

impl AlgorithmRequest {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmRequest::Dijkstra { .. } => "dijkstra",
            AlgorithmRequest::FloydRoute { .. } => "floyd_route",
            AlgorithmRequest::Prim { .. } => "prim",
            AlgorithmRequest::ChinesePostman { .. } => "chinese_postman",
            AlgorithmRequest::Christofides { .. } => "christofides",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultKind {
    Route,
    Tree,
    Walk,
    Tour,
}

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub algorithm: String,
    pub kind: ResultKind,
    /// Visit sequence for routes, walks and tours; settle order for a
    /// shortest-path tree; empty for a spanning tree.
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    /// Route, walk and tour length; total edge weight for trees.
    pub cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<BTreeMap<NodeId, Distance>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predecessors: Option<BTreeMap<NodeId, NodeId>>,
    /// Image coordinates of `nodes`; tours are closed back to their start.
    pub polyline: Vec<Point>,
    /// One segment per edge, for tree results.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<[Point; 2]>,
    pub elapsed_ms: f64,
}

fn point(g: &Graph, n: NodeId) -> Result<Point, Error> {
    let node = g.node(n)?;
    Ok([node.x, node.y])
}

fn polyline(g: &Graph, nodes: &[NodeId]) -> Result<Vec<Point>, Error> {
    nodes.iter().map(|&n| point(g, n)).collect()
}

fn segments(g: &Graph, edges: &[EdgeId]) -> Result<Vec<[Point; 2]>, Error> {
    edges
        .iter()
        .map(|&e| {
            let e = g.edge(e)?;
            Ok([point(g, e.u)?, point(g, e.v)?])
        })
        .collect()
}

/// Cheapest edge per consecutive node pair.
fn edges_along(g: &Graph, nodes: &[NodeId]) -> Vec<EdgeId> {
    nodes
        .windows(2)
        .filter_map(|w| g.cheapest_edge_between(w[0], w[1]).map(|e| e.id))
        .collect()
}

/// Runs one algorithm against a graph snapshot.
pub fn run_algorithm(g: &Graph, req: &AlgorithmRequest) -> Result<AlgorithmResult, Error> {
    let started = Instant::now();
    let mut result = match req {
        AlgorithmRequest::Dijkstra { source, target } => {
            let tree = dijkstra(g, *source)?;
            match target {
                Some(t) => {
                    let nodes = tree.path_to(*t)?;
                    let cost = tree.dist[t].finite().expect("path exists");
                    AlgorithmResult {
                        edges: edges_along(g, &nodes),
                        polyline: polyline(g, &nodes)?,
                        ..blank(req, ResultKind::Route, nodes, cost)
                    }
                }
                None => {
                    let edges: Vec<EdgeId> = tree
                        .pred
                        .iter()
                        .map(|(&v, &p)| g.cheapest_edge_between(p, v).expect("tree edge").id)
                        .collect();
                    let cost = edges.iter().map(|&e| g.edge(e).map(|e| e.weight)).sum::<Result<f64, _>>()?;
                    AlgorithmResult {
                        segments: segments(g, &edges)?,
                        edges,
                        distances: Some(tree.dist.clone()),
                        predecessors: Some(tree.pred.clone()),
                        ..blank(req, ResultKind::Tree, tree.settle_order.clone(), cost)
                    }
                }
            }
        }
        AlgorithmRequest::FloydRoute { waypoints } => {
            for &w in waypoints {
                g.node(w)?;
            }
            let route = floyd_warshall(g).route_through(waypoints)?;
            AlgorithmResult {
                edges: edges_along(g, &route.nodes),
                polyline: polyline(g, &route.nodes)?,
                ..blank(req, ResultKind::Route, route.nodes, route.cost)
            }
        }
        AlgorithmRequest::Prim { root } => {
            let tree = prim_mst(g, *root)?;
            let edges: Vec<EdgeId> = tree.edges.iter().copied().collect();
            AlgorithmResult {
                segments: segments(g, &edges)?,
                edges,
                ..blank(req, ResultKind::Tree, Vec::new(), tree.total_weight)
            }
        }
        AlgorithmRequest::ChinesePostman { depot } => {
            let walk = chinese_postman(g, *depot)?;
            AlgorithmResult {
                edges: walk.edge_sequence,
                polyline: polyline(g, &walk.node_sequence)?,
                ..blank(req, ResultKind::Walk, walk.node_sequence, walk.total_cost)
            }
        }
        AlgorithmRequest::Christofides { start, opt2, opt3, targets } => {
            let instance = metric_closure(g, targets.as_deref())?;
            let start = match start {
                Some(s) => *s,
                None => *instance.order().first().ok_or(Error::EmptyGraph)?,
            };
            let raw = christofides(&instance, start)?;
            let mut tour = raw.clone();
            if *opt2 {
                tour = two_opt(&tour, &instance)?;
            }
            if *opt3 {
                tour = three_opt(&tour, &instance)?;
            }
            let mut closed = tour.nodes.clone();
            closed.push(tour.nodes[0]);
            AlgorithmResult {
                initial_cost: (*opt2 || *opt3).then_some(raw.cost),
                polyline: polyline(g, &closed)?,
                ..blank(req, ResultKind::Tour, tour.nodes, tour.cost)
            }
        }
    };
    result.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(result)
}

fn blank(req: &AlgorithmRequest, kind: ResultKind, nodes: Vec<NodeId>, cost: f64) -> AlgorithmResult {
    AlgorithmResult {
        algorithm: req.name().to_string(),
        kind,
        nodes,
        edges: Vec::new(),
        cost,
        initial_cost: None,
        distances: None,
        predecessors: None,
        polyline: Vec::new(),
        segments: Vec::new(),
        elapsed_ms: 0.0,
    }
}
