//! Weighted undirected multigraph with image-space node coordinates.
//!
//! Edges are first-class records with their own ids, so parallel edges between
//! the same pair of nodes are representable. Adjacency is always derived from
//! the edge list. Coordinates are pixels with the origin at the top-left corner
//! of the overlay image and `y` growing downward.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
    /// Set only on copies added while making a graph Eulerian.
    pub duplicated_from: Option<EdgeId>,
}

impl Edge {
    /// The endpoint opposite to `n`. `n` must be one of the endpoints.
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.u == n {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, n: NodeId) -> bool {
        self.u == n || self.v == n
    }

    /// The id of the street this edge stands for: itself, or the edge it copies.
    pub fn original_id(&self) -> EdgeId {
        self.duplicated_from.unwrap_or(self.id)
    }
}

/// Raster image the graph is drawn on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlay {
    pub image_path: String,
    pub width: u32,
    pub height: u32,
}

impl Overlay {
    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidOverlay { width: self.width, height: self.height });
        }
        Ok(())
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width as f64).contains(&x) && (0.0..=self.height as f64).contains(&y)
    }
}

/// Straight-line distance between two nodes in pixels.
pub fn euclidean_weight(a: &Node, b: &Node) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// A single editing step.
#[derive(Debug, Clone, PartialEq)]
pub enum Mutation {
    AddNode { x: f64, y: f64, label: Option<String> },
    MoveNode { id: NodeId, x: f64, y: f64 },
    RelabelNode { id: NodeId, label: Option<String> },
    /// A missing weight means the Euclidean distance between the endpoints.
    AddEdge { u: NodeId, v: NodeId, weight: Option<f64> },
    RemoveEdge(EdgeId),
    RemoveNode(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
pub enum MutationOutcome {
    NodeAdded(NodeId),
    NodeUpdated(NodeId),
    EdgeAdded(EdgeId),
    EdgeRemoved(EdgeId),
    /// The node and the incident edges that went with it.
    NodeRemoved { node: NodeId, edges: Vec<EdgeId> },
}

#[derive(Debug, Clone, Default)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Node>,
    edges: BTreeMap<EdgeId, Edge>,
    overlay: Option<Overlay>,
    next_node: u64,
    next_edge: u64,
}

/// Content equality: id counters are bookkeeping and do not take part.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges && self.overlay == other.overlay
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_overlay(overlay: Overlay) -> Result<Self> {
        overlay.validate()?;
        Ok(Self { overlay: Some(overlay), ..Self::default() })
    }

    pub fn overlay(&self) -> Option<&Overlay> {
        self.overlay.as_ref()
    }

    /// Attaches (or detaches) an overlay. Every node must fit inside it.
    pub fn set_overlay(&mut self, overlay: Option<Overlay>) -> Result<()> {
        if let Some(o) = &overlay {
            o.validate()?;
            for n in self.nodes.values() {
                if !o.contains(n.x, n.y) {
                    return Err(out_of_bounds(o, n.x, n.y));
                }
            }
        }
        self.overlay = overlay;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &Node> + Clone {
        self.nodes.values()
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &Edge> + Clone {
        self.edges.values()
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.keys().copied().collect()
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(&id).ok_or(Error::UnknownNode(id))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(&id).ok_or(Error::UnknownEdge(id))
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    /// Edges incident to `v`, ascending by edge id.
    pub fn incident_edges(&self, v: NodeId) -> Result<Vec<&Edge>> {
        self.node(v)?;
        Ok(self.edges.values().filter(|e| e.touches(v)).collect())
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        Ok(self.incident_edges(v)?.len())
    }

    /// Degree of every node, including isolated ones.
    pub fn degrees(&self) -> BTreeMap<NodeId, usize> {
        let mut deg: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&id| (id, 0)).collect();
        for e in self.edges.values() {
            *deg.entry(e.u).or_default() += 1;
            *deg.entry(e.v).or_default() += 1;
        }
        deg
    }

    /// The cheapest edge joining `a` and `b`; ties go to the smaller edge id.
    pub fn cheapest_edge_between(&self, a: NodeId, b: NodeId) -> Option<&Edge> {
        self.edges
            .values()
            .filter(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a))
            .min_by(|x, y| x.weight.total_cmp(&y.weight).then(x.id.cmp(&y.id)))
    }

    /// Whether all nodes that carry at least one edge lie in one component.
    /// Isolated nodes are ignored.
    pub fn is_connected(&self) -> bool {
        let Some(first) = self.edges.values().next() else {
            return true;
        };
        let reached = self.reachable_from(first.u, None);
        self.edges.values().all(|e| reached.contains(&e.u))
    }

    /// Whether every node, isolated ones included, lies in one component.
    pub fn spans_single_component(&self) -> bool {
        match self.nodes.keys().next() {
            None => true,
            Some(&first) => self.reachable_from(first, None).len() == self.nodes.len(),
        }
    }

    /// Whether deleting `e` disconnects its two endpoints from each other.
    /// The edge is skipped during a reachability sweep from one endpoint and
    /// the graph itself is left untouched.
    pub fn is_bridge(&self, e: EdgeId) -> Result<bool> {
        let edge = self.edge(e)?;
        let reached = self.reachable_from(edge.u, Some(e));
        Ok(!reached.contains(&edge.v))
    }

    /// Breadth-first sweep returning every reached node, optionally pretending
    /// one edge is absent.
    fn reachable_from(&self, start: NodeId, skip: Option<EdgeId>) -> HashSet<NodeId> {
        let adj = self.adjacency(skip);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            for &(m, _) in adj.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        seen
    }

    /// Neighbour lists keyed by node, each entry `(neighbour, edge)`.
    pub(crate) fn adjacency(&self, skip: Option<EdgeId>) -> BTreeMap<NodeId, Vec<(NodeId, EdgeId)>> {
        let mut adj: BTreeMap<NodeId, Vec<(NodeId, EdgeId)>> = BTreeMap::new();
        for e in self.edges.values().filter(|e| Some(e.id) != skip) {
            adj.entry(e.u).or_default().push((e.v, e.id));
            adj.entry(e.v).or_default().push((e.u, e.id));
        }
        adj
    }

    pub fn add_node(&mut self, x: f64, y: f64, label: Option<String>) -> Result<NodeId> {
        self.check_position(x, y)?;
        let id = NodeId(self.next_node);
        self.next_node += 1;
        self.nodes.insert(id, Node { id, x, y, label });
        Ok(id)
    }

    /// Adds an edge; `None` weight means the Euclidean distance of the endpoints.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: Option<f64>) -> Result<EdgeId> {
        let weight = self.resolve_edge(u, v, weight)?;
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(id, Edge { id, u, v, weight, duplicated_from: None });
        Ok(id)
    }

    /// Inserts a node with a caller-chosen id, as when loading a file.
    pub fn insert_node(&mut self, node: Node) -> Result<()> {
        if self.nodes.contains_key(&node.id) {
            return Err(Error::DuplicateNode(node.id));
        }
        self.check_position(node.x, node.y)?;
        self.next_node = self.next_node.max(node.id.0 + 1);
        self.nodes.insert(node.id, node);
        Ok(())
    }

    /// Inserts an edge with a caller-chosen id, as when loading a file.
    pub fn insert_edge(&mut self, edge: Edge) -> Result<()> {
        if self.edges.contains_key(&edge.id) {
            return Err(Error::DuplicateEdge(edge.id));
        }
        let weight = self.resolve_edge(edge.u, edge.v, Some(edge.weight))?;
        self.next_edge = self.next_edge.max(edge.id.0 + 1);
        self.edges.insert(edge.id, Edge { weight, ..edge });
        Ok(())
    }

    /// Adds a parallel copy of `of` and returns the new edge id.
    pub fn duplicate_edge(&mut self, of: EdgeId) -> Result<EdgeId> {
        let src = self.edge(of)?.clone();
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(
            id,
            Edge { id, duplicated_from: Some(src.original_id()), ..src },
        );
        Ok(id)
    }

    pub fn move_node(&mut self, id: NodeId, x: f64, y: f64) -> Result<()> {
        self.node(id)?;
        self.check_position(x, y)?;
        let node = self.nodes.get_mut(&id).expect("checked above");
        node.x = x;
        node.y = y;
        Ok(())
    }

    pub fn relabel_node(&mut self, id: NodeId, label: Option<String>) -> Result<()> {
        self.nodes.get_mut(&id).ok_or(Error::UnknownNode(id))?.label = label;
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge> {
        self.edges.remove(&id).ok_or(Error::UnknownEdge(id))
    }

    /// Removes a node together with every incident edge.
    pub fn remove_node(&mut self, id: NodeId) -> Result<(Node, Vec<EdgeId>)> {
        let node = self.nodes.remove(&id).ok_or(Error::UnknownNode(id))?;
        let gone: Vec<EdgeId> =
            self.edges.values().filter(|e| e.touches(id)).map(|e| e.id).collect();
        for e in &gone {
            self.edges.remove(e);
        }
        Ok((node, gone))
    }

    /// Applies one mutation in place. On error the graph is unchanged.
    pub fn apply(&mut self, op: &Mutation) -> Result<MutationOutcome> {
        Ok(match op {
            Mutation::AddNode { x, y, label } => {
                MutationOutcome::NodeAdded(self.add_node(*x, *y, label.clone())?)
            }
            Mutation::MoveNode { id, x, y } => {
                self.move_node(*id, *x, *y)?;
                MutationOutcome::NodeUpdated(*id)
            }
            Mutation::RelabelNode { id, label } => {
                self.relabel_node(*id, label.clone())?;
                MutationOutcome::NodeUpdated(*id)
            }
            Mutation::AddEdge { u, v, weight } => {
                MutationOutcome::EdgeAdded(self.add_edge(*u, *v, *weight)?)
            }
            Mutation::RemoveEdge(id) => MutationOutcome::EdgeRemoved(self.remove_edge(*id)?.id),
            Mutation::RemoveNode(id) => {
                let (node, edges) = self.remove_node(*id)?;
                MutationOutcome::NodeRemoved { node: node.id, edges }
            }
        })
    }

    /// Returns the graph that results from `op`, leaving `self` as it was.
    pub fn mutate(&self, op: &Mutation) -> Result<(Graph, MutationOutcome)> {
        let mut next = self.clone();
        let outcome = next.apply(op)?;
        Ok((next, outcome))
    }

    /// Checks every structural invariant. Graphs built through the public API
    /// always pass; this exists for callers that want a cheap sanity check.
    pub fn validate(&self) -> Result<()> {
        if let Some(o) = &self.overlay {
            o.validate()?;
        }
        for (id, n) in &self.nodes {
            if *id != n.id {
                return Err(Error::Malformed(format!("node keyed {id} carries id {}", n.id)));
            }
            self.check_position(n.x, n.y)?;
            if id.0 >= self.next_node {
                return Err(Error::Malformed(format!("node id {id} beyond id counter")));
            }
        }
        for (id, e) in &self.edges {
            if *id != e.id {
                return Err(Error::Malformed(format!("edge keyed {id} carries id {}", e.id)));
            }
            self.resolve_edge(e.u, e.v, Some(e.weight))?;
            if id.0 >= self.next_edge {
                return Err(Error::Malformed(format!("edge id {id} beyond id counter")));
            }
        }
        Ok(())
    }

    fn check_position(&self, x: f64, y: f64) -> Result<()> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteCoordinate { x, y });
        }
        match &self.overlay {
            Some(o) if !o.contains(x, y) => Err(out_of_bounds(o, x, y)),
            _ => Ok(()),
        }
    }

    fn resolve_edge(&self, u: NodeId, v: NodeId, weight: Option<f64>) -> Result<f64> {
        let a = self.node(u)?;
        let b = self.node(v)?;
        if u == v {
            return Err(Error::SelfLoopRejected(u));
        }
        let w = weight.unwrap_or_else(|| euclidean_weight(a, b));
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight(w));
        }
        Ok(w)
    }
}

fn out_of_bounds(o: &Overlay, x: f64, y: f64) -> Error {
    Error::OutOfBounds { x, y, width: o.width, height: o.height }
}

/// Dense `0..n` numbering of a graph's nodes in ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NodeIndex {
    pub ids: Vec<NodeId>,
    pos: BTreeMap<NodeId, usize>,
}

impl NodeIndex {
    pub fn new(ids: Vec<NodeId>) -> Self {
        let pos = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        Self { ids, pos }
    }

    pub fn of(g: &Graph) -> Self {
        Self::new(g.node_ids())
    }

    pub fn get(&self, id: NodeId) -> Result<usize> {
        self.pos.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn koenigsberg_degrees() {
        let g = fixtures::koenigsberg();
        let [a, b, c, d] = fixtures::KOENIGSBERG_NODES;
        assert_eq!(g.degree(c).unwrap(), 5);
        assert_eq!(g.degree(a).unwrap(), 3);
        assert_eq!(g.degree(b).unwrap(), 3);
        assert_eq!(g.degree(d).unwrap(), 3);
    }

    #[test]
    fn isolated_and_cycle_degrees() {
        let mut g = Graph::new();
        let n = g.add_node(1.0, 1.0, None).unwrap();
        assert_eq!(g.degree(n).unwrap(), 0);
        let t = fixtures::triangle();
        for n in t.node_ids() {
            assert_eq!(t.degree(n).unwrap(), 2);
        }
        assert_eq!(t.degree(NodeId(99)), Err(Error::UnknownNode(NodeId(99))));
    }

    #[test]
    fn connectivity() {
        assert!(fixtures::triangle().is_connected());
        assert!(Graph::new().is_connected());

        let mut g = Graph::new();
        let ids: Vec<_> = (0..4).map(|i| g.add_node(i as f64, 0.0, None).unwrap()).collect();
        g.add_edge(ids[0], ids[1], Some(1.0)).unwrap();
        g.add_edge(ids[2], ids[3], Some(1.0)).unwrap();
        assert!(!g.is_connected());

        // An isolated node does not break connectivity of the edge set.
        let mut t = fixtures::triangle();
        t.add_node(50.0, 50.0, None).unwrap();
        assert!(t.is_connected());
        assert!(!t.spans_single_component());
    }

    #[test]
    fn bridges() {
        let p = fixtures::path();
        let first = p.edges().next().unwrap().id;
        assert!(p.is_bridge(first).unwrap());

        let t = fixtures::triangle();
        for e in t.edges() {
            assert!(!t.is_bridge(e.id).unwrap());
        }

        let k = fixtures::koenigsberg();
        let [_, _, c, d] = fixtures::KOENIGSBERG_NODES;
        let cd = k.edges().find(|e| e.touches(c) && e.touches(d)).unwrap().id;
        assert!(!k.is_bridge(cd).unwrap());
        assert_eq!(k.is_bridge(EdgeId(77)), Err(Error::UnknownEdge(EdgeId(77))));
    }

    #[test]
    fn euclidean() {
        let n = |x, y| Node { id: NodeId(0), x, y, label: None };
        assert_eq!(euclidean_weight(&n(0.0, 0.0), &n(3.0, 4.0)), 5.0);
        assert_eq!(euclidean_weight(&n(2.0, 7.0), &n(2.0, 7.0)), 0.0);
        assert!((euclidean_weight(&n(0.0, 0.0), &n(1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mutations() {
        let mut g = Graph::new();
        let a = g.add_node(0.0, 0.0, None).unwrap();
        let b = g.add_node(3.0, 4.0, None).unwrap();
        let (g, out) = g.mutate(&Mutation::AddEdge { u: a, v: b, weight: None }).unwrap();
        let MutationOutcome::EdgeAdded(e) = out else { panic!("{out:?}") };
        assert_eq!(g.edge(e).unwrap().weight, 5.0);

        let mut t = fixtures::triangle();
        let a = t.node_ids()[0];
        let before: Vec<f64> = t.edges().map(|e| e.weight).collect();
        t.apply(&Mutation::MoveNode { id: a, x: 10.0, y: 20.0 }).unwrap();
        assert_eq!((t.node(a).unwrap().x, t.node(a).unwrap().y), (10.0, 20.0));
        assert_eq!(before, t.edges().map(|e| e.weight).collect::<Vec<_>>());

        let t = fixtures::triangle();
        let b = t.node_ids()[1];
        let (t2, _) = t.mutate(&Mutation::RemoveNode(b)).unwrap();
        assert_eq!((t2.node_count(), t2.edge_count()), (2, 1));
        assert_eq!(t.node_count(), 3);
    }

    #[test]
    fn mutation_errors_leave_graph_untouched() {
        let mut t = fixtures::triangle();
        let snapshot = t.clone();
        let a = t.node_ids()[0];
        assert_eq!(
            t.apply(&Mutation::AddEdge { u: a, v: a, weight: None }),
            Err(Error::SelfLoopRejected(a))
        );
        assert_eq!(
            t.apply(&Mutation::AddEdge { u: a, v: NodeId(42), weight: None }),
            Err(Error::UnknownNode(NodeId(42)))
        );
        assert_eq!(
            t.apply(&Mutation::AddEdge { u: a, v: t.node_ids()[1], weight: Some(-1.0) }),
            Err(Error::InvalidWeight(-1.0))
        );
        assert_eq!(t.apply(&Mutation::RemoveEdge(EdgeId(9))), Err(Error::UnknownEdge(EdgeId(9))));
        assert_eq!(
            t.apply(&Mutation::MoveNode { id: NodeId(9), x: 0.0, y: 0.0 }),
            Err(Error::UnknownNode(NodeId(9)))
        );
        assert!(matches!(
            t.apply(&Mutation::MoveNode { id: a, x: f64::NAN, y: 0.0 }),
            Err(Error::NonFiniteCoordinate { .. })
        ));
        assert_eq!(t, snapshot);
    }

    #[test]
    fn ids_are_not_reused() {
        let mut g = Graph::new();
        let a = g.add_node(0.0, 0.0, None).unwrap();
        let b = g.add_node(1.0, 0.0, None).unwrap();
        g.remove_node(b).unwrap();
        let c = g.add_node(2.0, 0.0, None).unwrap();
        assert!(c > b && b > a);
        let e = g.add_edge(a, c, None).unwrap();
        g.remove_edge(e).unwrap();
        assert!(g.add_edge(a, c, None).unwrap() > e);
    }

    #[test]
    fn overlay_bounds() {
        let mut g = Graph::with_overlay(Overlay {
            image_path: "map.png".into(),
            width: 100,
            height: 50,
        })
        .unwrap();
        let a = g.add_node(100.0, 50.0, None).unwrap();
        assert!(matches!(g.add_node(100.5, 10.0, None), Err(Error::OutOfBounds { .. })));
        assert!(matches!(g.move_node(a, 10.0, 51.0), Err(Error::OutOfBounds { .. })));
        assert!(Graph::with_overlay(Overlay { image_path: "x".into(), width: 0, height: 3 }).is_err());
    }

    #[test]
    fn duplicates_point_at_the_original() {
        let mut g = fixtures::path();
        let e = g.edges().next().unwrap().id;
        let d1 = g.duplicate_edge(e).unwrap();
        let d2 = g.duplicate_edge(d1).unwrap();
        assert_eq!(g.edge(d2).unwrap().duplicated_from, Some(e));
        assert_eq!(g.edge(d1).unwrap().weight, g.edge(e).unwrap().weight);
    }
}
