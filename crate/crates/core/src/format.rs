//! JSON persistence format for graphs.
//!
//! ```json
//! { "overlay": {"image_path": "map.png", "width": 1024, "height": 768},
//!   "nodes": [{"id": 0, "x": 12.5, "y": 40.0, "label": "Correios"}],
//!   "edges": [{"id": 0, "u": 0, "v": 1, "weight": 5.0}] }
//! ```
//!
//! A missing edge `weight` is resolved to the Euclidean distance of the
//! endpoints at load time, so written files always carry explicit weights.
//! Unknown fields are ignored on read.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Graph, Node, NodeId, Overlay};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default)]
    pub overlay: Option<Overlay>,
    #[serde(default)]
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duplicated_from: Option<EdgeId>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Graph> {
        let mut g = match file.overlay {
            Some(o) => Graph::with_overlay(o)?,
            None => Graph::new(),
        };
        for n in file.nodes {
            g.insert_node(Node { id: n.id, x: n.x, y: n.y, label: n.label })?;
        }
        for e in file.edges {
            let weight = match e.weight {
                Some(w) => w,
                None => {
                    let (a, b) = (g.node(e.u)?, g.node(e.v)?);
                    crate::graph::euclidean_weight(a, b)
                }
            };
            g.insert_edge(Edge { id: e.id, u: e.u, v: e.v, weight, duplicated_from: e.duplicated_from })?;
        }
        Ok(g)
    }
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        GraphFile {
            overlay: g.overlay().cloned(),
            nodes: g.nodes().map(NodeRecord::from).collect(),
            edges: g.edges().map(EdgeRecord::from).collect(),
        }
    }
}

impl From<&Node> for NodeRecord {
    fn from(n: &Node) -> Self {
        NodeRecord { id: n.id, x: n.x, y: n.y, label: n.label.clone() }
    }
}

impl From<&Edge> for EdgeRecord {
    fn from(e: &Edge) -> Self {
        EdgeRecord { id: e.id, u: e.u, v: e.v, weight: Some(e.weight), duplicated_from: e.duplicated_from }
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = GraphFile::deserialize(d)?;
        Graph::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// Parses a graph document. Syntax errors and invariant violations both
/// surface as errors, never as panics.
pub fn from_json(text: &str) -> Result<Graph> {
    let malformed = |e: serde_json::Error| Error::Malformed(e.to_string());
    let value: serde_json::Value = serde_json::from_str(text).map_err(malformed)?;
    if !value.is_object() {
        return Err(Error::Malformed("graph document must be a JSON object".into()));
    }
    Graph::try_from(GraphFile::deserialize(value).map_err(malformed)?)
}

/// Pretty-printed canonical form, nodes and edges in ascending id order.
pub fn to_json(g: &Graph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphFile::from(g)).expect("graph serializes");
    s.push('\n');
    s
}
