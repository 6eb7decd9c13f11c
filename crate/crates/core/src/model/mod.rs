//! Directed multigraph of widgets and key transitions, plus destination
//! sub-models.

mod dot;
mod io;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tvsim::Key;
use crate::{EdgeId, NodeId};

pub use dot::export_dot;
pub use io::{
    load_model, load_model_document, load_sub_model, load_sub_model_document, save_model, save_model_document,
    save_sub_model, save_sub_model_document, MODEL_SCHEMA, MODEL_VERSION,
};

/// Node id of a focused widget.
pub fn widget_node_id(screen: &str, widget: &str) -> NodeId {
    format!("{screen}/{widget}")
}

/// Node id of the action fired by OK on a widget.
pub fn action_node_id(screen: &str, widget: &str, action: &str) -> NodeId {
    format!("{screen}/{widget}!{action}")
}

pub fn edge_id(source: &str, key: Key) -> EdgeId {
    format!("{source}.{key}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Navigable,
    End,
    Sink,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: NodeId,
    pub label: String,
    pub screen: String,
    /// Widget the node was observed on (the pressed widget for action nodes).
    pub widget: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: EdgeId,
    pub source: NodeId,
    pub target: NodeId,
    pub key: Key,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("schema violation: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("unsupported document `{schema}` version {version}")]
    Version { schema: String, version: u32 },
    #[error("model has no nodes")]
    Empty,
    #[error("duplicate node id `{0}`")]
    DuplicateNode(NodeId),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("{context} references missing node `{id}`")]
    MissingNode { context: String, id: NodeId },
    #[error("node `{source_node}` has two outcomes for key {key}")]
    AmbiguousOutcome { source_node: NodeId, key: Key },
    #[error("unknown destination `{0}`")]
    UnknownDestination(NodeId),
    #[error("no destinations given")]
    NoDestinations,
    #[error("no destination is reachable from the start node")]
    DestinationsUnreachable,
    #[error("sub-model end nodes differ from its destinations")]
    DestinationMismatch,
    #[error("document is not a sub-model (no destinations)")]
    NotSubModel,
}

/// Crawled model G = (N, E, s, t) with a start node and end nodes.
///
/// Immutable once built; `new` checks the structural invariants. The end
/// node set may be empty for apps without any terminal action or sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MegaModel {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    start: NodeId,
    end_nodes: BTreeSet<NodeId>,
}

impl MegaModel {
    pub fn new(
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        start: NodeId,
        end_nodes: BTreeSet<NodeId>,
    ) -> Result<Self, ModelError> {
        if nodes.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut ids = HashSet::new();
        for n in &nodes {
            if !ids.insert(n.id.as_str()) {
                return Err(ModelError::DuplicateNode(n.id.clone()));
            }
        }
        let missing = |context: String, id: &str| ModelError::MissingNode { context, id: id.to_string() };
        if !ids.contains(start.as_str()) {
            return Err(missing("start".into(), &start));
        }
        for e in &end_nodes {
            if !ids.contains(e.as_str()) {
                return Err(missing("endNodes".into(), e));
            }
        }
        let mut edge_ids = HashSet::new();
        let mut outcomes = HashSet::new();
        for e in &edges {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(ModelError::DuplicateEdge(e.id.clone()));
            }
            for endpoint in [&e.source, &e.target] {
                if !ids.contains(endpoint.as_str()) {
                    return Err(missing(format!("edge `{}`", e.id), endpoint));
                }
            }
            if !outcomes.insert((e.source.as_str(), e.key)) {
                return Err(ModelError::AmbiguousOutcome { source_node: e.source.clone(), key: e.key });
            }
        }
        Ok(MegaModel { nodes, edges, start, end_nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn end_nodes(&self) -> &BTreeSet<NodeId> {
        &self.end_nodes
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Outgoing edge indices per node id.
    pub fn out_edges(&self) -> HashMap<&str, Vec<&Edge>> {
        let mut map: HashMap<&str, Vec<&Edge>> = HashMap::new();
        for e in &self.edges {
            map.entry(e.source.as_str()).or_default().push(e);
        }
        map
    }

    pub fn in_edges(&self) -> HashMap<&str, Vec<&Edge>> {
        let mut map: HashMap<&str, Vec<&Edge>> = HashMap::new();
        for e in &self.edges {
            map.entry(e.target.as_str()).or_default().push(e);
        }
        map
    }

    /// Resolves a user-supplied destination: exact node id first, then a
    /// unique node label.
    pub fn resolve_node(&self, name: &str) -> Option<&str> {
        if let Some(n) = self.node(name) {
            return Some(&n.id);
        }
        let mut by_label = self.nodes.iter().filter(|n| n.label == name);
        match (by_label.next(), by_label.next()) {
            (Some(n), None) => Some(&n.id),
            _ => None,
        }
    }
}

impl AsRef<MegaModel> for MegaModel {
    fn as_ref(&self) -> &MegaModel {
        self
    }
}

/// Destination-restricted subgraph; its end nodes are its destinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubModel {
    graph: MegaModel,
}

impl SubModel {
    pub fn new(graph: MegaModel) -> Result<Self, ModelError> {
        if graph.end_nodes.is_empty() {
            return Err(ModelError::NoDestinations);
        }
        Ok(SubModel { graph })
    }

    pub fn graph(&self) -> &MegaModel {
        &self.graph
    }

    pub fn destinations(&self) -> &BTreeSet<NodeId> {
        &self.graph.end_nodes
    }
}

impl AsRef<MegaModel> for SubModel {
    fn as_ref(&self) -> &MegaModel {
        &self.graph
    }
}

/// Nodes reachable from `roots` following edges forward (or backward).
pub(crate) fn reachable<'a>(
    roots: impl IntoIterator<Item = &'a str>,
    adjacency: &HashMap<&'a str, Vec<&'a Edge>>,
    forward: bool,
) -> HashSet<&'a str> {
    let mut seen: HashSet<&str> = HashSet::new();
    let mut queue: VecDeque<&str> = VecDeque::new();
    for r in roots {
        if seen.insert(r) {
            queue.push_back(r);
        }
    }
    while let Some(n) = queue.pop_front() {
        for e in adjacency.get(n).into_iter().flatten() {
            let next = if forward { e.target.as_str() } else { e.source.as_str() };
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Keeps exactly the nodes and edges lying on some walk from the start node
/// to one of `destinations`.
pub fn extract_sub_model<'d>(
    model: &MegaModel,
    destinations: impl IntoIterator<Item = &'d str>,
) -> Result<SubModel, ModelError> {
    let mut requested = BTreeSet::new();
    for d in destinations {
        if model.node(d).is_none() {
            return Err(ModelError::UnknownDestination(d.to_string()));
        }
        requested.insert(d);
    }
    if requested.is_empty() {
        return Err(ModelError::NoDestinations);
    }

    let from_start = reachable([model.start()], &model.out_edges(), true);
    let to_dest = reachable(requested.iter().copied(), &model.in_edges(), false);

    let keep = |n: &str| from_start.contains(n) && to_dest.contains(n);
    let nodes: Vec<Node> = model.nodes.iter().filter(|n| keep(&n.id)).cloned().collect();
    let edges: Vec<Edge> = model
        .edges
        .iter()
        .filter(|e| from_start.contains(e.source.as_str()) && to_dest.contains(e.target.as_str()))
        .cloned()
        .collect();
    let end_nodes: BTreeSet<NodeId> =
        requested.into_iter().filter(|d| from_start.contains(d)).map(str::to_string).collect();
    if end_nodes.is_empty() {
        return Err(ModelError::DestinationsUnreachable);
    }

    SubModel::new(MegaModel::new(nodes, edges, model.start.clone(), end_nodes)?)
}
