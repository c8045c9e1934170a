//! Undirected weighted co-occurrence graphs.
//!
//! Edges are stored once under a canonical key (the lexicographically smaller
//! term first), self-loops are rejected, and weights are positive. Node names
//! are interned so bulk builders can work with integer ids instead of
//! rehashing strings for every pair.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// How a new weight combines with an existing edge weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergePolicy {
    /// Keep the larger weight. Used by index-expansion builders where the
    /// same edge can be reached along several paths.
    Max,
    /// Add the weights. Used by the traversal builder to count documents.
    Sum,
}

/// Output formats for [`export_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphFormat {
    /// CSV with a `source,target,weight` header.
    #[value(name = "edge-csv")]
    EdgeCsv,
    /// JSON object with `nodes` and `edges` arrays.
    #[value(name = "graph-json")]
    GraphJson,
}

/// Interned node handle, valid only for the graph that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop edge on {0:?} is not allowed")]
    SelfLoop(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid graph file {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

/// An undirected keyword co-occurrence graph.
#[derive(Clone, Debug, Default)]
pub struct CoocGraph {
    names: Vec<String>,
    ids: HashMap<String, NodeId>,
    // key is ordered so that names[key.0] < names[key.1]
    edges: HashMap<(NodeId, NodeId), u32>,
}

impl CoocGraph {
    pub fn new() -> Self {
        CoocGraph::default()
    }

    /// Add a node (or return the existing handle). Nodes may stay isolated;
    /// expansion seeds that match nothing still appear in the graph.
    pub fn add_node(&mut self, term: &str) -> NodeId {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = NodeId(self.names.len() as u32);
        self.names.push(term.to_string());
        self.ids.insert(term.to_string(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Node names in insertion order.
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn contains_node(&self, term: &str) -> bool {
        self.ids.contains_key(term)
    }

    /// Edge weight, looked up symmetrically.
    pub fn weight(&self, u: &str, v: &str) -> Option<u32> {
        let a = self.ids.get(u)?;
        let b = self.ids.get(v)?;
        let key = self.canonical_key(*a, *b)?;
        self.edges.get(&key).copied()
    }

    /// Merge an edge given node names. Interns both endpoints.
    pub fn merge_edge(
        &mut self,
        u: &str,
        v: &str,
        weight: u32,
        policy: MergePolicy,
    ) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        let a = self.add_node(u);
        let b = self.add_node(v);
        self.merge_edge_by_id(a, b, weight, policy)
    }

    /// Merge an edge between already-interned nodes. The fast path for bulk
    /// builders; canonical ordering is still enforced internally.
    pub fn merge_edge_by_id(
        &mut self,
        a: NodeId,
        b: NodeId,
        weight: u32,
        policy: MergePolicy,
    ) -> Result<(), GraphError> {
        debug_assert!(weight >= 1, "edge weights must be positive");
        let key = match self.canonical_key(a, b) {
            Some(k) => k,
            None => return Err(GraphError::SelfLoop(self.names[a.0 as usize].clone())),
        };
        match self.edges.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let cur = e.get_mut();
                *cur = match policy {
                    MergePolicy::Max => (*cur).max(weight),
                    MergePolicy::Sum => *cur + weight,
                };
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(weight);
            }
        }
        Ok(())
    }

    fn canonical_key(&self, a: NodeId, b: NodeId) -> Option<(NodeId, NodeId)> {
        match self.names[a.0 as usize].cmp(&self.names[b.0 as usize]) {
            std::cmp::Ordering::Less => Some((a, b)),
            std::cmp::Ordering::Greater => Some((b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// All edges as (smaller term, larger term, weight), in unspecified order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.edges.iter().map(|(&(a, b), &w)| {
            (
                self.names[a.0 as usize].as_str(),
                self.names[b.0 as usize].as_str(),
                w,
            )
        })
    }

    /// The strongest `limit` edges, ordered by weight descending with ties
    /// broken by source then target term.
    pub fn top_edges(&self, limit: usize) -> Vec<(&str, &str, u32)> {
        let mut all: Vec<(&str, &str, u32)> = self.edges().collect();
        all.sort_unstable_by(|x, y| {
            y.2.cmp(&x.2)
                .then_with(|| x.0.cmp(y.0))
                .then_with(|| x.1.cmp(y.1))
        });
        all.truncate(limit);
        all
    }

    /// Nodes that currently have no incident edges, sorted.
    pub fn isolated_nodes(&self) -> Vec<&str> {
        let mut incident: HashSet<NodeId> = HashSet::new();
        for &(a, b) in self.edges.keys() {
            incident.insert(a);
            incident.insert(b);
        }
        let mut out: Vec<&str> = self
            .names
            .iter()
            .enumerate()
            .filter(|(i, _)| !incident.contains(&NodeId(*i as u32)))
            .map(|(_, n)| n.as_str())
            .collect();
        out.sort_unstable();
        out
    }

    /// Canonical view used for comparisons: sorted node set plus sorted edge
    /// map. Two graphs built in different orders compare equal when they hold
    /// the same nodes, edges and weights.
    pub fn canonical(&self) -> (BTreeSet<&str>, BTreeMap<(&str, &str), u32>) {
        let nodes = self.nodes().collect();
        let edges = self.edges().map(|(u, v, w)| ((u, v), w)).collect();
        (nodes, edges)
    }
}

impl PartialEq for CoocGraph {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for CoocGraph {}

#[derive(Serialize, Deserialize)]
struct GraphJsonFile {
    nodes: Vec<String>,
    edges: Vec<GraphJsonEdge>,
}

#[derive(Serialize, Deserialize)]
struct GraphJsonEdge {
    source: String,
    target: String,
    weight: u32,
}

/// Write the strongest `limit` edges of `graph` to `path`.
///
/// `edge-csv` holds one row per edge in [`CoocGraph::top_edges`] order.
/// `graph-json` additionally lists the nodes incident to the exported edges
/// plus any nodes that are isolated in the graph (such as seeds that matched
/// nothing), sorted lexicographically. Output bytes depend only on the graph
/// contents, so identical graphs export identically.
pub fn export_graph(
    graph: &CoocGraph,
    limit: usize,
    format: GraphFormat,
    path: &Path,
) -> Result<(), GraphError> {
    assert!(limit >= 1, "limit must be at least 1");
    let io_err = |source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    };
    let top = graph.top_edges(limit);
    match format {
        GraphFormat::EdgeCsv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(source) => io_err(source),
                other => io_err(std::io::Error::other(format!("{other:?}"))),
            })?;
            w.write_record(["source", "target", "weight"])
                .map_err(|e| io_err(std::io::Error::other(e)))?;
            for (u, v, weight) in &top {
                w.write_record([u, v, weight.to_string().as_str()])
                    .map_err(|e| io_err(std::io::Error::other(e)))?;
            }
            w.flush().map_err(io_err)?;
        }
        GraphFormat::GraphJson => {
            let mut nodes: BTreeSet<&str> = BTreeSet::new();
            for (u, v, _) in &top {
                nodes.insert(u);
                nodes.insert(v);
            }
            nodes.extend(graph.isolated_nodes());
            let file = GraphJsonFile {
                nodes: nodes.into_iter().map(String::from).collect(),
                edges: top
                    .iter()
                    .map(|(u, v, w)| GraphJsonEdge {
                        source: u.to_string(),
                        target: v.to_string(),
                        weight: *w,
                    })
                    .collect(),
            };
            let mut out = serde_json::to_vec_pretty(&file).expect("graph serializes");
            out.push(b'\n');
            std::fs::write(path, out).map_err(io_err)?;
        }
    }
    Ok(())
}

/// Read a `graph-json` file back into a graph, e.g. to re-export it at a
/// different limit or in a different format.
pub fn load_graph_json(path: &Path) -> Result<CoocGraph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse_err = |message: String| GraphError::Parse {
        path: path.to_path_buf(),
        message,
    };
    let file: GraphJsonFile = serde_json::from_str(&text).map_err(|e| parse_err(e.to_string()))?;
    let mut graph = CoocGraph::new();
    for node in &file.nodes {
        graph.add_node(node);
    }
    for edge in &file.edges {
        if edge.weight == 0 {
            return Err(parse_err(format!(
                "edge {}-{} has zero weight",
                edge.source, edge.target
            )));
        }
        graph
            .merge_edge(&edge.source, &edge.target, edge.weight, MergePolicy::Max)
            .map_err(|e| parse_err(e.to_string()))?;
    }
    Ok(graph)
}
