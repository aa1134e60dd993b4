//! JSON readers and writers for graphs, node functions, and node sets.
//!
//! Graph format: `{"n": int, "q": float, "r": float, "edges": [[i, j, w], …]}`
//! with 0-based indices and each undirected edge listed once. Node functions
//! and node sets are plain JSON arrays. Readers reject non-finite numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeFunction, NodeSet};

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub q: f64,
    pub r: f64,
    pub edges: Vec<(usize, usize, f64)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            q: g.q(),
            r: g.r(),
            edges: g.undirected_edges(),
        }
    }
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let gj: GraphJson = serde_json::from_str(text)?;
    if !gj.q.is_finite() || !gj.r.is_finite() {
        return Err(Error::InvalidInput("non-finite q or r".into()));
    }
    for &(i, j, w) in &gj.edges {
        if !w.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite weight on edge ({i}, {j})"
            )));
        }
    }
    Graph::new(gj.n, &gj.edges, gj.q, gj.r)
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from_graph(g)).expect("graph serializes")
}

pub fn read_graph(path: &std::path::Path) -> Result<Graph> {
    graph_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: &std::path::Path, g: &Graph) -> Result<()> {
    Ok(std::fs::write(path, graph_to_json(g))?)
}

pub fn node_function_from_json(text: &str, n: usize) -> Result<NodeFunction> {
    let values: Vec<f64> = serde_json::from_str(text)?;
    if values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite node value".into()));
    }
    Ok(NodeFunction(values))
}

pub fn read_node_function(path: &std::path::Path, n: usize) -> Result<NodeFunction> {
    node_function_from_json(&std::fs::read_to_string(path)?, n)
}

pub fn node_set_from_json(text: &str, n: usize) -> Result<NodeSet> {
    let members: Vec<usize> = serde_json::from_str(text)?;
    NodeSet::new(members, n)
}

pub fn read_node_set(path: &std::path::Path, n: usize) -> Result<NodeSet> {
    node_set_from_json(&std::fs::read_to_string(path)?, n)
}

pub fn node_set_to_json(s: &NodeSet) -> String {
    serde_json::to_string(s.members()).expect("set serializes")
}

pub fn write_node_set(path: &std::path::Path, s: &NodeSet) -> Result<()> {
    Ok(std::fs::write(path, node_set_to_json(s))?)
}
