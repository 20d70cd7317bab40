use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{ModelError, VariableId};
use crate::closure;

/// An immediate causal relation `from ▷ to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: VariableId,
    pub to: VariableId,
}

impl Edge {
    pub fn new(from: VariableId, to: VariableId) -> Self {
        Edge { from, to }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

/// An acyclic directed graph of immediate causes between variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CausalGraph {
    nodes: BTreeSet<VariableId>,
    edges: BTreeSet<Edge>,
}

impl CausalGraph {
    /// Validates endpoints, self-loops and acyclicity.
    pub fn new(
        nodes: impl IntoIterator<Item = VariableId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, ModelError> {
        let nodes: BTreeSet<_> = nodes.into_iter().collect();
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for e in &edges {
            for end in [&e.from, &e.to] {
                if !nodes.contains(end) {
                    return Err(ModelError::UnknownNode(end.clone()));
                }
            }
            if e.from == e.to {
                return Err(ModelError::SelfEdge(e.from.clone()));
            }
        }
        closure::check_acyclic(&nodes, &edges).map_err(ModelError::Cycle)?;
        Ok(CausalGraph { nodes, edges })
    }

    /// Nodes are the edge endpoints plus `extra_nodes`.
    pub fn from_edges(
        edges: impl IntoIterator<Item = Edge>,
        extra_nodes: impl IntoIterator<Item = VariableId>,
    ) -> Result<Self, ModelError> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut nodes: BTreeSet<VariableId> = extra_nodes.into_iter().collect();
        for e in &edges {
            nodes.insert(e.from.clone());
            nodes.insert(e.to.clone());
        }
        CausalGraph::new(nodes, edges)
    }

    pub fn empty() -> Self {
        CausalGraph { nodes: BTreeSet::new(), edges: BTreeSet::new() }
    }

    pub fn nodes(&self) -> &BTreeSet<VariableId> {
        &self.nodes
    }

    /// Edges in lexicographic `(from, to)` order.
    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn contains_node(&self, v: &VariableId) -> bool {
        self.nodes.contains(v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    /// Nodes that touch no edge.
    pub fn isolated_nodes(&self) -> impl Iterator<Item = &VariableId> {
        let touched: BTreeSet<&VariableId> =
            self.edges.iter().flat_map(|e| [&e.from, &e.to]).collect();
        self.nodes.iter().filter(move |n| !touched.contains(n))
    }

    pub fn successors(&self) -> BTreeMap<&VariableId, Vec<&VariableId>> {
        let mut out: BTreeMap<&VariableId, Vec<&VariableId>> =
            self.nodes.iter().map(|n| (n, Vec::new())).collect();
        for e in &self.edges {
            out.entry(&e.from).or_default().push(&e.to);
        }
        out
    }

    pub(crate) fn from_parts_unchecked(nodes: BTreeSet<VariableId>, edges: BTreeSet<Edge>) -> Self {
        CausalGraph { nodes, edges }
    }
}
