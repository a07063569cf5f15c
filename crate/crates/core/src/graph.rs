//! Undirected class dependency multigraph.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::Partition;

/// Dense node index, `0..node_count`.
pub type NodeId = usize;

/// The four ways one class can depend on another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DependencyKind {
    Inheritance,
    Field,
    Parameter,
    Return,
}

impl DependencyKind {
    pub const ALL: [DependencyKind; 4] = [
        DependencyKind::Inheritance,
        DependencyKind::Field,
        DependencyKind::Parameter,
        DependencyKind::Return,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DependencyKind::Inheritance => "inheritance",
            DependencyKind::Field => "field",
            DependencyKind::Parameter => "parameter",
            DependencyKind::Return => "return",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown dependency kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for DependencyKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DependencyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownKind(s.to_owned()))
    }
}

/// A dependency between two classes named by fully-qualified name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dependency {
    pub source: String,
    pub target: String,
    pub kind: DependencyKind,
}

impl Dependency {
    pub fn new(source: impl Into<String>, target: impl Into<String>, kind: DependencyKind) -> Self {
        Dependency { source: source.into(), target: target.into(), kind }
    }
}

/// One multigraph edge. `source`/`target` keep the orientation the
/// dependency was recorded with; the graph itself is undirected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub kind: DependencyKind,
}

impl Edge {
    /// Endpoints as an ordered `(min, max)` pair.
    pub fn pair(&self) -> (NodeId, NodeId) {
        (self.source.min(self.target), self.source.max(self.target))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("no classes given")]
    Empty,
    #[error("dependency endpoint `{0}` is not a known class")]
    UnknownClass(String),
    #[error("class `{0}` is listed more than once")]
    DuplicateClass(String),
    #[error("node id {id} out of range for a graph of {len} nodes")]
    UnknownNode { id: NodeId, len: usize },
}

/// Immutable undirected multigraph of classes.
///
/// Parallel edges are kept (the adjacency value `A_ij` is the edge
/// multiplicity) and self-loops never occur.
#[derive(Clone, Debug)]
pub struct ClassGraph {
    fqns: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    degrees: Vec<usize>,
    // (neighbor, multiplicity), ascending by neighbor
    neighbors: Vec<Vec<(NodeId, usize)>>,
}

impl ClassGraph {
    /// Builds a graph with one edge per dependency. Self-dependencies are
    /// dropped; duplicate dependencies become parallel edges.
    pub fn build<I, S>(class_fqns: I, dependencies: &[Dependency]) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let fqns: Vec<String> = class_fqns.into_iter().map(Into::into).collect();
        if fqns.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(fqns.len());
        for (id, fqn) in fqns.iter().enumerate() {
            if index.insert(fqn.clone(), id).is_some() {
                return Err(GraphError::DuplicateClass(fqn.clone()));
            }
        }
        let lookup = |name: &str| index.get(name).copied().ok_or_else(|| GraphError::UnknownClass(name.to_owned()));
        let mut edges = Vec::with_capacity(dependencies.len());
        for dep in dependencies {
            let source = lookup(&dep.source)?;
            let target = lookup(&dep.target)?;
            if source != target {
                edges.push(Edge { source, target, kind: dep.kind });
            }
        }
        Ok(Self::assemble(fqns, index, edges))
    }

    /// Builds from already-validated parts: unique fqns, in-range loop-free edges.
    pub(crate) fn from_parts(fqns: Vec<String>, edges: Vec<Edge>) -> Self {
        let index = fqns.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        Self::assemble(fqns, index, edges)
    }

    fn assemble(fqns: Vec<String>, index: HashMap<String, NodeId>, edges: Vec<Edge>) -> Self {
        let n = fqns.len();
        let mut degrees = vec![0; n];
        let mut maps: Vec<BTreeMap<NodeId, usize>> = vec![BTreeMap::new(); n];
        for e in &edges {
            debug_assert_ne!(e.source, e.target);
            degrees[e.source] += 1;
            degrees[e.target] += 1;
            *maps[e.source].entry(e.target).or_insert(0) += 1;
            *maps[e.target].entry(e.source).or_insert(0) += 1;
        }
        let neighbors = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        ClassGraph { fqns, index, edges, degrees, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.fqns.len()
    }

    /// Number of edges `m`, parallel edges included.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fqns.is_empty()
    }

    pub fn fqn(&self, id: NodeId) -> &str {
        &self.fqns[id]
    }

    pub fn fqns(&self) -> &[String] {
        &self.fqns
    }

    pub fn id_of(&self, fqn: &str) -> Option<NodeId> {
        self.index.get(fqn).copied()
    }

    /// Degree `k_i`, parallel edges included.
    pub fn degree(&self, id: NodeId) -> usize {
        self.degrees[id]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Distinct neighbors of `id` with edge multiplicities, ascending by id.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, usize)] {
        &self.neighbors[id]
    }

    /// `A_ij`: number of edges joining `i` and `j`.
    pub fn multiplicity(&self, i: NodeId, j: NodeId) -> usize {
        self.neighbors[i]
            .binary_search_by_key(&j, |&(n, _)| n)
            .map(|pos| self.neighbors[i][pos].1)
            .unwrap_or(0)
    }

    /// Drops every node of degree zero. The second value maps each old id to
    /// its new id, `None` for removed nodes.
    pub fn remove_isolated(&self) -> (ClassGraph, Vec<Option<NodeId>>) {
        let mut remap = vec![None; self.node_count()];
        let mut fqns = Vec::new();
        for (id, fqn) in self.fqns.iter().enumerate() {
            if self.degrees[id] > 0 {
                remap[id] = Some(fqns.len());
                fqns.push(fqn.clone());
            }
        }
        let edges = self.remap_edges(&remap);
        (ClassGraph::from_parts(fqns, edges), remap)
    }

    fn remap_edges(&self, remap: &[Option<NodeId>]) -> Vec<Edge> {
        self.edges
            .iter()
            .filter_map(|e| {
                Some(Edge { source: remap[e.source]?, target: remap[e.target]?, kind: e.kind })
            })
            .collect()
    }

    /// Partition into connected components, labelled in order of their
    /// smallest node id.
    pub fn connected_components(&self) -> Partition {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.neighbors[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        Partition::from_assignment(&comp)
    }

    /// Subgraph on `nodes` keeping every edge with both ends inside. New ids
    /// follow ascending old ids.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<ClassGraph, GraphError> {
        let mut remap = vec![None; self.node_count()];
        for &id in nodes {
            if id >= self.node_count() {
                return Err(GraphError::UnknownNode { id, len: self.node_count() });
            }
            remap[id] = Some(0);
        }
        let mut fqns = Vec::new();
        for (id, slot) in remap.iter_mut().enumerate() {
            if slot.is_some() {
                *slot = Some(fqns.len());
                fqns.push(self.fqns[id].clone());
            }
        }
        let edges = self.remap_edges(&remap);
        Ok(ClassGraph::from_parts(fqns, edges))
    }

    /// Simple weighted skeleton: one edge per adjacent pair, weighted by
    /// multiplicity.
    pub fn collapse_to_weighted(&self) -> WeightedGraph {
        let mut edges = Vec::new();
        for (u, list) in self.neighbors.iter().enumerate() {
            for &(v, w) in list {
                if u < v {
                    edges.push(WeightedEdge { a: u, b: v, weight: w });
                }
            }
        }
        WeightedGraph::new(self.node_count(), edges)
    }
}

impl PartialEq for ClassGraph {
    /// Same node table and the same edge multiset.
    fn eq(&self, other: &Self) -> bool {
        if self.fqns != other.fqns || self.edges.len() != other.edges.len() {
            return false;
        }
        let mut a = self.edges.clone();
        let mut b = other.edges.clone();
        a.sort();
        b.sort();
        a == b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub weight: usize,
}

/// Simple undirected graph with integer edge weights. Edges are sorted by
/// `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<WeightedEdge>,
    // (neighbor, edge index)
    adjacency: Vec<Vec<(NodeId, usize)>>,
}

impl WeightedGraph {
    pub fn new(node_count: usize, mut edges: Vec<WeightedEdge>) -> Self {
        for e in &mut edges {
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
        }
        edges.sort();
        let mut adjacency = vec![Vec::new(); node_count];
        for (idx, e) in edges.iter().enumerate() {
            adjacency[e.a].push((e.b, idx));
            adjacency[e.b].push((e.a, idx));
        }
        WeightedGraph { node_count, edges, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn total_weight(&self) -> usize {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// `(neighbor, edge index)` pairs of `id`.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, usize)] {
        &self.adjacency[id]
    }
}
