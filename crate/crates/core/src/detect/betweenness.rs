use std::collections::VecDeque;

use super::{require_edges, DetectError, Dendrogram, Event, Level};
use crate::graph::{ClassGraph, NodeId, WeightedGraph};
use crate::metrics::modularity_of;
use crate::partition::Partition;

/// Default limit on distinct (collapsed) edges accepted by [`detect_eb`].
pub const DEFAULT_EB_EDGE_CAP: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EbOptions {
    pub max_edges: usize,
}

impl Default for EbOptions {
    fn default() -> Self {
        EbOptions { max_edges: DEFAULT_EB_EDGE_CAP }
    }
}

/// Shortest-path edge betweenness on hop counts, indexed like
/// `graph.edges()`. Each unordered node pair contributes one unit, split
/// evenly over its shortest paths.
pub fn edge_betweenness(graph: &WeightedGraph) -> Vec<f64> {
    let active = vec![true; graph.edges().len()];
    let mut scores = vec![0.0; graph.edges().len()];
    let mut work = Workspace::new(graph.node_count());
    let sources: Vec<NodeId> = (0..graph.node_count()).collect();
    work.accumulate(graph, &active, &sources, &mut scores);
    for s in &mut scores {
        *s /= 2.0;
    }
    scores
}

/// Scratch buffers for Brandes' accumulation.
struct Workspace {
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![usize::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    /// Adds, for every source, the dependency of each active edge on paths
    /// starting there. Summed over all sources of a component this counts
    /// every pair twice.
    fn accumulate(&mut self, graph: &WeightedGraph, active: &[bool], sources: &[NodeId], scores: &mut [f64]) {
        for &s in sources {
            self.order.clear();
            self.dist[s] = 0;
            self.sigma[s] = 1.0;
            self.queue.push_back(s);
            while let Some(u) = self.queue.pop_front() {
                self.order.push(u);
                for &(v, e) in graph.neighbors(u) {
                    if !active[e] {
                        continue;
                    }
                    if self.dist[v] == usize::MAX {
                        self.dist[v] = self.dist[u] + 1;
                        self.queue.push_back(v);
                    }
                    if self.dist[v] == self.dist[u] + 1 {
                        self.sigma[v] += self.sigma[u];
                    }
                }
            }
            for &w in self.order.iter().rev() {
                for &(v, e) in graph.neighbors(w) {
                    if active[e] && self.dist[v] != usize::MAX && self.dist[v] + 1 == self.dist[w] {
                        let share = self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                        scores[e] += share;
                        self.delta[v] += share;
                    }
                }
            }
            for &u in &self.order {
                self.dist[u] = usize::MAX;
                self.sigma[u] = 0.0;
                self.delta[u] = 0.0;
            }
        }
    }
}

/// Nodes reachable from `start` over active edges, ascending.
fn reach(graph: &WeightedGraph, active: &[bool], start: NodeId, seen: &mut [bool]) -> Vec<NodeId> {
    let mut out = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < out.len() {
        let u = out[i];
        i += 1;
        for &(v, e) in graph.neighbors(u) {
            if active[e] && !seen[v] {
                seen[v] = true;
                out.push(v);
            }
        }
    }
    for &u in &out {
        seen[u] = false;
    }
    out.sort_unstable();
    out
}

pub fn detect_eb(graph: &ClassGraph) -> Result<(Partition, Dendrogram), DetectError> {
    detect_eb_with(graph, &EbOptions::default())
}

/// Divisive edge-betweenness clustering.
///
/// Works on the collapsed simple graph: the highest-betweenness edge bundle
/// is removed (ties go to the lowest `(min id, max id)` pair) and scores are
/// recomputed inside the affected component. Every time the number of
/// components grows, the component partition is scored by multigraph
/// modularity; the best one is returned.
pub fn detect_eb_with(graph: &ClassGraph, options: &EbOptions) -> Result<(Partition, Dendrogram), DetectError> {
    require_edges(graph)?;
    let skeleton = graph.collapse_to_weighted();
    let edge_count = skeleton.edges().len();
    if edge_count > options.max_edges {
        return Err(DetectError::TooLarge { edges: edge_count, cap: options.max_edges });
    }

    let n = graph.node_count();
    let mut active = vec![true; edge_count];
    let mut scores = edge_betweenness(&skeleton);
    let mut work = Workspace::new(n);
    let mut seen = vec![false; n];

    let initial = graph.connected_components();
    let mut component: Vec<usize> = initial.assignment().to_vec();
    let mut components = initial.block_count();
    let mut levels = vec![Level {
        event: Event::Start,
        communities: components,
        q: modularity_of(graph, &component, components),
    }];
    let mut best = component.clone();
    let mut best_q = levels[0].q;

    for _ in 0..edge_count {
        let top = active
            .iter()
            .zip(&scores)
            .filter(|(&on, _)| on)
            .map(|(_, &s)| s)
            .fold(f64::NEG_INFINITY, f64::max);
        let tolerance = 1e-9 * top.abs().max(1.0);
        let chosen = (0..edge_count)
            .find(|&e| active[e] && scores[e] >= top - tolerance)
            .expect("an active edge remains");
        active[chosen] = false;
        scores[chosen] = 0.0;
        let (a, b) = (skeleton.edges()[chosen].a, skeleton.edges()[chosen].b);

        let side_a = reach(&skeleton, &active, a, &mut seen);
        let split = side_a.binary_search(&b).is_err();
        let mut affected = side_a;
        if split {
            let side_b = reach(&skeleton, &active, b, &mut seen);
            for &u in &side_b {
                component[u] = components;
            }
            components += 1;
            affected.extend(side_b);
        }

        for &u in &affected {
            for &(_, e) in skeleton.neighbors(u) {
                scores[e] = 0.0;
            }
        }
        let mut fresh = vec![0.0; edge_count];
        work.accumulate(&skeleton, &active, &affected, &mut fresh);
        for &u in &affected {
            for &(_, e) in skeleton.neighbors(u) {
                if active[e] {
                    scores[e] = fresh[e] / 2.0;
                }
            }
        }

        if split {
            let q = modularity_of(graph, &component, components);
            levels.push(Level { event: Event::Split { a, b }, communities: components, q });
            if q > best_q {
                best_q = q;
                best.clone_from(&component);
            }
        }
    }

    let dendrogram = Dendrogram::new(levels);
    Ok((Partition::from_assignment(&best), dendrogram))
}
