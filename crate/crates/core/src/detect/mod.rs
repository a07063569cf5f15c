//! Community detection: divisive edge betweenness (EB), greedy modularity
//! agglomeration (MO), label propagation (LP), and package refinement.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ClassGraph, NodeId};
use crate::metrics::MetricsError;
use crate::partition::Partition;

mod betweenness;
mod greedy;
mod propagation;

pub use betweenness::{detect_eb, detect_eb_with, edge_betweenness, EbOptions, DEFAULT_EB_EDGE_CAP};
pub use greedy::detect_mo;
pub use propagation::{
    detect_lp, label_propagation, refine_packages, LpOptions, Propagation, Refinement, DEFAULT_SWEEP_CAP,
};

/// Run seed. Identical seed and graph give an identical partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub(crate) fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Eb,
    Mo,
    Lp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Eb, Algorithm::Mo, Algorithm::Lp];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Eb => "eb",
            Algorithm::Mo => "mo",
            Algorithm::Lp => "lp",
        }
    }

    /// Default number of seeded runs per batch.
    pub fn default_runs(self) -> usize {
        match self {
            Algorithm::Eb => 10,
            _ => 100,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = DetectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| DetectError::UnknownAlgorithm(s.to_owned()))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DetectError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error(
        "graph has {edges} distinct edges, above the edge-betweenness cap of {cap}; use mo or lp instead"
    )]
    TooLarge { edges: usize, cap: usize },
    #[error("initial partition covers {found} nodes but the graph has {expected}")]
    PartitionMismatch { expected: usize, found: usize },
    #[error("unknown algorithm `{0}` (expected eb, mo or lp)")]
    UnknownAlgorithm(String),
    #[error("a batch needs at least one run")]
    NoRuns,
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// What produced one level of a dendrogram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "event")]
pub enum Event {
    /// The starting partition.
    Start,
    /// Removing the edge bundle `a`-`b` disconnected a community.
    Split { a: NodeId, b: NodeId },
    /// Community `absorbed` was merged into `kept`.
    Merge { kept: usize, absorbed: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub event: Event,
    pub communities: usize,
    pub q: f64,
}

/// Sequence of splits or merges with the modularity after each one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    levels: Vec<Level>,
    best: usize,
}

impl Dendrogram {
    /// Picks the first level of maximal Q as best.
    pub(crate) fn new(levels: Vec<Level>) -> Self {
        assert!(!levels.is_empty());
        let mut best = 0;
        for (i, level) in levels.iter().enumerate() {
            if level.q > levels[best].q {
                best = i;
            }
        }
        Dendrogram { levels, best }
    }

    pub(crate) fn with_best(levels: Vec<Level>, best: usize) -> Self {
        assert!(best < levels.len());
        Dendrogram { levels, best }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn best_index(&self) -> usize {
        self.best
    }

    pub fn best_level(&self) -> &Level {
        &self.levels[self.best]
    }

    pub fn q_curve(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.q).collect()
    }
}

/// Runs one detector and returns only the partition.
pub fn detect(graph: &ClassGraph, algorithm: Algorithm, seed: Seed) -> Result<Partition, DetectError> {
    match algorithm {
        Algorithm::Eb => detect_eb(graph).map(|r| r.0),
        Algorithm::Mo => detect_mo(graph, seed).map(|r| r.0),
        Algorithm::Lp => detect_lp(graph, seed),
    }
}

fn require_edges(graph: &ClassGraph) -> Result<(), DetectError> {
    if graph.is_empty() {
        return Err(DetectError::EmptyGraph);
    }
    if graph.edge_count() == 0 {
        return Err(MetricsError::NoEdges.into());
    }
    Ok(())
}
