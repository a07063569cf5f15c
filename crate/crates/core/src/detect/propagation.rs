use rand::seq::SliceRandom;
use rand::Rng;

use super::{require_edges, DetectError, Seed};
use crate::graph::ClassGraph;
use crate::metrics::modularity;
use crate::partition::Partition;

/// Default limit on propagation sweeps.
pub const DEFAULT_SWEEP_CAP: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpOptions {
    pub max_sweeps: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { max_sweeps: DEFAULT_SWEEP_CAP }
    }
}

/// Outcome of a propagation run on integer labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub labels: Vec<usize>,
    pub sweeps: usize,
    /// False when the sweep cap stopped the run before a fixpoint.
    pub converged: bool,
}

/// Asynchronous label propagation from `initial` labels.
///
/// Each sweep visits the nodes in a fresh seeded random order. A node whose
/// label already has maximal multiplicity-weighted frequency among its
/// neighbors keeps it; otherwise it adopts one of the maximal labels,
/// uniformly at random. Labels are only ever copied from neighbors, so no new
/// label appears. The run stops after a sweep with no change.
pub fn label_propagation(graph: &ClassGraph, initial: &[usize], seed: Seed, options: &LpOptions) -> Propagation {
    let n = graph.node_count();
    assert_eq!(initial.len(), n, "one initial label per node");
    let mut labels = initial.to_vec();
    let label_space = labels.iter().max().map_or(0, |&l| l + 1);
    let mut weight = vec![0usize; label_space];
    let mut touched: Vec<usize> = Vec::new();
    let mut tied: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seed.rng();

    let mut sweeps = 0;
    while sweeps < options.max_sweeps {
        sweeps += 1;
        order.shuffle(&mut rng);
        let mut changed = false;
        for &u in &order {
            let around = graph.neighbors(u);
            if around.is_empty() {
                continue;
            }
            for &(v, w) in around {
                let l = labels[v];
                if weight[l] == 0 {
                    touched.push(l);
                }
                weight[l] += w;
            }
            let top = touched.iter().map(|&l| weight[l]).max().unwrap_or(0);
            if weight[labels[u]] != top {
                tied.clear();
                tied.extend(touched.iter().copied().filter(|&l| weight[l] == top));
                labels[u] = tied[rng.random_range(0..tied.len())];
                changed = true;
            }
            for &l in &touched {
                weight[l] = 0;
            }
            touched.clear();
        }
        if !changed {
            return Propagation { labels, sweeps, converged: true };
        }
    }
    log::warn!("label propagation stopped at the sweep cap of {} without reaching a fixpoint", options.max_sweeps);
    Propagation { labels, sweeps, converged: false }
}

/// Label propagation community detection from unique initial labels.
/// Blocks are renumbered densely.
pub fn detect_lp(graph: &ClassGraph, seed: Seed) -> Result<Partition, DetectError> {
    if graph.is_empty() {
        return Err(DetectError::EmptyGraph);
    }
    let start: Vec<usize> = (0..graph.node_count()).collect();
    let run = label_propagation(graph, &start, seed, &LpOptions::default());
    Ok(Partition::from_assignment(&run.labels))
}

/// Refined packages with the modularity before and after.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    pub partition: Partition,
    pub q_initial: f64,
    pub q_refined: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// Refines `initial` (typically the package partition) by label propagation
/// started from its labels. Blocks may merge or shrink but every output label
/// is one of the input labels.
pub fn refine_packages(graph: &ClassGraph, initial: &Partition, seed: Seed) -> Result<Refinement, DetectError> {
    refine_packages_with(graph, initial, seed, &LpOptions::default())
}

pub fn refine_packages_with(
    graph: &ClassGraph,
    initial: &Partition,
    seed: Seed,
    options: &LpOptions,
) -> Result<Refinement, DetectError> {
    require_edges(graph)?;
    if initial.len() != graph.node_count() {
        return Err(DetectError::PartitionMismatch { expected: graph.node_count(), found: initial.len() });
    }
    let run = label_propagation(graph, initial.assignment(), seed, options);
    let partition = Partition::from_named_assignment(&run.labels, initial.block_labels());
    Ok(Refinement {
        q_initial: modularity(graph, initial)?,
        q_refined: modularity(graph, &partition)?,
        partition,
        sweeps: run.sweeps,
        converged: run.converged,
    })
}
