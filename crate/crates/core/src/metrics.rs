//! Partition quality and comparison measures.
//!
//! Modularity against the configuration null model, normalized mutual
//! information between partitions, splitting of disconnected blocks,
//! block-size distributions with power-law fits, and batch aggregation of
//! seeded detector runs.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect::{self, Algorithm, DetectError, Seed};
use crate::graph::ClassGraph;
use crate::partition::Partition;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("modularity is undefined for a graph without edges")]
    NoEdges,
    #[error("partition covers {found} nodes but {expected} were expected")]
    SizeMismatch { expected: usize, found: usize },
    #[error("partition is empty")]
    Empty,
}

/// Modularity `Q` of `partition` on `graph`.
///
/// Evaluated per community as `sum_c [l_c / m - (d_c / 2m)^2]` where `l_c`
/// counts intra-community edges and `d_c` sums member degrees. This equals the
/// ordered-pair sum `(1/2m) sum_ij (A_ij - k_i k_j / 2m) delta(l_i, l_j)`.
pub fn modularity(graph: &ClassGraph, partition: &Partition) -> Result<f64, MetricsError> {
    if partition.len() != graph.node_count() {
        return Err(MetricsError::SizeMismatch { expected: graph.node_count(), found: partition.len() });
    }
    if graph.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    Ok(modularity_of(graph, partition.assignment(), partition.block_count()))
}

/// Unchecked modularity on dense block ids `< blocks`; requires `m >= 1`.
pub(crate) fn modularity_of(graph: &ClassGraph, assignment: &[usize], blocks: usize) -> f64 {
    let mut intra = vec![0usize; blocks];
    let mut degree = vec![0usize; blocks];
    for e in graph.edges() {
        let (a, b) = (assignment[e.source], assignment[e.target]);
        if a == b {
            intra[a] += 1;
        }
    }
    for (node, &k) in graph.degrees().iter().enumerate() {
        degree[assignment[node]] += k;
    }
    let m = graph.edge_count() as f64;
    intra
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| {
            let share = d as f64 / (2.0 * m);
            l as f64 / m - share * share
        })
        .sum()
}

/// Normalized mutual information `2 I(a, b) / (H(a) + H(b))`.
///
/// Identical groupings give exactly 1, as do two single-block partitions.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::SizeMismatch { expected: a.len(), found: b.len() });
    }
    if a.is_empty() {
        return Err(MetricsError::Empty);
    }
    if a.same_grouping(b) {
        return Ok(1.0);
    }
    let n = a.len();
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&x, &y) in a.assignment().iter().zip(b.assignment()) {
        *joint.entry((x, y)).or_insert(0) += 1;
    }
    let h_a = entropy(a.block_sizes(), n);
    let h_b = entropy(b.block_sizes(), n);
    let h_ab = entropy(joint.into_values().collect(), n);
    let total = h_a + h_b;
    if total == 0.0 {
        return Ok(1.0);
    }
    let mutual = (total - h_ab).max(0.0);
    Ok((2.0 * mutual / total).min(1.0))
}

/// Shannon entropy (nats) of a distribution given by counts summing to `n`.
fn entropy(mut counts: Vec<usize>, n: usize) -> f64 {
    // sorted so the sum does not depend on hash or argument order
    counts.sort_unstable();
    let n = n as f64;
    let weighted: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let c = c as f64;
            c * c.ln()
        })
        .sum();
    (n.ln() - weighted / n).max(0.0)
}

/// Replaces each block by the connected components of its induced subgraph.
///
/// Connected blocks keep their label; the pieces of a disconnected block are
/// labelled `label#1`, `label#2`, ... in order of their smallest node.
pub fn split_disconnected(graph: &ClassGraph, partition: &Partition) -> Result<Partition, MetricsError> {
    let n = graph.node_count();
    if partition.len() != n {
        return Err(MetricsError::SizeMismatch { expected: n, found: partition.len() });
    }
    let block_of = partition.assignment();
    let mut piece = vec![usize::MAX; n];
    let mut pieces_of_block: Vec<Vec<usize>> = vec![Vec::new(); partition.block_count()];
    let mut piece_count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if piece[start] != usize::MAX {
            continue;
        }
        let block = block_of[start];
        piece[start] = piece_count;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &(v, _) in graph.neighbors(u) {
                if block_of[v] == block && piece[v] == usize::MAX {
                    piece[v] = piece_count;
                    stack.push(v);
                }
            }
        }
        pieces_of_block[block].push(piece_count);
        piece_count += 1;
    }

    let mut taken: BTreeSet<String> = partition.block_labels().iter().cloned().collect();
    let mut names = vec![String::new(); piece_count];
    for (block, pieces) in pieces_of_block.iter().enumerate() {
        let label = partition.block_label(block);
        if let [only] = pieces.as_slice() {
            names[*only] = label.to_owned();
            continue;
        }
        let mut suffix = 1;
        for &p in pieces {
            let name = loop {
                let candidate = format!("{label}#{suffix}");
                suffix += 1;
                if !taken.contains(&candidate) {
                    break candidate;
                }
            };
            taken.insert(name.clone());
            names[p] = name;
        }
    }
    Ok(Partition::from_named_assignment(&piece, &names))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcdfPoint {
    pub size: usize,
    /// Fraction of blocks with at least `size` members.
    pub fraction: f64,
}

/// Block-size distribution of a partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeDistribution {
    /// Block sizes, ascending.
    pub sizes: Vec<usize>,
    /// One point per distinct size, ascending.
    pub ccdf: Vec<CcdfPoint>,
    pub xmin: usize,
    /// Discrete maximum-likelihood exponent; absent when declined.
    pub alpha: Option<f64>,
    /// Continuous approximation of the exponent; absent when declined.
    pub alpha_continuous: Option<f64>,
}

pub fn size_distribution(partition: &Partition, xmin: usize) -> SizeDistribution {
    let mut sizes = partition.block_sizes();
    sizes.sort_unstable();
    let total = sizes.len() as f64;
    let mut ccdf = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        if i == 0 || sizes[i - 1] != s {
            ccdf.push(CcdfPoint { size: s, fraction: (sizes.len() - i) as f64 / total });
        }
    }
    SizeDistribution {
        alpha: fit_power_law_discrete(&sizes, xmin),
        alpha_continuous: fit_power_law(&sizes, xmin),
        sizes,
        ccdf,
        xmin,
    }
}

/// Minimum number of sizes `>= xmin` a fit needs.
pub const MIN_FIT_SAMPLES: usize = 3;

/// Continuous approximation of the power-law exponent for discrete data:
/// `alpha = 1 + n' / sum ln(s / (xmin - 1/2))` over the `n'` sizes `>= xmin`.
///
/// Returns `None` with fewer than three qualifying sizes or `xmin == 0`.
pub fn fit_power_law(sizes: &[usize], xmin: usize) -> Option<f64> {
    if xmin == 0 {
        return None;
    }
    let shift = xmin as f64 - 0.5;
    let tail: Vec<f64> = sizes.iter().filter(|&&s| s >= xmin).map(|&s| (s as f64 / shift).ln()).collect();
    if tail.len() < MIN_FIT_SAMPLES {
        return None;
    }
    let log_sum: f64 = tail.iter().sum();
    (log_sum > 0.0).then(|| 1.0 + tail.len() as f64 / log_sum)
}

/// Exact maximum-likelihood exponent of a discrete power law
/// `P(s) = s^-alpha / zeta(alpha, xmin)` over the sizes `>= xmin`.
///
/// Returns `None` with fewer than three qualifying sizes, `xmin == 0`, or when
/// every qualifying size equals `xmin` (the likelihood has no maximum).
pub fn fit_power_law_discrete(sizes: &[usize], xmin: usize) -> Option<f64> {
    if xmin == 0 {
        return None;
    }
    let tail: Vec<usize> = sizes.iter().copied().filter(|&s| s >= xmin).collect();
    if tail.len() < MIN_FIT_SAMPLES || tail.iter().all(|&s| s == xmin) {
        return None;
    }
    let n = tail.len() as f64;
    let log_sum: f64 = tail.iter().map(|&s| (s as f64).ln()).sum();
    let q = xmin as f64;
    let log_likelihood = |alpha: f64| -n * hurwitz_zeta(alpha, q).ln() - alpha * log_sum;
    Some(golden_section_max(log_likelihood, 1.0 + 1e-6, 50.0, 1e-10))
}

/// Maximizes a unimodal function on `[lo, hi]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

/// Hurwitz zeta `sum_{k>=0} (k + q)^-s` for `s > 1`, `q > 0`, by
/// Euler-Maclaurin summation.
pub(crate) fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const DIRECT_TERMS: usize = 12;
    // B_2j / (2j)!
    const BERNOULLI: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
    ];
    let mut sum: f64 = (0..DIRECT_TERMS).map(|k| (q + k as f64).powf(-s)).sum();
    let a = q + DIRECT_TERMS as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    let mut factor = s * a.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        sum += b * factor;
        let m = 2.0 * j as f64;
        factor *= (s + m + 1.0) * (s + m + 2.0) / (a * a);
    }
    sum
}

/// Aggregate of seeded detector runs on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub algorithm: Algorithm,
    pub seeds: Vec<u64>,
    pub q_values: Vec<f64>,
    pub mean_q: f64,
    pub max_q: f64,
    /// NMI of each run against the reference partition.
    pub nmi_values: Vec<f64>,
    pub peak_nmi: f64,
    /// Index of the first run attaining `max_q`.
    pub best_run: usize,
}

/// Batch statistics together with the best-Q partition.
#[derive(Clone, Debug)]
pub struct Batch {
    pub stats: BatchStats,
    pub best: Partition,
}

/// Runs `algorithm` with seeds `base, base + 1, ...` and aggregates Q and NMI
/// against `reference`. EB is deterministic and runs once whatever `runs` is.
pub fn run_batch(
    graph: &ClassGraph,
    algorithm: Algorithm,
    runs: usize,
    base_seed: Seed,
    reference: &Partition,
) -> Result<Batch, DetectError> {
    if runs == 0 {
        return Err(DetectError::NoRuns);
    }
    if reference.len() != graph.node_count() {
        return Err(MetricsError::SizeMismatch { expected: graph.node_count(), found: reference.len() }.into());
    }
    let runs = if algorithm == Algorithm::Eb { 1 } else { runs };
    let seeds: Vec<u64> = (0..runs as u64).map(|i| base_seed.0.wrapping_add(i)).collect();
    let results: Vec<(Partition, f64, f64)> = seeds
        .par_iter()
        .map(|&seed| {
            let partition = detect::detect(graph, algorithm, Seed(seed))?;
            let q = modularity(graph, &partition)?;
            let similarity = nmi(&partition, reference)?;
            Ok((partition, q, similarity))
        })
        .collect::<Result<_, DetectError>>()?;

    let q_values: Vec<f64> = results.iter().map(|r| r.1).collect();
    let nmi_values: Vec<f64> = results.iter().map(|r| r.2).collect();
    let mut best_run = 0;
    for (i, &q) in q_values.iter().enumerate() {
        if q > q_values[best_run] {
            best_run = i;
        }
    }
    let max_q = q_values[best_run];
    let min_q = q_values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_q = (q_values.iter().sum::<f64>() / runs as f64).clamp(min_q, max_q);
    let peak_nmi = nmi_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = results.into_iter().nth(best_run).map(|r| r.0).expect("at least one run");
    Ok(Batch {
        stats: BatchStats { algorithm, seeds, q_values, mean_q, max_q, nmi_values, peak_nmi, best_run },
        best,
    })
}
