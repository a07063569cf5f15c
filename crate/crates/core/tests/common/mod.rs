//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use depnet::{ClassGraph, Dependency, DependencyKind, Partition};
use proptest::prelude::*;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn golden_dir() -> PathBuf {
    data_dir().join("golden")
}

/// Builds a graph on nodes `n0..n{n-1}` with one field edge per pair.
pub fn graph_from_pairs(n: usize, pairs: &[(usize, usize)]) -> ClassGraph {
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let deps: Vec<Dependency> = pairs
        .iter()
        .map(|&(a, b)| Dependency::new(names[a].clone(), names[b].clone(), DependencyKind::Field))
        .collect();
    ClassGraph::build(names, &deps).unwrap()
}

/// Two triangles `a-b-c` and `d-e-f` joined by the edge `c-d`.
pub fn two_triangles() -> ClassGraph {
    let names = ["p.A", "p.B", "q.C", "r.D", "r.E", "r.F"];
    let pairs = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
    let deps: Vec<Dependency> =
        pairs.iter().map(|&(a, b)| Dependency::new(names[a], names[b], DependencyKind::Field)).collect();
    ClassGraph::build(names, &deps).unwrap()
}

/// `k` cliques of `size` nodes; clique `i` is joined to clique `i + 1` (mod `k`)
/// by a single edge. Returns the graph and the planted assignment.
pub fn ring_of_cliques(k: usize, size: usize) -> (ClassGraph, Vec<usize>) {
    let mut pairs = Vec::new();
    for c in 0..k {
        let base = c * size;
        for i in 0..size {
            for j in i + 1..size {
                pairs.push((base + i, base + j));
            }
        }
        let next = ((c + 1) % k) * size;
        pairs.push((base + size - 1, next));
    }
    let planted = (0..k * size).map(|v| v / size).collect();
    (graph_from_pairs(k * size, &pairs), planted)
}

/// Random multigraph with `2..=max_nodes` nodes and `1..=max_edges` edges,
/// no self-loops and possibly repeated pairs.
pub fn random_multigraph(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> ClassGraph {
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(1..=max_edges);
    let mut pairs = Vec::with_capacity(m);
    while pairs.len() < m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            let copies = rng.random_range(1..=3).min(m - pairs.len());
            pairs.extend(std::iter::repeat_n((a, b), copies));
        }
    }
    graph_from_pairs(n, &pairs)
}

pub fn random_assignment(rng: &mut impl Rng, n: usize, max_blocks: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..max_blocks)).collect()
}

/// Proptest strategy for `(node count, edge pairs)` with at least one edge.
pub fn arb_pairs(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_nodes).prop_flat_map(move |n| {
        let pair = (0..n, 0..n).prop_filter("no self-loops", |(a, b)| a != b);
        (Just(n), prop::collection::vec(pair, 1..=max_edges))
    })
}

/// Modularity as the ordered-pair double sum
/// `(1/2m) sum_ij [A_ij - k_i k_j / 2m] [c_i = c_j]`.
pub fn ordered_pair_q(graph: &ClassGraph, assignment: &[usize]) -> f64 {
    let n = graph.node_count();
    let two_m = 2.0 * graph.edge_count() as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] != assignment[j] {
                continue;
            }
            let a = if i == j { 0.0 } else { graph.multiplicity(i, j) as f64 };
            sum += a - graph.degree(i) as f64 * graph.degree(j) as f64 / two_m;
        }
    }
    sum / two_m
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            grow(prefix, max.max(b), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        grow(&mut vec![0], 0, n, &mut out);
    }
    out
}

/// Highest modularity over all partitions, by enumeration.
pub fn exhaustive_best_q(graph: &ClassGraph) -> f64 {
    set_partitions(graph.node_count())
        .iter()
        .map(|p| ordered_pair_q(graph, p))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// NMI from the contingency table,
/// `-2 sum n_ij ln(n_ij n / (n_i n_j)) / (sum n_i ln(n_i / n) + sum n_j ln(n_j / n))`.
pub fn direct_nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut row: HashMap<usize, f64> = HashMap::new();
    let mut col: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0;
        *row.entry(x).or_default() += 1.0;
        *col.entry(y).or_default() += 1.0;
    }
    let numerator: f64 = joint.iter().map(|(&(x, y), &c)| c * (c * n / (row[&x] * col[&y])).ln()).sum();
    let denominator: f64 =
        row.values().map(|&c| c * (c / n).ln()).sum::<f64>() + col.values().map(|&c| c * (c / n).ln()).sum::<f64>();
    if denominator == 0.0 {
        return 1.0;
    }
    -2.0 * numerator / denominator
}

pub fn partition_of(assignment: &[usize]) -> Partition {
    Partition::from_assignment(assignment)
}
