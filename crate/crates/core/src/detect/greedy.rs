use std::collections::BTreeMap;

use rand::Rng;

use super::{require_edges, DetectError, Dendrogram, Event, Level, Seed};
use crate::graph::ClassGraph;
use crate::partition::Partition;

/// Greedy agglomerative modularity optimization.
///
/// Starts from singletons and repeatedly merges the adjacent pair of
/// communities with the largest modularity gain, choosing uniformly at random
/// (under `seed`) among tied pairs, until no adjacent pair remains. Returns
/// the partition at the first level of maximal Q.
///
/// Gains are compared exactly in integers: merging `i` and `j` changes
/// `4 m^2 Q` by `2 (2 m w_ij - k_i k_j)`, where `w_ij` counts the edges
/// between them and `k` are degree sums.
pub fn detect_mo(graph: &ClassGraph, seed: Seed) -> Result<(Partition, Dendrogram), DetectError> {
    require_edges(graph)?;
    let n = graph.node_count();
    let m = graph.edge_count() as i128;
    let scale = (4 * m * m) as f64;
    let mut rng = seed.rng();

    let mut links: Vec<BTreeMap<usize, i128>> = (0..n)
        .map(|u| graph.neighbors(u).iter().map(|&(v, w)| (v, w as i128)).collect())
        .collect();
    let mut degree: Vec<i128> = graph.degrees().iter().map(|&k| k as i128).collect();

    // 4 m^2 Q, exact
    let mut score: i128 = -degree.iter().map(|k| k * k).sum::<i128>();
    let mut levels = vec![Level { event: Event::Start, communities: n, q: score as f64 / scale }];
    let mut merges: Vec<(usize, usize)> = Vec::new();
    let mut best_score = score;
    let mut best_merges = 0;
    let mut candidates: Vec<(usize, usize)> = Vec::new();

    loop {
        candidates.clear();
        let mut top = i128::MIN;
        for (i, row) in links.iter().enumerate() {
            for (&j, &w) in row.range(i + 1..) {
                let gain = 2 * m * w - degree[i] * degree[j];
                if gain > top {
                    top = gain;
                    candidates.clear();
                }
                if gain == top {
                    candidates.push((i, j));
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let (kept, absorbed) = candidates[rng.random_range(0..candidates.len())];

        let absorbed_links = std::mem::take(&mut links[absorbed]);
        for (other, w) in absorbed_links {
            if other == kept {
                continue;
            }
            links[other].remove(&absorbed);
            *links[other].entry(kept).or_insert(0) += w;
            *links[kept].entry(other).or_insert(0) += w;
        }
        links[kept].remove(&absorbed);
        degree[kept] += degree[absorbed];
        degree[absorbed] = 0;

        score += 2 * top;
        merges.push((kept, absorbed));
        levels.push(Level {
            event: Event::Merge { kept, absorbed },
            communities: n - merges.len(),
            q: score as f64 / scale,
        });
        if score > best_score {
            best_score = score;
            best_merges = merges.len();
        }
    }

    // Replay the merges up to the best level.
    let mut owner: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|u| vec![u]).collect();
    for &(kept, absorbed) in &merges[..best_merges] {
        let moved = std::mem::take(&mut members[absorbed]);
        for &u in &moved {
            owner[u] = kept;
        }
        members[kept].extend(moved);
    }
    Ok((Partition::from_assignment(&owner), Dendrogram::with_best(levels, best_merges)))
}
