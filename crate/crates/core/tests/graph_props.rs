mod common;

use common::{arb_pairs, graph_from_pairs};
use depnet::{ClassGraph, Dependency, DependencyKind};
use proptest::prelude::*;

fn deps_of(n: usize, pairs: &[(usize, usize)]) -> (Vec<String>, Vec<Dependency>) {
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let kinds = DependencyKind::ALL;
    let deps = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Dependency::new(names[a].clone(), names[b].clone(), kinds[i % kinds.len()]))
        .collect();
    (names, deps)
}

proptest! {
    #[test]
    fn degrees_sum_to_twice_the_edges((n, pairs) in arb_pairs(12, 40)) {
        let g = graph_from_pairs(n, &pairs);
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        prop_assert_eq!(g.edge_count(), pairs.len());
    }

    #[test]
    fn dependency_order_does_not_matter((n, pairs) in arb_pairs(10, 30), rotate in 0usize..30) {
        let (names, mut deps) = deps_of(n, &pairs);
        let g = ClassGraph::build(names.clone(), &deps).unwrap();
        let k = rotate % deps.len();
        deps.rotate_left(k);
        deps.reverse();
        prop_assert_eq!(ClassGraph::build(names, &deps).unwrap(), g);
    }

    #[test]
    fn self_loops_never_count(n in 1usize..8, loops in prop::collection::vec(0usize..8, 0..10)) {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let deps: Vec<Dependency> = loops
            .iter()
            .map(|&i| Dependency::new(names[i % n].clone(), names[i % n].clone(), DependencyKind::Return))
            .collect();
        let g = ClassGraph::build(names, &deps).unwrap();
        prop_assert_eq!(g.edge_count(), 0);
        prop_assert_eq!(g.remove_isolated().0.node_count(), 0);
    }

    #[test]
    fn remove_isolated_is_idempotent((n, pairs) in arb_pairs(12, 10), extra in 0usize..5) {
        let g = graph_from_pairs(n + extra, &pairs);
        let (once, remap) = g.remove_isolated();
        prop_assert!(once.degrees().iter().all(|&d| d > 0));
        prop_assert_eq!(once.edge_count(), g.edge_count());
        for (old, new) in remap.iter().enumerate() {
            match new {
                Some(id) => prop_assert_eq!(once.fqn(*id), g.fqn(old)),
                None => prop_assert_eq!(g.degree(old), 0),
            }
        }
        let (twice, _) = once.remove_isolated();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn components_are_edge_closed((n, pairs) in arb_pairs(14, 12)) {
        let g = graph_from_pairs(n, &pairs);
        let comps = g.connected_components();
        for e in g.edges() {
            prop_assert_eq!(comps.block_of(e.source), comps.block_of(e.target));
        }
        for block in comps.blocks() {
            let sub = g.induced_subgraph(&block).unwrap();
            prop_assert_eq!(sub.connected_components().block_count(), 1);
        }
    }

    #[test]
    fn collapse_preserves_weight((n, pairs) in arb_pairs(10, 30)) {
        let g = graph_from_pairs(n, &pairs);
        let w = g.collapse_to_weighted();
        prop_assert_eq!(w.total_weight(), g.edge_count());
        prop_assert!(w.edges().iter().all(|e| e.a < e.b && e.weight >= 1));
    }
}

#[test]
fn parallel_edges_keep_their_kinds() {
    let deps = [
        Dependency::new("A", "B", DependencyKind::Field),
        Dependency::new("A", "B", DependencyKind::Return),
        Dependency::new("B", "A", DependencyKind::Inheritance),
    ];
    let g = ClassGraph::build(["A", "B"], &deps).unwrap();
    assert_eq!(g.multiplicity(0, 1), 3);
    assert_eq!(g.multiplicity(1, 0), 3);
    let kinds: Vec<_> = g.edges().iter().map(|e| e.kind).collect();
    assert_eq!(kinds, vec![DependencyKind::Field, DependencyKind::Return, DependencyKind::Inheritance]);
}

#[test]
fn unknown_endpoint_is_rejected() {
    let err = ClassGraph::build(["A"], &[Dependency::new("A", "Z", DependencyKind::Field)]).unwrap_err();
    assert!(err.to_string().contains('Z'), "{err}");
}
