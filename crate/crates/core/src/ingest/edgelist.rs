//! TSV edge lists: a `#depnet-edges v1 isolated=keep|drop` header, then one
//! `source<TAB>target<TAB>kind` line per edge.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use thiserror::Error;

use crate::graph::{ClassGraph, Dependency, DependencyKind, GraphError};

pub const EDGE_HEADER: &str = "#depnet-edges v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsolatedPolicy {
    Keep,
    Drop,
}

impl IsolatedPolicy {
    fn as_str(self) -> &'static str {
        match self {
            IsolatedPolicy::Keep => "keep",
            IsolatedPolicy::Drop => "drop",
        }
    }
}

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line 1: expected header `{EDGE_HEADER} isolated=keep|drop`")]
    BadHeader,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown dependency kind `{token}`")]
    UnknownKind { line: usize, token: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Reads an edge list. Nodes are numbered by first appearance; a header of
/// `isolated=drop` removes nodes left without edges (self-loops only).
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<ClassGraph, EdgeListError> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.ok_or(EdgeListError::BadHeader)?;
    let policy = match header.trim_end_matches('\r').strip_prefix(EDGE_HEADER).map(str::trim) {
        Some("isolated=keep") => IsolatedPolicy::Keep,
        Some("isolated=drop") => IsolatedPolicy::Drop,
        _ => return Err(EdgeListError::BadHeader),
    };

    let mut fqns: Vec<String> = Vec::new();
    let mut known: HashSet<String> = HashSet::new();
    let mut deps = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let number = i + 2;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [source, target, kind] = fields[..] else {
            return Err(EdgeListError::Malformed {
                line: number,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        };
        if source.is_empty() || target.is_empty() {
            return Err(EdgeListError::Malformed { line: number, message: "empty class name".into() });
        }
        let kind: DependencyKind =
            kind.parse().map_err(|_| EdgeListError::UnknownKind { line: number, token: kind.to_owned() })?;
        for name in [source, target] {
            if known.insert(name.to_owned()) {
                fqns.push(name.to_owned());
            }
        }
        deps.push(Dependency::new(source, target, kind));
    }
    if fqns.is_empty() {
        return Err(EdgeListError::Graph(GraphError::Empty));
    }
    let graph = ClassGraph::build(fqns, &deps)?;
    Ok(match policy {
        IsolatedPolicy::Keep => graph,
        IsolatedPolicy::Drop => graph.remove_isolated().0,
    })
}

pub fn parse_edge_list(text: &str) -> Result<ClassGraph, EdgeListError> {
    load_edge_list(text.as_bytes())
}

/// Serializes the edges sorted bytewise by `(source, target, kind)`. Nodes without
/// edges cannot be represented and are lost.
pub fn write_edge_list(graph: &ClassGraph, policy: IsolatedPolicy) -> String {
    let mut rows: Vec<(&str, &str, &str)> =
        graph.edges().iter().map(|e| (graph.fqn(e.source), graph.fqn(e.target), e.kind.as_str())).collect();
    rows.sort();
    let mut out = format!("{EDGE_HEADER} isolated={}\n", policy.as_str());
    for (source, target, kind) in rows {
        out.push_str(source);
        out.push('\t');
        out.push_str(target);
        out.push('\t');
        out.push_str(kind);
        out.push('\n');
    }
    out
}

/// Edge count per unordered class pair and kind, for multiset comparisons.
pub fn edge_multiset(graph: &ClassGraph) -> HashMap<(String, String, DependencyKind), usize> {
    let mut counts = HashMap::new();
    for e in graph.edges() {
        let (a, b) = (graph.fqn(e.source).to_owned(), graph.fqn(e.target).to_owned());
        let key = if a <= b { (a, b, e.kind) } else { (b, a, e.kind) };
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = parse_edge_list("#depnet-edges v1 isolated=keep\np.A\tp.B\tfield\n").unwrap();
        assert_eq!(g.fqns(), &["p.A", "p.B"]);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn duplicate_lines_are_parallel_edges() {
        let g = parse_edge_list("#depnet-edges v1 isolated=keep\nA\tB\tfield\nA\tB\tfield\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.multiplicity(0, 1), 2);
    }

    #[test]
    fn bad_kind_names_the_line() {
        let err = parse_edge_list("#depnet-edges v1 isolated=keep\nA\tB\tbogus").unwrap_err();
        assert!(matches!(err, EdgeListError::UnknownKind { line: 2, ref token } if token == "bogus"));
        let err = parse_edge_list("#depnet-edges v1 isolated=keep\nA B field\n").unwrap_err();
        assert!(matches!(err, EdgeListError::Malformed { line: 2, .. }));
    }

    #[test]
    fn headerless_input_fails_on_line_one() {
        let err = parse_edge_list("A\tB\tbogus\n").unwrap_err();
        assert!(matches!(err, EdgeListError::BadHeader));
        assert!(err.to_string().starts_with("line 1"));
        assert!(matches!(parse_edge_list("").unwrap_err(), EdgeListError::BadHeader));
    }

    #[test]
    fn isolated_policy() {
        let text = "A\tA\tfield\nB\tC\treturn\n";
        let keep = parse_edge_list(&format!("{EDGE_HEADER} isolated=keep\n{text}")).unwrap();
        assert_eq!(keep.node_count(), 3);
        let drop = parse_edge_list(&format!("{EDGE_HEADER} isolated=drop\n{text}")).unwrap();
        assert_eq!(drop.fqns(), &["B", "C"]);
    }

    #[test]
    fn writer_sorts_rows() {
        let g = parse_edge_list("#depnet-edges v1 isolated=keep\nb\ta\treturn\na\tb\tfield\nb\ta\tinheritance\n").unwrap();
        assert_eq!(
            write_edge_list(&g, IsolatedPolicy::Drop),
            "#depnet-edges v1 isolated=drop\na\tb\tfield\nb\ta\tinheritance\nb\ta\treturn\n"
        );
        assert_eq!(parse_edge_list(&write_edge_list(&g, IsolatedPolicy::Keep)).unwrap().edge_count(), 3);
    }
}
