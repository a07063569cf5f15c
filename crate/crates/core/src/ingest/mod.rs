//! Building class graphs from class-header sources or edge-list files.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ClassGraph, GraphError};
use crate::partition::Partition;

mod edgelist;
mod lexer;
mod parser;
mod resolve;

pub use edgelist::{edge_multiset, load_edge_list, parse_edge_list, write_edge_list, EdgeListError, IsolatedPolicy, EDGE_HEADER};
pub use parser::parse_class_headers;
pub use resolve::{resolve_dependencies, ResolveError, Resolved};

/// Syntax error in a header source.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

/// A type as written in a header, with arrays decayed to their element type.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRef {
    /// Simple or qualified name as written.
    pub name: String,
    pub args: Vec<TypeRef>,
}

impl TypeRef {
    pub fn new(name: impl Into<String>) -> Self {
        TypeRef { name: name.into(), args: Vec::new() }
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("<")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(">")?;
        }
        Ok(())
    }
}

/// Parsed class or interface header.
///
/// Type references are unresolved names; primitives, `void` and type
/// variables are already gone. Each list holds one entry per occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub fqn: String,
    /// Dot-separated package, empty for the default package.
    pub package: String,
    pub is_interface: bool,
    /// Single-type imports of the declaring file.
    pub imports: Vec<String>,
    /// Packages imported on demand (`import p.*;`).
    pub wildcard_imports: Vec<String>,
    /// Enclosing classes, innermost first.
    pub enclosing: Vec<String>,
    /// `extends` and `implements` targets.
    pub supertypes: Vec<TypeRef>,
    pub field_types: Vec<TypeRef>,
    /// Method parameter types.
    pub param_types: Vec<TypeRef>,
    pub constructor_param_types: Vec<TypeRef>,
    pub return_types: Vec<TypeRef>,
    /// Line of the declared name.
    pub line: usize,
}

impl ClassDecl {
    pub fn simple_name(&self) -> &str {
        self.fqn.rsplit('.').next().unwrap_or(&self.fqn)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveOptions {
    /// Keep unresolved types as extra nodes instead of dropping them.
    pub keep_external: bool,
    /// Also emit dependencies on generic type arguments.
    pub include_type_arguments: bool,
    /// Count constructor parameters as parameter dependencies.
    pub include_constructors: bool,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { keep_external: false, include_type_arguments: false, include_constructors: true }
    }
}

/// Label shared by classes outside any package.
pub const DEFAULT_PACKAGE: &str = "(default)";

/// Package part of a fully-qualified class name.
///
/// Takes every segment before the simple name and stops at the first
/// capitalized segment, so nested classes (`p.Outer.Inner`) belong to the
/// package of their outermost class.
pub fn package_of(fqn: &str) -> &str {
    let Some(last_dot) = fqn.rfind('.') else {
        return "";
    };
    let prefix = &fqn[..last_dot];
    let mut end = 0;
    for segment in prefix.split('.') {
        if segment.chars().next().is_some_and(char::is_uppercase) {
            break;
        }
        end += if end == 0 { segment.len() } else { segment.len() + 1 };
    }
    &prefix[..end]
}

/// Partition of the graph's classes by package, optionally truncated to the
/// first `depth` package segments. Classes without a package share the
/// `(default)` label.
pub fn package_partition(graph: &ClassGraph, depth: Option<usize>) -> Partition {
    Partition::from_labels(graph.fqns().iter().map(|fqn| {
        let package = package_of(fqn);
        let package = match depth {
            Some(d) => truncate_package(package, d),
            None => package,
        };
        if package.is_empty() {
            DEFAULT_PACKAGE
        } else {
            package
        }
    }))
}

fn truncate_package(package: &str, depth: usize) -> &str {
    if depth == 0 {
        return "";
    }
    match package.match_indices('.').nth(depth - 1) {
        Some((i, _)) => &package[..i],
        None => package,
    }
}

/// Error from the header-to-graph pipeline, naming the source it came from.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("no input classes")]
    NoClasses,
    #[error("{source_name}:{}:{}: {}", error.line, error.column, error.message)]
    Parse { source_name: String, error: ParseError },
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Result of [`extract_graph`].
#[derive(Clone, Debug)]
pub struct Extraction {
    /// Graph with isolated classes removed.
    pub graph: ClassGraph,
    pub declared: usize,
    /// Classes dropped for having no dependency at all.
    pub isolated: Vec<String>,
}

/// Parses `(name, text)` sources, resolves dependencies, builds the graph and
/// drops isolated classes.
pub fn extract_graph<N, T>(sources: &[(N, T)], options: &ResolveOptions) -> Result<Extraction, ExtractError>
where
    N: AsRef<str>,
    T: AsRef<str>,
{
    let mut decls = Vec::new();
    for (name, text) in sources {
        let parsed = parse_class_headers(text.as_ref())
            .map_err(|error| ExtractError::Parse { source_name: name.as_ref().to_owned(), error })?;
        decls.extend(parsed);
    }
    if decls.is_empty() {
        return Err(ExtractError::NoClasses);
    }
    let declared = decls.len();
    let resolved = resolve_dependencies(&decls, options)?;
    let full = ClassGraph::build(resolved.class_fqns, &resolved.dependencies)?;
    let (graph, remap) = full.remove_isolated();
    let isolated = remap
        .iter()
        .enumerate()
        .filter(|(_, new)| new.is_none())
        .map(|(old, _)| full.fqn(old).to_owned())
        .collect();
    Ok(Extraction { graph, declared, isolated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Dependency, DependencyKind};

    #[test]
    fn package_names() {
        assert_eq!(package_of("org.a.X"), "org.a");
        assert_eq!(package_of("org.a.X.Inner"), "org.a");
        assert_eq!(package_of("X"), "");
        assert_eq!(package_of("X.Inner"), "");
        assert_eq!(package_of("org.util.list"), "org.util");
    }

    #[test]
    fn package_partition_labels() {
        let g = ClassGraph::build(
            ["org.a.X", "org.a.b.Y", "Z", "W"],
            &[Dependency::new("org.a.X", "org.a.b.Y", DependencyKind::Field)],
        )
        .unwrap();
        let full = package_partition(&g, None);
        assert_eq!(full.labels().collect::<Vec<_>>(), vec!["org.a", "org.a.b", "(default)", "(default)"]);
        assert_eq!(full.block_count(), 3);
        let top = package_partition(&g, Some(1));
        assert_eq!(top.labels().collect::<Vec<_>>(), vec!["org", "org", "(default)", "(default)"]);
        let two = package_partition(&g, Some(2));
        assert_eq!(two.label(1), "org.a");
    }

    #[test]
    fn extract_pipeline_drops_isolated() {
        let sources = [("a.chd", "package p; class A { B b; }"), ("b.chd", "package p; class B {} class C {}")];
        let out = extract_graph(&sources, &ResolveOptions::default()).unwrap();
        assert_eq!(out.graph.fqns(), &["p.A", "p.B"]);
        assert_eq!(out.declared, 3);
        assert_eq!(out.isolated, vec!["p.C"]);
    }

    #[test]
    fn extract_errors_name_the_source() {
        let err = extract_graph(&[("bad.chd", "class {")], &ResolveOptions::default()).unwrap_err();
        assert!(err.to_string().starts_with("bad.chd:1:7: expected an identifier"), "{err}");
        let none: [(&str, &str); 0] = [];
        assert_eq!(extract_graph(&none, &ResolveOptions::default()).unwrap_err(), ExtractError::NoClasses);
    }
}
