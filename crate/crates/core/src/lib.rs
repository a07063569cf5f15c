//! Class dependency networks and their community structure.
//!
//! A [`ClassGraph`] is an undirected multigraph whose nodes are classes and
//! whose edges are inheritance, field, parameter and return dependencies.
//! Graphs come either from class-header sources ([`ingest`]) or from a TSV
//! edge list. On top of the graph this crate offers three community
//! detectors ([`detect`]), partition quality measures ([`metrics`]),
//! package refinement and community-network abstraction ([`abstraction`]).

pub mod abstraction;
pub mod cli;
pub mod detect;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod partition;

pub use abstraction::{community_network, CommunityGraph, ExportFormat};
pub use detect::{detect_eb, detect_lp, detect_mo, refine_packages, Algorithm, Dendrogram, Seed};
pub use graph::{ClassGraph, Dependency, DependencyKind, Edge, NodeId, WeightedGraph};
pub use ingest::{package_partition, parse_class_headers, resolve_dependencies, ClassDecl, ResolveOptions};
pub use metrics::{modularity, nmi, split_disconnected, BatchStats};
pub use partition::Partition;
