//! Community networks: one node per community, weighted by the dependency
//! edges between communities, with the package make-up of each community.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::ClassGraph;
use crate::partition::Partition;

/// Share below which a package counts as weakly represented in a community.
pub const WEAK_PACKAGE_SHARE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityNode {
    pub label: String,
    /// Number of classes.
    pub size: usize,
    /// Classes per package.
    pub packages: BTreeMap<String, usize>,
    /// Dependency edges with both ends inside the community.
    pub self_weight: usize,
}

impl CommunityNode {
    /// Package holding most classes; ties go to the smallest name.
    pub fn top_package(&self) -> Option<&str> {
        let mut best: Option<(&String, usize)> = None;
        for (name, &count) in &self.packages {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((name, count));
            }
        }
        best.map(|(n, _)| n.as_str())
    }

    /// Packages holding at least `share` of the community's classes.
    pub fn strong_packages(&self, share: f64) -> impl Iterator<Item = (&str, usize)> + '_ {
        let size = self.size as f64;
        self.packages
            .iter()
            .filter(move |(_, &c)| c as f64 >= share * size)
            .map(|(n, &c)| (n.as_str(), c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityEdge {
    pub a: String,
    pub b: String,
    pub weight: usize,
}

/// Abstraction network over a partition. Communities are sorted by label and
/// edges by `(a, b)` with `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommunityGraph {
    pub communities: Vec<CommunityNode>,
    pub edges: Vec<CommunityEdge>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AbstractError {
    #[error("partition covers {found} nodes but the graph has {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("unknown export format `{0}` (expected dot, graphml or json)")]
    UnknownFormat(String),
    #[error("unsupported community graph version {0}")]
    Version(u32),
    #[error("invalid community graph JSON: {0}")]
    Json(String),
}

/// Builds the community network of `partition`, describing each community by
/// the `packages` partition.
pub fn community_network(
    graph: &ClassGraph,
    partition: &Partition,
    packages: &Partition,
) -> Result<CommunityGraph, AbstractError> {
    for p in [partition, packages] {
        if p.len() != graph.node_count() {
            return Err(AbstractError::SizeMismatch { expected: graph.node_count(), found: p.len() });
        }
    }
    let blocks = partition.block_count();
    let mut nodes: Vec<CommunityNode> = (0..blocks)
        .map(|b| CommunityNode {
            label: partition.block_label(b).to_owned(),
            size: 0,
            packages: BTreeMap::new(),
            self_weight: 0,
        })
        .collect();
    for node in 0..graph.node_count() {
        let c = &mut nodes[partition.block_of(node)];
        c.size += 1;
        *c.packages.entry(packages.label(node).to_owned()).or_insert(0) += 1;
    }
    let mut between: HashMap<(usize, usize), usize> = HashMap::new();
    for e in graph.edges() {
        let (x, y) = (partition.block_of(e.source), partition.block_of(e.target));
        if x == y {
            nodes[x].self_weight += 1;
        } else {
            *between.entry((x.min(y), x.max(y))).or_insert(0) += 1;
        }
    }
    let mut edges: Vec<CommunityEdge> = between
        .into_iter()
        .map(|((x, y), weight)| {
            let (a, b) = (nodes[x].label.clone(), nodes[y].label.clone());
            if a < b {
                CommunityEdge { a, b, weight }
            } else {
                CommunityEdge { a: b, b: a, weight }
            }
        })
        .collect();
    edges.sort_by(|p, q| (&p.a, &p.b).cmp(&(&q.a, &q.b)));
    nodes.sort_by(|p, q| p.label.cmp(&q.label));

    let cg = CommunityGraph { communities: nodes, edges };
    assert_eq!(cg.total_size(), graph.node_count(), "community sizes must cover the graph");
    assert_eq!(cg.total_weight(), graph.edge_count(), "community weights must cover every edge");
    Ok(cg)
}

impl CommunityGraph {
    pub fn total_size(&self) -> usize {
        self.communities.iter().map(|c| c.size).sum()
    }

    /// Inter-community plus intra-community edge weight.
    pub fn total_weight(&self) -> usize {
        self.edges.iter().map(|e| e.weight).sum::<usize>() + self.communities.iter().map(|c| c.self_weight).sum::<usize>()
    }

    fn index(&self) -> HashMap<&str, usize> {
        self.communities.iter().enumerate().map(|(i, c)| (c.label.as_str(), i)).collect()
    }

    /// Connected components of the community network as sorted index lists.
    fn components(&self) -> Vec<Vec<usize>> {
        let index = self.index();
        let n = self.communities.len();
        let mut adjacency = vec![Vec::new(); n];
        for e in &self.edges {
            let (a, b) = (index[e.a.as_str()], index[e.b.as_str()]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &v in &adjacency[comp[i]] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Keeps the `k` connected components with the most classes. Ties go to
    /// the component whose smallest label sorts first.
    pub fn largest_components(&self, k: usize) -> CommunityGraph {
        let mut comps = self.components();
        if comps.len() <= k {
            return self.clone();
        }
        // components are already ordered by smallest member index
        comps.sort_by_key(|c| std::cmp::Reverse(c.iter().map(|&i| self.communities[i].size).sum::<usize>()));
        let mut keep = vec![false; self.communities.len()];
        for comp in comps.iter().take(k) {
            for &i in comp {
                keep[i] = true;
            }
        }
        let index = self.index();
        CommunityGraph {
            communities: self.communities.iter().zip(&keep).filter(|(_, &k)| k).map(|(c, _)| c.clone()).collect(),
            edges: self.edges.iter().filter(|e| keep[index[e.a.as_str()]]).cloned().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = JsonDoc { version: 1, communities: self.communities.clone(), edges: self.edges.clone() };
        let mut text = serde_json::to_string_pretty(&doc).expect("community graph serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<CommunityGraph, AbstractError> {
        let doc: JsonDoc = serde_json::from_str(text).map_err(|e| AbstractError::Json(e.to_string()))?;
        if doc.version != 1 {
            return Err(AbstractError::Version(doc.version));
        }
        Ok(CommunityGraph { communities: doc.communities, edges: doc.edges })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph communities {\n");
        if !self.communities.is_empty() {
            out.push_str("  node [shape=circle, fixedsize=true];\n");
        }
        let max_size = self.communities.iter().map(|c| c.size).max().unwrap_or(1).max(1) as f64;
        for c in &self.communities {
            let width = 0.4 + 1.6 * (c.size as f64 / max_size).sqrt();
            let _ = writeln!(
                out,
                "  {} [label={}, width={:.3}, top_package={}];",
                dot_id(&c.label),
                dot_id(&format!("{} ({})", c.label, c.size)),
                width,
                dot_id(c.top_package().unwrap_or("")),
            );
        }
        let max_weight = self.edges.iter().map(|e| e.weight).max().unwrap_or(1).max(1) as f64;
        for e in &self.edges {
            let pen = 1.0 + 4.0 * e.weight as f64 / max_weight;
            let _ = writeln!(
                out,
                "  {} -- {} [weight={}, penwidth={:.3}];",
                dot_id(&e.a),
                dot_id(&e.b),
                e.weight,
                pen
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_graphml(&self) -> String {
        let mut out = String::from(concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
            "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n",
            "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n",
            "  <key id=\"self_weight\" for=\"node\" attr.name=\"self_weight\" attr.type=\"int\"/>\n",
            "  <key id=\"top_package\" for=\"node\" attr.name=\"top_package\" attr.type=\"string\"/>\n",
            "  <key id=\"packages\" for=\"node\" attr.name=\"packages\" attr.type=\"string\"/>\n",
            "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n",
            "  <graph id=\"communities\" edgedefault=\"undirected\">\n",
        ));
        for c in &self.communities {
            let packages = serde_json::to_string(&c.packages).expect("package map serializes");
            let _ = write!(
                out,
                concat!(
                    "    <node id=\"{id}\">\n",
                    "      <data key=\"label\">{id}</data>\n",
                    "      <data key=\"size\">{size}</data>\n",
                    "      <data key=\"self_weight\">{sw}</data>\n",
                    "      <data key=\"top_package\">{top}</data>\n",
                    "      <data key=\"packages\">{pk}</data>\n",
                    "    </node>\n",
                ),
                id = xml_escape(&c.label),
                size = c.size,
                sw = c.self_weight,
                top = xml_escape(c.top_package().unwrap_or("")),
                pk = xml_escape(&packages),
            );
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{}</data></edge>",
                xml_escape(&e.a),
                xml_escape(&e.b),
                e.weight
            );
        }
        out.push_str("  </graph>\n</graphml>\n");
        out
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Graphml => self.to_graphml(),
            ExportFormat::Json => self.to_json(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    version: u32,
    communities: Vec<CommunityNode>,
    edges: Vec<CommunityEdge>,
}

fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Graphml,
    Json,
}

impl FromStr for ExportFormat {
    type Err = AbstractError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "graphml" => Ok(ExportFormat::Graphml),
            "json" => Ok(ExportFormat::Json),
            other => Err(AbstractError::UnknownFormat(other.to_owned())),
        }
    }
}
