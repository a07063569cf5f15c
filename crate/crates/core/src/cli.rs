//! The `depnet` command-line driver.
//!
//! Every subcommand reads a network either from an edge-list file or from
//! class-header sources, and writes deterministic output: identical
//! arguments and inputs give identical bytes.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::abstraction::{community_network, AbstractError, CommunityGraph, ExportFormat};
use crate::detect::{refine_packages, Algorithm, DetectError, Seed};
use crate::graph::ClassGraph;
use crate::ingest::{
    extract_graph, load_edge_list, package_partition, write_edge_list, EdgeListError, ExtractError, IsolatedPolicy,
    ResolveOptions, EDGE_HEADER,
};
use crate::metrics::{modularity, nmi, run_batch, size_distribution, split_disconnected, BatchStats, MetricsError, SizeDistribution};
use crate::partition::Partition;

/// Mean modularity from which a report calls community structure significant.
pub const SIGNIFICANT_Q: f64 = 0.30;

/// File extensions read as class-header sources.
pub const SOURCE_EXTENSIONS: [&str; 2] = ["chd", "java"];

#[derive(Debug, Parser)]
#[command(name = "depnet", version, about = "Community structure of class dependency networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse class headers and write the dependency network as an edge list.
    Extract(ExtractArgs),
    /// Run a community detector repeatedly and keep the best partition.
    Detect(DetectArgs),
    /// Modularity, NMI and size distributions of packages and partitions.
    Metrics(MetricsArgs),
    /// Refine the package structure by constrained label propagation.
    Refine(RefineArgs),
    /// Export the community network of a partition.
    Abstract(AbstractArgs),
    /// Metrics plus every detector in one JSON document.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge-list file, or class-header files and directories.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Keep unresolved types as external nodes.
    #[arg(long)]
    pub keep_external: bool,
    /// Also count generic type arguments as dependencies.
    #[arg(long = "type-args")]
    pub type_args: bool,
}

#[derive(Debug, Args)]
pub struct PackageArgs {
    /// Truncate package names to their first N segments.
    #[arg(long, value_name = "N")]
    pub package_depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Base seed; run i uses seed + i.
    #[arg(long, env = "DEPNET_SEED", default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Eb,
    Mo,
    Lp,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Eb => Algorithm::Eb,
            AlgoArg::Mo => Algorithm::Mo,
            AlgoArg::Lp => Algorithm::Lp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dot,
    Graphml,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dot => ExportFormat::Dot,
            FormatArg::Graphml => ExportFormat::Graphml,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "mo")]
    pub algo: AlgoArg,
    /// Number of seeded runs [default: 100, 10 for eb].
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: Option<u64>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub packages: PackageArgs,
    /// Partition TSV of the best run [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Batch statistics JSON [default: stdout when --out is given].
    #[arg(long, value_name = "PATH")]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Partition TSV (`fqn<TAB>label`) to evaluate; repeatable.
    #[arg(long = "partition", value_name = "PATH")]
    pub partitions: Vec<PathBuf>,
    /// Smallest size included in power-law fits.
    #[arg(long, default_value_t = 1)]
    pub xmin: usize,
    #[command(flatten)]
    pub packages: PackageArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub packages: PackageArgs,
    /// Refined partition TSV [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Refinement summary JSON [default: stdout when --out is given].
    #[arg(long, value_name = "PATH")]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AbstractArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Partition TSV whose blocks become the communities.
    #[arg(long, value_name = "PATH")]
    pub partition: PathBuf,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: FormatArg,
    /// Keep only the K largest connected components.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    pub components: Option<u64>,
    #[command(flatten)]
    pub packages: PackageArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Runs per algorithm [default: 100, 10 for eb].
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: Option<u64>,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value_t = 1)]
    pub xmin: usize,
    #[command(flatten)]
    pub packages: PackageArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    EdgeList { path: String, source: EdgeListError },
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Abstract(#[from] AbstractError),
    #[error("{path}:{line}: {message}")]
    Partition { path: String, line: usize, message: String },
}

impl CliError {
    /// 1 for usage or configuration errors, 2 for bad data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

/// Resolved settings of one invocation, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub out: Option<String>,
    pub algorithms: Vec<Algorithm>,
    /// Requested runs per algorithm. EB is deterministic and executes once.
    pub runs: BTreeMap<String, u64>,
    pub seed: Option<u64>,
    pub xmin: Option<usize>,
    pub package_depth: Option<usize>,
    pub resolve: ResolveOptions,
    pub partitions: Vec<String>,
}

impl RunConfig {
    fn new(subcommand: &str, input: &InputArgs, out: &Option<PathBuf>, package_depth: Option<usize>) -> Self {
        RunConfig {
            subcommand: subcommand.to_owned(),
            inputs: input.inputs.iter().map(|p| p.display().to_string()).collect(),
            out: out.as_ref().map(|p| p.display().to_string()),
            algorithms: Vec::new(),
            runs: BTreeMap::new(),
            seed: None,
            xmin: None,
            package_depth,
            resolve: resolve_options(input),
            partitions: Vec::new(),
        }
    }

    fn with_algorithms(mut self, algorithms: &[Algorithm], runs: Option<u64>) -> Self {
        for &a in algorithms {
            self.runs.insert(a.as_str().to_owned(), runs.unwrap_or(a.default_runs() as u64));
        }
        self.algorithms = algorithms.to_vec();
        self
    }
}

fn resolve_options(input: &InputArgs) -> ResolveOptions {
    ResolveOptions {
        keep_external: input.keep_external,
        include_type_arguments: input.type_args,
        ..ResolveOptions::default()
    }
}

/// Network size in classes, dependencies and packages.
#[derive(Clone, Debug, Serialize)]
pub struct NetworkSummary {
    pub nodes: usize,
    pub edges: usize,
    pub packages: usize,
}

impl NetworkSummary {
    fn of(graph: &ClassGraph, packages: &Partition) -> Self {
        NetworkSummary { nodes: graph.node_count(), edges: graph.edge_count(), packages: packages.block_count() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgorithmReport {
    #[serde(flatten)]
    pub stats: BatchStats,
    pub significant: bool,
    pub communities: usize,
    pub sizes: SizeDistribution,
}

#[derive(Clone, Debug, Serialize)]
pub struct SkippedAlgorithm {
    pub algorithm: Algorithm,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisconnectedPackage {
    pub label: String,
    pub pieces: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PackageMetrics {
    pub q: f64,
    pub q_connected: f64,
    pub count: usize,
    pub count_connected: usize,
    pub disconnected: Vec<DisconnectedPackage>,
    pub sizes: SizeDistribution,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionMetrics {
    pub name: String,
    pub q: f64,
    pub blocks: usize,
    pub sizes: SizeDistribution,
}

#[derive(Clone, Debug, Serialize)]
pub struct NmiEntry {
    pub a: String,
    pub b: String,
    pub nmi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub network: NetworkSummary,
    pub packages: PackageMetrics,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<PartitionMetrics>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nmi: Vec<NmiEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub algorithms: Vec<AlgorithmReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedAlgorithm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectSummary {
    pub config: RunConfig,
    pub network: NetworkSummary,
    #[serde(flatten)]
    pub stats: BatchStats,
    pub significant: bool,
    pub communities: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefineSummary {
    pub config: RunConfig,
    pub network: NetworkSummary,
    pub q_packages: f64,
    pub q_initial: f64,
    pub q_refined: f64,
    pub nmi_to_packages: f64,
    pub blocks_initial: usize,
    pub blocks_refined: usize,
    pub sweeps: usize,
    pub converged: bool,
}

/// A network together with what extraction discarded.
pub struct Network {
    pub graph: ClassGraph,
    pub isolated: Vec<String>,
}

fn is_edge_list(path: &Path) -> io::Result<bool> {
    if !path.is_file() {
        return Ok(false);
    }
    if path.extension().is_some_and(|e| e == "tsv") {
        return Ok(true);
    }
    let mut head = [0u8; EDGE_HEADER.len()];
    let mut file = fs::File::open(path)?;
    let mut filled = 0;
    while filled < head.len() {
        match io::Read::read(&mut file, &mut head[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(&head[..filled] == EDGE_HEADER.as_bytes())
}

fn collect_sources(path: &Path, out: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let meta = fs::metadata(path).map_err(io_error(path))?;
    if meta.is_file() {
        out.push(path.to_owned());
        return Ok(());
    }
    for entry in fs::read_dir(path).map_err(io_error(path))? {
        let entry = entry.map_err(io_error(path))?.path();
        if entry.is_dir() {
            collect_sources(&entry, out)?;
        } else if entry.extension().and_then(|e| e.to_str()).is_some_and(|e| SOURCE_EXTENSIONS.contains(&e)) {
            out.push(entry);
        }
    }
    Ok(())
}

/// Loads an edge-list file, or parses and resolves header sources found in
/// the given files and directories (in sorted path order).
pub fn load_network(input: &InputArgs) -> Result<Network, CliError> {
    if let [single] = input.inputs.as_slice() {
        if is_edge_list(single).map_err(io_error(single))? {
            let file = fs::File::open(single).map_err(io_error(single))?;
            let graph = load_edge_list(io::BufReader::new(file))
                .map_err(|source| CliError::EdgeList { path: single.display().to_string(), source })?;
            return Ok(Network { graph, isolated: Vec::new() });
        }
    }
    let mut paths = Vec::new();
    for p in &input.inputs {
        collect_sources(p, &mut paths)?;
    }
    paths.sort();
    paths.dedup();
    let mut sources = Vec::with_capacity(paths.len());
    for p in paths {
        let text = fs::read_to_string(&p).map_err(io_error(&p))?;
        sources.push((p.display().to_string(), text));
    }
    let extraction = extract_graph(&sources, &resolve_options(input))?;
    Ok(Network { graph: extraction.graph, isolated: extraction.isolated })
}

/// Partition TSV, one `fqn<TAB>label` line per class sorted by class name.
pub fn format_partition(graph: &ClassGraph, partition: &Partition) -> String {
    let mut rows: Vec<(&str, &str)> = (0..graph.node_count()).map(|v| (graph.fqn(v), partition.label(v))).collect();
    rows.sort_unstable();
    let mut out = String::new();
    for (fqn, label) in rows {
        out.push_str(fqn);
        out.push('\t');
        out.push_str(label);
        out.push('\n');
    }
    out
}

/// Parses a partition TSV against `graph`; every class must appear once.
pub fn parse_partition(graph: &ClassGraph, text: &str, path: &str) -> Result<Partition, CliError> {
    let error = |line: usize, message: String| CliError::Partition { path: path.to_owned(), line, message };
    let mut labels: Vec<Option<String>> = vec![None; graph.node_count()];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((fqn, label)) = line.split_once('\t') else {
            return Err(error(i + 1, "expected `class<TAB>label`".into()));
        };
        let id = graph.id_of(fqn).ok_or_else(|| error(i + 1, format!("class `{fqn}` is not in the network")))?;
        if labels[id].replace(label.to_owned()).is_some() {
            return Err(error(i + 1, format!("class `{fqn}` is listed twice")));
        }
    }
    let missing = labels.iter().filter(|l| l.is_none()).count();
    if missing > 0 {
        let first = labels.iter().position(Option::is_none).map(|v| graph.fqn(v)).unwrap_or_default();
        return Err(error(0, format!("{missing} classes have no label, first `{first}`")));
    }
    Ok(Partition::from_labels(labels.into_iter().flatten()))
}

fn read_partition(graph: &ClassGraph, path: &Path) -> Result<Partition, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    parse_partition(graph, &text, &path.display().to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_error(p)),
        None => out.write_all(text.as_bytes()).map_err(io_error(Path::new("<stdout>"))),
    }
}

/// Writes the primary output to `out_path` (or stdout) and the JSON summary
/// to `stats_path`, or to stdout when the primary output went to a file.
fn emit_pair(
    out_path: Option<&Path>,
    primary: &str,
    stats_path: Option<&Path>,
    summary: &str,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    emit(out_path, primary, out)?;
    match (stats_path, out_path) {
        (Some(p), _) => emit(Some(p), summary, out),
        (None, Some(_)) => emit(None, summary, out),
        (None, None) => Ok(()),
    }
}

fn extract(args: &ExtractArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let network = load_network(&args.input)?;
    let graph = &network.graph;
    if graph.edge_count() == 0 {
        log::warn!("all isolated nodes have been discarded; the network is empty");
        let _ = writeln!(err, "warning: no dependencies found; all isolated nodes have been discarded");
    }
    let packages = package_partition(graph, None);
    emit(args.out.as_deref(), &write_edge_list(graph, IsolatedPolicy::Keep), out)?;
    let _ = writeln!(
        err,
        "|N| = {}, |E| = {}, |P| = {} ({} isolated classes dropped)",
        graph.node_count(),
        graph.edge_count(),
        packages.block_count(),
        network.isolated.len()
    );
    Ok(())
}

fn detect(args: &DetectArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let algorithm: Algorithm = args.algo.into();
    let mut config = RunConfig::new("detect", &args.input, &args.out, args.packages.package_depth)
        .with_algorithms(&[algorithm], args.runs);
    config.seed = Some(args.seed.seed);
    let network = load_network(&args.input)?;
    let graph = &network.graph;
    let packages = package_partition(graph, args.packages.package_depth);
    let runs = config.runs[algorithm.as_str()] as usize;
    let batch = run_batch(graph, algorithm, runs, Seed(args.seed.seed), &packages)?;
    let summary = DetectSummary {
        network: NetworkSummary::of(graph, &packages),
        significant: batch.stats.mean_q >= SIGNIFICANT_Q,
        communities: batch.best.block_count(),
        stats: batch.stats,
        config,
    };
    emit_pair(args.out.as_deref(), &format_partition(graph, &batch.best), args.stats.as_deref(), &to_json(&summary), out)
}

fn package_metrics(graph: &ClassGraph, packages: &Partition, xmin: usize) -> Result<(PackageMetrics, Partition), CliError> {
    let connected = split_disconnected(graph, packages)?;
    let mut pieces: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut seen: HashMap<&str, ()> = HashMap::new();
    for v in 0..graph.node_count() {
        if seen.insert(connected.label(v), ()).is_none() {
            pieces.entry(packages.label(v)).or_default().push(connected.label(v).to_owned());
        }
    }
    let disconnected = pieces
        .into_iter()
        .filter(|(_, p)| p.len() > 1)
        .map(|(label, mut pieces)| {
            pieces.sort();
            DisconnectedPackage { label: label.to_owned(), pieces }
        })
        .collect();
    let metrics = PackageMetrics {
        q: modularity(graph, packages)?,
        q_connected: modularity(graph, &connected)?,
        count: packages.block_count(),
        count_connected: connected.block_count(),
        disconnected,
        sizes: size_distribution(packages, xmin),
    };
    Ok((metrics, connected))
}

fn metrics(args: &MetricsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = RunConfig::new("metrics", &args.input, &args.out, args.packages.package_depth);
    config.xmin = Some(args.xmin);
    config.partitions = args.partitions.iter().map(|p| p.display().to_string()).collect();
    let network = load_network(&args.input)?;
    let graph = &network.graph;
    let packages = package_partition(graph, args.packages.package_depth);
    let (package_metrics, connected) = package_metrics(graph, &packages, args.xmin)?;

    let mut named = vec![("packages".to_owned(), packages.clone()), ("packages+".to_owned(), connected)];
    let mut partitions = Vec::new();
    for path in &args.partitions {
        let p = read_partition(graph, path)?;
        let name = path.display().to_string();
        partitions.push(PartitionMetrics {
            name: name.clone(),
            q: modularity(graph, &p)?,
            blocks: p.block_count(),
            sizes: size_distribution(&p, args.xmin),
        });
        named.push((name, p));
    }
    let mut pairs = Vec::new();
    for i in 0..named.len() {
        for j in i..named.len() {
            pairs.push(NmiEntry { a: named[i].0.clone(), b: named[j].0.clone(), nmi: nmi(&named[i].1, &named[j].1)? });
        }
    }
    let report = Report {
        config,
        network: NetworkSummary::of(graph, &packages),
        packages: package_metrics,
        partitions,
        nmi: pairs,
        algorithms: Vec::new(),
        skipped: Vec::new(),
    };
    emit(args.out.as_deref(), &to_json(&report), out)
}

fn refine(args: &RefineArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = RunConfig::new("refine", &args.input, &args.out, args.packages.package_depth);
    config.seed = Some(args.seed.seed);
    let network = load_network(&args.input)?;
    let graph = &network.graph;
    let packages = package_partition(graph, args.packages.package_depth);
    let connected = split_disconnected(graph, &packages)?;
    let refinement = refine_packages(graph, &connected, Seed(args.seed.seed))?;
    let summary = RefineSummary {
        config,
        network: NetworkSummary::of(graph, &packages),
        q_packages: modularity(graph, &packages)?,
        q_initial: refinement.q_initial,
        q_refined: refinement.q_refined,
        nmi_to_packages: nmi(&refinement.partition, &packages)?,
        blocks_initial: connected.block_count(),
        blocks_refined: refinement.partition.block_count(),
        sweeps: refinement.sweeps,
        converged: refinement.converged,
    };
    let tsv = format_partition(graph, &refinement.partition);
    emit_pair(args.out.as_deref(), &tsv, args.stats.as_deref(), &to_json(&summary), out)
}

fn abstract_network(args: &AbstractArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let network = load_network(&args.input)?;
    let graph = &network.graph;
    let partition = read_partition(graph, &args.partition)?;
    let packages = package_partition(graph, args.packages.package_depth);
    let mut cg: CommunityGraph = community_network(graph, &partition, &packages)?;
    if let Some(k) = args.components {
        cg = cg.largest_components(k as usize);
    }
    emit(args.out.as_deref(), &cg.export(args.format.into()), out)
}

fn report(args: &ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = RunConfig::new("report", &args.input, &args.out, args.packages.package_depth)
        .with_algorithms(&Algorithm::ALL, args.runs);
    config.seed = Some(args.seed.seed);
    config.xmin = Some(args.xmin);
    let network = load_network(&args.input)?;
    let graph = &network.graph;
    let packages = package_partition(graph, args.packages.package_depth);
    let (package_metrics, _) = package_metrics(graph, &packages, args.xmin)?;
    let mut algorithms = Vec::new();
    let mut skipped = Vec::new();
    for algorithm in Algorithm::ALL {
        let runs = config.runs[algorithm.as_str()] as usize;
        match run_batch(graph, algorithm, runs, Seed(args.seed.seed), &packages) {
            Ok(batch) => algorithms.push(AlgorithmReport {
                significant: batch.stats.mean_q >= SIGNIFICANT_Q,
                communities: batch.best.block_count(),
                sizes: size_distribution(&batch.best, args.xmin),
                stats: batch.stats,
            }),
            Err(e @ DetectError::TooLarge { .. }) => {
                log::warn!("skipping {algorithm}: {e}");
                skipped.push(SkippedAlgorithm { algorithm, reason: e.to_string() });
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = Report {
        config,
        network: NetworkSummary::of(graph, &packages),
        packages: package_metrics,
        partitions: Vec::new(),
        nmi: Vec::new(),
        algorithms,
        skipped,
    };
    emit(args.out.as_deref(), &to_json(&report), out)
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Extract(a) => extract(a, out, err),
        Command::Detect(a) => detect(a, out),
        Command::Metrics(a) => metrics(a, out),
        Command::Refine(a) => refine(a, out),
        Command::Abstract(a) => abstract_network(a, out),
        Command::Report(a) => report(a, out),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
