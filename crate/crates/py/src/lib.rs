//! Python bindings. Partitions cross the boundary as `{class name: label}`
//! dictionaries.

use std::collections::HashMap;

use depnet::abstraction::community_network;
use depnet::detect::{self, Algorithm};
use depnet::ingest::{self, IsolatedPolicy};
use depnet::metrics::{self, run_batch};
use depnet::{ClassGraph, Dependency, DependencyKind, ExportFormat, Partition, ResolveOptions, Seed};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Class dependency network.
#[pyclass(name = "Graph", module = "depnet", frozen)]
pub struct PyGraph {
    inner: ClassGraph,
}

impl PyGraph {
    fn partition(&self, labels: &HashMap<String, String>) -> PyResult<Partition> {
        if labels.len() != self.inner.node_count() {
            return Err(value_error(format!(
                "partition has {} classes but the graph has {}",
                labels.len(),
                self.inner.node_count()
            )));
        }
        let mut ordered = Vec::with_capacity(labels.len());
        for fqn in self.inner.fqns() {
            let label = labels.get(fqn).ok_or_else(|| value_error(format!("class `{fqn}` has no label")))?;
            ordered.push(label.as_str());
        }
        Ok(Partition::from_labels(ordered))
    }

    fn labels(&self, partition: &Partition) -> HashMap<String, String> {
        self.inner.fqns().iter().zip(partition.labels()).map(|(f, l)| (f.clone(), l.to_owned())).collect()
    }
}

#[pymethods]
impl PyGraph {
    /// Builds a graph from class names and `(source, target, kind)` triples.
    #[new]
    fn new(classes: Vec<String>, dependencies: Vec<(String, String, String)>) -> PyResult<Self> {
        let deps = dependencies
            .into_iter()
            .map(|(s, t, k)| Ok(Dependency::new(s, t, k.parse::<DependencyKind>().map_err(value_error)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyGraph { inner: ClassGraph::build(classes, &deps).map_err(value_error)? })
    }

    /// Parses edge-list text.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: ingest::parse_edge_list(text).map_err(value_error)? })
    }

    /// Extracts the network of `(name, text)` class-header sources.
    #[staticmethod]
    #[pyo3(signature = (sources, keep_external=false, type_args=false, constructors=true))]
    fn extract(sources: Vec<(String, String)>, keep_external: bool, type_args: bool, constructors: bool) -> PyResult<Self> {
        let options =
            ResolveOptions { keep_external, include_type_arguments: type_args, include_constructors: constructors };
        let extraction = ingest::extract_graph(&sources, &options).map_err(value_error)?;
        Ok(PyGraph { inner: extraction.graph })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn classes(&self) -> Vec<String> {
        self.inner.fqns().to_vec()
    }

    fn degree(&self, fqn: &str) -> PyResult<usize> {
        let id = self.inner.id_of(fqn).ok_or_else(|| value_error(format!("unknown class `{fqn}`")))?;
        Ok(self.inner.degree(id))
    }

    fn edges(&self) -> Vec<(String, String, String)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (self.inner.fqn(e.source).to_owned(), self.inner.fqn(e.target).to_owned(), e.kind.to_string()))
            .collect()
    }

    fn to_edge_list(&self) -> String {
        ingest::write_edge_list(&self.inner, IsolatedPolicy::Keep)
    }

    #[pyo3(signature = (depth=None))]
    fn packages(&self, depth: Option<usize>) -> HashMap<String, String> {
        self.labels(&ingest::package_partition(&self.inner, depth))
    }

    fn components(&self) -> HashMap<String, String> {
        self.labels(&self.inner.connected_components())
    }

    fn modularity(&self, partition: HashMap<String, String>) -> PyResult<f64> {
        metrics::modularity(&self.inner, &self.partition(&partition)?).map_err(value_error)
    }

    fn split_disconnected(&self, partition: HashMap<String, String>) -> PyResult<HashMap<String, String>> {
        let split = metrics::split_disconnected(&self.inner, &self.partition(&partition)?).map_err(value_error)?;
        Ok(self.labels(&split))
    }

    /// One run of `eb`, `mo` or `lp`.
    #[pyo3(signature = (algorithm="mo", seed=42))]
    fn detect(&self, py: Python<'_>, algorithm: &str, seed: u64) -> PyResult<HashMap<String, String>> {
        let algorithm: Algorithm = algorithm.parse().map_err(value_error)?;
        let partition = py.detach(|| detect::detect(&self.inner, algorithm, Seed(seed))).map_err(value_error)?;
        Ok(self.labels(&partition))
    }

    /// Seeded runs against the package partition. Returns the statistics as
    /// a JSON string and the best partition.
    #[pyo3(signature = (algorithm="mo", runs=None, seed=42, package_depth=None))]
    fn batch(
        &self,
        py: Python<'_>,
        algorithm: &str,
        runs: Option<usize>,
        seed: u64,
        package_depth: Option<usize>,
    ) -> PyResult<(String, HashMap<String, String>)> {
        let algorithm: Algorithm = algorithm.parse().map_err(value_error)?;
        let packages = ingest::package_partition(&self.inner, package_depth);
        let runs = runs.unwrap_or(algorithm.default_runs());
        let batch =
            py.detach(|| run_batch(&self.inner, algorithm, runs, Seed(seed), &packages)).map_err(value_error)?;
        let stats = serde_json::to_string(&batch.stats).map_err(value_error)?;
        Ok((stats, self.labels(&batch.best)))
    }

    /// Label propagation started from `partition`; returns the refined
    /// partition with Q before and after.
    #[pyo3(signature = (partition, seed=42))]
    fn refine(&self, partition: HashMap<String, String>, seed: u64) -> PyResult<(HashMap<String, String>, f64, f64)> {
        let initial = self.partition(&partition)?;
        let r = detect::refine_packages(&self.inner, &initial, Seed(seed)).map_err(value_error)?;
        Ok((self.labels(&r.partition), r.q_initial, r.q_refined))
    }

    /// Community network of `partition` exported as `dot`, `graphml` or `json`.
    #[pyo3(signature = (partition, format="json", components=None, package_depth=None))]
    fn abstract_network(
        &self,
        partition: HashMap<String, String>,
        format: &str,
        components: Option<usize>,
        package_depth: Option<usize>,
    ) -> PyResult<String> {
        let format: ExportFormat = format.parse().map_err(value_error)?;
        let packages = ingest::package_partition(&self.inner, package_depth);
        let mut cg = community_network(&self.inner, &self.partition(&partition)?, &packages).map_err(value_error)?;
        if let Some(k) = components {
            if k == 0 {
                return Err(value_error("components must be at least 1"));
            }
            cg = cg.largest_components(k);
        }
        Ok(cg.export(format))
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Normalized mutual information of two equally long label sequences.
#[pyfunction]
fn nmi(a: Vec<String>, b: Vec<String>) -> PyResult<f64> {
    metrics::nmi(&Partition::from_labels(&a), &Partition::from_labels(&b)).map_err(value_error)
}

/// Discrete maximum-likelihood power-law exponent of `sizes >= xmin`.
#[pyfunction]
#[pyo3(signature = (sizes, xmin=1))]
fn fit_power_law(sizes: Vec<usize>, xmin: usize) -> Option<f64> {
    metrics::fit_power_law_discrete(&sizes, xmin)
}

/// Continuous approximation of the power-law exponent.
#[pyfunction]
#[pyo3(signature = (sizes, xmin=1))]
fn fit_power_law_continuous(sizes: Vec<usize>, xmin: usize) -> Option<f64> {
    metrics::fit_power_law(&sizes, xmin)
}

#[pymodule]
#[pyo3(name = "depnet")]
fn depnet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law_continuous, m)?)?;
    Ok(())
}
