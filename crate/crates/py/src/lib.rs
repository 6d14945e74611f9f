//! Python bindings: `import affinet`.
//!
//! Partitions cross the boundary as lists of community ids indexed like
//! `Graph.labels`.

use std::path::PathBuf;

use affinet_core::affinity::{self, DegreeMode, Provenance, Symmetrization};
use affinet_core::community::{self, Algorithm, DetectConfig, LouvainConfig, Partition, PathMetric};
use affinet_core::experiments::{self, ExperimentError, ReportFormat, SweepConfig};
use affinet_core::graph::{GraphBuilder, GraphError, WeightedGraph};
use affinet_core::{io, metrics};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn invalid(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn graph_err(e: GraphError) -> PyErr {
    match e {
        GraphError::Io(_) => PyOSError::new_err(e.to_string()),
        _ => invalid(e),
    }
}

fn community_err(e: community::CommunityError) -> PyErr {
    match e {
        community::CommunityError::NoEdges => PyRuntimeError::new_err(e.to_string()),
        _ => invalid(e),
    }
}

fn experiment_err(e: ExperimentError) -> PyErr {
    match e.root() {
        ExperimentError::MissingData { .. } | ExperimentError::MissingLabels { .. } | ExperimentError::Io(_) => {
            PyOSError::new_err(e.to_string())
        }
        _ => invalid(e),
    }
}

fn parse<T: std::str::FromStr>(value: &str) -> PyResult<T>
where
    T::Err: ToString,
{
    value.parse().map_err(invalid)
}

/// Undirected weighted graph with string node labels.
#[pyclass(name = "Graph", module = "affinet", frozen)]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    /// `Graph(edges=[("a", "b", 1.0), ...], nodes=["c"])`. Duplicate edges
    /// are summed; self-loops are dropped.
    #[new]
    #[pyo3(signature = (edges = Vec::new(), nodes = Vec::new()))]
    fn new(edges: Vec<(String, String, f64)>, nodes: Vec<String>) -> PyResult<Self> {
        let mut b = GraphBuilder::new();
        for n in &nodes {
            b.add_node(n);
        }
        for (u, v, w) in &edges {
            b.add_labeled_edge(u, v, *w).map_err(graph_err)?;
        }
        Ok(Self { inner: b.build() })
    }

    #[staticmethod]
    fn from_edgelist(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_edgelist(text).map_err(graph_err)?,
        })
    }

    /// Parses GML text; returns the graph and the node `value` labels, if any.
    #[staticmethod]
    fn from_gml(text: &str) -> PyResult<(Self, Option<Vec<usize>>)> {
        let (g, labels) = io::parse_gml(text).map_err(graph_err)?;
        Ok((Self { inner: g }, labels.map(|l| l.classes().to_vec())))
    }

    /// Loads a `.gml` or edge-list file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: io::load_graph_file(&path).map_err(graph_err)?.0,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn edges(&self) -> Vec<(String, String, f64)> {
        self.inner
            .edges()
            .map(|(u, v, w)| (self.inner.label(u).to_owned(), self.inner.label(v).to_owned(), w))
            .collect()
    }

    fn weight(&self, a: &str, b: &str) -> PyResult<f64> {
        let u = self.inner.require(a).map_err(graph_err)?;
        let v = self.inner.require(b).map_err(graph_err)?;
        Ok(self.inner.weight(u, v))
    }

    fn degree(&self, node: &str) -> PyResult<usize> {
        let v = self.inner.require(node).map_err(graph_err)?;
        self.inner.degree(v).map_err(graph_err)
    }

    fn strength(&self, node: &str) -> PyResult<f64> {
        let v = self.inner.require(node).map_err(graph_err)?;
        self.inner.strength(v).map_err(graph_err)
    }

    fn density(&self) -> PyResult<f64> {
        self.inner.density().map_err(graph_err)
    }

    fn binarized(&self) -> Self {
        Self {
            inner: self.inner.binarized(),
        }
    }

    fn to_edgelist(&self) -> PyResult<String> {
        io::edgelist_string(&self.inner).map_err(graph_err)
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Dense affinity matrix indexed like the source graph's nodes.
#[pyclass(name = "AffinityMatrix", module = "affinet", frozen)]
struct PyAffinity {
    inner: affinity::AffinityMatrix,
}

#[pymethods]
impl PyAffinity {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn provenance(&self) -> String {
        self.inner.provenance().to_string()
    }

    fn get(&self, x: usize, y: usize) -> PyResult<f64> {
        if x >= self.inner.n() || y >= self.inner.n() {
            return Err(pyo3::exceptions::PyIndexError::new_err("node index out of range"));
        }
        Ok(self.inner.get(x, y))
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        (0..self.inner.n()).map(|x| self.inner.row(x).to_vec()).collect()
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn density(&self) -> f64 {
        self.inner.density()
    }

    /// Edges for every pair above `threshold`; the matrix must be symmetric.
    #[pyo3(signature = (graph, threshold = 0.0))]
    fn to_graph(&self, graph: &PyGraph, threshold: f64) -> PyResult<PyGraph> {
        Ok(PyGraph {
            inner: affinity::affinity_to_graph(&self.inner, &graph.inner, threshold).map_err(invalid)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("AffinityMatrix(n={}, provenance={:?})", self.inner.n(), self.provenance())
    }
}

fn wrap(inner: affinity::AffinityMatrix) -> PyAffinity {
    PyAffinity { inner }
}

#[pyfunction]
fn best_friend(g: &PyGraph) -> PyAffinity {
    wrap(affinity::best_friend(&g.inner))
}

#[pyfunction]
fn best_common_friend(g: &PyGraph) -> PyAffinity {
    wrap(affinity::best_common_friend(&g.inner))
}

#[pyfunction]
#[pyo3(signature = (g, degree = "degree"))]
fn machiavelli(g: &PyGraph, degree: &str) -> PyResult<PyAffinity> {
    Ok(wrap(affinity::machiavelli(&g.inner, parse::<DegreeMode>(degree)?)))
}

/// `alpha * f1 + beta * f2` with `0 < alpha + beta <= 1`.
#[pyfunction]
fn combine(f1: &PyAffinity, f2: &PyAffinity, alpha: f64, beta: f64) -> PyResult<PyAffinity> {
    let params = affinity::CombinationParams::new(alpha, beta).map_err(invalid)?;
    Ok(wrap(affinity::combine(&f1.inner, &f2.inner, params).map_err(invalid)?))
}

#[pyfunction]
#[pyo3(signature = (f, strategy = "mean"))]
fn symmetrize(f: &PyAffinity, strategy: &str) -> PyResult<PyAffinity> {
    Ok(wrap(affinity::symmetrize(&f.inner, parse::<Symmetrization>(strategy)?)))
}

/// Evaluates a spec such as `combine(bf,bcf,alpha=0.25,beta=0.50,sym=mean)`.
#[pyfunction]
#[pyo3(signature = (g, spec, degree = "degree"))]
fn build_affinity(g: &PyGraph, spec: &str, degree: &str) -> PyResult<PyAffinity> {
    let p: Provenance = parse(spec)?;
    Ok(wrap(affinity::build(&g.inner, &p, parse(degree)?).map_err(invalid)?))
}

#[pyfunction]
#[pyo3(signature = (g, seed = 42, min_modularity_gain = 1e-7))]
fn louvain(py: Python<'_>, g: &PyGraph, seed: u64, min_modularity_gain: f64) -> PyResult<Vec<usize>> {
    let cfg = LouvainConfig::new(min_modularity_gain, seed, LouvainConfig::default().max_passes).map_err(invalid)?;
    let p = py.detach(|| community::louvain(&g.inner, &cfg)).map_err(community_err)?;
    Ok(p.assignment().to_vec())
}

/// Every recorded split as `(assignment, modularity)`, coarsest first.
#[pyfunction]
#[pyo3(signature = (g, path_metric = "inverse-weight"))]
fn girvan_newman(py: Python<'_>, g: &PyGraph, path_metric: &str) -> PyResult<Vec<(Vec<usize>, f64)>> {
    let metric: PathMetric = parse(path_metric)?;
    let d = py.detach(|| community::girvan_newman(&g.inner, metric)).map_err(community_err)?;
    Ok(d.snapshots()
        .iter()
        .map(|s| (s.partition.assignment().to_vec(), s.modularity))
        .collect())
}

#[pyfunction]
fn greedy_modularity(py: Python<'_>, g: &PyGraph) -> PyResult<Vec<usize>> {
    let p = py.detach(|| community::greedy_modularity(&g.inner)).map_err(community_err)?;
    Ok(p.assignment().to_vec())
}

/// Runs `algorithm` (louvain, girvan_newman, greedy) and returns its partition.
#[pyfunction]
#[pyo3(signature = (g, algorithm, seed = 42, path_metric = "inverse-weight"))]
fn detect(py: Python<'_>, g: &PyGraph, algorithm: &str, seed: u64, path_metric: &str) -> PyResult<Vec<usize>> {
    let algorithm: Algorithm = parse(algorithm)?;
    let cfg = DetectConfig {
        louvain: LouvainConfig::with_seed(seed),
        path_metric: parse(path_metric)?,
    };
    let p = py.detach(|| community::detect(&g.inner, algorithm, &cfg)).map_err(community_err)?;
    Ok(p.assignment().to_vec())
}

#[pyfunction]
fn modularity(g: &PyGraph, assignment: Vec<usize>) -> PyResult<f64> {
    metrics::modularity(&g.inner, &Partition::from_assignment(&assignment)).map_err(invalid)
}

#[pyfunction]
fn nmi(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    metrics::nmi(&Partition::from_assignment(&a), &Partition::from_assignment(&b)).map_err(invalid)
}

/// Loads a benchmark dataset; returns the graph and its ground-truth classes.
#[pyfunction]
#[pyo3(signature = (name, data_dir = None))]
fn dataset(name: &str, data_dir: Option<PathBuf>) -> PyResult<(PyGraph, Vec<usize>)> {
    let d = match data_dir {
        Some(dir) => experiments::builtin_dataset_in(name, &dir),
        None => experiments::builtin_dataset(name),
    }
    .map_err(experiment_err)?;
    Ok((PyGraph { inner: d.graph }, d.labels.classes().to_vec()))
}

/// Runs an (alpha, beta) sweep and returns the CSV report.
#[pyfunction]
#[pyo3(signature = (
    datasets = vec!["zachary".to_owned()],
    algorithms = vec!["louvain".to_owned(), "girvan_newman".to_owned(), "greedy".to_owned()],
    step = 0.05,
    sym = "mean",
    seed = 42,
    jobs = None,
    baseline = false,
    data_dir = None,
))]
#[allow(clippy::too_many_arguments)]
fn sweep(
    py: Python<'_>,
    datasets: Vec<String>,
    algorithms: Vec<String>,
    step: f64,
    sym: &str,
    seed: u64,
    jobs: Option<usize>,
    baseline: bool,
    data_dir: Option<PathBuf>,
) -> PyResult<String> {
    let cfg = SweepConfig {
        datasets,
        algorithms: algorithms.iter().map(|a| parse(a)).collect::<PyResult<_>>()?,
        step,
        sym: parse(sym)?,
        seed,
        jobs,
        data_dir,
        ..SweepConfig::default()
    };
    let out = py.detach(|| -> Result<Vec<u8>, ExperimentError> {
        cfg.validate()?;
        let bundles = experiments::load_datasets(&cfg)?;
        let mut base = Vec::new();
        if baseline {
            for d in &bundles {
                base.extend(experiments::run_baseline(d, &cfg.algorithms, &cfg.detect_config(), false)?);
            }
        }
        let records = experiments::run_sweep_on(&bundles, &cfg)?;
        let mut buf = Vec::new();
        experiments::write_report(&records, &base, ReportFormat::Csv, &mut buf)?;
        Ok(buf)
    });
    String::from_utf8(out.map_err(experiment_err)?).map_err(invalid)
}

#[pymodule]
fn affinet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyAffinity>()?;
    m.add_function(wrap_pyfunction!(best_friend, m)?)?;
    m.add_function(wrap_pyfunction!(best_common_friend, m)?)?;
    m.add_function(wrap_pyfunction!(machiavelli, m)?)?;
    m.add_function(wrap_pyfunction!(combine, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(build_affinity, m)?)?;
    m.add_function(wrap_pyfunction!(louvain, m)?)?;
    m.add_function(wrap_pyfunction!(girvan_newman, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_modularity, m)?)?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(dataset, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add("DATASETS", experiments::DATASET_NAMES.to_vec())?;
    Ok(())
}
