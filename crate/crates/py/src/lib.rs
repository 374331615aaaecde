//! Python bindings. Vertices are 0-based ints, edges are `(u, v)` tuples with `u < v`.

use fillin_core::audit::parse_rational;
use fillin_core::matrix::{self, SparsePattern};
use fillin_core::reduction::{self, ReductionError};
use fillin_core::solvers::{self, GreedyStrategy, SolverError, SolverLimits, VertexCover};
use fillin_core::transfer::{self, ExactSplitProcedure, GreedyProcedure, TransferConfig, TransferMode};
use fillin_core::{dimacs, EliminationOrdering, FillIn};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

type Edges = Vec<(usize, usize)>;

fn invalid(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn solver_err(e: SolverError) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn reduction_err(e: ReductionError) -> PyErr {
    match e {
        ReductionError::Solver(_) | ReductionError::TooLarge { .. } | ReductionError::Falsified(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => invalid(other),
    }
}

fn edges_of(set: &FillIn) -> Edges {
    set.iter().collect()
}

fn fill_from(pairs: Edges) -> PyResult<FillIn> {
    FillIn::from_pairs(pairs).map_err(invalid)
}

fn ordering_from(order: Vec<usize>, n: usize) -> PyResult<EliminationOrdering> {
    EliminationOrdering::new(order, n).map_err(invalid)
}

fn json_value<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn strategy(name: &str) -> PyResult<GreedyStrategy> {
    name.parse().map_err(PyValueError::new_err)
}

#[pyclass(name = "Graph", module = "fillin_lab", frozen)]
pub struct PyGraph {
    inner: fillin_core::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Edges) -> PyResult<Self> {
        let inner = fillin_core::Graph::new(n, edges).map_err(invalid)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        let inner = dimacs::parse_graph(text).map_err(invalid)?;
        Ok(PyGraph { inner })
    }

    fn to_dimacs(&self) -> String {
        dimacs::write_graph(&self.inner, &[])
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Edges {
        self.inner.edges().collect()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.inner.has_edge(u, v)
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.n() {
            return Err(invalid(format!("vertex {v} out of range")));
        }
        Ok(self.inner.degree(v))
    }

    fn add_edges(&self, fill: Edges) -> PyResult<Self> {
        let inner = self.inner.add_edges(&fill_from(fill)?).map_err(invalid)?;
        Ok(PyGraph { inner })
    }

    fn __len__(&self) -> usize {
        self.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.n(), self.m())
    }
}

#[pyclass(name = "ReducedInstance", module = "fillin_lab", frozen)]
pub struct PyReducedInstance {
    inner: reduction::ReducedInstance,
}

#[pymethods]
impl PyReducedInstance {
    #[getter]
    fn host(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.host.clone(),
        }
    }

    #[getter]
    fn source(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.source().clone(),
        }
    }

    #[getter]
    fn kind(&self) -> &'static str {
        if self.inner.is_primitive() {
            "primitive"
        } else {
            "colored"
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn block_count(&self) -> usize {
        self.inner.block_count()
    }

    /// Vertices per block: `n^2` for the primitive gadget, `b*n` for the colored one.
    #[getter]
    fn block_deficit(&self) -> usize {
        self.inner.block_deficit()
    }

    fn block(&self, i: usize) -> PyResult<Vec<usize>> {
        if i >= self.inner.block_count() {
            return Err(invalid(format!("block {i} out of range")));
        }
        Ok(self.inner.block(i).collect())
    }

    fn missed_block(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.n() {
            return Err(invalid(format!("vertex {v} out of range")));
        }
        Ok(self.inner.missed_block(v))
    }

    fn coloring(&self) -> Option<Vec<usize>> {
        self.inner.coloring().map(|c| c.colors.clone())
    }

    fn sidecar<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_value(py, &self.inner.sidecar())
    }

    fn check_invariants(&self) -> PyResult<()> {
        self.inner.check_invariants().map_err(reduction_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "ReducedInstance(kind={}, n={}, host_vertices={})",
            self.kind(),
            self.n(),
            self.inner.host.vertex_count()
        )
    }
}

#[pyfunction]
fn is_chordal(g: &PyGraph) -> bool {
    fillin_core::is_chordal(&g.inner)
}

/// A hole of the graph, or None when it is chordal.
#[pyfunction]
fn find_hole(g: &PyGraph) -> Option<Vec<usize>> {
    match fillin_core::chordality(&g.inner) {
        fillin_core::ChordalityCertificate::Hole { cycle } => Some(cycle),
        _ => None,
    }
}

#[pyfunction]
fn mcs_ordering(g: &PyGraph) -> Vec<usize> {
    fillin_core::mcs_ordering(&g.inner).into_vec()
}

#[pyfunction]
fn elimination_fill(g: &PyGraph, ordering: Vec<usize>) -> PyResult<Edges> {
    let order = ordering_from(ordering, g.inner.vertex_count())?;
    Ok(edges_of(
        &fillin_core::elimination_fill(&g.inner, &order).map_err(invalid)?,
    ))
}

/// `(valid, message)`.
#[pyfunction]
fn verify_fillin(g: &PyGraph, fill: Edges) -> PyResult<(bool, String)> {
    let verdict = fillin_core::verify_fillin(&g.inner, &fill_from(fill)?);
    Ok((verdict.is_valid(), verdict.to_string()))
}

#[pyfunction]
#[pyo3(signature = (g, budget = None))]
fn exact_vertex_cover(g: &PyGraph, budget: Option<u64>) -> PyResult<Vec<usize>> {
    let mut limits = SolverLimits::default();
    if let Some(b) = budget {
        limits.node_budget = b;
    }
    let (cover, _) = solvers::exact_vertex_cover(&g.inner, &limits).map_err(solver_err)?;
    Ok(cover.into_vec())
}

/// Minimum fill-in and an ordering achieving it, for graphs within the oracle limit.
#[pyfunction]
#[pyo3(signature = (g, limit = solvers::ORACLE_LIMIT))]
fn exact_fillin(g: &PyGraph, limit: usize) -> PyResult<(Edges, Vec<usize>)> {
    let sol = solvers::exact_fillin_ordering_oracle_with_limit(&g.inner, limit).map_err(solver_err)?;
    Ok((edges_of(&sol.fill), sol.ordering.into_vec()))
}

/// A minimum fill-in when one of size at most `k` exists, else None.
#[pyfunction]
fn exact_fillin_branch(g: &PyGraph, k: usize) -> PyResult<Option<Edges>> {
    let (outcome, _) = solvers::exact_fillin_branch(&g.inner, k, &SolverLimits::default()).map_err(solver_err)?;
    Ok(outcome.fill().map(edges_of))
}

#[pyfunction]
#[pyo3(signature = (g, strategy = "min-fill"))]
fn greedy_fillin(g: &PyGraph, strategy: &str) -> PyResult<(Edges, Vec<usize>)> {
    let sol = solvers::greedy_minfill_heuristic(&g.inner, self::strategy(strategy)?);
    Ok((edges_of(&sol.fill), sol.ordering.into_vec()))
}

#[pyfunction]
fn reduce_primitive(g: &PyGraph) -> PyResult<PyReducedInstance> {
    let inner = reduction::reduce_primitive(&g.inner).map_err(reduction_err)?;
    Ok(PyReducedInstance { inner })
}

/// Colored gadget over a Brooks coloring with `d` colors (`d` defaults to max(3, max degree)).
#[pyfunction]
#[pyo3(signature = (g, b = 1, d = None))]
fn reduce_colored(g: &PyGraph, b: usize, d: Option<usize>) -> PyResult<PyReducedInstance> {
    let d = d.unwrap_or(g.inner.max_degree().max(3));
    let coloring = reduction::brooks_coloring(&g.inner, d).map_err(reduction_err)?;
    let inner = reduction::reduce_colored(&g.inner, b, &coloring).map_err(reduction_err)?;
    Ok(PyReducedInstance { inner })
}

#[pyfunction]
fn brooks_coloring(g: &PyGraph, d: usize) -> PyResult<Vec<usize>> {
    Ok(reduction::brooks_coloring(&g.inner, d).map_err(reduction_err)?.colors)
}

#[pyfunction]
fn full_vertices(inst: &PyReducedInstance, fill: Edges) -> PyResult<Vec<usize>> {
    let cover = reduction::full_vertices(&inst.inner, &fill_from(fill)?).map_err(reduction_err)?;
    Ok(cover.into_vec())
}

#[pyfunction]
fn split_completion(inst: &PyReducedInstance, cover: Vec<usize>) -> PyResult<Edges> {
    let fill = reduction::split_completion(&inst.inner, &VertexCover::new(cover)).map_err(reduction_err)?;
    Ok(edges_of(&fill))
}

/// Sandwich-bound checks on a reduced instance, as a dict.
#[pyfunction]
fn verify_sandwich<'py>(py: Python<'py>, inst: &PyReducedInstance) -> PyResult<Bound<'py, PyAny>> {
    let report = reduction::verify_sandwich(&inst.inner, &Default::default()).map_err(reduction_err)?;
    json_value(py, &report)
}

/// Cover of `g` recovered through the colored gadget; returns `(cover, report dict)`.
#[pyfunction]
#[pyo3(signature = (g, epsilon, d = 3, mode = "fill-in", procedure = "exact"))]
fn vc_via_transfer<'py>(
    py: Python<'py>,
    g: &PyGraph,
    epsilon: &str,
    d: usize,
    mode: &str,
    procedure: &str,
) -> PyResult<(Vec<usize>, Bound<'py, PyAny>)> {
    let eps = parse_rational(epsilon).ok_or_else(|| invalid(format!("cannot read epsilon `{epsilon}`")))?;
    let mode = match mode {
        "fill-in" => TransferMode::FillIn,
        "completion" => TransferMode::Completion,
        other => return Err(invalid(format!("unknown mode `{other}`"))),
    };
    let config = TransferConfig::new(eps, d, mode).map_err(invalid)?;
    let out = match (procedure, mode) {
        ("exact", TransferMode::FillIn) => transfer::vc_via_fillin(&g.inner, &ExactSplitProcedure::default(), &config),
        ("exact", TransferMode::Completion) => {
            transfer::vc_via_completion(&g.inner, &ExactSplitProcedure::default(), &config)
        }
        (name, TransferMode::FillIn) => transfer::vc_via_fillin(&g.inner, &GreedyProcedure(strategy(name)?), &config),
        (name, TransferMode::Completion) => {
            transfer::vc_via_completion(&g.inner, &GreedyProcedure(strategy(name)?), &config)
        }
    }
    .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((out.cover.into_vec(), json_value(py, &out.report)?))
}

/// Symbolic factorization of the symmetric pattern with the given off-diagonal positions.
/// Returns `(fill, nonzeros)`.
#[pyfunction]
fn symbolic_factor(n: usize, positions: Edges, ordering: Vec<usize>) -> PyResult<(Edges, usize)> {
    let pattern = SparsePattern::new(n, positions).map_err(invalid)?;
    let order = ordering_from(ordering, n)?;
    let factor = matrix::symbolic_factor(&pattern, &order).map_err(invalid)?;
    Ok((edges_of(&factor.fill), factor.nonzeros))
}

#[pymodule]
fn fillin_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyReducedInstance>()?;
    m.add_function(wrap_pyfunction!(is_chordal, m)?)?;
    m.add_function(wrap_pyfunction!(find_hole, m)?)?;
    m.add_function(wrap_pyfunction!(mcs_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(elimination_fill, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fillin, m)?)?;
    m.add_function(wrap_pyfunction!(exact_vertex_cover, m)?)?;
    m.add_function(wrap_pyfunction!(exact_fillin, m)?)?;
    m.add_function(wrap_pyfunction!(exact_fillin_branch, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_fillin, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_primitive, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_colored, m)?)?;
    m.add_function(wrap_pyfunction!(brooks_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(full_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(split_completion, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(vc_via_transfer, m)?)?;
    m.add_function(wrap_pyfunction!(symbolic_factor, m)?)?;
    Ok(())
}
