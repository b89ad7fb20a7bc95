//! Python bindings: states, metrics, skew information, bounds, example sweeps and the fuzzer.
//!
//! Matrices cross the boundary as nested lists (or anything sequence-like, such
//! as numpy arrays) of complex numbers.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use skewinfo::bounds::{self, BoundReport, ChannelBoundOptions, RenAggregation, DEFAULT_PERM_LIMIT};
use skewinfo::fuzz::{self, FuzzSpec};
use skewinfo::scenarios::{self, MetricSpec, Scenario, SweepRow, SweepSpec};
use skewinfo::skew;
use skewinfo::{
    bloch_state, equatorial_state, ComplexMatrix, Error, KrausChannel, MCFunction, Observable, QuantumState,
    UnitaryOperator, C64,
};

create_exception!(pyskewinfo, SkewInfoError, PyValueError, "Invalid input or failed numerical check.");

type Rows = Vec<Vec<C64>>;

fn err(e: Error) -> PyErr {
    SkewInfoError::new_err(e.to_string())
}

fn matrix(rows: &Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(err)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m.get(r, c)).collect()).collect()
}

fn observables(ops: &[Rows]) -> PyResult<Vec<Observable>> {
    ops.iter().map(|o| Observable::new(matrix(o)?).map_err(err)).collect()
}

fn channel(kraus: &[Rows]) -> PyResult<KrausChannel> {
    let ks = kraus.iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
    KrausChannel::new(ks).map_err(err)
}

fn unitary(u: &Rows) -> PyResult<UnitaryOperator> {
    UnitaryOperator::new(matrix(u)?).map_err(err)
}

/// A validated density matrix.
#[pyclass(name = "QuantumState", module = "pyskewinfo", frozen)]
struct PyState(QuantumState);

#[pymethods]
impl PyState {
    #[new]
    fn new(rho: Rows) -> PyResult<Self> {
        Ok(Self(QuantumState::new(matrix(&rho)?).map_err(err)?))
    }

    /// ½(I + r·σ) for a Bloch vector with |r| ≤ 1.
    #[staticmethod]
    fn bloch(r: [f64; 3]) -> PyResult<Self> {
        Ok(Self(bloch_state(r).map_err(err)?))
    }

    /// Qubit state with Bloch vector radius·(cos θ, sin θ, 0).
    #[staticmethod]
    fn equatorial(radius: f64, theta: f64) -> PyResult<Self> {
        Ok(Self(equatorial_state(radius, theta).map_err(err)?))
    }

    #[staticmethod]
    fn pure(psi: Vec<C64>) -> PyResult<Self> {
        Ok(Self(QuantumState::pure(&psi).map_err(err)?))
    }

    #[staticmethod]
    fn maximally_mixed(d: usize) -> Self {
        Self(QuantumState::maximally_mixed(d))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Eigenvalues in descending order.
    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    fn matrix(&self) -> Rows {
        to_rows(self.0.matrix())
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    fn __repr__(&self) -> String {
        format!("QuantumState(dim={}, eigenvalues={:?})", self.0.dim(), self.0.eigenvalues())
    }
}

/// A Morozova-Chentsov function: WYD(α), Fisher, or a user-supplied f.
#[pyclass(name = "Metric", module = "pyskewinfo", frozen)]
struct PyMetric(MCFunction);

#[pymethods]
impl PyMetric {
    #[staticmethod]
    fn wyd(alpha: f64) -> PyResult<Self> {
        Ok(Self(MCFunction::wyd(alpha).map_err(err)?))
    }

    #[staticmethod]
    fn wigner_yanase() -> Self {
        Self(MCFunction::wigner_yanase())
    }

    #[staticmethod]
    fn fisher() -> Self {
        Self(MCFunction::fisher())
    }

    /// Builds c from f with f(0+) = m. `f` must map float to float; it is
    /// checked numerically for f(t) = t·f(1/t), positivity and the limit.
    #[staticmethod]
    fn custom(name: String, f: Py<PyAny>, m: f64) -> PyResult<Self> {
        let call = move |t: f64| {
            Python::attach(|py| f.call1(py, (t,)).and_then(|v| v.bind(py).extract::<f64>()).unwrap_or(f64::NAN))
        };
        Ok(Self(MCFunction::custom(name, call, m).map_err(err)?))
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label()
    }

    #[getter]
    fn m_c(&self) -> f64 {
        self.0.m_c()
    }

    #[getter]
    fn alpha(&self) -> Option<f64> {
        self.0.alpha()
    }

    fn __repr__(&self) -> String {
        format!("Metric({})", self.0.label())
    }
}

/// Skew information of a general square operator.
#[pyfunction]
fn skew_operator(state: &PyState, x: Rows, metric: &PyMetric) -> PyResult<f64> {
    Ok(skew::skew_operator(&state.0, &matrix(&x)?, &metric.0).map_err(err)?.value())
}

/// Skew information of a Hermitian observable.
#[pyfunction]
fn skew_observable(state: &PyState, a: Rows, metric: &PyMetric) -> PyResult<f64> {
    let a = Observable::new(matrix(&a)?).map_err(err)?;
    Ok(skew::skew_observable(&state.0, &a, &metric.0).map_err(err)?.value())
}

/// Σ_i I(K_i) for a channel given by its Kraus operators.
#[pyfunction]
fn skew_channel(state: &PyState, kraus: Vec<Rows>, metric: &PyMetric) -> PyResult<f64> {
    Ok(skew::skew_channel(&state.0, &channel(&kraus)?, &metric.0).map_err(err)?.value())
}

#[pyfunction]
fn skew_unitary(state: &PyState, u: Rows, metric: &PyMetric) -> PyResult<f64> {
    Ok(skew::skew_unitary(&state.0, &unitary(&u)?, &metric.0).map_err(err)?.value())
}

/// −½Tr([ρ^α, X†][ρ^{1−α}, X]) evaluated directly.
#[pyfunction]
fn wyd_direct(state: &PyState, x: Rows, alpha: f64) -> PyResult<f64> {
    Ok(skew::wyd_direct(&state.0, &matrix(&x)?, alpha).map_err(err)?.value())
}

#[pyfunction]
fn variance(state: &PyState, a: Rows) -> PyResult<f64> {
    let a = Observable::new(matrix(&a)?).map_err(err)?;
    skew::variance(&state.0, &a).map_err(err)
}

/// Symmetric logarithmic derivative L with i[ρ, A] = ½(Lρ + ρL), zero off the support.
#[pyfunction]
fn sld(state: &PyState, a: Rows) -> PyResult<Rows> {
    let a = Observable::new(matrix(&a)?).map_err(err)?;
    Ok(to_rows(&skew::sld(&state.0, &a).map_err(err)?))
}

fn report_dict<'py>(py: Python<'py>, r: &BoundReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    let values = PyDict::new(py);
    let witnesses = PyDict::new(py);
    for (name, entry) in &r.bounds {
        values.set_item(name.label(), entry.value)?;
        if let Some(w) = &entry.witness {
            witnesses.set_item(name.label(), w.to_string())?;
        }
    }
    out.set_item("lhs_sum", r.lhs_sum)?;
    out.set_item("bounds", values)?;
    out.set_item("witnesses", witnesses)?;
    Ok(out)
}

/// THM1 and REN_OBS for a list of observables.
#[pyfunction]
fn observable_bounds<'py>(
    py: Python<'py>,
    state: &PyState,
    obs: Vec<Rows>,
    metric: &PyMetric,
) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::observable_bounds(&state.0, &observables(&obs)?, &metric.0).map_err(err)?;
    report_dict(py, &r)
}

/// VAR_THM1 and VAR_REN; `lhs_sum` is the sum of variances.
#[pyfunction]
fn variance_bounds<'py>(py: Python<'py>, state: &PyState, obs: Vec<Rows>) -> PyResult<Bound<'py, PyDict>> {
    let r = bounds::variance_bounds(&state.0, &observables(&obs)?).map_err(err)?;
    report_dict(py, &r)
}

/// LB1-LB3, REN_CH_1 and REN_CH_2, maximized over Kraus permutation assignments.
#[pyfunction]
#[pyo3(signature = (state, channels, metric, perm_limit = DEFAULT_PERM_LIMIT as u64, ren = "per_index"))]
fn channel_bounds<'py>(
    py: Python<'py>,
    state: &PyState,
    channels: Vec<Vec<Rows>>,
    metric: &PyMetric,
    perm_limit: u64,
    ren: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let ren_aggregation = match ren {
        "per_index" => RenAggregation::PerIndex,
        "pooled" => RenAggregation::Pooled,
        other => return Err(SkewInfoError::new_err(format!("ren must be per_index or pooled, got {other}"))),
    };
    let chans = channels.iter().map(|k| channel(k)).collect::<PyResult<Vec<_>>>()?;
    let opts = ChannelBoundOptions { perm_limit: perm_limit as u128, ren_aggregation };
    let r = bounds::channel_bounds(&state.0, &chans, &metric.0, &opts).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
fn unitary_bounds<'py>(
    py: Python<'py>,
    state: &PyState,
    unitaries: Vec<Rows>,
    metric: &PyMetric,
) -> PyResult<Bound<'py, PyDict>> {
    let us = unitaries.iter().map(unitary).collect::<PyResult<Vec<_>>>()?;
    let r = bounds::unitary_bounds(&state.0, &us, &metric.0).map_err(err)?;
    report_dict(py, &r)
}

fn row_dict<'py>(py: Python<'py>, row: &SweepRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("theta", row.theta)?;
    if let Some(q) = row.q {
        d.set_item("q", q)?;
    }
    d.set_item("sum", row.sum)?;
    if let Some(v) = row.var_sum {
        d.set_item("var_sum", v)?;
    }
    for (name, v) in &row.bounds {
        d.set_item(name.column(), v)?;
    }
    if let Some(m) = row.max {
        d.set_item("max", m)?;
    }
    for (name, w) in &row.witnesses {
        d.set_item(format!("{}_witness", name.column()), w)?;
    }
    Ok(d)
}

fn scenario(name: &str) -> PyResult<Scenario> {
    match name {
        "example1" => Ok(Scenario::Example1),
        "example2" => Ok(Scenario::Example2),
        "example3" => Ok(Scenario::Example3),
        other => Err(SkewInfoError::new_err(format!("unknown example {other}"))),
    }
}

fn example_spec(name: &str, alpha: Option<f64>, q: Option<f64>, theta_steps: Option<usize>) -> PyResult<SweepSpec> {
    let mut spec = SweepSpec::defaults(scenario(name)?);
    if let Some(alpha) = alpha {
        spec.metric = MetricSpec::Wyd { alpha };
    }
    if let Some(q) = q {
        spec.q = q;
    }
    if let Some(n) = theta_steps {
        spec.theta_grid.steps = n;
    }
    spec.validate().map_err(err)?;
    Ok(spec)
}

/// Runs example1, example2 or example3 over θ and returns one dict per grid point.
#[pyfunction]
#[pyo3(signature = (name, alpha = None, q = None, theta_steps = None))]
fn run_example<'py>(
    py: Python<'py>,
    name: &str,
    alpha: Option<f64>,
    q: Option<f64>,
    theta_steps: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = scenarios::run(&example_spec(name, alpha, q, theta_steps)?).map_err(err)?;
    rows.iter().map(|r| row_dict(py, r)).collect()
}

/// Same sweep as `run_example`, rendered as CSV text.
#[pyfunction]
#[pyo3(signature = (name, alpha = None, q = None, theta_steps = None))]
fn example_csv(name: &str, alpha: Option<f64>, q: Option<f64>, theta_steps: Option<usize>) -> PyResult<String> {
    let rows = scenarios::run(&example_spec(name, alpha, q, theta_steps)?).map_err(err)?;
    scenarios::to_csv(&rows).map_err(err)
}

/// Randomized invariant checks; returns counts and the list of violations.
#[pyfunction]
#[pyo3(signature = (trials = 100, seed = 0, dims = vec![2, 3, 4], pure_only = false))]
fn run_fuzz<'py>(
    py: Python<'py>,
    trials: usize,
    seed: u64,
    dims: Vec<usize>,
    pure_only: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = FuzzSpec { trials, seed, dims, pure_only, ..Default::default() };
    let r = fuzz::fuzz(&spec).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("seed", r.seed)?;
    d.set_item("trials", r.trials)?;
    d.set_item("checks", r.checks)?;
    d.set_item("generic_instances", r.generic_instances)?;
    d.set_item("positive_gaps", r.positive_gaps)?;
    d.set_item("min_gap", r.min_gap)?;
    let violations: Vec<(usize, String, String)> =
        r.violations.into_iter().map(|v| (v.trial, v.check, v.detail)).collect();
    d.set_item("violations", violations)?;
    Ok(d)
}

#[pymodule]
fn pyskewinfo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SkewInfoError", m.py().get_type::<SkewInfoError>())?;
    m.add_class::<PyState>()?;
    m.add_class::<PyMetric>()?;
    m.add_function(wrap_pyfunction!(skew_operator, m)?)?;
    m.add_function(wrap_pyfunction!(skew_observable, m)?)?;
    m.add_function(wrap_pyfunction!(skew_channel, m)?)?;
    m.add_function(wrap_pyfunction!(skew_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(wyd_direct, m)?)?;
    m.add_function(wrap_pyfunction!(variance, m)?)?;
    m.add_function(wrap_pyfunction!(sld, m)?)?;
    m.add_function(wrap_pyfunction!(observable_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(variance_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(channel_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_example, m)?)?;
    m.add_function(wrap_pyfunction!(example_csv, m)?)?;
    m.add_function(wrap_pyfunction!(run_fuzz, m)?)?;
    Ok(())
}
