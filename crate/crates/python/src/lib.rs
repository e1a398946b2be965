//! Python bindings.
//!
//! Results come back as plain dicts so they print and serialize without
//! extra classes. Domain problems (a point outside the essential range, an
//! unbounded side, a degenerate model) raise `DomainError`, a subclass of
//! `ValueError`.

use pointprob_core::calibrate;
use pointprob_core::monotone;
use pointprob_core::oracle;
use pointprob_core::tilting::{self, Side};
use pointprob_core::{self as core, Error, EstimateResult};
use pyo3::create_exception;
use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

create_exception!(pointprob, DomainError, PyValueError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::InvalidDistribution(_) | Error::InvalidModel(_) | Error::InvalidArgument(_) => {
            PyValueError::new_err(msg)
        }
        Error::Domain { .. }
        | Error::DegenerateModel
        | Error::OutOfRange { .. }
        | Error::UnboundedSide(_) => DomainError::new_err(msg),
        Error::ResourceLimit { .. } => PyMemoryError::new_err(msg),
        Error::SolverFailed(_) | Error::Numerical(_) => PyRuntimeError::new_err(msg),
    }
}

/// One integer-valued component distribution.
#[pyclass(name = "DistributionSpec", module = "pointprob", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyDistributionSpec {
    inner: core::DistributionSpec,
}

impl From<core::DistributionSpec> for PyDistributionSpec {
    fn from(inner: core::DistributionSpec) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyDistributionSpec {
    #[staticmethod]
    fn bernoulli(p: f64) -> PyResult<Self> {
        core::DistributionSpec::bernoulli(p).map(Self::from).map_err(to_py)
    }

    /// `Pr[Z = k] = p^k (1 - p)` for `k = 0, 1, ...`.
    #[staticmethod]
    fn geometric(p: f64) -> PyResult<Self> {
        core::DistributionSpec::geometric(p).map(Self::from).map_err(to_py)
    }

    #[staticmethod]
    fn poisson(lam: f64) -> PyResult<Self> {
        core::DistributionSpec::poisson(lam).map(Self::from).map_err(to_py)
    }

    /// `support` is a list of `(value, weight)` pairs with weights summing to one.
    #[staticmethod]
    fn finite(support: Vec<(i64, f64)>) -> PyResult<Self> {
        core::DistributionSpec::finite(support).map(Self::from).map_err(to_py)
    }

    #[staticmethod]
    fn constant(value: i64) -> Self {
        core::DistributionSpec::constant(value).into()
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family_name()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    fn abs_third_central_moment(&self) -> f64 {
        self.inner.abs_third_central_moment()
    }

    fn pmf(&self, k: i64) -> f64 {
        self.inner.pmf(k)
    }

    fn char_fn<'py>(&self, py: Python<'py>, lam: f64) -> Bound<'py, PyComplex> {
        let z = self.inner.char_fn(lam);
        PyComplex::from_doubles(py, z.re, z.im)
    }

    fn char_fn_modulus(&self, lam: f64) -> f64 {
        self.inner.char_fn_modulus_sq(lam).sqrt()
    }

    /// `(lo, hi)` of the MGF domain; both ends are open when infinite.
    fn mgf_domain(&self) -> (f64, f64) {
        let d = self.inner.mgf_domain();
        (d.lo, d.hi)
    }

    /// `(psi, psi', psi'')` at `theta`.
    fn cumulants(&self, theta: f64) -> PyResult<(f64, f64, f64)> {
        let c = self.inner.cumulants(theta).map_err(to_py)?;
        Ok((c.psi, c.psi_prime, c.psi_double_prime))
    }

    fn tilt(&self, theta: f64) -> PyResult<Self> {
        self.inner.tilt(theta).map(Self::from).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("DistributionSpec({})", self.inner)
    }
}

/// Sum of independent components, each repeated `count` times.
#[pyclass(name = "SumModel", module = "pointprob", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PySumModel {
    inner: core::SumModel,
}

#[pymethods]
impl PySumModel {
    #[new]
    fn new(components: Vec<(PyDistributionSpec, u64)>) -> PyResult<Self> {
        core::SumModel::new(components.into_iter().map(|(d, c)| (d.inner, c)))
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn iid(dist: PyDistributionSpec, count: u64) -> PyResult<Self> {
        core::SumModel::iid(dist.inner, count)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    /// List of `(DistributionSpec, count)` pairs.
    fn components(&self) -> Vec<(PyDistributionSpec, u64)> {
        self.inner
            .components()
            .iter()
            .map(|c| (c.dist.clone().into(), c.count))
            .collect()
    }

    #[getter]
    fn summands(&self) -> u64 {
        self.inner.expanded_len()
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn variance(&self) -> f64 {
        self.inner.variance()
    }

    fn summarize<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        summarize(py, self)
    }

    /// `(A, B)`; `B` is `None` when the sum is unbounded above.
    fn essential_bounds(&self) -> (i64, Option<i64>) {
        let b = tilting::essential_bounds(&self.inner);
        (b.lower.expect("lower bound is always finite"), b.upper)
    }

    fn mgf_domain(&self) -> (f64, f64) {
        let d = self.inner.mgf_domain();
        (d.lo, d.hi)
    }

    fn tilt(&self, theta: f64) -> PyResult<Self> {
        self.inner.tilt(theta).map(|inner| Self { inner }).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .inner
            .components()
            .iter()
            .map(|c| format!("({}, {})", c.dist, c.count))
            .collect();
        format!("SumModel([{}])", parts.join(", "))
    }
}

/// Dict with `mu`, `sigma_sq`, `eta` and `tau` (`None` for a degenerate model).
#[pyfunction]
fn summarize<'py>(py: Python<'py>, model: &PySumModel) -> PyResult<Bound<'py, PyDict>> {
    let s = model.inner.summarize();
    let d = PyDict::new(py);
    d.set_item("mu", s.mu)?;
    d.set_item("sigma_sq", s.sigma_sq)?;
    d.set_item("eta", s.eta)?;
    d.set_item("tau", s.tau)?;
    Ok(d)
}

fn estimate_dict<'py>(py: Python<'py>, r: &EstimateResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("estimate", r.estimate)?;
    d.set_item("log_estimate", r.log_estimate)?;
    d.set_item("error_term", r.error_term)?;
    d.set_item("t", r.t)?;
    d.set_item("sigma", r.sigma)?;
    d.set_item("tau", r.tau)?;
    d.set_item("epsilon", r.epsilon)?;
    d.set_item("sigma_large_enough", r.flags.sigma_large_enough)?;
    d.set_item("tau_small_enough", r.flags.tau_small_enough)?;
    d.set_item("epsilon_le_pi", r.flags.epsilon_le_pi)?;
    Ok(d)
}

/// Normal-density estimate of `Pr[X = n]`; `error_term` is `tau**2`.
#[pyfunction]
fn gaussian_point_estimate<'py>(py: Python<'py>, model: &PySumModel, n: i64) -> PyResult<Bound<'py, PyDict>> {
    let r = core::gaussian_point_estimate(&model.inner, n).map_err(to_py)?;
    estimate_dict(py, &r)
}

fn solution_dict<'py>(py: Python<'py>, s: &core::TiltSolution) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("theta", s.theta)?;
    d.set_item("psi", s.psi_at_theta)?;
    d.set_item("residual", s.residual)?;
    d.set_item("iterations", s.iterations)?;
    d.set_item("sigma_y", s.tilted_moments.sigma())?;
    d.set_item("eta_y", s.tilted_moments.eta)?;
    d.set_item("tilted", PySumModel { inner: s.tilted.clone() })?;
    Ok(d)
}

/// Solves `psi'(theta) = t` for `A < t < B`.
#[pyfunction]
fn solve_tilt<'py>(py: Python<'py>, model: &PySumModel, t: i64) -> PyResult<Bound<'py, PyDict>> {
    let s = tilting::solve_tilt(&model.inner, t).map_err(to_py)?;
    solution_dict(py, &s)
}

/// `g(t) = theta t - psi(theta)` at the solving `theta`.
#[pyfunction]
fn rate_function(model: &PySumModel, t: f64) -> PyResult<f64> {
    tilting::rate_function_real(&model.inner, t).map_err(to_py)
}

/// Tilted estimate of `Pr[X = t]` for `A < t < B`.
#[pyfunction]
fn tail_point_estimate<'py>(py: Python<'py>, model: &PySumModel, t: i64) -> PyResult<Bound<'py, PyDict>> {
    let tail = tilting::tail_point_estimate(&model.inner, t).map_err(to_py)?;
    let d = estimate_dict(py, &tail.estimate)?;
    d.set_item("rate", tail.rate)?;
    let check = monotone::check_monotone(&tail.solution.tilted, monotone::DEFAULT_GRID, monotone::DEFAULT_TOLERANCE)
        .map_err(to_py)?;
    d.set_item("tilted_monotone", check.is_monotone)?;
    d.set_item("solution", solution_dict(py, &tail.solution)?)?;
    Ok(d)
}

/// Exact `Pr[X = A]` (`side="lower"`) or `Pr[X = B]` (`side="upper"`).
#[pyfunction]
#[pyo3(signature = (model, side = "lower"))]
fn boundary_point_prob(model: &PySumModel, side: &str) -> PyResult<f64> {
    let side = match side {
        "lower" => Side::Lower,
        "upper" => Side::Upper,
        other => return Err(PyValueError::new_err(format!("side must be 'lower' or 'upper', got {other:?}"))),
    };
    tilting::boundary_point_prob(&model.inner, side).map_err(to_py)
}

/// Dense PMF by convolution: dict with `offset`, `masses` and `tail_defect`.
#[pyfunction]
#[pyo3(signature = (model, eps = 1e-15))]
fn exact_pmf<'py>(py: Python<'py>, model: &PySumModel, eps: f64) -> PyResult<Bound<'py, PyDict>> {
    let inner = model.inner.clone();
    let pmf = py.detach(move || oracle::exact_pmf(&inner, eps)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("offset", pmf.offset)?;
    d.set_item("tail_defect", pmf.tail_defect)?;
    d.set_item("masses", pmf.masses)?;
    Ok(d)
}

/// `Pr[X = n]` by trapezoidal inversion of the characteristic function.
#[pyfunction]
#[pyo3(signature = (model, n, quad_points = None))]
fn inversion_prob(model: &PySumModel, n: i64, quad_points: Option<usize>) -> PyResult<f64> {
    let q = quad_points.unwrap_or_else(|| oracle::default_quad_points(&model.inner));
    oracle::inversion_prob(&model.inner, n, q)
        .map(|inv| inv.probability)
        .map_err(to_py)
}

/// `(probability, stderr)` from `samples` draws.
#[pyfunction]
#[pyo3(signature = (model, n, samples = 1_000_000, seed = 0))]
fn mc_estimate(py: Python<'_>, model: &PySumModel, n: i64, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let inner = model.inner.clone();
    let r = py
        .detach(move || oracle::mc_estimate(&inner, n, samples, seed))
        .map_err(to_py)?;
    Ok((r.probability, r.stderr))
}

fn monotone_dict<'py>(py: Python<'py>, r: &monotone::MonotoneReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("is_monotone", r.is_monotone)?;
    d.set_item("worst_increase", r.worst_increase)?;
    d.set_item("worst_location", r.worst_location)?;
    d.set_item("grid_size", r.grid_size)?;
    d.set_item("tolerance", r.tolerance)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (model, grid_size = monotone::DEFAULT_GRID, tol = monotone::DEFAULT_TOLERANCE))]
fn check_monotone<'py>(
    py: Python<'py>,
    model: &PySumModel,
    grid_size: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = monotone::check_monotone(&model.inner, grid_size, tol).map_err(to_py)?;
    monotone_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (dist, theta_samples = 9, grid_size = monotone::DEFAULT_GRID, tol = monotone::DEFAULT_TOLERANCE))]
fn check_strong_monotone<'py>(
    py: Python<'py>,
    dist: &PyDistributionSpec,
    theta_samples: usize,
    grid_size: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = monotone::check_strong_monotone(&dist.inner, theta_samples, grid_size, tol).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("all_monotone", r.all_monotone)?;
    let per_theta = r
        .per_theta
        .iter()
        .map(|(theta, rep)| {
            let row = monotone_dict(py, rep)?;
            row.set_item("theta", theta)?;
            Ok(row)
        })
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("per_theta", per_theta)?;
    Ok(d)
}

/// Random Bernoulli/Poisson/geometric mixture with `summands` summands.
#[pyfunction]
fn random_mixed_model(summands: u64, seed: u64) -> PyResult<PySumModel> {
    calibrate::random_mixed_model(summands, seed)
        .map(|inner| PySumModel { inner })
        .map_err(to_py)
}

#[pymodule]
fn pointprob(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add_class::<PyDistributionSpec>()?;
    m.add_class::<PySumModel>()?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_point_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(solve_tilt, m)?)?;
    m.add_function(wrap_pyfunction!(rate_function, m)?)?;
    m.add_function(wrap_pyfunction!(tail_point_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_point_prob, m)?)?;
    m.add_function(wrap_pyfunction!(exact_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(inversion_prob, m)?)?;
    m.add_function(wrap_pyfunction!(mc_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(check_monotone, m)?)?;
    m.add_function(wrap_pyfunction!(check_strong_monotone, m)?)?;
    m.add_function(wrap_pyfunction!(random_mixed_model, m)?)?;
    Ok(())
}
