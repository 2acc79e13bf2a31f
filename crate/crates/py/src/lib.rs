//! Python bindings: parameters, quadrature rules and the main operations.
//! Structured results come back as plain dicts and lists.

use std::cell::RefCell;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use symdunkl::bessel::{bessel_k as core_bessel_k, Argument};
use symdunkl::harmonics::{build_sphere_rule, default_sphere_order, hharmonic_basis as core_basis};
use symdunkl::intertwine::{vk_axis as core_vk_axis, vk_monomial_exact, AxisFunction};
use symdunkl::summability::bounds::{knd_positivity_check, szego_check as core_szego};
use symdunkl::summability::{
    cesaro_kernel_axis as core_cesaro, critical_sweep as core_critical, lebesgue_sweep as core_sweep, SweepSpec,
};
use symdunkl::{CesaroOrder, HarmonicBasis, JacobiParams, KappaParams, SimplexRule};

fn err(e: symdunkl::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON into Python objects.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// Dimension d and multiplicity κ ("p/q" or decimal).
#[pyclass(name = "Kappa", frozen)]
struct PyKappa(KappaParams);

#[pymethods]
impl PyKappa {
    #[new]
    fn new(d: usize, kappa: &str) -> PyResult<Self> {
        KappaParams::parse(d, kappa).map(PyKappa).map_err(err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn kappa(&self) -> String {
        self.0.kappa().to_string()
    }

    #[getter]
    fn kappa_float(&self) -> f64 {
        self.0.kappa_f64()
    }

    /// λ_κ = (d−2)/2 + d(d−1)κ/2.
    #[getter]
    fn lambda_kappa(&self) -> f64 {
        self.0.lambda()
    }

    #[getter]
    fn critical_delta(&self) -> f64 {
        self.0.critical_delta()
    }

    #[getter]
    fn a_kappa(&self) -> f64 {
        self.0.a_kappa()
    }

    #[getter]
    fn z2d_threshold(&self) -> f64 {
        self.0.z2d_threshold()
    }

    fn __repr__(&self) -> String {
        format!("Kappa(d={}, kappa={})", self.0.d(), self.0.kappa())
    }
}

/// Tensor Gauss rule on the simplex for the weight (t_0⋯t_{d−1})^{κ−1}.
#[pyclass(name = "SimplexRule", frozen)]
struct PySimplexRule(SimplexRule);

#[pymethods]
impl PySimplexRule {
    #[new]
    fn new(params: &PyKappa, order: usize) -> PyResult<Self> {
        SimplexRule::build(params.0.d(), params.0.kappa(), order)
            .map(PySimplexRule)
            .map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// ∫ g(t) (t_0⋯t_{d−1})^{κ−1} dt for a callable g(list) -> float.
    fn integrate(&self, g: &Bound<'_, PyAny>) -> PyResult<f64> {
        let failure = RefCell::new(None);
        let v = self.0.integrate(|t| call_f64(g, t.to_vec(), &failure));
        finish(v, failure)
    }
}

/// Orthonormal basis of the degree-n h-harmonics.
#[pyclass(name = "HarmonicBasis", frozen)]
struct PyBasis(HarmonicBasis);

#[pymethods]
impl PyBasis {
    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn gram_residual(&self) -> f64 {
        self.0.gram_residual
    }

    /// Values of all basis elements at x.
    fn eval(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        if x.len() != self.0.d {
            return Err(PyValueError::new_err(format!(
                "x has {} coordinates, d = {}",
                x.len(),
                self.0.d
            )));
        }
        Ok(self.0.eval_all(&x))
    }

    /// Exact nullspace polynomials and float coefficients as a dict.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }
}

fn call_f64<A: for<'a> IntoPyObject<'a>>(f: &Bound<'_, PyAny>, arg: A, failure: &RefCell<Option<PyErr>>) -> f64 {
    match f.call1((arg,)).and_then(|v| v.extract::<f64>()) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    }
}

fn finish<T>(v: symdunkl::Result<T>, failure: RefCell<Option<PyErr>>) -> PyResult<T> {
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    v.map_err(err)
}

/// Exact D_i V_κ[x_ℓ^n] = V_κ[∂_i x_ℓ^n] for n ≤ max_degree; report dict.
#[pyfunction]
fn verify_intertwining<'py>(py: Python<'py>, params: &PyKappa, max_degree: u32) -> PyResult<Bound<'py, PyAny>> {
    let rep = py
        .detach(|| symdunkl::intertwine::verify_intertwining(max_degree, &params.0))
        .map_err(err)?;
    to_py(py, &rep)
}

/// V_κ[x_axis^n] as an exact polynomial {"d", "terms": [{"exp", "num", "den"}]}.
#[pyfunction]
fn vk_monomial<'py>(py: Python<'py>, n: u32, axis: usize, params: &PyKappa) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &vk_monomial_exact(n, axis, &params.0).map_err(err)?)
}

/// V_κ[f(x_axis)](x) for a callable f(float) -> float.
#[pyfunction]
fn vk_axis(f: &Bound<'_, PyAny>, axis: usize, x: Vec<f64>, params: &PyKappa, rule: &PySimplexRule) -> PyResult<f64> {
    let failure = RefCell::new(None);
    let func = AxisFunction::new(axis, |s: f64| call_f64(f, s, &failure));
    let v = core_vk_axis(&func, &x, &params.0, &rule.0);
    finish(v, failure)
}

/// P_n(h_κ²; x, e_ℓ) for x on the unit sphere.
#[pyfunction]
fn repro_kernel_axis(n: usize, ell: usize, x: Vec<f64>, params: &PyKappa, rule: &PySimplexRule) -> PyResult<f64> {
    symdunkl::harmonics::repro_kernel_axis(n, ell, &x, &params.0, &rule.0).map_err(err)
}

/// K_n^δ(h_κ²; x, e_ℓ) for x on the unit sphere.
#[pyfunction]
fn cesaro_kernel_axis(
    n: usize,
    delta: f64,
    ell: usize,
    x: Vec<f64>,
    params: &PyKappa,
    rule: &PySimplexRule,
) -> PyResult<f64> {
    let delta = CesaroOrder::new(delta).map_err(err)?;
    core_cesaro(n, delta, ell, &x, &params.0, &rule.0).map_err(err)
}

/// K_{κ,d}(e_1, iy), or K(e_1, y) with imaginary=False.
#[pyfunction]
#[pyo3(signature = (y, params, rule, imaginary = true))]
fn bessel_k(y: Vec<f64>, params: &PyKappa, rule: &PySimplexRule, imaginary: bool) -> PyResult<Complex64> {
    let arg = if imaginary { Argument::Imaginary } else { Argument::Real };
    core_bessel_k(&y, arg, &params.0, &rule.0)
        .map(|k| k.direct)
        .map_err(err)
}

/// Orthonormal basis of H_n(h_κ²); the sphere order defaults to one exact for integer κ.
#[pyfunction]
#[pyo3(signature = (n, params, sphere_order = None))]
fn hharmonic_basis(py: Python<'_>, n: usize, params: &PyKappa, sphere_order: Option<usize>) -> PyResult<PyBasis> {
    let p = &params.0;
    py.detach(|| {
        let order = sphere_order.unwrap_or_else(|| default_sphere_order(n, p));
        let rule = build_sphere_rule(p.d(), order, Some(p.kappa_f64()))?;
        core_basis(n, p, &rule)
    })
    .map(PyBasis)
    .map_err(err)
}

fn sweep_spec(
    params: &PyKappa,
    deltas: Vec<f64>,
    n_max: usize,
    ell: usize,
    quad_order: Option<usize>,
    workers: Option<usize>,
) -> SweepSpec {
    let mut spec = SweepSpec::new(params.0.clone(), ell, deltas, n_max);
    spec.quad_order = quad_order;
    spec.workers = workers;
    spec
}

/// Rows {d, kappa, ell, n, delta, value, err_est} for n = 1..=n_max and every δ.
#[pyfunction]
#[pyo3(signature = (params, deltas, n_max, ell = 1, quad_order = None, workers = None))]
fn lebesgue_sweep<'py>(
    py: Python<'py>,
    params: &PyKappa,
    deltas: Vec<f64>,
    n_max: usize,
    ell: usize,
    quad_order: Option<usize>,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = sweep_spec(params, deltas, n_max, ell, quad_order, workers);
    let rows = py.detach(|| core_sweep(&spec, &mut |_| Ok(()), None)).map_err(err)?;
    to_py(py, &rows)
}

/// Sweep plus growth fits per δ; the δ grid must straddle the critical index.
#[pyfunction]
#[pyo3(signature = (params, deltas, n_max, ell = 1, quad_order = None, workers = None))]
fn critical_sweep<'py>(
    py: Python<'py>,
    params: &PyKappa,
    deltas: Vec<f64>,
    n_max: usize,
    ell: usize,
    quad_order: Option<usize>,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = sweep_spec(params, deltas, n_max, ell, quad_order, workers);
    let out = py.detach(|| core_critical(&spec, &mut |_| Ok(()), None)).map_err(err)?;
    to_py(py, &out)
}

/// Szegő's estimate for P_n^{(α,β)}: {fitted_c, half_c, doubling_factor, stable, ratio_series}.
#[pyfunction]
#[pyo3(signature = (alpha, beta, n_max = 400, grid = 2000))]
fn szego_check<'py>(py: Python<'py>, alpha: f64, beta: f64, n_max: usize, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    let jp = JacobiParams::new(alpha, beta).map_err(err)?;
    to_py(py, &py.detach(|| core_szego(jp, n_max, grid)).map_err(err)?)
}

/// Positivity and pointwise bound of the Fourier–Jacobi Cesàro kernel at t_0 = 1.
#[pyfunction]
#[pyo3(signature = (alpha, beta, delta, n_max = 100, grid = 1000))]
fn knd_check<'py>(
    py: Python<'py>,
    alpha: f64,
    beta: f64,
    delta: f64,
    n_max: usize,
    grid: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let jp = JacobiParams::new(alpha, beta).map_err(err)?;
    let delta = CesaroOrder::new(delta).map_err(err)?;
    to_py(
        py,
        &py.detach(|| knd_positivity_check(n_max, jp, delta, grid))
            .map_err(err)?,
    )
}

#[pymodule]
fn pysymdunkl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", symdunkl::VERSION)?;
    m.add_class::<PyKappa>()?;
    m.add_class::<PySimplexRule>()?;
    m.add_class::<PyBasis>()?;
    m.add_function(wrap_pyfunction!(verify_intertwining, m)?)?;
    m.add_function(wrap_pyfunction!(vk_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(vk_axis, m)?)?;
    m.add_function(wrap_pyfunction!(repro_kernel_axis, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro_kernel_axis, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_k, m)?)?;
    m.add_function(wrap_pyfunction!(hharmonic_basis, m)?)?;
    m.add_function(wrap_pyfunction!(lebesgue_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(critical_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(szego_check, m)?)?;
    m.add_function(wrap_pyfunction!(knd_check, m)?)?;
    Ok(())
}
