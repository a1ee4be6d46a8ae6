use std::path::PathBuf;
use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use conjlab::conjugate;
use conjlab::fourier::{self, QuadratureSpec};
use conjlab::numerics::optimize::SearchConfig;
use conjlab::report::{self, Command, RunConfig};
use conjlab::seminorm::{self, ChainSettings};
use conjlab::weights::{self, Condition, FamilySpec, ProbeGrid, Profile, Weight, WeightFunction};
use conjlab::{Error, ExtendedReal, MultiIndex};

fn err(e: Error) -> PyErr {
    match e {
        Error::UnknownQuantity { .. } => PyKeyError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Serializable value as the equivalent Python object.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn ext(v: ExtendedReal) -> f64 {
    v.to_f64()
}

/// A function sampled on a tensor grid; `inf` marks points outside the domain.
#[pyclass(name = "GridFunction", module = "pyconjlab", frozen)]
struct PyGridFunction(conjlab::GridFunction);

#[pymethods]
impl PyGridFunction {
    #[new]
    fn new(axes: Vec<Vec<f64>>, values: Vec<f64>) -> PyResult<Self> {
        let values = values
            .into_iter()
            .map(ExtendedReal::try_from_f64)
            .collect::<conjlab::Result<Vec<_>>>()
            .map_err(err)?;
        conjlab::GridFunction::new(axes, values)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        conjlab::GridFunction::from_csv(text).map(Self).map_err(err)
    }

    fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    #[getter]
    fn axes(&self) -> Vec<Vec<f64>> {
        self.0.axes().to_vec()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().iter().map(|v| ext(*v)).collect()
    }

    #[getter]
    fn shape(&self) -> Vec<usize> {
        self.0.shape()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("GridFunction(shape={:?})", self.0.shape())
    }
}

#[pyfunction]
fn fast_conjugate_1d(f: &PyGridFunction, duals: Vec<f64>) -> PyResult<Vec<f64>> {
    let v = conjugate::fast_conjugate_1d(&f.0, &duals).map_err(err)?;
    Ok(v.into_iter().map(ext).collect())
}

#[pyfunction]
fn brute_conjugate(f: &PyGridFunction, duals: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let v = conjugate::brute_conjugate(&f.0, &duals).map_err(err)?;
    Ok(v.into_iter().map(ext).collect())
}

#[pyfunction]
fn conjugate_nd(f: &PyGridFunction, dual_axes: Vec<Vec<f64>>) -> PyResult<PyGridFunction> {
    conjugate::conjugate_nd(&f.0, &dual_axes)
        .map(PyGridFunction)
        .map_err(err)
}

#[pyfunction]
fn biconjugate(f: &PyGridFunction) -> PyResult<PyGridFunction> {
    conjugate::biconjugate(&f.0)
        .map(PyGridFunction)
        .map_err(err)
}

fn duality_weight(profile: &str, dim: usize) -> PyResult<WeightFunction> {
    match profile {
        "t^2" => WeightFunction::radial(Profile::Square, 1.0, dim),
        "t^4" => WeightFunction::radial(Profile::Power(4.0), 1.0, dim),
        "cosh(t)-1" => WeightFunction::separable(Profile::CoshMinusOne, 1.0, dim),
        other => return Err(PyValueError::new_err(format!("unknown profile {other:?}"))),
    }
    .map_err(err)
}

/// Duality sum of `u` minus `Σ x_j ln x_j - x_j`, for the weight `u` named by
/// `profile` (`t^2`, `t^4` or `cosh(t)-1`).
#[pyfunction]
fn duality_gap(profile: &str, x: Vec<f64>) -> PyResult<f64> {
    let u = duality_weight(profile, x.len())?;
    conjugate::duality_gap(&u, &x, &SearchConfig::default()).map_err(err)
}

fn condition(name: &str, param: Option<f64>) -> PyResult<Condition> {
    Ok(match name {
        "i0" => Condition::I0 {
            a: param.unwrap_or(1.0),
        },
        "i1" => Condition::I1 {
            sigma: param.unwrap_or(2.0),
        },
        "i2" => Condition::I2,
        "i3" => Condition::I3,
        "i4" => Condition::I4,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown condition {other:?}"
            )))
        }
    })
}

/// A radial weight family `φ_ν(x) = Ω(base^ν ‖x‖)`.
#[pyclass(name = "WeightFamily", module = "pyconjlab", frozen)]
struct PyWeightFamily {
    inner: Arc<weights::WeightFamily>,
    spec: FamilySpec,
}

#[pymethods]
impl PyWeightFamily {
    #[new]
    #[pyo3(signature = (profile, base = 2.0, dim = 1, p = None))]
    fn new(profile: String, base: f64, dim: usize, p: Option<f64>) -> PyResult<Self> {
        let spec = FamilySpec {
            profile,
            p,
            base,
            dim,
        };
        let inner = weights::WeightFamily::from_spec(&spec).map_err(err)?;
        Ok(PyWeightFamily {
            inner: Arc::new(inner),
            spec,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, nu: u32, x: Vec<f64>) -> PyResult<f64> {
        let m = self.inner.member(nu).map_err(err)?;
        if x.len() != m.dim() {
            return Err(PyValueError::new_err(format!(
                "expected a point of dimension {}",
                m.dim()
            )));
        }
        Ok(m.eval(&x))
    }

    /// Grid estimate of a condition constant with its divergence diagnostic.
    #[pyo3(signature = (condition_name, nu, param = None, radius = 20.0, nodes = None))]
    fn estimate<'py>(
        &self,
        py: Python<'py>,
        condition_name: &str,
        nu: u32,
        param: Option<f64>,
        radius: f64,
        nodes: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let c = condition(condition_name, param)?;
        let mut grid = ProbeGrid::default_for(self.inner.dim()).with_radius(radius);
        if let Some(n) = nodes {
            grid.nodes = n;
        }
        let e = self.inner.estimate(c, nu, &grid).map_err(err)?;
        to_py(py, &e)
    }

    #[pyo3(signature = (nu, seed = 42))]
    fn check_class_a<'py>(
        &self,
        py: Python<'py>,
        nu: u32,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let m = self.inner.member(nu).map_err(err)?;
        let r = weights::check_class_a(m.as_ref(), &ProbeGrid::default_for(self.inner.dim()), seed);
        to_py(py, &r)
    }

    fn __repr__(&self) -> String {
        format!(
            "WeightFamily(profile={:?}, base={}, dim={})",
            self.spec.profile, self.spec.base, self.spec.dim
        )
    }
}

/// A product of Hermite- or polynomial-Gaussian factors.
#[pyclass(name = "TestFunction", module = "pyconjlab", frozen)]
struct PyTestFunction(seminorm::TestFunction);

#[pymethods]
impl PyTestFunction {
    #[staticmethod]
    #[pyo3(signature = (a = 0.5, dim = 1))]
    fn gaussian(a: f64, dim: usize) -> PyResult<Self> {
        seminorm::TestFunction::gaussian(a, dim)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (k, a = 0.5, dim = 1))]
    fn hermite_gaussian(k: u32, a: f64, dim: usize) -> PyResult<Self> {
        seminorm::TestFunction::hermite_gaussian(k, a, dim)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (coeffs, a = 0.5, dim = 1))]
    fn poly_gaussian(coeffs: Vec<f64>, a: f64, dim: usize) -> PyResult<Self> {
        seminorm::TestFunction::poly_gaussian(coeffs, a, dim)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        seminorm::TestFunction::from_json(text)
            .map(Self)
            .map_err(err)
    }

    fn scaled(&self, c: f64) -> PyResult<Self> {
        self.0.scaled(c).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name()
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        self.check_dim(x.len())?;
        Ok(self.0.eval_real(&x))
    }

    fn eval_complex(&self, z: Vec<Complex64>) -> PyResult<Complex64> {
        self.check_dim(z.len())?;
        Ok(self.0.eval(&z))
    }

    fn derivative(&self, alpha: Vec<u32>, x: Vec<f64>) -> PyResult<f64> {
        self.check_dim(alpha.len())?;
        self.check_dim(x.len())?;
        Ok(self.0.derivative(&MultiIndex::new(alpha), &x))
    }

    fn __repr__(&self) -> String {
        format!("TestFunction({})", self.0.name())
    }
}

impl PyTestFunction {
    fn check_dim(&self, n: usize) -> PyResult<()> {
        if n == self.0.dim() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!(
                "expected dimension {}, got {n}",
                self.0.dim()
            )))
        }
    }
}

/// Partial Taylor sum of `f(x + iy)` about `x`; returns the value and the
/// last-shell error estimate.
#[pyfunction]
#[pyo3(signature = (f, x, y, order = 30))]
fn taylor_extend(
    f: &PyTestFunction,
    x: Vec<f64>,
    y: Vec<f64>,
    order: u32,
) -> PyResult<(Complex64, f64)> {
    let t = seminorm::taylor_extend(&f.0, &x, &y, order).map_err(err)?;
    Ok((t.value(), t.error_estimate))
}

/// `f̂(x) = ∫ f(t) e^{-i⟨x,t⟩} dt` by trapezoid quadrature.
#[pyfunction]
fn fourier_transform(f: &PyTestFunction, points: Vec<Vec<f64>>) -> PyResult<Vec<Complex64>> {
    let spec = QuadratureSpec::for_function(&f.0, 0).map_err(err)?;
    let v = fourier::fourier(&f.0, &spec, &points).map_err(err)?;
    Ok(v.iter().map(|t| t.value()).collect())
}

/// The four seminorms of order `m` for the family member `ν`.
#[pyfunction]
fn seminorms<'py>(
    py: Python<'py>,
    f: &PyTestFunction,
    family: &PyWeightFamily,
    nu: u32,
    m: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let n = f.0.dim();
    let s = ChainSettings::default_for(n);
    let fam = &family.inner;
    let phi = fam.member(nu).map_err(err)?;
    let table = seminorm::psi_star_table(fam, nu, s.max_order).map_err(err)?;
    let star = seminorm::conjugate_on_grid(phi.as_ref(), &s.real, s.primal_nodes).map_err(err)?;
    let p = seminorm::p_seminorm(&f.0, phi.as_ref(), m, &s.complex).map_err(err)?;
    let rho = seminorm::rho_seminorm(&f.0, &table, m, &s.real, s.max_order).map_err(err)?;
    let g = seminorm::g_seminorm(&f.0, &table, m, &s.real, s.max_order).map_err(err)?;
    let q = seminorm::q_seminorm(&f.0, &star, m).map_err(err)?;
    to_py(
        py,
        &serde_json::json!({ "p": p, "rho": rho, "g": g, "q": q }),
    )
}

#[pyfunction]
fn verify_embedding_chain<'py>(
    py: Python<'py>,
    f: &PyTestFunction,
    family: &PyWeightFamily,
    m: u32,
    nu: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let s = ChainSettings::default_for(f.0.dim());
    let r = seminorm::verify_embedding_chain(&f.0, &family.inner, m, nu, &s).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn verify_fourier_bound<'py>(
    py: Python<'py>,
    f: &PyTestFunction,
    family: &PyWeightFamily,
    nu: u32,
    m: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let s = ChainSettings::default_for(f.0.dim());
    let r = fourier::verify_theorem3_bound(&f.0, &family.inner, nu, m, &s).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (limit = 20))]
fn verify_stirling<'py>(py: Python<'py>, limit: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &fourier::verify_stirling(limit))
}

/// Runs a verification command and returns the report as a dict. With `out`
/// the report, plots and artifacts are also written there.
#[pyfunction]
#[pyo3(signature = (command, seed = 42, dims = None, config = None, out = None))]
fn run<'py>(
    py: Python<'py>,
    command: &str,
    seed: u64,
    dims: Option<Vec<usize>>,
    config: Option<&str>,
    out: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = match config {
        Some(text) => RunConfig::from_json(text).map_err(err)?,
        None => RunConfig::default(),
    };
    cfg.command = Some(Command::parse(command).map_err(err)?);
    cfg.seed = seed;
    cfg.timestamp = false;
    if let Some(d) = dims {
        cfg.options.dims = d;
    }
    let outcome = py.detach(|| report::run(&cfg)).map_err(err)?;
    if let Some(dir) = out {
        report::write_outputs(&outcome, &dir).map_err(err)?;
    }
    to_py(py, &outcome.report)
}

#[pymodule]
pub fn pyconjlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGridFunction>()?;
    m.add_class::<PyWeightFamily>()?;
    m.add_class::<PyTestFunction>()?;
    m.add_function(wrap_pyfunction!(fast_conjugate_1d, m)?)?;
    m.add_function(wrap_pyfunction!(brute_conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate_nd, m)?)?;
    m.add_function(wrap_pyfunction!(biconjugate, m)?)?;
    m.add_function(wrap_pyfunction!(duality_gap, m)?)?;
    m.add_function(wrap_pyfunction!(taylor_extend, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_transform, m)?)?;
    m.add_function(wrap_pyfunction!(seminorms, m)?)?;
    m.add_function(wrap_pyfunction!(verify_embedding_chain, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fourier_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_stirling, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
