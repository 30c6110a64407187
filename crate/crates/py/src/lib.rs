//! Python bindings. Exact coefficients cross the boundary as strings
//! (`"3/4"`); structured reports come back as plain dicts.

use liebraid::analysis::{growth_classify, quotient_norm};
use liebraid::coeff::{format_q, parse_q};
use liebraid::freealg::{Alphabet, Series as CoreSeries, Word};
use liebraid::freelie::{is_grouplike, is_primitive, lie_dimension};
use liebraid::groupcal::bch_series;
use liebraid::kohno::{kohno_lie_dimension, universal_dimension, KohnoAlgebra as CoreKohno, RewriteStrategy};
use liebraid::kzflow::{
    all_monodromies, check_pure_braid_relations, klyachko_flow, leading_log_check, FlowHamiltonian, SphereConfig,
    DEFAULT_FLOW_STEP, DEFAULT_HBAR, DEFAULT_KZ_TOL,
};
use liebraid::poisson::{verify_kohno_poisson, Structure};
use liebraid::represent::{check_kohno_relations, MatrixRep};
use liebraid::AlgebraError;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

fn err(e: AlgebraError) -> PyErr {
    match e {
        AlgebraError::Parse { field, message } => PyValueError::new_err(format!("{field}: {message}")),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_dict<'py>(py: Python<'py>, v: &impl ToString) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn q_arg(text: &str) -> PyResult<liebraid::Q> {
    parse_q(text).map_err(err)
}

fn sl2_rep(spins: &[String]) -> PyResult<MatrixRep> {
    let labels: Vec<&str> = spins.iter().map(String::as_str).collect();
    MatrixRep::sl2_spins(&labels).map_err(err)
}

/// Truncated series with exact rational coefficients.
#[pyclass(name = "Series", module = "liebraid_py", frozen)]
struct Series {
    inner: CoreSeries,
}

impl Series {
    fn wrap(inner: CoreSeries) -> Series {
        Series { inner }
    }
}

#[pymethods]
impl Series {
    /// Parses the JSON series format used by the CLI.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Series> {
        CoreSeries::from_json(text).map(Series::wrap).map_err(err)
    }

    /// Series over free generators `1..=size`; words are index lists.
    #[staticmethod]
    fn free(size: usize, truncation: usize, terms: Vec<(Vec<usize>, String)>) -> PyResult<Series> {
        let parsed = terms
            .into_iter()
            .map(|(w, c)| Ok((Word::free(&w), q_arg(&c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        CoreSeries::from_terms(Alphabet::Free { size }, truncation, parsed)
            .map(Series::wrap)
            .map_err(err)
    }

    /// Series over the Kohno generators `r_ij`; words are lists of pairs.
    #[staticmethod]
    fn kohno(n: usize, truncation: usize, terms: Vec<(Vec<(usize, usize)>, String)>) -> PyResult<Series> {
        let parsed = terms
            .into_iter()
            .map(|(w, c)| Ok((Word::pairs(&w), q_arg(&c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        CoreSeries::from_terms(Alphabet::Kohno { n }, truncation, parsed)
            .map(Series::wrap)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &self.inner.to_json_value())
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.inner.truncation()
    }

    /// `(word, coefficient)` pairs in degree-lexicographic order.
    fn terms(&self) -> Vec<(String, String)> {
        self.inner.terms().map(|(w, c)| (w.to_string(), format_q(c))).collect()
    }

    /// Coefficient of a word given as free indices or Kohno pairs.
    fn coeff(&self, word: &Bound<'_, PyAny>) -> PyResult<String> {
        let w = match self.inner.alphabet() {
            Alphabet::Free { .. } => Word::free(&word.extract::<Vec<usize>>()?),
            Alphabet::Kohno { .. } => Word::pairs(&word.extract::<Vec<(usize, usize)>>()?),
        };
        Ok(format_q(&self.inner.coeff(&w)))
    }

    fn ell1_by_degree(&self) -> Vec<String> {
        self.inner.ell1_norm_by_degree().iter().map(format_q).collect()
    }

    fn exp(&self) -> PyResult<Series> {
        self.inner.exp().map(Series::wrap).map_err(err)
    }

    fn log(&self) -> PyResult<Series> {
        self.inner.log().map(Series::wrap).map_err(err)
    }

    fn antipode(&self) -> Series {
        Series::wrap(self.inner.antipode())
    }

    fn scale(&self, k: &str) -> PyResult<Series> {
        Ok(Series::wrap(self.inner.scale(&q_arg(k)?)))
    }

    fn is_primitive(&self) -> bool {
        is_primitive(&self.inner)
    }

    fn is_grouplike(&self) -> bool {
        is_grouplike(&self.inner)
    }

    fn __add__(&self, other: PyRef<'_, Series>) -> PyResult<Series> {
        self.inner.add(&other.inner).map(Series::wrap).map_err(err)
    }

    fn __sub__(&self, other: PyRef<'_, Series>) -> PyResult<Series> {
        self.inner.sub(&other.inner).map(Series::wrap).map_err(err)
    }

    /// Concatenation product; no Kohno relations are applied.
    fn __mul__(&self, other: PyRef<'_, Series>) -> PyResult<Series> {
        self.inner.mul(&other.inner).map(Series::wrap).map_err(err)
    }

    fn __neg__(&self) -> Series {
        Series::wrap(self.inner.neg())
    }

    fn __eq__(&self, other: PyRef<'_, Series>) -> bool {
        self.inner == other.inner
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let body: Vec<String> = self.terms().into_iter().map(|(w, c)| format!("{c}*[{w}]")).collect();
        format!("Series({}, N={})", body.join(" + "), self.inner.truncation())
    }
}

fn strategy(name: &str) -> PyResult<RewriteStrategy> {
    match name {
        "left" => Ok(RewriteStrategy::LeftMultiplication),
        "leftmost" => Ok(RewriteStrategy::LeftmostDisorder),
        "rightmost" => Ok(RewriteStrategy::RightmostDisorder),
        _ => Err(PyKeyError::new_err(format!("unknown strategy {name:?}"))),
    }
}

/// Enveloping algebra of the Kohno Lie algebra on `n` points.
#[pyclass(name = "KohnoAlgebra", module = "liebraid_py", frozen)]
struct KohnoAlgebra {
    inner: CoreKohno,
}

#[pymethods]
impl KohnoAlgebra {
    #[new]
    fn new(n: usize) -> PyResult<KohnoAlgebra> {
        CoreKohno::new(n).map(|inner| KohnoAlgebra { inner }).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn generator(&self, i: usize, j: usize, truncation: usize) -> PyResult<Series> {
        self.inner.generator(i, j, truncation).map(Series::wrap).map_err(err)
    }

    #[pyo3(signature = (s, strategy = "left"))]
    fn normal_form(&self, s: PyRef<'_, Series>, strategy: &str) -> PyResult<Series> {
        self.inner
            .normal_form_with(&s.inner, self::strategy(strategy)?)
            .map(Series::wrap)
            .map_err(err)
    }

    /// Product in the quotient, returned in normal form.
    fn mul(&self, a: PyRef<'_, Series>, b: PyRef<'_, Series>) -> PyResult<Series> {
        self.inner.kohno_mul(&a.inner, &b.inner).map(Series::wrap).map_err(err)
    }

    /// Kills every `r_ij` with `i <= alpha` and shifts the remaining indices down.
    fn project(&self, s: PyRef<'_, Series>, alpha: usize) -> PyResult<Series> {
        self.inner
            .project_forget(&s.inner, alpha)
            .map(Series::wrap)
            .map_err(err)
    }

    /// Block factors `x_2, …, x_n` with `s = x_2 ⋯ x_n`.
    fn factorize(&self, s: PyRef<'_, Series>) -> PyResult<Vec<Series>> {
        Ok(self
            .inner
            .factorize(&s.inner)
            .map_err(err)?
            .into_iter()
            .map(Series::wrap)
            .collect())
    }

    fn product(&self, factors: Vec<PyRef<'_, Series>>) -> PyResult<Series> {
        let owned: Vec<CoreSeries> = factors.iter().map(|f| f.inner.clone()).collect();
        self.inner.product(&owned).map(Series::wrap).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("KohnoAlgebra(n={})", self.inner.n())
    }
}

/// Witt count of the degree-`k` part of the free Lie algebra on `m` letters.
#[pyfunction(name = "lie_dimension")]
fn py_lie_dimension(m: usize, k: usize) -> String {
    lie_dimension(m, k).to_string()
}

/// Degree-`k` dimension of the Kohno Lie algebra.
#[pyfunction(name = "kohno_lie_dimension")]
fn py_kohno_lie_dimension(n: usize, k: usize) -> String {
    kohno_lie_dimension(n, k).to_string()
}

/// Degree-`k` dimension of the enveloping algebra.
#[pyfunction(name = "universal_dimension")]
fn py_universal_dimension(n: usize, k: usize) -> String {
    universal_dimension(n, k).to_string()
}

#[pyfunction]
fn bch(x: PyRef<'_, Series>, y: PyRef<'_, Series>) -> PyResult<Series> {
    bch_series(&x.inner, &y.inner).map(Series::wrap).map_err(err)
}

#[pyfunction(name = "quotient_norm")]
fn py_quotient_norm<'py>(py: Python<'py>, s: PyRef<'_, Series>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &quotient_norm(&s.inner).map_err(err)?.to_json_value())
}

#[pyfunction]
fn growth<'py>(py: Python<'py>, s: PyRef<'_, Series>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &growth_classify(&s.inner).map_err(err)?.to_json_value())
}

/// Exact Kohno relation check for `sl2` mixed Casimirs.
#[pyfunction]
fn rep_check<'py>(py: Python<'py>, spins: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &check_kohno_relations(&sl2_rep(&spins)?).to_json_value())
}

/// Structure label `"so3^n"` or `"gl(m)"`.
#[pyfunction]
fn poisson_check<'py>(py: Python<'py>, structure: &str) -> PyResult<Bound<'py, PyAny>> {
    let s = Structure::parse(structure).map_err(err)?;
    to_dict(py, &verify_kohno_poisson(s).map_err(err)?.to_json_value())
}

#[pyfunction]
#[pyo3(signature = (spins, hbar = DEFAULT_HBAR, tol = DEFAULT_KZ_TOL, check_tol = 1e-6))]
fn braid_relations<'py>(
    py: Python<'py>,
    spins: Vec<String>,
    hbar: f64,
    tol: f64,
    check_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = sl2_rep(&spins)?;
    let m = py.detach(|| all_monodromies(&rep, hbar, tol)).map_err(err)?;
    to_dict(
        py,
        &check_pure_braid_relations(&m, rep.n(), check_tol)
            .map_err(err)?
            .to_json_value(),
    )
}

#[pyfunction]
#[pyo3(signature = (spins, r, s, hbar = DEFAULT_HBAR, tol = DEFAULT_KZ_TOL))]
fn leading_log<'py>(
    py: Python<'py>,
    spins: Vec<String>,
    r: usize,
    s: usize,
    hbar: f64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = sl2_rep(&spins)?;
    let report = py.detach(|| leading_log_check(&rep, r, s, hbar, tol)).map_err(err)?;
    to_dict(py, &report.to_json_value())
}

/// Integrates `hamiltonian` (e.g. `"D12+1/2*D34"`) from the given points.
#[pyfunction]
#[pyo3(signature = (points, hamiltonian, duration, step = DEFAULT_FLOW_STEP, record_every = 10))]
fn flow<'py>(
    py: Python<'py>,
    points: Vec<[f64; 3]>,
    hamiltonian: &str,
    duration: f64,
    step: f64,
    record_every: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let h = FlowHamiltonian::parse(hamiltonian).map_err(err)?;
    let config = SphereConfig::new(points);
    let result = py
        .detach(|| klyachko_flow(&config, &h, duration, step, record_every))
        .map_err(err)?;
    to_dict(py, &result.to_json_value())
}

/// Runs the command-line driver in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let argv = std::iter::once("liebraid".to_string()).chain(args);
    let code = liebraid::cli::run_with_io(argv, &mut out, &mut errs);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&errs).into_owned(),
    )
}

#[pymodule]
fn liebraid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Series>()?;
    m.add_class::<KohnoAlgebra>()?;
    m.add_function(wrap_pyfunction!(py_lie_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(py_kohno_lie_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(py_universal_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(bch, m)?)?;
    m.add_function(wrap_pyfunction!(py_quotient_norm, m)?)?;
    m.add_function(wrap_pyfunction!(growth, m)?)?;
    m.add_function(wrap_pyfunction!(rep_check, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_check, m)?)?;
    m.add_function(wrap_pyfunction!(braid_relations, m)?)?;
    m.add_function(wrap_pyfunction!(leading_log, m)?)?;
    m.add_function(wrap_pyfunction!(flow, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
