//! Python bindings for the `bidisk` toolkit.
//!
//! Matrices cross the boundary as nested lists of complex numbers (row
//! major). Trigonometric polynomials are dicts mapping `(j1, j2)` to a
//! coefficient.

use std::collections::HashMap;

use bidisk::besov::{self, ModulusOfContinuity};
use bidisk::bipoly::{sup_norm_torus, DEFAULT_OVERSAMPLE};
use bidisk::matnum::{self, MatrixOperator};
use bidisk::xp::{self, ConfigOverlay};
use bidisk::{funcalc, pairs, TrigPolynomial2D, Var, C64};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(pybidisk, BidiskError, PyValueError, "Raised for any toolkit error.");

fn err(e: bidisk::Error) -> PyErr {
    BidiskError::new_err(e.to_string())
}

type Rows = Vec<Vec<C64>>;

fn to_matrix(rows: &Rows) -> PyResult<MatrixOperator> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(BidiskError::new_err("ragged matrix rows"));
    }
    Ok(MatrixOperator::from_fn(n, m, |i, j| rows[i][j]))
}

fn to_rows(m: &MatrixOperator) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn to_trig(terms: HashMap<(i64, i64), C64>) -> TrigPolynomial2D {
    TrigPolynomial2D::from_terms(terms)
}

fn parse_var(var: u8) -> PyResult<Var> {
    match var {
        1 => Ok(Var::Z1),
        2 => Ok(Var::Z2),
        _ => Err(BidiskError::new_err(format!("variable must be 1 or 2, got {var}"))),
    }
}

fn parse_scheme(kind: &str) -> PyResult<pairs::SchemeKind> {
    serde_json::from_value(serde_json::Value::String(kind.to_string()))
        .map_err(|_| BidiskError::new_err(format!("unknown scheme `{kind}`")))
}

/// `f(z1, z2) = sum a[k][m] z1^k z2^m`.
#[pyclass(module = "pybidisk", frozen, skip_from_py_object)]
#[derive(Clone)]
struct BiPolynomial {
    inner: bidisk::BiPolynomial,
}

#[pymethods]
impl BiPolynomial {
    /// `coeffs[k][m]` is the coefficient of `z1^k z2^m`.
    #[new]
    fn new(coeffs: Rows) -> PyResult<Self> {
        let rows = coeffs.len();
        if rows == 0 {
            return Err(BidiskError::new_err("empty coefficient array"));
        }
        let cols = coeffs[0].len();
        if cols == 0 || coeffs.iter().any(|r| r.len() != cols) {
            return Err(BidiskError::new_err("coefficient rows must be non-empty and equal length"));
        }
        let flat = coeffs.into_iter().flatten().collect();
        let inner = bidisk::BiPolynomial::new(rows - 1, cols - 1, flat).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: bidisk::BiPolynomial::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(err)
    }

    #[getter]
    fn degrees(&self) -> (usize, usize) {
        (self.inner.deg1(), self.inner.deg2())
    }

    fn coeffs(&self) -> Rows {
        (0..=self.inner.deg1())
            .map(|k| (0..=self.inner.deg2()).map(|m| self.inner.coeff(k, m)).collect())
            .collect()
    }

    fn coeff(&self, k: usize, m: usize) -> C64 {
        self.inner.coeff(k, m)
    }

    fn evaluate(&self, z1: C64, z2: C64) -> C64 {
        self.inner.evaluate(z1, z2)
    }

    /// `j`-fold backward shift in variable 1 or 2.
    #[pyo3(signature = (var, j=1))]
    fn shift(&self, var: u8, j: usize) -> PyResult<Self> {
        Ok(Self { inner: self.inner.shift_power(parse_var(var)?, j) })
    }

    /// `(grid_max, l1_upper)`: a lower and an upper bound for the torus sup norm.
    #[pyo3(signature = (oversample=DEFAULT_OVERSAMPLE))]
    fn sup_norm(&self, oversample: usize) -> (f64, f64) {
        let s = sup_norm_torus(&self.inner, oversample.max(1));
        (s.grid_max, s.l1_upper)
    }

    fn __add__(&self, other: &Self) -> Self {
        Self { inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self { inner: self.inner.sub(&other.inner) }
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self { inner: self.inner.mul(&other.inner) }
    }

    fn __repr__(&self) -> String {
        format!("BiPolynomial(deg1={}, deg2={})", self.inner.deg1(), self.inner.deg2())
    }
}

/// Two commuting contractions of equal size.
#[pyclass(module = "pybidisk", frozen, skip_from_py_object)]
#[derive(Clone)]
struct ContractionPair {
    inner: bidisk::ContractionPair,
}

#[pymethods]
impl ContractionPair {
    #[new]
    fn new(t: Rows, r: Rows) -> PyResult<Self> {
        let inner = bidisk::ContractionPair::new(to_matrix(&t)?, to_matrix(&r)?).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn t(&self) -> Rows {
        to_rows(self.inner.t())
    }

    #[getter]
    fn r(&self) -> Rows {
        to_rows(self.inner.r())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `max(||T1 - T2||, ||R1 - R2||)`.
    fn distance(&self, other: &Self) -> PyResult<f64> {
        self.inner.distance(&other.inner).map_err(err)
    }

    /// `f(T, R)`.
    fn apply(&self, f: &BiPolynomial) -> Rows {
        to_rows(&funcalc::apply(&f.inner, &self.inner))
    }

    fn __repr__(&self) -> String {
        format!("ContractionPair(dim={})", self.inner.dim())
    }
}

/// A random pair together with the data it was built from, so that it can be
/// perturbed inside its own class.
#[pyclass(module = "pybidisk", frozen, skip_from_py_object)]
struct GeneratedPair {
    inner: pairs::GeneratedPair,
}

#[pymethods]
impl GeneratedPair {
    #[getter]
    fn pair(&self) -> ContractionPair {
        ContractionPair { inner: self.inner.pair.clone() }
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn perturb(&self, eps: f64, seed: u64) -> PyResult<GeneratedPair> {
        Ok(GeneratedPair { inner: pairs::perturb_pair(&self.inner, eps, seed).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("GeneratedPair(kind={:?}, dim={})", self.inner.kind.name(), self.inner.dim())
    }
}

#[pyfunction]
#[pyo3(signature = (kind, dim, seed, perturbation_scale=0.0))]
fn gen_pair(kind: &str, dim: usize, seed: u64, perturbation_scale: f64) -> PyResult<GeneratedPair> {
    let scheme = pairs::PairScheme { kind: parse_scheme(kind)?, dim, seed, perturbation_scale };
    Ok(GeneratedPair { inner: pairs::gen_pair(&scheme).map_err(err)? })
}

#[pyfunction]
fn commutation_defect(t: Rows, r: Rows) -> PyResult<f64> {
    pairs::commutation_defect(&to_matrix(&t)?, &to_matrix(&r)?).map_err(err)
}

#[pyfunction]
fn difference_direct(f: &BiPolynomial, pair1: &ContractionPair, pair2: &ContractionPair) -> PyResult<Rows> {
    Ok(to_rows(&funcalc::difference_direct(&f.inner, &pair1.inner, &pair2.inner).map_err(err)?))
}

#[pyfunction]
fn identity_rhs(f: &BiPolynomial, pair1: &ContractionPair, pair2: &ContractionPair) -> PyResult<Rows> {
    Ok(to_rows(&funcalc::identity_rhs(&f.inner, &pair1.inner, &pair2.inner).map_err(err)?))
}

#[pyfunction]
fn quasicommutator_direct(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    q: Rows,
) -> PyResult<Rows> {
    let q = to_matrix(&q)?;
    Ok(to_rows(&funcalc::quasicommutator_direct(&f.inner, &pair1.inner, &pair2.inner, &q).map_err(err)?))
}

#[pyfunction]
fn quasicommutator_identity_rhs(
    f: &BiPolynomial,
    pair1: &ContractionPair,
    pair2: &ContractionPair,
    q: Rows,
) -> PyResult<Rows> {
    let q = to_matrix(&q)?;
    let m = funcalc::quasicommutator_identity_rhs(&f.inner, &pair1.inner, &pair2.inner, &q).map_err(err)?;
    Ok(to_rows(&m))
}

/// `||f(T, R)|| - sup |f|` over the torus grid.
#[pyfunction]
fn von_neumann_gap(f: &BiPolynomial, pair: &ContractionPair) -> f64 {
    funcalc::von_neumann_gap(&f.inner, &pair.inner)
}

#[pyfunction]
fn singular_values(m: Rows) -> PyResult<Vec<f64>> {
    Ok(matnum::singular_values(&to_matrix(&m)?).values().to_vec())
}

/// Schatten `p`-norm; `p = float("inf")` gives the operator norm.
#[pyfunction]
fn schatten_norm(m: Rows, p: f64) -> PyResult<f64> {
    matnum::schatten_norm(&to_matrix(&m)?, p).map_err(err)
}

#[pyfunction]
fn op_norm(m: Rows) -> PyResult<f64> {
    Ok(matnum::op_norm(&to_matrix(&m)?))
}

#[pyfunction]
fn decay_fit(singular_values: Vec<f64>, exponent: f64) -> PyResult<f64> {
    let spec = matnum::SingularSpectrum::new(singular_values).map_err(err)?;
    matnum::decay_fit(&spec, exponent).map_err(err)
}

/// `omega_*(s)` for the power modulus `t^alpha`; `quadrature=True` uses the
/// dyadic quadrature instead of the closed form.
#[pyfunction]
#[pyo3(signature = (alpha, s, quadrature=false))]
fn omega_star(alpha: f64, s: f64, quadrature: bool) -> PyResult<f64> {
    let omega = ModulusOfContinuity::power(alpha).map_err(err)?;
    if quadrature {
        besov::omega_star_quadrature(&omega, s).map_err(err)
    } else {
        besov::omega_star(&omega, s).map_err(err)
    }
}

#[pyfunction]
fn lp_block(terms: HashMap<(i64, i64), C64>, n: u32) -> HashMap<(i64, i64), C64> {
    besov::lp_block(&to_trig(terms), n).terms().into_iter().collect()
}

#[pyfunction]
fn besov_norm(terms: HashMap<(i64, i64), C64>, s: f64, p: f64, q: f64) -> PyResult<f64> {
    bidisk::LittlewoodPaley::default().besov_norm(&to_trig(terms), s, p, q).map_err(err)
}

#[pyfunction]
fn holder_norm(terms: HashMap<(i64, i64), C64>, alpha: f64) -> PyResult<f64> {
    bidisk::LittlewoodPaley::default().holder_norm(&to_trig(terms), alpha).map_err(err)
}

#[pyfunction]
fn lipschitz_besov_norm(terms: HashMap<(i64, i64), C64>) -> PyResult<f64> {
    bidisk::LittlewoodPaley::default().lipschitz_besov_norm(&to_trig(terms)).map_err(err)
}

#[pyfunction]
fn list_suites() -> Vec<&'static str> {
    xp::suite_names()
}

/// Runs a suite (or `"all"`) and returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (suite, config=None, seed=None, trials=None))]
fn run_suite(py: Python<'_>, suite: &str, config: Option<&str>, seed: Option<u64>, trials: Option<usize>) -> PyResult<String> {
    let overlay = match config {
        Some(text) => ConfigOverlay::from_json(text).map_err(err)?,
        None => ConfigOverlay::default(),
    };
    let report = py.detach(|| xp::run_named(suite, &overlay, seed, trials)).map_err(err)?;
    serde_json::to_string(&report).map_err(|e| err(e.into()))
}

#[pymodule]
fn pybidisk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BidiskError", m.py().get_type::<BidiskError>())?;
    m.add_class::<BiPolynomial>()?;
    m.add_class::<ContractionPair>()?;
    m.add_class::<GeneratedPair>()?;
    m.add_function(wrap_pyfunction!(gen_pair, m)?)?;
    m.add_function(wrap_pyfunction!(commutation_defect, m)?)?;
    m.add_function(wrap_pyfunction!(difference_direct, m)?)?;
    m.add_function(wrap_pyfunction!(identity_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(quasicommutator_direct, m)?)?;
    m.add_function(wrap_pyfunction!(quasicommutator_identity_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_gap, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(schatten_norm, m)?)?;
    m.add_function(wrap_pyfunction!(op_norm, m)?)?;
    m.add_function(wrap_pyfunction!(decay_fit, m)?)?;
    m.add_function(wrap_pyfunction!(omega_star, m)?)?;
    m.add_function(wrap_pyfunction!(lp_block, m)?)?;
    m.add_function(wrap_pyfunction!(besov_norm, m)?)?;
    m.add_function(wrap_pyfunction!(holder_norm, m)?)?;
    m.add_function(wrap_pyfunction!(lipschitz_besov_norm, m)?)?;
    m.add_function(wrap_pyfunction!(list_suites, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
