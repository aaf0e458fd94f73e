//! Python module `spectra`.
//!
//! Polynomials and pencils are classes; the solver-backed queries return
//! plain dicts (the same JSON the CLI prints).

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyFloat, PyInt, PyString};
use serde::Serialize;

use spectra_core::faces2d::{face_of_point_2d, is_exposed_2d, Faces2dConfig, SetDescription2D};
use spectra_core::figures::{example1_figure, example2_figure};
use spectra_core::lasserre::{self, CertTolerances, Generators};
use spectra_core::linmat::{self, LinMatPoly};
use spectra_core::poly::rational::{from_f64, int, parse_rational};
use spectra_core::reproduce::{reproduce as run_reproduce, ReproduceConfig};
use spectra_core::rigidconv;
use spectra_core::sdp::SolverConfig;
use spectra_core::{MPoly, Rational};

create_exception!(spectra, SpectraError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    SpectraError::new_err(e.to_string())
}

/// `"1/3"`, `2` or `0.5` (floats are converted exactly).
fn rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = v.cast::<PyString>() {
        let s = s.to_str()?;
        return parse_rational(s).ok_or_else(|| err(format!("invalid rational {s:?}")));
    }
    if v.is_instance_of::<PyInt>() {
        return Ok(int(v.extract::<i64>()?));
    }
    if v.is_instance_of::<PyFloat>() {
        let f: f64 = v.extract()?;
        return from_f64(f).ok_or_else(|| err(format!("non-finite coordinate {f}")));
    }
    Err(err("coordinates must be str, int or float"))
}

fn point(x: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    x.try_iter()?.map(|v| rational(&v?)).collect()
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (s,))
}

fn solver(feas_tol: f64, refute_tol: f64) -> PyResult<SolverConfig> {
    let cfg = SolverConfig {
        feas_tol,
        refute_tol,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn generators(gens: Vec<String>, n: usize) -> PyResult<Generators> {
    let polys = gens.iter().map(|g| MPoly::parse(g, n).map_err(err)).collect::<PyResult<_>>()?;
    Generators::new(n, polys).map_err(err)
}

/// Polynomial with rational coefficients in `t1..tn`.
#[pyclass(name = "Poly", module = "spectra", frozen)]
struct PyPoly(MPoly);

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (src, nvars=None))]
    fn new(src: &str, nvars: Option<usize>) -> PyResult<Self> {
        let p = match nvars {
            Some(n) => MPoly::parse(src, n),
            None => MPoly::parse_auto(src),
        };
        p.map(PyPoly).map_err(err)
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    /// Total degree, `None` for the zero polynomial.
    #[getter]
    fn degree(&self) -> Option<u32> {
        self.0.degree().finite()
    }

    /// Exact value as a rational string.
    fn eval(&self, x: &Bound<'_, PyAny>) -> PyResult<String> {
        self.0.eval(&point(x)?).map(|v| v.to_string()).map_err(err)
    }

    fn eval_f64(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.0.nvars() {
            return Err(err(format!("expected {} coordinates, got {}", self.0.nvars(), x.len())));
        }
        Ok(self.0.eval_f64(&x))
    }

    /// `p^(k)` with respect to the origin.
    fn renegar(&self, k: u32) -> PyResult<PyPoly> {
        rigidconv::renegar_derivative(&self.0, k).map(PyPoly).map_err(err)
    }

    fn mult(&self, x: &Bound<'_, PyAny>) -> PyResult<u32> {
        rigidconv::mult(&self.0, &point(x)?).map_err(err)
    }

    /// Sampled real-zero check at `e`; returns the full report.
    #[pyo3(signature = (e, directions=64))]
    fn check_rz<'py>(&self, py: Python<'py>, e: &Bound<'py, PyAny>, directions: usize) -> PyResult<Bound<'py, PyAny>> {
        let e = point(e)?;
        let dirs = rigidconv::default_directions(e.len(), directions);
        to_py(py, &rigidconv::check_rz(&self.0, &e, &dirs).map_err(err)?)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}', nvars={})", self.0, self.0.nvars())
    }

    fn __eq__(&self, other: &PyPoly) -> bool {
        self.0 == other.0
    }
}

/// Symmetric linear matrix polynomial `A0 + t1 A1 + ... + tn An`.
#[pyclass(name = "Pencil", module = "spectra", frozen)]
struct PyPencil(LinMatPoly);

#[pymethods]
impl PyPencil {
    /// From JSON `{"k", "n", "A": [A0, A1, ...]}` with int or rational-string entries.
    #[staticmethod]
    fn from_json(src: &str) -> PyResult<Self> {
        LinMatPoly::from_json(src).map(PyPencil).map_err(err)
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    /// `[c0, ..., c_{k-1}]` of `det(A(t) - sI) = (-s)^k + sum c_i s^i`.
    fn char_poly_coeffs(&self) -> Vec<PyPoly> {
        linmat::char_poly_coeffs(&self.0).c.into_iter().map(PyPoly).collect()
    }

    fn det(&self) -> PyPoly {
        PyPoly(linmat::det_poly(&self.0))
    }

    fn contains(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        linmat::spectrahedron_member(&self.0, &point(x)?).map_err(err)
    }

    /// Face descriptor of a member point, with its exposing functional when proper.
    fn face<'py>(&self, py: Python<'py>, x: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let face = linmat::face_of_point(&self.0, &point(x)?).map_err(err)?;
        let out = to_py(py, &face)?;
        if face.status == linmat::FaceStatus::Proper {
            let ell = linmat::exposing_functional(&face, &self.0).map_err(err)?;
            out.set_item("exposing_functional", ell.to_string())?;
        }
        Ok(out)
    }
}

/// Is `ell` in the truncated quadratic module `QM(gens)_d`?
#[pyfunction]
#[pyo3(signature = (gens, d, ell, n=2, feas_tol=1e-7, refute_tol=1e-6))]
fn qm_member<'py>(
    py: Python<'py>,
    gens: Vec<String>,
    d: u32,
    ell: &str,
    n: usize,
    feas_tol: f64,
    refute_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let g = generators(gens, n)?;
    let ell = MPoly::parse(ell, n).map_err(err)?;
    let tol = CertTolerances {
        refute_tol,
        ..CertTolerances::default()
    };
    let out = py.detach(|| lasserre::qm_member(&g, d, &ell, &solver(feas_tol, refute_tol)?, &tol).map_err(err))?;
    to_py(py, &out)
}

/// Is `x` in the moment relaxation `S(gens)_d`?
#[pyfunction]
#[pyo3(signature = (gens, d, x, feas_tol=1e-7, refute_tol=1e-6))]
fn relaxation_member<'py>(
    py: Python<'py>,
    gens: Vec<String>,
    d: u32,
    x: Vec<f64>,
    feas_tol: f64,
    refute_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let g = generators(gens, x.len())?;
    let cfg = solver(feas_tol, refute_tol)?;
    let out = py.detach(|| lasserre::relaxation_member(&g, d, &x, &cfg).map_err(err))?;
    to_py(py, &out)
}

/// Halves `a` from 1/2 until the tangent `t2 - 3a^2 t1 + 2a^3` leaves `QM(gens)_d`.
#[pyfunction]
#[pyo3(signature = (gens, d))]
fn halving_probe<'py>(py: Python<'py>, gens: Vec<String>, d: u32) -> PyResult<Bound<'py, PyAny>> {
    let g = generators(gens, 2)?;
    let out = py.detach(|| {
        lasserre::halving_probe(&g, d, &SolverConfig::default(), &CertTolerances::default()).map_err(err)
    })?;
    to_py(py, &out)
}

/// Face of `x` in the planar set `S(gens)` and whether it is exposed.
#[pyfunction]
#[pyo3(signature = (gens, interior_point, bbox, x, rays=4096))]
fn face_2d<'py>(
    py: Python<'py>,
    gens: Vec<String>,
    interior_point: &Bound<'py, PyAny>,
    bbox: [[f64; 2]; 2],
    x: &Bound<'py, PyAny>,
    rays: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let polys = gens.iter().map(|g| MPoly::parse(g, 2).map_err(err)).collect::<PyResult<Vec<_>>>()?;
    let ip = point(interior_point)?;
    let [a, b]: [Rational; 2] = ip.try_into().map_err(|_| err("interior_point needs two coordinates"))?;
    let set = SetDescription2D::new(polys, [a, b], bbox).map_err(err)?;
    let x = point(x)?;
    let cfg = Faces2dConfig {
        rays,
        ..Faces2dConfig::default()
    };
    let report = py.detach(|| {
        let face = face_of_point_2d(&set, &x, &cfg).map_err(err)?;
        Ok::<_, PyErr>(is_exposed_2d(&set, &face, &cfg))
    })?;
    to_py(py, &report)
}

/// Runs the regression criteria; `skip` takes group names or `"c3"`-style ids.
#[pyfunction]
#[pyo3(signature = (skip=Vec::new()))]
fn reproduce<'py>(py: Python<'py>, skip: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = ReproduceConfig {
        skip,
        ..ReproduceConfig::default()
    };
    let report = py.detach(|| run_reproduce(&cfg));
    to_py(py, &report)
}

/// SVG source of figure 1 or 2.
#[pyfunction]
fn figure(which: u8) -> PyResult<String> {
    let cfg = Faces2dConfig::default();
    match which {
        1 => Ok(example1_figure(&cfg)),
        2 => Ok(example2_figure(&cfg)),
        _ => Err(err("figure must be 1 or 2")),
    }
}

#[pymodule]
fn spectra(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SpectraError", m.py().get_type::<SpectraError>())?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyPencil>()?;
    m.add_function(wrap_pyfunction!(qm_member, m)?)?;
    m.add_function(wrap_pyfunction!(relaxation_member, m)?)?;
    m.add_function(wrap_pyfunction!(halving_probe, m)?)?;
    m.add_function(wrap_pyfunction!(face_2d, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    Ok(())
}
