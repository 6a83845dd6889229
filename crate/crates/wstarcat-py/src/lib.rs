//! Python bindings: the main objects (algebras, modules, bimodules and
//! their maps) and operations (fusion both ways, the Hilb-valued inner
//! product, cones, audits, the CLI entry point).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wstarcat::algebra::MultiMatrixAlgebra;
use wstarcat::bimod::{self, Bimodule, BimoduleMap};
use wstarcat::funcat::{self, Functor};
use wstarcat::linalg::{CMatrix, Tolerance, C64};
use wstarcat::modcat::{self, ModuleObject};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn tol(eps: f64) -> PyResult<Tolerance> {
    if eps > 0.0 {
        Ok(Tolerance::new(eps))
    } else {
        Err(PyValueError::new_err("tolerance must be positive"))
    }
}

fn matrix_from(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    if rows.iter().any(|x| x.len() != c) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    let mut m = CMatrix::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m)
}

fn matrix_to(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)]).collect())
        .collect()
}

#[pyclass(name = "Algebra", frozen, from_py_object)]
#[derive(Clone)]
struct PyAlgebra {
    inner: MultiMatrixAlgebra,
}

#[pymethods]
impl PyAlgebra {
    #[new]
    fn new(blocks: Vec<usize>) -> PyResult<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(PyValueError::new_err("block sizes must be positive"));
        }
        Ok(Self { inner: MultiMatrixAlgebra::new(blocks) })
    }

    #[getter]
    fn blocks(&self) -> Vec<usize> {
        self.inner.blocks().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?})", self.inner.blocks())
    }
}

#[pyclass(name = "Module", frozen, from_py_object)]
#[derive(Clone)]
struct PyModule_ {
    inner: ModuleObject,
}

#[pymethods]
impl PyModule_ {
    #[new]
    fn new(algebra: PyAlgebra, mult: Vec<usize>) -> PyResult<Self> {
        if mult.len() != algebra.inner.num_blocks() {
            return Err(PyValueError::new_err(
                "multiplicity length must match block count",
            ));
        }
        Ok(Self { inner: ModuleObject::new(algebra.inner, mult) })
    }

    #[getter]
    fn mult(&self) -> Vec<usize> {
        self.inner.mult.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn support(&self) -> Vec<usize> {
        self.inner.support()
    }

    fn __repr__(&self) -> String {
        format!("Module({:?}, {:?})", self.inner.algebra.blocks(), self.inner.mult)
    }
}

#[pyclass(name = "Bimodule", frozen, from_py_object)]
#[derive(Clone)]
struct PyBimodule {
    inner: Bimodule,
}

#[pymethods]
impl PyBimodule {
    #[new]
    fn new(left: PyAlgebra, right: PyAlgebra, mult: Vec<Vec<usize>>) -> PyResult<Self> {
        if mult.len() != left.inner.num_blocks()
            || mult.iter().any(|r| r.len() != right.inner.num_blocks())
        {
            return Err(PyValueError::new_err(
                "multiplicity grid must be left-blocks x right-blocks",
            ));
        }
        Ok(Self { inner: Bimodule::new(left.inner, right.inner, mult) })
    }

    #[staticmethod]
    fn l2(algebra: PyAlgebra) -> Self {
        Self { inner: Bimodule::l2(&algebra.inner) }
    }

    #[getter]
    fn mult(&self) -> Vec<Vec<usize>> {
        self.inner.mult.clone()
    }

    #[getter]
    fn left(&self) -> PyAlgebra {
        PyAlgebra { inner: self.inner.left.clone() }
    }

    #[getter]
    fn right(&self) -> PyAlgebra {
        PyAlgebra { inner: self.inner.right.clone() }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn conjugate(&self) -> Self {
        Self { inner: bimod::conjugate(&self.inner) }
    }

    fn identity_map(&self) -> PyBimoduleMap {
        PyBimoduleMap { inner: self.inner.identity_map() }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Bimodule({:?}, {:?}, {:?})",
            self.inner.left.blocks(),
            self.inner.right.blocks(),
            self.inner.mult
        )
    }
}

#[pyclass(name = "BimoduleMap", frozen, from_py_object)]
#[derive(Clone)]
struct PyBimoduleMap {
    inner: BimoduleMap,
}

#[pymethods]
impl PyBimoduleMap {
    #[new]
    fn new(
        source: PyBimodule,
        target: PyBimodule,
        cells: Vec<Vec<Vec<Vec<C64>>>>,
    ) -> PyResult<Self> {
        let grid: PyResult<Vec<Vec<CMatrix>>> = cells
            .into_iter()
            .map(|row| row.into_iter().map(matrix_from).collect())
            .collect();
        let inner = BimoduleMap::new(source.inner, target.inner, grid?).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn cells(&self) -> Vec<Vec<Vec<Vec<C64>>>> {
        self.inner
            .cells
            .iter()
            .map(|row| row.iter().map(matrix_to).collect())
            .collect()
    }

    fn compose(&self, first: &PyBimoduleMap) -> PyResult<Self> {
        if first.inner.target != self.inner.source {
            return Err(PyValueError::new_err("maps are not composable"));
        }
        Ok(Self { inner: self.inner.compose(&first.inner) })
    }

    fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    fn conjugate(&self) -> Self {
        Self { inner: bimod::conjugate_map(&self.inner) }
    }

    #[pyo3(signature = (eps = 1e-9))]
    fn is_unitary(&self, eps: f64) -> PyResult<bool> {
        Ok(self.inner.is_unitary(tol(eps)?))
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }
}

/// Connes fusion by multiplicity contraction.
#[pyfunction]
fn fuse(x: &PyBimodule, y: &PyBimodule) -> PyResult<PyBimodule> {
    Ok(PyBimodule { inner: bimod::fuse(&x.inner, &y.inner).map_err(err)? })
}

/// The definitional fusion oracle: (dimension, residual, unitary?).
#[pyfunction]
#[pyo3(signature = (x, y, eps = 1e-9, cap = bimod::DEFAULT_ORACLE_CAP))]
fn fuse_oracle(
    x: &PyBimodule,
    y: &PyBimodule,
    eps: f64,
    cap: usize,
) -> PyResult<(usize, f64, bool)> {
    let t = tol(eps)?;
    let w = bimod::fuse_oracle(&x.inner, &y.inner, t, cap).map_err(err)?;
    Ok((w.dimension, w.residual, w.is_unitary(t)))
}

#[pyfunction]
fn fuse_map(f: &PyBimoduleMap, g: &PyBimoduleMap) -> PyResult<PyBimoduleMap> {
    Ok(PyBimoduleMap { inner: bimod::fuse_map(&f.inner, &g.inner).map_err(err)? })
}

#[pyfunction]
fn associator(x: &PyBimodule, y: &PyBimodule, z: &PyBimodule) -> PyResult<PyBimoduleMap> {
    Ok(PyBimoduleMap { inner: bimod::associator(&x.inner, &y.inner, &z.inner).map_err(err)? })
}

/// The Hilb-valued inner product computed both ways:
/// (dimension, corner unitary residual, fusion unitary residual).
#[pyfunction]
#[pyo3(signature = (a, b, eps = 1e-9))]
fn inner_product(a: &PyModule_, b: &PyModule_, eps: f64) -> PyResult<(usize, f64, f64)> {
    let t = tol(eps)?;
    let (d1, u1) = funcat::hilb_inner_via_corner(&a.inner, &b.inner, t).map_err(err)?;
    let (d2, u2) = funcat::hilb_inner_via_fusion(&a.inner, &b.inner).map_err(err)?;
    if d1 != d2 {
        return Err(PyRuntimeError::new_err(format!(
            "routes disagree: {d1} vs {d2}"
        )));
    }
    let res = |u: &CMatrix| u.mul(&u.adjoint()).sub(&CMatrix::identity(u.rows)).norm();
    Ok((d1, res(&u1), res(&u2)))
}

/// Vertical cone membership (blockwise positivity) of an endo-map.
#[pyfunction]
#[pyo3(signature = (eta, eps = 1e-9))]
fn vertical_cone_member(eta: &PyBimoduleMap, eps: f64) -> PyResult<bool> {
    funcat::vertical_cone_member(&eta.inner, tol(eps)?).map_err(err)
}

/// Horizontal cone membership by the Choi certificate:
/// (member?, minimum Choi eigenvalue).
#[pyfunction]
#[pyo3(signature = (theta, x, y, eps = 1e-9))]
fn horizontal_cone_member(
    theta: &PyBimoduleMap,
    x: &PyBimodule,
    y: &PyBimodule,
    eps: f64,
) -> PyResult<(bool, f64)> {
    let cert =
        funcat::horizontal_cone_member(&theta.inner, &x.inner, &y.inner, tol(eps)?).map_err(err)?;
    let min = cert
        .min_eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok((cert.positive, if min.is_finite() { min } else { 0.0 }))
}

/// Orthogonalize a generator list; returns (generator mults, remainder).
#[pyfunction]
fn gram_schmidt(generators: Vec<PyModule_>) -> PyResult<(Vec<Vec<usize>>, Vec<usize>)> {
    let gens: Vec<ModuleObject> = generators.into_iter().map(|g| g.inner).collect();
    let gs = modcat::gram_schmidt(&gens).map_err(err)?;
    Ok((gs.generators.iter().map(|g| g.mult.clone()).collect(), gs.remainder))
}

fn report_to_py(lines: Vec<funcat::ReportLine>) -> Vec<(String, f64, bool)> {
    lines.into_iter().map(|l| (l.id, l.residual, l.pass)).collect()
}

/// Bi-involutive coherence audit on a composable bimodule triple.
#[pyfunction]
#[pyo3(signature = (x, y, z, eps = 1e-9))]
fn biinvolutive_audit(
    x: &PyBimodule,
    y: &PyBimodule,
    z: &PyBimodule,
    eps: f64,
) -> PyResult<Vec<(String, f64, bool)>> {
    funcat::biinvolutive_audit(&x.inner, &y.inner, &z.inner, tol(eps)?)
        .map(report_to_py)
        .map_err(err)
}

/// phi/nu coherences plus the adjunction audit for a composable pair.
#[pyfunction]
#[pyo3(signature = (g, f, seed = 0, eps = 1e-9))]
fn coherence_audit(
    g: &PyBimodule,
    f: &PyBimodule,
    seed: u64,
    eps: f64,
) -> PyResult<Vec<(String, f64, bool)>> {
    if g.inner.right != f.inner.left {
        return Err(PyValueError::new_err("functors are not composable"));
    }
    let t = tol(eps)?;
    let mut lines = funcat::coherence_audit(&Functor::new(g.inner.clone()), &Functor::new(f.inner.clone()), seed, t);
    lines.extend(funcat::adjunction_audit(&Functor::new(f.inner.clone()), seed, t).map_err(err)?);
    Ok(report_to_py(lines))
}

/// Dictionary round-trip audit for an algebra triple.
#[pyfunction]
#[pyo3(signature = (a, b, c, seed = 0, eps = 1e-9))]
fn vn2_audit(
    a: &PyAlgebra,
    b: &PyAlgebra,
    c: &PyAlgebra,
    seed: u64,
    eps: f64,
) -> PyResult<Vec<(String, f64, bool)>> {
    funcat::vn2_roundtrip_audit(&a.inner, &b.inner, &c.inner, seed, tol(eps)?)
        .map(report_to_py)
        .map_err(err)
}

/// The CLI entry point: returns (exit code, output text).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    wstarcat::cli::run(&args, None)
}

#[pymodule]
fn wstarcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyModule_>()?;
    m.add_class::<PyBimodule>()?;
    m.add_class::<PyBimoduleMap>()?;
    m.add_function(wrap_pyfunction!(fuse, m)?)?;
    m.add_function(wrap_pyfunction!(fuse_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(fuse_map, m)?)?;
    m.add_function(wrap_pyfunction!(associator, m)?)?;
    m.add_function(wrap_pyfunction!(inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(vertical_cone_member, m)?)?;
    m.add_function(wrap_pyfunction!(horizontal_cone_member, m)?)?;
    m.add_function(wrap_pyfunction!(gram_schmidt, m)?)?;
    m.add_function(wrap_pyfunction!(biinvolutive_audit, m)?)?;
    m.add_function(wrap_pyfunction!(coherence_audit, m)?)?;
    m.add_function(wrap_pyfunction!(vn2_audit, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
