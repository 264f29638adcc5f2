use latcrit::criterion::{self, FormSet, SearchSpace};
use latcrit::decomposition;
use latcrit::embedding;
use latcrit::enumeration;
use latcrit::reduction::lll_reduce;
use latcrit::{suite, GramMatrix, LatticeError};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: LatticeError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.numer().clone(), q.denom().clone()))
}

/// Gram matrix of an integral lattice in a fixed basis.
#[pyclass(name = "Gram", module = "pylatcrit", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
struct Gram(GramMatrix);

#[pymethods]
impl Gram {
    #[new]
    fn new(rows: Vec<Vec<i64>>) -> PyResult<Self> {
        GramMatrix::from_rows(&rows).map(Gram).map_err(err)
    }

    /// Build from an expression such as `"E8+2*Zn(3)"`.
    #[staticmethod]
    fn parse(expr: &str) -> PyResult<Self> {
        latcrit::parse_expr(expr).map(Gram).map_err(err)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        GramMatrix::from_text(text).map(Gram).map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<i64>> {
        self.0.rows()
    }

    fn det(&self) -> BigInt {
        self.0.det()
    }

    fn inner(&self, x: Vec<i64>, y: Vec<i64>) -> PyResult<i128> {
        if x.len() != self.0.rank() || y.len() != self.0.rank() {
            return Err(PyValueError::new_err("vector length does not match the rank"));
        }
        Ok(self.0.inner(&x, &y))
    }

    /// Inverse Gram matrix, the Gram of the dual lattice, as fractions.
    fn dual<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let inv = self.0.dual_gram();
        let n = self.0.rank();
        (0..n).map(|i| (0..n).map(|j| fraction(py, &inv.get(i, j))).collect()).collect()
    }

    fn min_norm(&self) -> i64 {
        enumeration::min_norm(&self.0)
    }

    fn min_dual_norm<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &enumeration::min_dual_norm(&self.0))
    }

    /// Counts of vectors of norm 1..=up_to, one of each `±v` pair.
    fn norm_counts(&self, up_to: i64) -> Vec<usize> {
        enumeration::norm_counts(&self.0, up_to)
    }

    /// `(coords, norm)` for every nonzero vector of norm at most `bound`, up to sign.
    fn short_vectors(&self, bound: i64) -> Vec<(Vec<i64>, i64)> {
        enumeration::short_vectors_up_to(&self.0, bound).vectors.into_iter().map(|v| (v.coords, v.norm)).collect()
    }

    fn direct_sum(&self, other: &Gram) -> Gram {
        Gram(self.0.direct_sum(&other.0))
    }

    fn scale(&self, m: i64) -> PyResult<Gram> {
        self.0.scale(m).map(Gram).map_err(err)
    }

    /// LLL-reduced Gram matrix and the basis change producing it.
    fn lll(&self) -> (Gram, Vec<Vec<i64>>) {
        let r = lll_reduce(&self.0);
        (Gram(r.gram), r.transform)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Gram({:?})", self.0.rows())
    }
}

/// Matrix whose columns embed `l` in `q`, or None.
#[pyfunction]
fn represents(q: &Gram, l: &Gram) -> Option<Vec<Vec<i64>>> {
    embedding::represents(&q.0, &l.0).map(|e| e.map)
}

#[pyfunction]
fn is_isometric(a: &Gram, b: &Gram) -> Option<Vec<Vec<i64>>> {
    embedding::is_isometric(&a.0, &b.0).map(|e| e.map)
}

/// Orthogonal complement of some copy of `l` inside `q`, or None if `q` does not represent `l`.
#[pyfunction]
fn complement(q: &Gram, l: &Gram) -> PyResult<Option<Gram>> {
    match embedding::represents(&q.0, &l.0) {
        None => Ok(None),
        Some(e) => embedding::orthogonal_complement(&e).map(|g| Some(Gram(g))).map_err(err),
    }
}

#[pyfunction]
fn indecomposable_summands(g: &Gram) -> Vec<Gram> {
    decomposition::indecomposable_summands(&g.0).summands.into_iter().map(Gram).collect()
}

fn space(rank: usize, max_diag: i64, max_det: Option<i64>) -> PyResult<SearchSpace> {
    let s = SearchSpace::new(rank, max_diag).map_err(err)?;
    match max_det {
        Some(d) => s.with_max_det(d).map_err(err),
        None => Ok(s),
    }
}

/// One representative per isometry class of the search space.
#[pyfunction]
#[pyo3(signature = (rank, max_diag, max_det=None))]
fn enumerate_classes(rank: usize, max_diag: i64, max_det: Option<i64>) -> PyResult<Vec<Gram>> {
    Ok(criterion::enumerate_classes(&space(rank, max_diag, max_det)?).into_iter().map(Gram).collect())
}

#[pyfunction]
#[pyo3(signature = (a, candidates, rank, max_diag, max_det=None))]
fn check_criterion<'py>(
    py: Python<'py>,
    a: &Gram,
    candidates: Vec<Gram>,
    rank: usize,
    max_diag: i64,
    max_det: Option<i64>,
) -> PyResult<Bound<'py, PyDict>> {
    let set = FormSet::new(candidates.into_iter().map(|g| g.0).collect(), "").map_err(err)?;
    let r = criterion::check_criterion(&a.0, &set, &space(rank, max_diag, max_det)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("verified", r.verified())?;
    out.set_item("classes_checked", r.classes_checked)?;
    match r.counterexample {
        None => out.set_item("counterexample", py.None())?,
        Some(cx) => {
            let d = PyDict::new(py);
            d.set_item("ordinal", cx.ordinal)?;
            d.set_item("q", Gram(cx.q))?;
            d.set_item("missing", Gram(cx.missing))?;
            d.set_item("certificates", cx.certificates)?;
            out.set_item("counterexample", d)?;
        }
    }
    Ok(out)
}

/// Run the built-in checks and return `(id, name, passed)` for each.
#[pyfunction]
fn verify_paper() -> Vec<(usize, &'static str, bool)> {
    suite::run_all().into_iter().map(|o| (o.id, o.name, o.passed)).collect()
}

#[pyfunction]
fn catalog(name: &str) -> PyResult<Gram> {
    latcrit::catalog(name).map(Gram).map_err(err)
}

#[pymodule]
fn pylatcrit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Gram>()?;
    m.add_function(wrap_pyfunction!(represents, m)?)?;
    m.add_function(wrap_pyfunction!(is_isometric, m)?)?;
    m.add_function(wrap_pyfunction!(complement, m)?)?;
    m.add_function(wrap_pyfunction!(indecomposable_summands, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    m.add_function(wrap_pyfunction!(check_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    Ok(())
}
