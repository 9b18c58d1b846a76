use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use digrow::growth::{self, Classification};
use digrow::presentation::{self, Mode};
use digrow::{Error, ScalarKind};

fn err(e: Error) -> PyErr {
    match e {
        Error::ResourceCap(_) => PyMemoryError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn mode(tag: &str) -> PyResult<Mode> {
    match tag {
        "dialgebra" => Ok(Mode::Dialgebra),
        "assoc" | "associative" => Ok(Mode::Associative),
        _ => Err(PyValueError::new_err(format!("unknown mode {tag:?}"))),
    }
}

fn field(tag: &str) -> PyResult<ScalarKind> {
    if tag == "Q" {
        return Ok(ScalarKind::Rational);
    }
    let p = tag
        .strip_prefix("GF(")
        .and_then(|t| t.strip_suffix(')'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| PyValueError::new_err(format!("field must be \"Q\" or \"GF(p)\", got {tag:?}")))?;
    ScalarKind::prime(p).map_err(err)
}

#[pyclass(name = "Alphabet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAlphabet(digrow::Alphabet);

#[pymethods]
impl PyAlphabet {
    #[new]
    fn new(names: Vec<String>) -> PyResult<Self> {
        digrow::Alphabet::new(names).map(PyAlphabet).map_err(err)
    }

    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Parses `[a b]@2`.
    fn disequence(&self, text: &str) -> PyResult<PyDisequence> {
        let d = self.0.parse_disequence(text).map_err(err)?;
        Ok(PyDisequence { d, alphabet: self.0.clone() })
    }

    #[pyo3(signature = (text, field = "Q"))]
    fn element(&self, text: &str, field: &str) -> PyResult<PyElement> {
        digrow::parse_element(&self.0, self::field(field)?, text)
            .map(PyElement)
            .map_err(err)
    }

    fn disequences_of_length(&self, len: usize) -> Vec<PyDisequence> {
        self.0
            .disequences_of_length(len)
            .into_iter()
            .map(|d| PyDisequence { d, alphabet: self.0.clone() })
            .collect()
    }
}

#[pyclass(name = "Disequence", frozen, eq, ord, hash, skip_from_py_object)]
#[derive(Clone)]
struct PyDisequence {
    d: digrow::Disequence,
    alphabet: digrow::Alphabet,
}

impl PartialEq for PyDisequence {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl Eq for PyDisequence {}

impl PartialOrd for PyDisequence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PyDisequence {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d.cmp(&other.d)
    }
}

impl std::hash::Hash for PyDisequence {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.d.hash(state)
    }
}

#[pymethods]
impl PyDisequence {
    fn __len__(&self) -> usize {
        self.d.len()
    }

    #[getter]
    fn middle(&self) -> usize {
        self.d.middle()
    }

    #[getter]
    fn word(&self) -> Vec<String> {
        self.d.word().iter().map(|&l| self.alphabet.name(l).to_owned()).collect()
    }

    fn lprod(&self, other: &PyDisequence) -> PyResult<PyDisequence> {
        let d = self.d.lprod(&other.d).map_err(err)?;
        Ok(PyDisequence { d, alphabet: self.alphabet.clone() })
    }

    fn rprod(&self, other: &PyDisequence) -> PyResult<PyDisequence> {
        let d = self.d.rprod(&other.d).map_err(err)?;
        Ok(PyDisequence { d, alphabet: self.alphabet.clone() })
    }

    fn __str__(&self) -> String {
        self.d.display(&self.alphabet).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Disequence({})", self.__str__())
    }
}

#[pyclass(name = "Element", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElement(digrow::DiElement);

#[pymethods]
impl PyElement {
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.add(&other.0).map(PyElement).map_err(err)
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.sub(&other.0).map(PyElement).map_err(err)
    }

    fn __neg__(&self) -> PyElement {
        PyElement(self.0.neg())
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        self.0 == other.0
    }

    fn lprod(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.lprod(&other.0).map(PyElement).map_err(err)
    }

    fn rprod(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.rprod(&other.0).map(PyElement).map_err(err)
    }

    fn forget_middles(&self) -> PyElement {
        PyElement(self.0.forget_middles())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.0)
    }
}

#[pyclass(name = "Presentation", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPresentation(presentation::Presentation);

#[pymethods]
impl PyPresentation {
    /// Reads the text format of presentation files.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        digrow::cli::parse_presentation(text).map(PyPresentation).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (generators, field = "Q"))]
    fn free(generators: Vec<String>, field: &str) -> PyResult<Self> {
        let x = digrow::Alphabet::new(generators).map_err(err)?;
        Ok(PyPresentation(presentation::Presentation::free(x, self::field(field)?)))
    }

    fn with_relator(&self, text: &str) -> PyResult<Self> {
        let p = &self.0;
        let r = digrow::parse_element(p.alphabet(), p.kind(), text).map_err(err)?;
        p.clone().with_relator(r).map(PyPresentation).map_err(err)
    }

    fn with_scheme(&self, tag: &str) -> PyResult<Self> {
        let s = presentation::Scheme::from_tag(tag)
            .ok_or_else(|| PyValueError::new_err(format!("unknown scheme {tag:?}")))?;
        Ok(PyPresentation(self.0.clone().with_scheme(s)))
    }

    fn with_slack(&self, slack: usize) -> Self {
        PyPresentation(self.0.clone().with_slack(slack))
    }

    #[getter]
    fn alphabet(&self) -> PyAlphabet {
        PyAlphabet(self.0.alphabet().clone())
    }

    fn element(&self, text: &str) -> PyResult<PyElement> {
        digrow::parse_element(self.0.alphabet(), self.0.kind(), text)
            .map(PyElement)
            .map_err(err)
    }

    fn is_homogeneous(&self) -> bool {
        self.0.is_homogeneous()
    }

    fn fingerprint(&self) -> String {
        self.0.fingerprint()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "BasisTable", frozen)]
struct PyBasisTable(presentation::BasisTable);

#[pymethods]
impl PyBasisTable {
    #[getter]
    fn mode(&self) -> &'static str {
        self.0.mode().tag()
    }

    #[getter]
    fn degree_bound(&self) -> usize {
        self.0.degree_bound()
    }

    #[getter]
    fn approximate(&self) -> bool {
        self.0.approximate()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn count_at(&self, t: usize) -> usize {
        self.0.count_at(t)
    }

    fn basis(&self) -> Vec<PyDisequence> {
        let x = self.0.alphabet();
        self.0
            .basis()
            .iter()
            .map(|d| PyDisequence { d: d.clone(), alphabet: x.clone() })
            .collect()
    }

    fn normal_form(&self, x: &PyElement) -> PyResult<PyElement> {
        self.0.normal_form(&x.0).map(PyElement).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyfunction]
#[pyo3(signature = (pres, n, mode = "dialgebra"))]
fn basis_upto(py: Python<'_>, pres: &PyPresentation, n: usize, mode: &str) -> PyResult<PyBasisTable> {
    let mode = self::mode(mode)?;
    let p = pres.0.clone();
    py.detach(move || presentation::basis_upto(&p, n, mode))
        .map(PyBasisTable)
        .map_err(err)
}

/// Cumulative counts `|B^{<=t}|` for `t = 1..=n`.
#[pyfunction]
#[pyo3(signature = (pres, n, mode = "dialgebra"))]
fn growth_series(py: Python<'_>, pres: &PyPresentation, n: usize, mode: &str) -> PyResult<Vec<u128>> {
    let mode = self::mode(mode)?;
    let p = pres.0.clone();
    py.detach(move || growth::growth_series(&p, n, mode))
        .map(|s| s.cumulative_counts().to_vec())
        .map_err(err)
}

/// Fits the growth exponent of a cumulative series over `window`.
#[pyfunction]
fn gk_estimate<'py>(
    py: Python<'py>,
    cumulative: Vec<u128>,
    window: (usize, usize),
) -> PyResult<Bound<'py, PyDict>> {
    let s = growth::GrowthSeries::from_cumulative(cumulative, Mode::Dialgebra).map_err(err)?;
    let e = growth::gk_estimate(&s, window).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("slope", e.slope)?;
    out.set_item("window", e.window)?;
    out.set_item(
        "classification",
        match e.classification {
            Classification::Bounded => "bounded",
            Classification::Polynomial { .. } => "polynomial",
            Classification::Superpolynomial => "superpolynomial",
        },
    )?;
    out.set_item("residual", e.residual)?;
    out.set_item("stable", e.stable)?;
    out.set_item("doubling_exponents", e.doubling_exponents)?;
    Ok(out)
}

#[pyfunction]
fn axiom_residuals(x: &PyElement, y: &PyElement, z: &PyElement) -> PyResult<Vec<PyElement>> {
    let r = digrow::axiom_residuals(&x.0, &y.0, &z.0).map_err(err)?;
    Ok(r.into_iter().map(PyElement).collect())
}

#[pymodule(name = "digrow")]
fn digrow_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlphabet>()?;
    m.add_class::<PyDisequence>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyBasisTable>()?;
    m.add_function(wrap_pyfunction!(basis_upto, m)?)?;
    m.add_function(wrap_pyfunction!(growth_series, m)?)?;
    m.add_function(wrap_pyfunction!(gk_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(axiom_residuals, m)?)?;
    Ok(())
}
