//! Python bindings: coordinates, expressions, local forms, vector fields,
//! Lagrangians with their fundamental data, and the graded bracket kernel.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use varcalc::ansatz::Bounds;
use varcalc::euler::{divergence_invert, exterior_euler, interior_euler};
use varcalc::jet::{bracket_insular, total_derivative};
use varcalc::linf::graded::{self, Convention, MAX_ARITY};
use varcalc::noether::{check_symplectic, find_hamiltonian_form, is_symmetry, noether2_identity, noether_current};
use varcalc::parse::{parse_expr, parse_form, parse_gauge, parse_vector_field};
use varcalc::variational::{theory_by_name, verify_fundamental, FundamentalData, SignBranch};
use varcalc::{CoordSystem, Error, Expr, InsularVF, LocalForm};

create_exception!(pyvarcalc, VarcalcError, PyValueError);
create_exception!(pyvarcalc, ParseError, VarcalcError);
create_exception!(pyvarcalc, NotExactError, VarcalcError);
create_exception!(pyvarcalc, NotASymmetryError, VarcalcError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Parse { .. } => ParseError::new_err(msg),
        Error::NotExact(_) => NotExactError::new_err(msg),
        Error::NotASymmetry => NotASymmetryError::new_err(msg),
        _ => VarcalcError::new_err(msg),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for Result<T, Error> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn same_coords(a: &CoordSystem, b: &CoordSystem) -> PyResult<()> {
    if CoordSystem::same(a, b) {
        Ok(())
    } else {
        Err(VarcalcError::new_err("operands live on different coordinate systems"))
    }
}

/// Base coordinates and fiber fields of a trivial bundle.
#[pyclass(name = "Coords", frozen, skip_from_py_object, module = "pyvarcalc")]
#[derive(Clone)]
struct PyCoords {
    cs: Arc<CoordSystem>,
}

#[pymethods]
impl PyCoords {
    #[new]
    fn new(base: &str, fibers: &str) -> PyResult<Self> {
        Ok(PyCoords { cs: Arc::new(CoordSystem::from_lists(base, fibers).py()?) })
    }

    #[getter]
    fn base(&self) -> Vec<String> {
        self.cs.base_names().to_vec()
    }

    #[getter]
    fn fibers(&self) -> Vec<String> {
        self.cs.fiber_names().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Coords({:?}, {:?})", self.cs.base_names().join(","), self.cs.fiber_names().join(","))
    }
}

#[pyclass(name = "Expr", frozen, skip_from_py_object, module = "pyvarcalc")]
#[derive(Clone)]
struct PyExpr {
    cs: Arc<CoordSystem>,
    e: Expr,
}

impl PyExpr {
    fn wrap(&self, e: Expr) -> PyExpr {
        PyExpr { cs: self.cs.clone(), e }
    }

    fn binary(&self, other: &PyExpr, f: impl Fn(&Expr, &Expr) -> Expr) -> PyResult<PyExpr> {
        same_coords(&self.cs, &other.cs)?;
        Ok(self.wrap(f(&self.e, &other.e)))
    }
}

#[pymethods]
impl PyExpr {
    #[new]
    fn new(coords: &PyCoords, text: &str) -> PyResult<Self> {
        Ok(PyExpr { cs: coords.cs.clone(), e: parse_expr(&coords.cs, text).py()? })
    }

    fn __str__(&self) -> String {
        self.e.to_text(&self.cs)
    }

    fn __repr__(&self) -> String {
        format!("Expr({:?})", self.e.to_text(&self.cs))
    }

    fn latex(&self) -> String {
        self.e.latex(&self.cs).to_string()
    }

    fn is_zero(&self) -> bool {
        self.e.is_zero()
    }

    fn __eq__(&self, other: &PyExpr) -> bool {
        CoordSystem::same(&self.cs, &other.cs) && self.e == other.e
    }

    fn __add__(&self, other: &PyExpr) -> PyResult<PyExpr> {
        self.binary(other, |a, b| a + b)
    }

    fn __sub__(&self, other: &PyExpr) -> PyResult<PyExpr> {
        self.binary(other, |a, b| a - b)
    }

    fn __mul__(&self, other: &PyExpr) -> PyResult<PyExpr> {
        self.binary(other, |a, b| a * b)
    }

    fn __neg__(&self) -> PyExpr {
        self.wrap(-&self.e)
    }

    fn __pow__(&self, n: u32, _modulo: Option<u32>) -> PyExpr {
        self.wrap(self.e.pow(n))
    }

    /// Total derivative `D_x` along a base coordinate.
    fn total_derivative(&self, coord: &str) -> PyResult<PyExpr> {
        let i = self.cs.base_index(coord).ok_or_else(|| VarcalcError::new_err(format!("unknown base coordinate {coord}")))?;
        Ok(self.wrap(total_derivative(&self.e, i)))
    }
}

#[pyclass(name = "Form", frozen, skip_from_py_object, module = "pyvarcalc")]
#[derive(Clone)]
struct PyForm {
    w: LocalForm,
}

impl PyForm {
    fn binary(&self, other: &PyForm, f: impl Fn(&LocalForm, &LocalForm) -> LocalForm) -> PyResult<PyForm> {
        same_coords(self.w.coords(), other.w.coords())?;
        Ok(PyForm { w: f(&self.w, &other.w) })
    }
}

fn form(w: LocalForm) -> PyForm {
    PyForm { w }
}

#[pymethods]
impl PyForm {
    #[new]
    fn new(coords: &PyCoords, text: &str) -> PyResult<Self> {
        Ok(form(parse_form(&coords.cs, text).py()?))
    }

    #[staticmethod]
    fn from_json(coords: &PyCoords, text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| VarcalcError::new_err(e.to_string()))?;
        Ok(form(LocalForm::from_json(&coords.cs, &v).py()?))
    }

    fn to_json(&self) -> String {
        self.w.to_json().to_string()
    }

    fn __str__(&self) -> String {
        self.w.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Form({:?})", self.w.to_text())
    }

    fn latex(&self) -> String {
        self.w.latex().to_string()
    }

    /// `(p, q)` for a homogeneous form, `None` for zero or mixed forms.
    #[getter]
    fn bidegree(&self) -> Option<(usize, usize)> {
        self.w.bidegree()
    }

    fn is_zero(&self) -> bool {
        self.w.is_zero()
    }

    fn __eq__(&self, other: &PyForm) -> bool {
        self.w == other.w
    }

    fn __add__(&self, other: &PyForm) -> PyResult<PyForm> {
        self.binary(other, |a, b| a.add(b))
    }

    fn __sub__(&self, other: &PyForm) -> PyResult<PyForm> {
        self.binary(other, |a, b| a.sub(b))
    }

    fn __neg__(&self) -> PyForm {
        form(self.w.neg())
    }

    fn wedge(&self, other: &PyForm) -> PyResult<PyForm> {
        self.binary(other, |a, b| a.wedge(b))
    }

    fn d_h(&self) -> PyForm {
        form(self.w.d_h())
    }

    fn d_v(&self) -> PyForm {
        form(self.w.d_v())
    }

    fn d(&self) -> PyForm {
        form(self.w.d_total())
    }

    fn interior_euler(&self) -> PyResult<PyForm> {
        Ok(form(interior_euler(&self.w).py()?))
    }

    fn exterior_euler(&self) -> PyResult<PyForm> {
        Ok(form(exterior_euler(&self.w).py()?))
    }

    /// Some `P` with `d_h P` equal to this `(0, m)`-form.
    #[pyo3(signature = (order_bound=None, degree_bound=None))]
    fn divergence_invert(&self, order_bound: Option<usize>, degree_bound: Option<u32>) -> PyResult<PyForm> {
        let b = Bounds::or_default(order_bound, degree_bound, &self.w);
        Ok(form(divergence_invert(&self.w, b).py()?))
    }

    /// Interior product with an insular vector field.
    fn insert(&self, field: &Bound<'_, PyAny>) -> PyResult<PyForm> {
        let chi = field_arg(self.w.coords(), field)?;
        Ok(form(self.w.insert(&chi)))
    }

    fn lie(&self, field: &Bound<'_, PyAny>) -> PyResult<PyForm> {
        let chi = field_arg(self.w.coords(), field)?;
        Ok(form(self.w.lie(&chi)))
    }
}

/// Insular vector field `ev{u: ..}`, `tot{x: ..}` or `ins{ev{..}, tot{..}}`.
#[pyclass(name = "VectorField", frozen, skip_from_py_object, module = "pyvarcalc")]
#[derive(Clone)]
struct PyField {
    cs: Arc<CoordSystem>,
    chi: InsularVF,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(coords: &PyCoords, text: &str) -> PyResult<Self> {
        Ok(PyField { cs: coords.cs.clone(), chi: parse_vector_field(&coords.cs, text).py()? })
    }

    fn __str__(&self) -> String {
        self.chi.to_text(&self.cs)
    }

    fn __repr__(&self) -> String {
        format!("VectorField({:?})", self.chi.to_text(&self.cs))
    }

    fn latex(&self) -> String {
        self.chi.to_latex(&self.cs)
    }

    fn __eq__(&self, other: &PyField) -> bool {
        CoordSystem::same(&self.cs, &other.cs) && self.chi == other.chi
    }

    fn bracket(&self, other: &PyField) -> PyResult<PyField> {
        same_coords(&self.cs, &other.cs)?;
        Ok(PyField { cs: self.cs.clone(), chi: bracket_insular(&self.chi, &other.chi) })
    }
}

fn field_arg(cs: &Arc<CoordSystem>, obj: &Bound<'_, PyAny>) -> PyResult<InsularVF> {
    if let Ok(f) = obj.extract::<PyRef<'_, PyField>>() {
        same_coords(cs, &f.cs)?;
        return Ok(f.chi.clone());
    }
    let text: String = obj.extract()?;
    parse_vector_field(cs, &text).py()
}

/// A top-form Lagrangian together with `EL`, `λ₁`, `ω₁`, `ω` and `L + λ₁`.
#[pyclass(name = "Lagrangian", frozen, skip_from_py_object, module = "pyvarcalc")]
struct PyLagrangian {
    cs: Arc<CoordSystem>,
    fd: FundamentalData,
}

#[pymethods]
impl PyLagrangian {
    #[new]
    fn new(coords: &PyCoords, density: &str) -> PyResult<Self> {
        let l = LocalForm::top(&coords.cs, parse_expr(&coords.cs, density).py()?);
        Ok(PyLagrangian { cs: coords.cs.clone(), fd: FundamentalData::new(&l).py()? })
    }

    /// One of the bundled theories, e.g. `"wave"` or `"maxwell-2d"`.
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        let t = theory_by_name(name).ok_or_else(|| VarcalcError::new_err(format!("unknown theory {name:?}")))?;
        Ok(PyLagrangian { cs: t.coords.clone(), fd: FundamentalData::new(&t.lagrangian).py()? })
    }

    #[getter]
    fn coords(&self) -> PyCoords {
        PyCoords { cs: self.cs.clone() }
    }

    #[getter]
    fn form(&self) -> PyForm {
        form(self.fd.lagrangian.clone())
    }

    #[getter]
    fn euler_lagrange(&self) -> PyForm {
        form(self.fd.el.clone())
    }

    /// `EL_α` for each field.
    #[getter]
    fn el_components(&self) -> Vec<PyExpr> {
        self.fd.el.source_components().into_iter().map(|e| PyExpr { cs: self.cs.clone(), e }).collect()
    }

    #[getter]
    fn lambda1(&self) -> PyForm {
        form(self.fd.lambda1.clone())
    }

    #[getter]
    fn omega1(&self) -> PyForm {
        form(self.fd.omega1.clone())
    }

    #[getter]
    fn poincare_cartan(&self) -> PyForm {
        form(self.fd.omega.clone())
    }

    #[getter]
    fn lepagean(&self) -> PyForm {
        form(self.fd.lepagean.clone())
    }

    #[getter]
    fn sign_branch(&self) -> &'static str {
        match self.fd.branch {
            SignBranch::Literal => "literal",
            SignBranch::Flipped => "flipped",
        }
    }

    /// `[(name, passed, residual)]` for the fundamental identities.
    fn verify_fundamental(&self) -> PyResult<Vec<(String, bool, PyForm)>> {
        let rep = verify_fundamental(&self.fd.lagrangian).py()?;
        Ok(rep.checks.into_iter().map(|c| (c.name.to_string(), c.passed(), form(c.residual))).collect())
    }

    fn is_symmetry(&self, field: &Bound<'_, PyAny>) -> PyResult<bool> {
        let chi = field_arg(&self.cs, field)?;
        Ok(is_symmetry(&chi.ev, &self.fd.lagrangian).py()?.0)
    }

    /// Conserved current `Z` with `d Z = ι_ξ EL`.
    #[pyo3(signature = (field, order_bound=None, degree_bound=None))]
    fn noether_current(&self, field: &Bound<'_, PyAny>, order_bound: Option<usize>, degree_bound: Option<u32>) -> PyResult<PyForm> {
        let chi = field_arg(&self.cs, field)?;
        let bounds = match (order_bound, degree_bound) {
            (None, None) => None,
            (o, d) => {
                let eta = varcalc::noether::lie_lagrangian(&chi.ev, &self.fd.lagrangian);
                Some(Bounds::or_default(o, d, &eta))
            }
        };
        Ok(form(noether_current(&chi.ev, &self.fd.lagrangian, None, bounds).py()?.z))
    }

    fn is_symplectic(&self, field: &Bound<'_, PyAny>) -> PyResult<bool> {
        let chi = field_arg(&self.cs, field)?;
        Ok(check_symplectic(&chi, &self.fd).passed())
    }

    /// Hamiltonian form `ζ` with `D ζ = ι_χ ω`.
    fn hamiltonian_form(&self, field: &Bound<'_, PyAny>) -> PyResult<PyForm> {
        let chi = field_arg(&self.cs, field)?;
        Ok(form(find_hamiltonian_form(&chi, &self.fd, None).py()?))
    }

    /// Noether identities of a gauge action `gauge[psi]{u: ..}`, one per parameter.
    fn noether_identities(&self, gauge: &str) -> PyResult<Vec<PyExpr>> {
        let g = parse_gauge(&self.cs, gauge).py()?;
        let ids = noether2_identity(&g, &self.fd.lagrangian).py()?;
        Ok(ids.into_iter().map(|e| PyExpr { cs: self.cs.clone(), e }).collect())
    }
}

/// Runs the command line tool; returns `(exit code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let out = varcalc::cli::run(std::iter::once("varc".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pyfunction]
fn koszul_sign(perm: Vec<usize>, degrees: Vec<i64>) -> PyResult<i64> {
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    if degrees.len() != perm.len() || sorted.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(VarcalcError::new_err("perm must be a permutation of range(len(degrees))"));
    }
    Ok(graded::koszul_sign(&perm, &degrees))
}

fn family(src: &str) -> PyResult<graded::BracketFamily> {
    Ok(varcalc::cli::parse_family(src).py()?.1)
}

/// Input index tuples whose Jacobiator is nonzero.
#[pyfunction]
#[pyo3(signature = (family_src, max_arity=3))]
fn jacobiator_failures(family_src: &str, max_arity: usize) -> PyResult<Vec<Vec<usize>>> {
    let f = family(family_src)?;
    Ok(graded::nonzero_jacobiators(&f, max_arity.min(MAX_ARITY)).into_iter().map(|(idx, _)| idx).collect())
}

/// Input index tuples where the décalage transport of Jacobiators fails.
#[pyfunction]
#[pyo3(signature = (family_src, max_arity=3))]
fn transport_failures(family_src: &str, max_arity: usize) -> PyResult<Vec<Vec<usize>>> {
    let f = family(family_src)?;
    let l = match f.convention {
        Convention::Anti => f,
        Convention::Sym => graded::decalage_inverse(&f).py()?,
    };
    graded::transport_mismatches(&l, max_arity.min(MAX_ARITY)).py()
}

#[pymodule]
pub fn pyvarcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCoords>()?;
    m.add_class::<PyExpr>()?;
    m.add_class::<PyForm>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyLagrangian>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_sign, m)?)?;
    m.add_function(wrap_pyfunction!(jacobiator_failures, m)?)?;
    m.add_function(wrap_pyfunction!(transport_failures, m)?)?;
    m.add("EXAMPLE_FAMILIES", graded::EXAMPLES.to_vec())?;
    let py = m.py();
    m.add("VarcalcError", py.get_type::<VarcalcError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("NotExactError", py.get_type::<NotExactError>())?;
    m.add("NotASymmetryError", py.get_type::<NotASymmetryError>())?;
    Ok(())
}
