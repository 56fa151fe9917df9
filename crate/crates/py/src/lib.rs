use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use profend::dsl::{self, ValidateConfig};
use profend::endo::{self, EndoSemigroup};
use profend::group::{self as grp, FiniteGroup};
use profend::lattice::{self, AutoSet};
use profend::report::{self, RunConfig};

create_exception!(pyprofend, ProfendError, PyException);
create_exception!(pyprofend, ScenarioError, ProfendError);

fn err(e: profend::Error) -> PyErr {
    ProfendError::new_err(e.to_string())
}

/// A finite group given by its Cayley table; element 0 is the identity.
#[pyclass(frozen, from_py_object, module = "pyprofend")]
#[derive(Clone)]
struct Group {
    inner: Arc<FiniteGroup>,
}

#[pymethods]
impl Group {
    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        grp::cyclic(n).map(Group::from).map_err(err)
    }

    #[staticmethod]
    fn dihedral(n: usize) -> PyResult<Self> {
        grp::dihedral(n).map(Group::from).map_err(err)
    }

    #[staticmethod]
    fn symmetric(degree: usize) -> PyResult<Self> {
        grp::symmetric(degree).map(Group::from).map_err(err)
    }

    #[staticmethod]
    fn alternating(degree: usize) -> PyResult<Self> {
        grp::alternating(degree).map(Group::from).map_err(err)
    }

    #[staticmethod]
    fn quaternion() -> PyResult<Self> {
        grp::quaternion().map(Group::from).map_err(err)
    }

    #[staticmethod]
    fn units_mod(p: u64, k: u32) -> PyResult<Self> {
        grp::units_mod(p, k).map(Group::from).map_err(err)
    }

    #[staticmethod]
    fn direct_product(left: &Group, right: &Group) -> PyResult<Self> {
        grp::direct_product(&left.inner, &right.inner)
            .map(Group::from)
            .map_err(err)
    }

    /// `Z/p^k ⋊ U(p^k)` with units acting by multiplication.
    #[staticmethod]
    fn units_semidirect(p: u64, k: u32) -> PyResult<Self> {
        profend::catalog::units_semidirect_level(p, k)
            .map(Group::from)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (rows, label = "table"))]
    fn from_table(rows: Vec<Vec<usize>>, label: &str) -> PyResult<Self> {
        FiniteGroup::from_table(&rows, label)
            .map(Group::from)
            .map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn generators(&self) -> Vec<usize> {
        self.inner.generators().to_vec()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        self.check(a)?;
        Ok(self.inner.inv(a))
    }

    fn element_order(&self, a: usize) -> PyResult<usize> {
        self.check(a)?;
        Ok(self.inner.element_order(a))
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.inner.table_rows()
    }

    fn subgroup(&self, generators: Vec<usize>) -> PyResult<Subgroup> {
        for &g in &generators {
            self.check(g)?;
        }
        Ok(grp::Subgroup::generated(&self.inner, generators).into())
    }

    /// Subgroups of index at most `max_index` (all of them by default).
    #[pyo3(signature = (max_index = None))]
    fn subgroups(&self, max_index: Option<usize>) -> Vec<Subgroup> {
        let n = max_index.unwrap_or(self.inner.order());
        lattice::enumerate_subgroups(&self.inner, n)
            .entries
            .into_iter()
            .map(Subgroup::from)
            .collect()
    }

    fn normal_subgroups(&self) -> Vec<Subgroup> {
        lattice::enumerate_normals(&self.inner)
            .into_iter()
            .map(Subgroup::from)
            .collect()
    }

    fn count_profile(&self, n: usize) -> BTreeMap<usize, usize> {
        lattice::count_profile(&self.inner, n).counts
    }

    /// Intersection of the normal subgroups of index at most `n` stable under
    /// every automorphism in `omega`.
    #[pyo3(signature = (n, omega = Vec::new()))]
    fn residual(&self, n: usize, omega: Vec<Endo>) -> PyResult<Subgroup> {
        let omega = AutoSet::new(&self.inner, omega.into_iter().map(|e| e.inner)).map_err(err)?;
        Ok(lattice::residual_intersection(&self.inner, n, &omega).into())
    }

    fn o_pi(&self, primes: Vec<u64>) -> PyResult<Subgroup> {
        lattice::o_pi(&self.inner, &primes)
            .map(Subgroup::from)
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!(
            "Group({}, order={})",
            self.inner.label(),
            self.inner.order()
        )
    }
}

impl Group {
    fn check(&self, x: usize) -> PyResult<()> {
        if x < self.inner.order() {
            Ok(())
        } else {
            Err(ProfendError::new_err(format!(
                "element {x} out of range for order {}",
                self.inner.order()
            )))
        }
    }
}

impl From<Arc<FiniteGroup>> for Group {
    fn from(inner: Arc<FiniteGroup>) -> Self {
        Group { inner }
    }
}

#[pyclass(frozen, from_py_object, module = "pyprofend")]
#[derive(Clone)]
struct Subgroup {
    inner: grp::Subgroup,
}

#[pymethods]
impl Subgroup {
    #[getter]
    fn parent(&self) -> Group {
        self.inner.parent().clone().into()
    }

    #[getter]
    fn elements(&self) -> Vec<usize> {
        self.inner.elements()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn index(&self) -> usize {
        self.inner.index()
    }

    fn is_normal(&self) -> bool {
        self.inner.is_normal()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.inner.is_subgroup_of(&other.inner)
    }

    fn __contains__(&self, x: usize) -> bool {
        x < self.inner.parent().order() && self.inner.contains(x)
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __eq__(&self, other: &Subgroup) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Subgroup(size={}, index={})",
            self.inner.size(),
            self.inner.index()
        )
    }
}

impl From<grp::Subgroup> for Subgroup {
    fn from(inner: grp::Subgroup) -> Self {
        Subgroup { inner }
    }
}

/// An endomorphism, stored as the image of every element.
#[pyclass(frozen, from_py_object, module = "pyprofend")]
#[derive(Clone)]
struct Endo {
    inner: grp::Endomorphism,
}

#[pymethods]
impl Endo {
    #[new]
    fn new(group: &Group, images: Vec<usize>) -> PyResult<Self> {
        grp::Endomorphism::new(&group.inner, images)
            .map(Endo::from)
            .map_err(err)
    }

    /// From the images of the group's generators, in order.
    #[staticmethod]
    fn from_generator_images(group: &Group, images: Vec<usize>) -> PyResult<Self> {
        grp::Endomorphism::from_generator_images(&group.inner, &images)
            .map(Endo::from)
            .map_err(err)
    }

    #[staticmethod]
    fn identity(group: &Group) -> Self {
        grp::Endomorphism::identity(&group.inner).into()
    }

    #[staticmethod]
    fn trivial(group: &Group) -> Self {
        grp::Endomorphism::trivial(&group.inner).into()
    }

    #[staticmethod]
    fn conjugation(group: &Group, g: usize) -> PyResult<Self> {
        group.check(g)?;
        Ok(grp::Endomorphism::conjugation(&group.inner, g).into())
    }

    #[staticmethod]
    fn scale_first(group: &Group, m: i64) -> PyResult<Self> {
        endo::scale_first(&group.inner, m)
            .map(Endo::from)
            .map_err(err)
    }

    #[staticmethod]
    fn scale(group: &Group, coord: usize, m: i64) -> PyResult<Self> {
        endo::scale(&group.inner, coord, m)
            .map(Endo::from)
            .map_err(err)
    }

    #[getter]
    fn group(&self) -> Group {
        self.inner.group().clone().into()
    }

    fn __call__(&self, x: usize) -> PyResult<usize> {
        self.group().check(x)?;
        Ok(self.inner.apply(x))
    }

    fn images(&self) -> Vec<usize> {
        self.inner.as_hom().map_vec()
    }

    /// `self` first, then `other`.
    fn then(&self, other: &Endo) -> PyResult<Endo> {
        self.inner
            .then_endo(&other.inner)
            .map(Endo::from)
            .map_err(err)
    }

    fn power(&self, k: usize) -> Endo {
        self.inner.power(k).into()
    }

    fn kernel(&self) -> Subgroup {
        self.inner.kernel().into()
    }

    fn image(&self) -> Subgroup {
        self.inner.image().into()
    }

    fn is_automorphism(&self) -> bool {
        self.inner.is_automorphism()
    }

    fn commutes_with(&self, other: &Endo) -> bool {
        self.inner.commutes_with(&other.inner)
    }

    /// `{"con", "stable_image", "depth"}`.
    fn contraction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = endo::contraction(&self.inner);
        let d = PyDict::new(py);
        d.set_item("con", Subgroup::from(r.con))?;
        d.set_item("stable_image", Subgroup::from(r.stable_image))?;
        d.set_item("depth", r.depth)?;
        Ok(d)
    }

    /// `{"passed", "checks"}` with every named check.
    fn verify_theorem_a<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = endo::verify_theorem_a(&self.inner);
        checks_dict(py, r.passed(), &r.checks)
    }

    fn __eq__(&self, other: &Endo) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Endo({:?})", self.inner.as_hom().map_vec())
    }
}

impl From<grp::Endomorphism> for Endo {
    fn from(inner: grp::Endomorphism) -> Self {
        Endo { inner }
    }
}

fn checks_dict<'py>(
    py: Python<'py>,
    passed: bool,
    checks: &profend::CheckRecord,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("passed", passed)?;
    let named: BTreeMap<&str, bool> = checks
        .checks
        .iter()
        .map(|c| (c.name.as_str(), c.passed))
        .collect();
    d.set_item("checks", named)?;
    Ok(d)
}

fn semigroup(endos: Vec<Endo>) -> PyResult<EndoSemigroup> {
    let first = endos
        .first()
        .ok_or_else(|| ProfendError::new_err("need at least one endomorphism"))?;
    let g = first.inner.group().clone();
    EndoSemigroup::new(&g, endos.into_iter().map(|e| e.inner).collect()).map_err(err)
}

/// `Con(Λ, K)` and the stable image of the semigroup generated by `endos`.
#[pyfunction]
#[pyo3(signature = (endos, k = None))]
fn semigroup_contraction<'py>(
    py: Python<'py>,
    endos: Vec<Endo>,
    k: Option<Subgroup>,
) -> PyResult<Bound<'py, PyDict>> {
    let l = semigroup(endos)?;
    let r = endo::semigroup_contraction(&l, k.as_ref().map(|s| &s.inner)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("con", Subgroup::from(r.report.con))?;
    d.set_item("stable_image", Subgroup::from(r.report.stable_image))?;
    d.set_item("depth", r.report.depth)?;
    Ok(d)
}

#[pyfunction]
fn verify_splitthm<'py>(py: Python<'py>, endos: Vec<Endo>) -> PyResult<Bound<'py, PyDict>> {
    let r = endo::verify_splitthm(&semigroup(endos)?).map_err(err)?;
    checks_dict(py, r.passed(), &r.checks)
}

#[pyfunction]
#[pyo3(signature = (endos, omega = Vec::new()))]
fn verify_regulation<'py>(
    py: Python<'py>,
    endos: Vec<Endo>,
    omega: Vec<Endo>,
) -> PyResult<Bound<'py, PyDict>> {
    let l = semigroup(endos)?;
    let omega = AutoSet::new(l.parent(), omega.into_iter().map(|e| e.inner)).map_err(err)?;
    let r = endo::verify_regulation(&l, &omega).map_err(err)?;
    let d = checks_dict(py, r.passed(), &r.checks)?;
    d.set_item("residuals", r.residuals)?;
    Ok(d)
}

/// Injective homomorphisms from `g` into `h`, with a simple-quotient
/// witness when there are none.
#[pyfunction]
fn hom_search<'py>(py: Python<'py>, g: &Group, h: &Subgroup) -> PyResult<Bound<'py, PyDict>> {
    let r = endo::hom_search(&g.inner, &h.inner, 0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("count", r.count)?;
    d.set_item("witness", r.simple_witness.map(|w| Subgroup::from(w.k)))?;
    Ok(d)
}

fn load(source: &str) -> PyResult<dsl::Resolved> {
    dsl::load(source, &ValidateConfig::default()).map_err(|e| {
        let text: Vec<String> = e
            .diagnostics(source)
            .iter()
            .map(ToString::to_string)
            .collect();
        ScenarioError::new_err(text.join("\n"))
    })
}

/// Runs a scenario and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (source, seed = None, jobs = 1))]
fn run_scenario(py: Python<'_>, source: &str, seed: Option<u64>, jobs: usize) -> PyResult<String> {
    let res = load(source)?;
    let config = RunConfig {
        jobs,
        seed,
        timings: false,
    };
    Ok(py.detach(|| report::run(&res, &config).to_json()))
}

#[pyfunction]
#[pyo3(signature = (p = 3, depth = 3, seed = None))]
fn demo(py: Python<'_>, p: u64, depth: usize, seed: Option<u64>) -> PyResult<String> {
    run_scenario(py, &report::demo_scenario(p, depth), seed, 1)
}

/// `(id, name, passed, detail)` for every acceptance criterion.
#[pyfunction]
fn selftest(py: Python<'_>) -> Vec<(u8, String, bool, String)> {
    py.detach(|| {
        profend::acceptance::run_all()
            .into_iter()
            .map(|o| (o.id, o.name.to_string(), o.passed, o.detail))
            .collect()
    })
}

#[pymodule]
fn pyprofend(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", report::VERSION)?;
    m.add("ProfendError", m.py().get_type::<ProfendError>())?;
    m.add("ScenarioError", m.py().get_type::<ScenarioError>())?;
    m.add_class::<Group>()?;
    m.add_class::<Subgroup>()?;
    m.add_class::<Endo>()?;
    m.add_function(wrap_pyfunction!(semigroup_contraction, m)?)?;
    m.add_function(wrap_pyfunction!(verify_splitthm, m)?)?;
    m.add_function(wrap_pyfunction!(verify_regulation, m)?)?;
    m.add_function(wrap_pyfunction!(hom_search, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(demo, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
