//! Python bindings: the main types and verifications of `liegauss` exposed as
//! a small extension module. Exact scalars cross the boundary as display
//! strings plus f64 complex approximations.

use std::collections::HashMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use liegauss::lattices::{form_from_name, langlands_dual_form, GroupForm, Lattice, QuotientGroup};
use liegauss::rootsys::{build_root_system, coxeter_identity, parse_type, RootSystem};
use liegauss::theta::ThetaParams;
use liegauss::{gauss, heckerep, lattices, modrep, theta};

fn err(e: liegauss::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn build(type_name: &str) -> PyResult<RootSystem> {
    let (f, r) = parse_type(type_name).map_err(err)?;
    build_root_system(f, r).map_err(err)
}

fn form(name: &str) -> PyResult<GroupForm> {
    form_from_name(name).map_err(err)
}

/// Root system summary exposed to Python.
#[pyclass(name = "RootSystem")]
struct PyRootSystem {
    inner: RootSystem,
}

#[pymethods]
impl PyRootSystem {
    #[getter]
    fn type_name(&self) -> String {
        self.inner.type_name()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank
    }

    #[getter]
    fn num_roots(&self) -> usize {
        self.inner.roots.len()
    }

    #[getter]
    fn coxeter(&self) -> u64 {
        self.inner.h
    }

    #[getter]
    fn dual_coxeter(&self) -> u64 {
        self.inner.h_check
    }

    #[getter]
    fn length_ratio(&self) -> u32 {
        self.inner.n_g
    }

    #[getter]
    fn simply_laced(&self) -> bool {
        self.inner.is_simply_laced()
    }

    fn cartan(&self) -> Vec<Vec<i64>> {
        self.inner.cartan.clone()
    }

    /// Gram matrix entries as exact fraction strings.
    fn gram(&self) -> Vec<Vec<String>> {
        (0..self.inner.rank)
            .map(|i| (0..self.inner.rank).map(|j| self.inner.gram.at(i, j).to_string()).collect())
            .collect()
    }

    fn dual_type(&self) -> String {
        liegauss::rootsys::dual_root_system(&self.inner).type_name()
    }

    fn coxeter_identity(&self) -> bool {
        coxeter_identity(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "RootSystem({}, h={}, dual_h={}, roots={})",
            self.inner.type_name(),
            self.inner.h,
            self.inner.h_check,
            self.inner.roots.len()
        )
    }
}

/// A compact group form.
#[pyclass(name = "GroupForm")]
struct PyGroupForm {
    inner: GroupForm,
}

#[pymethods]
impl PyGroupForm {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn type_name(&self) -> String {
        self.inner.rs.type_name()
    }

    #[getter]
    fn center_order(&self) -> u64 {
        self.inner.center_order()
    }

    #[getter]
    fn pi1_order(&self) -> u64 {
        self.inner.pi1_order()
    }

    fn dual_name(&self) -> PyResult<String> {
        Ok(langlands_dual_form(&self.inner).map_err(err)?.name)
    }

    /// Miniscule weight norms as exact fraction strings (trivial class first).
    fn miniscule_norms(&self) -> PyResult<Vec<String>> {
        let ws = lattices::miniscule_weights(&self.inner).map_err(err)?;
        Ok(ws.iter().map(|w| self.inner.rs.norm(w).to_string()).collect())
    }

    fn __repr__(&self) -> String {
        format!("GroupForm({})", self.inner.name)
    }
}

#[pyfunction]
fn root_system(type_name: &str) -> PyResult<PyRootSystem> {
    Ok(PyRootSystem { inner: build(type_name)? })
}

#[pyfunction]
fn group_form(name: &str) -> PyResult<PyGroupForm> {
    Ok(PyGroupForm { inner: form(name)? })
}

#[pyfunction]
fn all_forms(type_name: &str) -> PyResult<Vec<String>> {
    let rs = build(type_name)?;
    Ok(GroupForm::all_forms(&rs).map_err(err)?.into_iter().map(|g| g.name).collect())
}

#[pyfunction]
fn center_invariants(type_name: &str) -> PyResult<Vec<u64>> {
    let rs = build(type_name)?;
    let q = QuotientGroup::new(&Lattice::coweight_lattice(&rs), &Lattice::coroot_lattice(&rs))
        .map_err(err)?;
    Ok(q.invariant_factors)
}

/// Exact Gauss sum: (display string, complex approximation).
#[pyfunction]
fn gauss_sum(form_name: &str) -> PyResult<(String, (f64, f64))> {
    let g = form(form_name)?;
    let v = gauss::gauss_sum(&g).map_err(err)?;
    let c = v.to_complex();
    Ok((v.to_string(), (c.re, c.im)))
}

#[pyfunction]
fn verify_reciprocity(form_name: &str) -> PyResult<bool> {
    gauss::verify_reciprocity(&form(form_name)?).map_err(err)
}

#[pyfunction]
fn verify_gauss_identity(type_name: &str) -> PyResult<bool> {
    gauss::verify_gauss_identity(&build(type_name)?).map_err(err)
}

#[pyfunction]
fn verify_modular_relations(type_name: &str) -> PyResult<HashMap<String, bool>> {
    let rep = modrep::verify_modular_relations(&build(type_name)?).map_err(err)?;
    Ok(HashMap::from([
        ("s_unitary".to_string(), rep.s_unitary),
        ("t_unitary".to_string(), rep.t_unitary),
        ("s4_is_identity".to_string(), rep.s4_is_identity),
        ("st3_equals_s2".to_string(), rep.st3_equals_s2),
        ("s2_commutes_with_t".to_string(), rep.s2_commutes_with_t),
        ("s2_is_negation".to_string(), rep.s2_is_negation),
    ]))
}

#[pyfunction]
fn verify_hecke_relations(type_name: &str) -> PyResult<HashMap<String, bool>> {
    let rep = heckerep::verify_hecke_relations(&build(type_name)?).map_err(err)?;
    Ok(HashMap::from([
        ("s_unitary".to_string(), rep.s_unitary),
        ("t_unitary".to_string(), rep.t_unitary),
        ("s4_is_identity".to_string(), rep.s4_is_identity),
        ("st_2n_equals_s2".to_string(), rep.st_2n_equals_s2),
        ("s2_is_negation".to_string(), rep.s2_is_negation),
        ("s2_is_identity".to_string(), rep.s2_is_identity),
        ("block_structure".to_string(), rep.block_structure),
        ("aggregate_phase".to_string(), rep.aggregate_phase),
        ("table_residual".to_string(), rep.table_residual),
    ]))
}

#[pyfunction]
fn verify_s_duality(form_name: &str) -> PyResult<bool> {
    let g = form(form_name)?;
    if g.is_simply_laced() {
        modrep::verify_s_duality(&g).map_err(err)
    } else {
        heckerep::hecke_group_vectors(&g).map_err(err)
    }
}

#[pyfunction]
fn legendre(a: i64, p: u64) -> PyResult<i32> {
    gauss::legendre(a, p).map_err(err)
}

#[pyfunction]
fn verify_quadratic_reciprocity(p: u64, q: u64) -> PyResult<bool> {
    gauss::verify_quadratic_reciprocity(p, q).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (form_name, tau, tol = 1e-10))]
fn theta_eval(form_name: &str, tau: (f64, f64), tol: f64) -> PyResult<(f64, f64)> {
    let g = form(form_name)?;
    let p = ThetaParams {
        z: vec![Complex64::ZERO; g.rs.rank],
        tau: Complex64::new(tau.0, tau.1),
        delta: Complex64::ZERO,
        tol,
    };
    let v = theta::theta_group(&g, &p).map_err(err)?;
    Ok((v.re, v.im))
}

/// Max residual over every transformation law at one sample point.
#[pyfunction]
#[pyo3(signature = (type_name, tau, seed = 42, tol = 1e-10))]
fn theta_laws_max_residual(
    type_name: &str,
    tau: (f64, f64),
    seed: u64,
    tol: f64,
) -> PyResult<f64> {
    let rs = build(type_name)?;
    let p = ThetaParams {
        z: theta::seeded_z(rs.rank, seed),
        tau: Complex64::new(tau.0, tau.1),
        delta: Complex64::ZERO,
        tol,
    };
    Ok(theta::verify_theta_modular(&rs, &p).map_err(err)?.max_residual())
}

#[pyfunction]
fn landsberg(form_name: &str, eps: f64) -> PyResult<(f64, f64)> {
    let v = theta::landsberg_limit(&form(form_name)?, eps).map_err(err)?;
    Ok((v.re, v.im))
}

#[pymodule]
fn liegauss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootSystem>()?;
    m.add_class::<PyGroupForm>()?;
    m.add_function(wrap_pyfunction!(root_system, m)?)?;
    m.add_function(wrap_pyfunction!(group_form, m)?)?;
    m.add_function(wrap_pyfunction!(all_forms, m)?)?;
    m.add_function(wrap_pyfunction!(center_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(verify_reciprocity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gauss_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_modular_relations, m)?)?;
    m.add_function(wrap_pyfunction!(verify_hecke_relations, m)?)?;
    m.add_function(wrap_pyfunction!(verify_s_duality, m)?)?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(verify_quadratic_reciprocity, m)?)?;
    m.add_function(wrap_pyfunction!(theta_eval, m)?)?;
    m.add_function(wrap_pyfunction!(theta_laws_max_residual, m)?)?;
    m.add_function(wrap_pyfunction!(landsberg, m)?)?;
    Ok(())
}
