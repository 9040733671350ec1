//! Python bindings: the coupling triality, the ED oracle, VQE, the winding
//! pipeline, and the MZM profile, exposed as plain functions and one small
//! class. Build the cdylib and import it as `kitaev_qc_py` (see
//! `python/smoke_test.py`).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use kitaev_qc::ed;
use kitaev_qc::model::{Boundary, CouplingSet, MajoranaMode};
use kitaev_qc::mzm;
use kitaev_qc::topo;
use kitaev_qc::vqe;

fn err(e: kitaev_qc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn boundary(name: &str) -> PyResult<Boundary> {
    name.parse().map_err(err)
}

/// One parameter point in fermion, spin, and Majorana language at once.
#[pyclass(name = "CouplingSet", skip_from_py_object)]
#[derive(Clone)]
struct PyCouplingSet {
    inner: CouplingSet,
}

#[pymethods]
impl PyCouplingSet {
    #[staticmethod]
    fn from_spin(jx: f64, jy: f64, jz: f64, hz: f64) -> Self {
        PyCouplingSet { inner: CouplingSet::from_spin(jx, jy, jz, hz) }
    }

    #[staticmethod]
    fn from_fermion(t: f64, delta: f64, v: f64, mu: f64) -> Self {
        PyCouplingSet { inner: CouplingSet::from_fermion(t, delta, v, mu) }
    }

    fn swap_xy(&self) -> Self {
        PyCouplingSet { inner: self.inner.swap_xy() }
    }

    #[getter] fn t(&self) -> f64 { self.inner.t }
    #[getter] fn delta(&self) -> f64 { self.inner.delta }
    #[getter] fn v(&self) -> f64 { self.inner.v }
    #[getter] fn mu(&self) -> f64 { self.inner.mu }
    #[getter] fn jx(&self) -> f64 { self.inner.jx }
    #[getter] fn jy(&self) -> f64 { self.inner.jy }
    #[getter] fn jz(&self) -> f64 { self.inner.jz }
    #[getter] fn hz(&self) -> f64 { self.inner.hz }
    #[getter] fn g_plus(&self) -> f64 { self.inner.g_plus }
    #[getter] fn g_minus(&self) -> f64 { self.inner.g_minus }
    #[getter] fn zeta(&self) -> f64 { self.inner.zeta }
    #[getter] fn eta(&self) -> f64 { self.inner.eta }

    fn __repr__(&self) -> String {
        format!(
            "CouplingSet(jx={}, jy={}, jz={}, hz={})",
            self.inner.jx, self.inner.jy, self.inner.jz, self.inner.hz
        )
    }
}

/// Parity-resolved ground energies `(even, odd)` from exact diagonalization.
#[pyfunction]
#[pyo3(signature = (cs, n_sites, boundary_name = "open"))]
fn ed_ground_energies(cs: &PyCouplingSet, n_sites: usize, boundary_name: &str) -> PyResult<(f64, f64)> {
    let b = boundary(boundary_name)?;
    let basis = ed::EdBasis::for_boundary(b);
    let blocks = ed::solve_parity_blocks(&cs.inner, n_sites, b, basis).map_err(err)?;
    Ok((blocks.even.energies[0], blocks.odd.energies[0]))
}

/// Exact damped Green function `g_{j,j'}(delta)` (sites 1-indexed).
#[pyfunction]
#[pyo3(signature = (cs, n_sites, j, jp, delta, boundary_name = "open"))]
fn green_rs_exact(
    cs: &PyCouplingSet,
    n_sites: usize,
    j: usize,
    jp: usize,
    delta: f64,
    boundary_name: &str,
) -> PyResult<f64> {
    ed::green_rs_exact(&cs.inner, n_sites, boundary(boundary_name)?, j, jp, delta).map_err(err)
}

/// Winding number from the exact spectral Green functions.
#[pyfunction]
#[pyo3(signature = (cs, n_sites, delta, boundary_name = "open"))]
fn exact_winding(cs: &PyCouplingSet, n_sites: usize, delta: f64, boundary_name: &str) -> PyResult<i64> {
    ed::exact_winding(&cs.inner, n_sites, boundary(boundary_name)?, delta)
        .map(|w| w.winding)
        .map_err(err)
}

/// Tight-binding winding number (V is ignored).
#[pyfunction]
#[pyo3(signature = (cs, k_resolution = 2000))]
fn tb_winding(cs: &PyCouplingSet, k_resolution: usize) -> PyResult<i64> {
    topo::tb_winding(&cs.inner, k_resolution).map_err(err)
}

/// Ascending singular values and the two zero-mode profiles of the
/// tridiagonal Majorana matrix.
#[pyfunction]
fn tb_svd(cs: &PyCouplingSet, n_sites: usize) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let r = mzm::tb_svd(&cs.inner, n_sites).map_err(err)?;
    Ok((r.singular_values, r.u1, r.v1))
}

/// Variational energy of an explicit angle vector.
#[pyfunction]
fn vqe_energy(cs: &PyCouplingSet, n_sites: usize, layers: usize, angles: Vec<f64>, parity: i8) -> PyResult<f64> {
    let a = vqe::AnsatzAngles::from_values(n_sites, layers, angles).map_err(err)?;
    vqe::energy(&cs.inner, n_sites, layers, &a, parity).map_err(err)
}

/// Multi-start SA + BFGS ground-state search. Returns
/// `(energy, angles, converged, trial_energies)`.
#[pyfunction]
#[pyo3(signature = (cs, n_sites, layers, parity = 1, trials = 10, seed = 0))]
fn vqe_optimize(
    cs: &PyCouplingSet,
    n_sites: usize,
    layers: usize,
    parity: i8,
    trials: usize,
    seed: u64,
) -> PyResult<(f64, Vec<f64>, bool, Vec<f64>)> {
    let mut config = vqe::VqeConfig::new(layers, seed);
    config.trials = trials;
    let r = vqe::optimize(&cs.inner, n_sites, &config, parity).map_err(err)?;
    Ok((
        r.best_energy,
        r.best_angles.values,
        r.converged,
        r.trial_energies,
    ))
}

/// Circuit-pipeline winding per damping rate, using the even-parity ED
/// ground state as input. Returns one integer per delta.
#[pyfunction]
#[pyo3(signature = (cs, n_sites, deltas, t_delta = 5.0, dt = 0.01))]
fn winding_pipeline_ed(
    cs: &PyCouplingSet,
    n_sites: usize,
    deltas: Vec<f64>,
    t_delta: f64,
    dt: f64,
) -> PyResult<Vec<i64>> {
    let (_, gs) = ed::ground_in_parity(&cs.inner, n_sites, Boundary::Open, 1).map_err(err)?;
    let out = topo::winding_pipeline(&gs, &cs.inner, &deltas, t_delta, dt).map_err(err)?;
    Ok(out.into_iter().map(|(_, w)| w.winding).collect())
}

/// MZM transfer-amplitude profile from the two ED ground states. Returns
/// `(amplitude_s, amplitude_a)` per site.
#[pyfunction]
fn mzm_profile_ed(cs: &PyCouplingSet, n_sites: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let p = mzm::profile_from_ed(&cs.inner, n_sites).map_err(err)?;
    Ok((p.amplitude_s, p.amplitude_a))
}

/// Single transfer amplitude between explicit parity sectors (`mode` is
/// "s" or "a").
#[pyfunction]
fn transfer_amp_ed(cs: &PyCouplingSet, n_sites: usize, j: usize, mode: &str) -> PyResult<f64> {
    let m = match mode {
        "s" => MajoranaMode::Symmetric,
        "a" => MajoranaMode::Antisymmetric,
        other => return Err(PyValueError::new_err(format!("mode must be 's' or 'a', got '{other}'"))),
    };
    let (_, gp) = ed::ground_in_parity(&cs.inner, n_sites, Boundary::Open, 1).map_err(err)?;
    let (_, gm) = ed::ground_in_parity(&cs.inner, n_sites, Boundary::Open, -1).map_err(err)?;
    mzm::transfer_amp_states(&gp, &gm, j, m).map_err(err)
}

#[pymodule]
fn kitaev_qc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCouplingSet>()?;
    m.add_function(wrap_pyfunction!(ed_ground_energies, m)?)?;
    m.add_function(wrap_pyfunction!(green_rs_exact, m)?)?;
    m.add_function(wrap_pyfunction!(exact_winding, m)?)?;
    m.add_function(wrap_pyfunction!(tb_winding, m)?)?;
    m.add_function(wrap_pyfunction!(tb_svd, m)?)?;
    m.add_function(wrap_pyfunction!(vqe_energy, m)?)?;
    m.add_function(wrap_pyfunction!(vqe_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(winding_pipeline_ed, m)?)?;
    m.add_function(wrap_pyfunction!(mzm_profile_ed, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_amp_ed, m)?)?;
    Ok(())
}
