//! Majorana-zero-mode visualization: inter-parity transfer amplitudes
//! `|<gs_+| gamma_j^mode |gs_->|` per site, and the V = 0 reference profile
//! from the singular-value decomposition of the tridiagonal Majorana
//! coupling matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{majorana_string, parity_string, CouplingSet, MajoranaMode};
use crate::sim::{Gate, StateVector};
use crate::vqe::{optimize, VqeConfig, VqeResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MzmBackend {
    /// statevector inner products
    Direct,
    /// prepare |gs_->, apply the Pauli string, undo the |gs_+> preparation,
    /// read sqrt P(|0...0>)
    Circuit,
}

impl std::str::FromStr for MzmBackend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(MzmBackend::Direct),
            "circuit" => Ok(MzmBackend::Circuit),
            other => Err(Error::invalid(format!("unknown mzm backend '{other}'"))),
        }
    }
}

/// Per-site transfer amplitudes for both Majorana modes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MzmProfile {
    pub n_sites: usize,
    pub amplitude_s: Vec<f64>,
    pub amplitude_a: Vec<f64>,
    pub energy_plus: f64,
    pub energy_minus: f64,
    pub couplings: CouplingSet,
    pub converged: bool,
}

/// SVD reference of the tridiagonal Majorana matrix (diagonal eta,
/// super-diagonal g_-, sub-diagonal g_+), singular values ascending.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TbMajoranaRef {
    pub singular_values: Vec<f64>,
    /// |U_{j,1}|: the symmetric-mode zero-mode profile
    pub u1: Vec<f64>,
    /// |V_{j,1}|: the antisymmetric-mode zero-mode profile
    pub v1: Vec<f64>,
}

fn measured_parity(state: &StateVector) -> Result<f64> {
    Ok(state.expect_string(&parity_string(state.n_qubits())?).re)
}

/// `|<gs_+| gamma_j^mode |gs_->|` from explicit statevectors.
pub fn transfer_amp_states(
    gs_plus: &StateVector,
    gs_minus: &StateVector,
    j: usize,
    mode: MajoranaMode,
) -> Result<f64> {
    let n = gs_plus.n_qubits();
    if gs_minus.n_qubits() != n {
        return Err(Error::invalid("state sizes differ"));
    }
    let pp = measured_parity(gs_plus)?;
    let pm = measured_parity(gs_minus)?;
    if (pp - pm).abs() < 1.0 {
        return Err(Error::invalid(format!(
            "preparations must target opposite parities (got {pp:.3} and {pm:.3}); \
             same-sector amplitudes vanish by the parity selection rule"
        )));
    }
    let mut v = gs_minus.clone();
    v.apply_pauli(&majorana_string(j, mode, n)?)?;
    Ok(gs_plus.inner(&v)?.norm())
}

/// `|<gs_+| gamma_j^mode |gs_->|` from the two preparation circuits.
pub fn transfer_amp(
    gs_plus_prep: &[Gate],
    gs_minus_prep: &[Gate],
    n_sites: usize,
    j: usize,
    mode: MajoranaMode,
    backend: MzmBackend,
) -> Result<f64> {
    let prep = |gates: &[Gate]| -> Result<StateVector> {
        let mut s = StateVector::zeros(n_sites);
        s.apply_all(gates)?;
        Ok(s)
    };
    match backend {
        MzmBackend::Direct => {
            transfer_amp_states(&prep(gs_plus_prep)?, &prep(gs_minus_prep)?, j, mode)
        }
        MzmBackend::Circuit => {
            // parity precondition checked on the statevectors
            transfer_amp_states(&prep(gs_plus_prep)?, &prep(gs_minus_prep)?, j, mode)?;
            let mut s = prep(gs_minus_prep)?;
            s.apply_pauli(&majorana_string(j, mode, n_sites)?)?;
            for g in gs_plus_prep.iter().rev() {
                s.apply(&g.dagger())?;
            }
            let zeros = "0".repeat(n_sites);
            Ok(s.prob_basis(&zeros)?.sqrt())
        }
    }
}

/// Profile from two explicit ground states (ED or externally prepared).
pub fn profile_from_states(
    gs_plus: &StateVector,
    gs_minus: &StateVector,
    cs: &CouplingSet,
    energy_plus: f64,
    energy_minus: f64,
) -> Result<MzmProfile> {
    let n = gs_plus.n_qubits();
    let mut amplitude_s = Vec::with_capacity(n);
    let mut amplitude_a = Vec::with_capacity(n);
    for j in 1..=n {
        amplitude_s.push(transfer_amp_states(gs_plus, gs_minus, j, MajoranaMode::Symmetric)?);
        amplitude_a.push(transfer_amp_states(gs_plus, gs_minus, j, MajoranaMode::Antisymmetric)?);
    }
    Ok(MzmProfile {
        n_sites: n,
        amplitude_s,
        amplitude_a,
        energy_plus,
        energy_minus,
        couplings: *cs,
        converged: true,
    })
}

/// Full VQE-backed profile: optimize both parity sectors, then measure every
/// site and mode. Carries both sector energies so the finite-size gap can be
/// judged; `converged` reflects both optimizations.
pub fn profile(
    cs: &CouplingSet,
    n_sites: usize,
    config: &VqeConfig,
    backend: MzmBackend,
) -> Result<(MzmProfile, VqeResult, VqeResult)> {
    let plus = optimize(cs, n_sites, config, 1)?;
    let minus = optimize(cs, n_sites, config, -1)?;
    let prep_plus = crate::vqe::build_ansatz(n_sites, config.layers, &plus.best_angles, 1)?;
    let prep_minus = crate::vqe::build_ansatz(n_sites, config.layers, &minus.best_angles, -1)?;
    let mut amplitude_s = Vec::with_capacity(n_sites);
    let mut amplitude_a = Vec::with_capacity(n_sites);
    for j in 1..=n_sites {
        amplitude_s.push(transfer_amp(
            &prep_plus,
            &prep_minus,
            n_sites,
            j,
            MajoranaMode::Symmetric,
            backend,
        )?);
        amplitude_a.push(transfer_amp(
            &prep_plus,
            &prep_minus,
            n_sites,
            j,
            MajoranaMode::Antisymmetric,
            backend,
        )?);
    }
    let p = MzmProfile {
        n_sites,
        amplitude_s,
        amplitude_a,
        energy_plus: plus.best_energy,
        energy_minus: minus.best_energy,
        couplings: *cs,
        converged: plus.converged && minus.converged,
    };
    Ok((p, plus, minus))
}

/// SVD of the N x N tridiagonal Majorana coupling matrix. The interaction is
/// ignored (zeta != 0 is outside this reference's validity).
pub fn tb_svd(cs: &CouplingSet, n_sites: usize) -> Result<TbMajoranaRef> {
    if n_sites < 2 {
        return Err(Error::invalid("need at least 2 sites"));
    }
    let n = n_sites;
    let mut m = vec![0.0f64; n * n]; // column-major
    for j in 0..n {
        m[j * n + j] = cs.eta;
    }
    for j in 0..n - 1 {
        m[(j + 1) * n + j] = cs.g_minus; // row j, col j+1
        m[j * n + (j + 1)] = cs.g_plus; // row j+1, col j
    }
    let (u, s, vt) = linalg::svd(n, m)?;
    // LAPACK returns descending; expose ascending, zero mode first
    let singular_values: Vec<f64> = s.iter().rev().copied().collect();
    let zcol = n - 1;
    let u1: Vec<f64> = (0..n).map(|j| u[zcol * n + j].abs()).collect();
    let v1: Vec<f64> = (0..n).map(|j| vt[j * n + zcol].abs()).collect();
    Ok(TbMajoranaRef { singular_values, u1, v1 })
}

/// Convenience: both parity ground states from the ED oracle feed a profile.
pub fn profile_from_ed(cs: &CouplingSet, n_sites: usize) -> Result<MzmProfile> {
    let (ep, gp) = crate::ed::ground_in_parity(cs, n_sites, crate::model::Boundary::Open, 1)?;
    let (em, gm) = crate::ed::ground_in_parity(cs, n_sites, crate::model::Boundary::Open, -1)?;
    profile_from_states(&gp, &gm, cs, ep, em)
}
