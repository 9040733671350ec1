//! Winding-number pipeline: Majorana overlaps from time evolution (direct or
//! Hadamard-test backends), damped time-integrated Green functions, the
//! momentum-space series Z_k, and the winding extraction — plus the V = 0
//! tight-binding analytic layer used as a reference.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{step_count, trotter_step};
use crate::model::{majorana_string, Boundary, CouplingSet, MajoranaMode};
use crate::sim::{Gate, PauliString, StateVector};

/// Many-body Anderson pseudo-vector samples on the paper's momentum grid
/// `k = 2 pi l / N`, `l = -N/2 ... N/2 - 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZkSeries {
    pub n_sites: usize,
    pub momenta: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Winding extraction with its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    /// accumulated angle / 2 pi before rounding
    pub raw: f64,
    /// per-k principal-branch increments Im log(Z_{k+dk} Z_k^*)
    pub increments: Vec<f64>,
    pub min_abs_zk: f64,
}

/// `Z_k = (1/2N) sum_{j,j'} e^{-i (j - j') k} g_{j,j'}` on the discrete grid.
pub fn zk_series(g: &[f64], n_sites: usize) -> ZkSeries {
    assert_eq!(g.len(), n_sites * n_sites, "need the full N x N matrix");
    let n = n_sites;
    let half = (n / 2) as i64;
    let mut momenta = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for l in -half..half {
        let k = 2.0 * std::f64::consts::PI * l as f64 / n as f64;
        // phases e^{i j k}: Z_k = (1/2N) sum_j conj(v_j) sum_j' g[j][j'] v_j'
        let v: Vec<Complex64> = (1..=n)
            .map(|j| Complex64::from_polar(1.0, j as f64 * k))
            .collect();
        let mut z = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for jp in 0..n {
                row += g[j * n + jp] * v[jp];
            }
            z += v[j].conj() * row;
        }
        momenta.push(k);
        values.push(z / (2.0 * n as f64));
    }
    ZkSeries { n_sites, momenta, values }
}

/// Discretized winding `(1/2pi) sum_k Im log(Z_{k+dk} Z_k^*)`, cyclic.
pub fn winding_from_zk(zk: &ZkSeries) -> Result<WindingResult> {
    let n = zk.values.len();
    if n < 3 {
        return Err(Error::invalid("need at least 3 momentum points"));
    }
    let min_abs_zk = zk.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min_abs_zk < 1e-9 {
        return Err(Error::IllDefinedWinding(format!(
            "min |Z_k| = {min_abs_zk:.3e} below 1e-9"
        )));
    }
    let mut increments = Vec::with_capacity(n);
    let mut total = 0.0f64;
    for i in 0..n {
        let inc = (zk.values[(i + 1) % n] * zk.values[i].conj()).arg();
        increments.push(inc);
        total += inc;
    }
    let raw = total / (2.0 * std::f64::consts::PI);
    let winding = raw.round();
    if (raw - winding).abs() > 0.1 {
        return Err(Error::IllDefinedWinding(format!(
            "accumulated angle {raw:.4} x 2pi is not near an integer"
        )));
    }
    Ok(WindingResult {
        winding: winding as i64,
        raw,
        increments,
        min_abs_zk,
    })
}

/// Principal-branch angle increments without the validity guards; diagnostic
/// companion to [`winding_from_zk`] for dumping ill-defined cases.
pub fn raw_increments(zk: &ZkSeries) -> Vec<f64> {
    let n = zk.values.len();
    (0..n)
        .map(|i| (zk.values[(i + 1) % n] * zk.values[i].conj()).arg())
        .collect()
}

/// Tight-binding pseudo vector `(epsilon_k, delta_k) = (-t cos k - mu/2, -Delta sin k)`.
pub fn tb_pseudo_vector(cs: &CouplingSet, k: f64) -> (f64, f64) {
    (-cs.t * k.cos() - cs.mu / 2.0, -cs.delta * k.sin())
}

/// Tight-binding winding number from the pseudo-vector angle accumulated over
/// a fine momentum grid. Sign convention matches the many-body pipeline
/// (N_w = -1 for Delta > 0, t > 0, |mu| < 2t).
pub fn tb_winding(cs: &CouplingSet, k_resolution: usize) -> Result<i64> {
    if k_resolution < 8 {
        return Err(Error::invalid("k_resolution too coarse"));
    }
    // continuous-k gap: eps^2 + delta^2 = (t^2 - D^2) c^2 + t mu c + mu^2/4 + D^2
    // with c = cos k in [-1, 1] is a quadratic; minimize it exactly so a
    // gapless band cannot slip between grid points
    let min_norm2 = {
        let (a, b, c0) = (
            cs.t * cs.t - cs.delta * cs.delta,
            cs.t * cs.mu,
            cs.mu * cs.mu / 4.0 + cs.delta * cs.delta,
        );
        let f = |c: f64| (a * c + b) * c + c0;
        let mut m = f(-1.0).min(f(1.0));
        if a.abs() > 0.0 {
            let c_star = -b / (2.0 * a);
            if (-1.0..=1.0).contains(&c_star) {
                m = m.min(f(c_star));
            }
        }
        m
    };
    if min_norm2 <= 1e-12 {
        return Err(Error::IllDefinedWinding(format!(
            "gapless: min (eps_k^2 + delta_k^2) = {min_norm2:.3e}"
        )));
    }
    let vec_at = |k: f64| {
        let (e, d) = tb_pseudo_vector(cs, k);
        Complex64::new(e, d)
    };
    let mut total = 0.0f64;
    let mut prev = vec_at(-std::f64::consts::PI);
    for i in 1..=k_resolution {
        let k = -std::f64::consts::PI
            + 2.0 * std::f64::consts::PI * i as f64 / k_resolution as f64;
        let cur = vec_at(k);
        total += (cur * prev.conj()).arg();
        prev = cur;
    }
    Ok(-(total / (2.0 * std::f64::consts::PI)).round() as i64)
}

/// Parity-resolved PBC ground energies `(even, odd)` of the quadratic chain
/// (V = 0), exact at finite N.
///
/// Filled Bogoliubov pairs contribute `2 eps_k - 2 xi_k` for 0 < k < pi; the
/// unpaired k = 0 and k = -pi fermions are occupied iff that lowers the
/// energy, which also fixes the parity of the absolute ground state; the
/// other sector pays the cheapest parity-flipping excitation.
pub fn tb_pbc_sector_energies(cs: &CouplingSet, n_sites: usize) -> Result<(f64, f64)> {
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(Error::invalid("need even n_sites >= 4"));
    }
    let n = n_sites as i64;
    let et = |k: f64| -2.0 * cs.t * k.cos() - cs.mu;
    let xi = |k: f64| {
        let (e, d) = tb_pseudo_vector(cs, k);
        (e * e + d * d).sqrt()
    };
    let mut e_pairs = 0.0;
    let mut min_pair_gap = f64::INFINITY;
    for l in (-n / 2)..(n / 2) {
        let k = 2.0 * std::f64::consts::PI * l as f64 / n as f64;
        if k > 1e-12 && k < std::f64::consts::PI - 1e-12 {
            e_pairs += et(k) - 2.0 * xi(k);
            min_pair_gap = min_pair_gap.min(2.0 * xi(k));
        }
    }
    let e0 = et(0.0);
    let epi = et(-std::f64::consts::PI);
    let base = e_pairs + e0.min(0.0) + epi.min(0.0) + cs.mu * n_sites as f64 / 2.0;
    let mut parity = 1i8;
    if e0 < 0.0 {
        parity = -parity;
    }
    if epi < 0.0 {
        parity = -parity;
    }
    let flip = e0.abs().min(epi.abs()).min(min_pair_gap);
    Ok(if parity == 1 {
        (base, base + flip)
    } else {
        (base + flip, base)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Direct,
    HadamardTest,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Backend::Direct),
            "hadamard-test" | "hadamard" => Ok(Backend::HadamardTest),
            other => Err(Error::invalid(format!("unknown backend '{other}'"))),
        }
    }
}

/// Parameters of the damped time integral and its evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenConfig {
    /// damping rate (energy units)
    pub delta: f64,
    /// dimensionless cutoff T * delta; the integration runs to T = t_delta / delta
    pub t_delta: f64,
    /// Trotter / quadrature step
    pub dt: f64,
    pub backend: Backend,
    pub shots: Option<u64>,
    pub seed: u64,
}

impl GreenConfig {
    pub fn new(delta: f64) -> Self {
        GreenConfig {
            delta,
            t_delta: 5.0,
            dt: 0.01,
            backend: Backend::Direct,
            shots: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0) {
            return Err(Error::invalid("damping delta must be > 0"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::invalid("dt must be > 0"));
        }
        if self.t_delta < 1.0 {
            return Err(Error::invalid(
                "cutoff T*delta must be >= 1 (the integral needs T*delta >> 1)",
            ));
        }
        Ok(())
    }

    /// True when the truncation is looser than the recommended regime.
    pub fn is_loose_cutoff(&self) -> bool {
        self.t_delta < 3.0
    }

    pub fn n_steps(&self) -> usize {
        (self.t_delta / self.delta / self.dt).round() as usize
    }
}

fn prep_state(gs_prep: &[Gate], n_sites: usize) -> Result<StateVector> {
    let mut s = StateVector::zeros(n_sites);
    s.apply_all(gs_prep)?;
    Ok(s)
}

/// Extend an N-site Pauli string with an identity on the ancilla qubit.
fn extend_string(p: &PauliString) -> PauliString {
    let mut letters = p.letters.clone();
    letters.push(crate::sim::Pauli::I);
    PauliString { coefficient: p.coefficient, letters }
}

fn ancilla_x_expectation(state: &StateVector, shots: Option<u64>, seed: u64) -> Result<f64> {
    let n = state.n_qubits();
    let ancilla = n - 1;
    match shots {
        None => {
            let mut x = PauliString::identity(n);
            x.letters[ancilla] = crate::sim::Pauli::X;
            let v = state.expect_string(&x);
            debug_assert!(v.im.abs() < 1e-9);
            Ok(v.re)
        }
        Some(shots) => {
            // rotate the ancilla into the z basis and count signs
            let mut rotated = state.clone();
            rotated.apply(&Gate::Hadamard { target: ancilla })?;
            let counts = rotated.sample(shots, seed)?;
            let mask = 1usize << ancilla;
            let mut acc: i64 = 0;
            for (idx, c) in counts {
                acc += if idx & mask == 0 { c as i64 } else { -(c as i64) };
            }
            Ok(acc as f64 / shots as f64)
        }
    }
}

/// `Re <gamma_j^s(t) | gamma_{j'}^a(t)>` over the prepared ground state.
#[allow(clippy::too_many_arguments)]
pub fn overlap_re(
    gs_prep: &[Gate],
    cs: &CouplingSet,
    n_sites: usize,
    j: usize,
    jp: usize,
    t: f64,
    dt: f64,
    backend: Backend,
    shots: Option<u64>,
    seed: u64,
) -> Result<f64> {
    let gamma_s = majorana_string(j, MajoranaMode::Symmetric, n_sites)?;
    let gamma_a = majorana_string(jp, MajoranaMode::Antisymmetric, n_sites)?;
    let steps = step_count(t, dt)?;
    let step = trotter_step(cs, n_sites, dt, Boundary::Open)?;
    match backend {
        Backend::Direct => {
            let gs = prep_state(gs_prep, n_sites)?;
            let mut u = gs.clone();
            let mut v = gs;
            v.apply_pauli(&gamma_a)?;
            for _ in 0..steps {
                u.apply_all(&step)?;
                v.apply_all(&step)?;
            }
            u.apply_pauli(&gamma_s)?;
            Ok(u.inner(&v)?.re)
        }
        Backend::HadamardTest => {
            let ancilla = n_sites;
            let mut state = StateVector::zeros(n_sites + 1);
            state.apply_all(gs_prep)?;
            state.apply(&Gate::Hadamard { target: ancilla })?;
            state.apply(&Gate::ControlledPauli {
                control: ancilla,
                control_value: false,
                string: extend_string(&gamma_a),
            })?;
            for _ in 0..steps {
                state.apply_all(&step)?;
            }
            state.apply(&Gate::ControlledPauli {
                control: ancilla,
                control_value: true,
                string: extend_string(&gamma_s),
            })?;
            ancilla_x_expectation(&state, shots, seed)
        }
    }
}

/// Damped time integral for one site pair:
/// `g_{j,j'} = -2 int_0^T dt e^{-delta t} Re<gamma_j^s(t)|gamma_{j'}^a(t)>`
/// by the trapezoidal rule on the dt grid, with incremental evolution.
pub fn green_rs(
    gs_prep: &[Gate],
    cs: &CouplingSet,
    n_sites: usize,
    j: usize,
    jp: usize,
    config: &GreenConfig,
) -> Result<f64> {
    config.validate()?;
    let gamma_s = majorana_string(j, MajoranaMode::Symmetric, n_sites)?;
    let gamma_a = majorana_string(jp, MajoranaMode::Antisymmetric, n_sites)?;
    let steps = config.n_steps();
    let step = trotter_step(cs, n_sites, config.dt, Boundary::Open)?;
    let mut acc = 0.0f64;
    match config.backend {
        Backend::Direct => {
            let gs = prep_state(gs_prep, n_sites)?;
            let mut u = gs.clone();
            let mut v = gs;
            v.apply_pauli(&gamma_a)?;
            for s in 0..=steps {
                let t = s as f64 * config.dt;
                let w = if s == 0 || s == steps { 0.5 } else { 1.0 };
                let mut us = u.clone();
                us.apply_pauli(&gamma_s)?;
                acc += w * config.dt * (-config.delta * t).exp() * us.inner(&v)?.re;
                if s < steps {
                    u.apply_all(&step)?;
                    v.apply_all(&step)?;
                }
            }
        }
        Backend::HadamardTest => {
            let ancilla = n_sites;
            let mut state = StateVector::zeros(n_sites + 1);
            state.apply_all(gs_prep)?;
            state.apply(&Gate::Hadamard { target: ancilla })?;
            state.apply(&Gate::ControlledPauli {
                control: ancilla,
                control_value: false,
                string: extend_string(&gamma_a),
            })?;
            let ctrl_s = Gate::ControlledPauli {
                control: ancilla,
                control_value: true,
                string: extend_string(&gamma_s),
            };
            for s in 0..=steps {
                let t = s as f64 * config.dt;
                let w = if s == 0 || s == steps { 0.5 } else { 1.0 };
                let mut measured = state.clone();
                measured.apply(&ctrl_s)?;
                let x = ancilla_x_expectation(
                    &measured,
                    config.shots,
                    config.seed.wrapping_add(s as u64),
                )?;
                acc += w * config.dt * (-config.delta * t).exp() * x;
                if s < steps {
                    state.apply_all(&step)?;
                }
            }
        }
    }
    Ok(-2.0 * acc)
}

/// All `g_{j,j'}` for several damping rates in one pass (direct backend).
///
/// Cost is N + 1 evolving states: `u(t)` and one `v_{j'}(t)` per column; the
/// per-step overlap matrix is shared by every delta accumulator, which only
/// differ in weights and cutoff times.
pub fn green_matrices(
    gs: &StateVector,
    cs: &CouplingSet,
    deltas: &[f64],
    t_delta: f64,
    dt: f64,
) -> Result<Vec<Vec<f64>>> {
    if deltas.is_empty() {
        return Err(Error::invalid("need at least one delta"));
    }
    for &d in deltas {
        GreenConfig { delta: d, t_delta, dt, backend: Backend::Direct, shots: None, seed: 0 }
            .validate()?;
    }
    let n = gs.n_qubits();
    let gammas_s: Vec<PauliString> = (1..=n)
        .map(|j| majorana_string(j, MajoranaMode::Symmetric, n))
        .collect::<Result<_>>()?;
    let step = trotter_step(cs, n, dt, Boundary::Open)?;
    let mut u = gs.clone();
    let mut vs: Vec<StateVector> = (1..=n)
        .map(|jp| {
            let mut v = gs.clone();
            majorana_string(jp, MajoranaMode::Antisymmetric, n).and_then(|g| {
                v.apply_pauli(&g)?;
                Ok(v)
            })
        })
        .collect::<Result<_>>()?;
    let step_counts: Vec<usize> = deltas
        .iter()
        .map(|&d| (t_delta / d / dt).round() as usize)
        .collect();
    let max_steps = *step_counts.iter().max().unwrap();
    let mut acc = vec![vec![0.0f64; n * n]; deltas.len()];
    let mut overlap = vec![0.0f64; n * n];
    for s in 0..=max_steps {
        let t = s as f64 * dt;
        for (jm1, gamma_s) in gammas_s.iter().enumerate() {
            let mut us = u.clone();
            us.apply_pauli(gamma_s)?;
            for (jpm1, v) in vs.iter().enumerate() {
                overlap[jm1 * n + jpm1] = us.inner(v)?.re;
            }
        }
        for (di, (&delta, &sc)) in deltas.iter().zip(&step_counts).enumerate() {
            if s > sc {
                continue;
            }
            let w = if s == 0 || s == sc { 0.5 } else { 1.0 };
            let weight = -2.0 * w * dt * (-delta * t).exp();
            for (a, &o) in acc[di].iter_mut().zip(&overlap) {
                *a += weight * o;
            }
        }
        if s < max_steps {
            u.apply_all(&step)?;
            for v in &mut vs {
                v.apply_all(&step)?;
            }
        }
    }
    Ok(acc)
}

/// Full circuit pipeline: Green matrices, Z_k series, and winding per delta.
pub fn winding_pipeline(
    gs: &StateVector,
    cs: &CouplingSet,
    deltas: &[f64],
    t_delta: f64,
    dt: f64,
) -> Result<Vec<(ZkSeries, WindingResult)>> {
    let mats = green_matrices(gs, cs, deltas, t_delta, dt)?;
    mats.iter()
        .map(|g| {
            let zk = zk_series(g, gs.n_qubits());
            let w = winding_from_zk(&zk)?;
            Ok((zk, w))
        })
        .collect()
}
