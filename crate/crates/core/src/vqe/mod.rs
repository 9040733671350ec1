//! Parity-conserved variational ground-state search.
//!
//! The ansatz alternates two-site parity-conserving unitaries on odd bonds,
//! even bonds, and one-site z rotations, for M layers; odd-parity states
//! start from `X_1 |0...0>`. Angle count is (4N-3)M.

pub mod optim;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{parity_string, spin_hamiltonian, Boundary, CouplingSet};
use crate::sim::{Axis, Gate, PauliSum, StateVector};
pub use optim::SaSchedule;

/// Which angle a flat-vector slot holds: three bond angles per Eq. (8) and
/// the one-site field angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleKind {
    A,
    B,
    C,
    Theta,
}

/// Flat angle vector with the (layer, bond/site) layout fixed:
/// per layer m = 1..=M: bonds j = 1..N with (a, b, c), then sites j = 1..=N
/// with theta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzAngles {
    pub n_sites: usize,
    pub layers: usize,
    pub values: Vec<f64>,
}

impl AnsatzAngles {
    pub fn count(n_sites: usize, layers: usize) -> usize {
        (4 * n_sites - 3) * layers
    }

    pub fn zeros(n_sites: usize, layers: usize) -> Self {
        AnsatzAngles {
            n_sites,
            layers,
            values: vec![0.0; Self::count(n_sites, layers)],
        }
    }

    pub fn from_values(n_sites: usize, layers: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != Self::count(n_sites, layers) {
            return Err(Error::invalid(format!(
                "expected {} angles for N={n_sites}, M={layers}; got {}",
                Self::count(n_sites, layers),
                values.len()
            )));
        }
        Ok(AnsatzAngles { n_sites, layers, values })
    }

    fn per_layer(&self) -> usize {
        4 * self.n_sites - 3
    }

    /// Slot of bond angle (`layer` 1-indexed, bond `j` 1-indexed).
    pub fn bond_index(&self, layer: usize, j: usize, kind: AngleKind) -> usize {
        let k = match kind {
            AngleKind::A => 0,
            AngleKind::B => 1,
            AngleKind::C => 2,
            AngleKind::Theta => panic!("theta is a site angle"),
        };
        (layer - 1) * self.per_layer() + (j - 1) * 3 + k
    }

    /// Slot of the site angle theta.
    pub fn site_index(&self, layer: usize, j: usize) -> usize {
        (layer - 1) * self.per_layer() + 3 * (self.n_sites - 1) + (j - 1)
    }

    /// `(layer, j, kind)` label of a flat slot, matching the text format.
    pub fn label(&self, index: usize) -> (usize, usize, AngleKind) {
        let layer = index / self.per_layer() + 1;
        let r = index % self.per_layer();
        let n_bond = 3 * (self.n_sites - 1);
        if r < n_bond {
            let kind = [AngleKind::A, AngleKind::B, AngleKind::C][r % 3];
            (layer, r / 3 + 1, kind)
        } else {
            (layer, r - n_bond + 1, AngleKind::Theta)
        }
    }
}

/// Generator of a parameterized gate `U(x) = exp(i x A)`; enough structure to
/// take exact derivatives in the adjoint sweep.
#[derive(Debug, Clone, Copy)]
enum Generator {
    /// `(XX + YY)/2` on a bond
    XxPlusYy(usize, usize),
    /// `(XX - YY)/2` on a bond
    XxMinusYy(usize, usize),
    /// `ZZ` on a bond
    Zz(usize, usize),
    /// `Z` on a site
    FieldZ(usize),
}

fn tagged_gates(
    n_sites: usize,
    layers: usize,
    angles: &AnsatzAngles,
    parity: i8,
) -> Result<Vec<(Gate, Option<(usize, Generator)>)>> {
    if n_sites % 4 != 0 {
        return Err(Error::UnsupportedSize(format!(
            "ansatz requires N = 0 (mod 4); got N = {n_sites}"
        )));
    }
    if parity != 1 && parity != -1 {
        return Err(Error::invalid("parity must be +1 or -1"));
    }
    if angles.n_sites != n_sites || angles.layers != layers {
        return Err(Error::invalid("angle layout does not match (N, M)"));
    }
    let mut gates = Vec::new();
    if parity == -1 {
        gates.push((Gate::PauliX { target: 0 }, None));
    }
    for m in 1..=layers {
        let bond = |j: usize, gates: &mut Vec<(Gate, Option<(usize, Generator)>)>| {
            let (q0, q1) = (j - 1, j);
            let ia = angles.bond_index(m, j, AngleKind::A);
            let ib = angles.bond_index(m, j, AngleKind::B);
            let ic = angles.bond_index(m, j, AngleKind::C);
            gates.push((
                Gate::XxPlusYy { angle: angles.values[ia], targets: (q0, q1) },
                Some((ia, Generator::XxPlusYy(q0, q1))),
            ));
            gates.push((
                Gate::XxMinusYy { angle: angles.values[ib], targets: (q0, q1) },
                Some((ib, Generator::XxMinusYy(q0, q1))),
            ));
            gates.push((
                Gate::Zz { angle: angles.values[ic], targets: (q0, q1) },
                Some((ic, Generator::Zz(q0, q1))),
            ));
        };
        for j in (1..n_sites).step_by(2) {
            bond(j, &mut gates);
        }
        for j in (2..n_sites).step_by(2) {
            bond(j, &mut gates);
        }
        for j in 1..=n_sites {
            let it = angles.site_index(m, j);
            // U1(theta) = exp(i theta Z) = Rz(2 theta)
            gates.push((
                Gate::Rotation {
                    axis: Axis::Z,
                    angle: 2.0 * angles.values[it],
                    target: j - 1,
                },
                Some((it, Generator::FieldZ(j - 1))),
            ));
        }
    }
    Ok(gates)
}

/// Ordered gate list of the ansatz circuit.
pub fn build_ansatz(
    n_sites: usize,
    layers: usize,
    angles: &AnsatzAngles,
    parity: i8,
) -> Result<Vec<Gate>> {
    Ok(tagged_gates(n_sites, layers, angles, parity)?
        .into_iter()
        .map(|(g, _)| g)
        .collect())
}

/// Prepared ansatz state.
pub fn prepare_state(
    n_sites: usize,
    layers: usize,
    angles: &AnsatzAngles,
    parity: i8,
) -> Result<StateVector> {
    let mut s = StateVector::zeros(n_sites);
    for (g, _) in tagged_gates(n_sites, layers, angles, parity)? {
        s.apply(&g)?;
    }
    Ok(s)
}

/// Variational energy of the OBC spin Hamiltonian.
pub fn energy(
    cs: &CouplingSet,
    n_sites: usize,
    layers: usize,
    angles: &AnsatzAngles,
    parity: i8,
) -> Result<f64> {
    let h = spin_hamiltonian(cs, n_sites, Boundary::Open)?;
    prepare_state(n_sites, layers, angles, parity)?.expect(&h)
}

/// Central finite-difference gradient, step 1e-6 per angle.
pub fn gradient(
    cs: &CouplingSet,
    n_sites: usize,
    layers: usize,
    angles: &AnsatzAngles,
    parity: i8,
) -> Result<Vec<f64>> {
    let h = spin_hamiltonian(cs, n_sites, Boundary::Open)?;
    let mut work = angles.clone();
    let step = 1e-6;
    let mut g = Vec::with_capacity(work.values.len());
    for i in 0..work.values.len() {
        let orig = work.values[i];
        work.values[i] = orig + step;
        let ep = prepare_state(n_sites, layers, &work, parity)?.expect(&h)?;
        work.values[i] = orig - step;
        let em = prepare_state(n_sites, layers, &work, parity)?.expect(&h)?;
        work.values[i] = orig;
        g.push((ep - em) / (2.0 * step));
    }
    Ok(g)
}

/// `Im <lambda| A |psi>` for a generator `A`.
fn generator_im(lambda: &StateVector, psi: &StateVector, gen: Generator) -> f64 {
    let la = lambda.amplitudes();
    let pa = psi.amplitudes();
    let mut acc = 0.0f64;
    match gen {
        Generator::FieldZ(q) => {
            let m = 1usize << q;
            for i in 0..pa.len() {
                let z = if i & m == 0 { 1.0 } else { -1.0 };
                acc += z * (la[i].conj() * pa[i]).im;
            }
        }
        Generator::Zz(q0, q1) => {
            let (m0, m1) = (1usize << q0, 1usize << q1);
            for i in 0..pa.len() {
                let z = if ((i & m0 != 0) as u8) == ((i & m1 != 0) as u8) { 1.0 } else { -1.0 };
                acc += z * (la[i].conj() * pa[i]).im;
            }
        }
        Generator::XxPlusYy(q0, q1) => {
            let (m0, m1) = (1usize << q0, 1usize << q1);
            for i in 0..pa.len() {
                if i & m0 != 0 && i & m1 == 0 {
                    let j = i ^ m0 ^ m1;
                    acc += (la[i].conj() * pa[j] + la[j].conj() * pa[i]).im;
                }
            }
        }
        Generator::XxMinusYy(q0, q1) => {
            let (m0, m1) = (1usize << q0, 1usize << q1);
            let both = m0 | m1;
            for i in 0..pa.len() {
                if i & both == 0 {
                    let j = i | both;
                    acc += (la[i].conj() * pa[j] + la[j].conj() * pa[i]).im;
                }
            }
        }
    }
    acc
}

fn apply_sum(h: &PauliSum, s: &StateVector) -> Result<StateVector> {
    let mut out = StateVector::from_amplitudes(
        s.n_qubits(),
        vec![num_complex::Complex64::new(0.0, 0.0); 1 << s.n_qubits()],
    )?;
    for t in &h.terms {
        let mut part = s.clone();
        part.apply_pauli(t)?;
        for (o, p) in out.amplitudes_mut().iter_mut().zip(part.amplitudes()) {
            *o += p;
        }
    }
    Ok(out)
}

/// Exact gradient by a reverse (adjoint) sweep: two circuit passes total
/// instead of two energy evaluations per angle. Agrees with [`gradient`] to
/// finite-difference accuracy; this is the optimizer's fast path.
pub fn adjoint_gradient(
    cs: &CouplingSet,
    n_sites: usize,
    layers: usize,
    angles: &AnsatzAngles,
    parity: i8,
) -> Result<Vec<f64>> {
    let h = spin_hamiltonian(cs, n_sites, Boundary::Open)?;
    let gates = tagged_gates(n_sites, layers, angles, parity)?;
    let mut psi = StateVector::zeros(n_sites);
    for (g, _) in &gates {
        psi.apply(g)?;
    }
    let mut lambda = apply_sum(&h, &psi)?;
    let mut grad = vec![0.0f64; angles.values.len()];
    for (g, tag) in gates.iter().rev() {
        if let Some((idx, gen)) = tag {
            // dE/dx = 2 Re<lambda| i A |psi_after> = -2 Im<lambda|A|psi_after>
            grad[*idx] = -2.0 * generator_im(&lambda, &psi, *gen);
        }
        let d = g.dagger();
        psi.apply(&d)?;
        lambda.apply(&d)?;
    }
    Ok(grad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub layers: usize,
    pub trials: usize,
    /// BFGS stop: per-iteration energy decrease below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub sa: SaSchedule,
    pub seed: u64,
}

impl VqeConfig {
    pub fn new(layers: usize, seed: u64) -> Self {
        VqeConfig {
            layers,
            trials: 10,
            tolerance: 1e-8,
            max_iterations: 3000,
            sa: SaSchedule::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers < 1 || self.trials < 1 {
            return Err(Error::invalid("layers and trials must be >= 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VqeResult {
    pub best_energy: f64,
    pub best_angles: AnsatzAngles,
    pub best_trial: usize,
    pub trial_energies: Vec<f64>,
    pub trial_iterations: Vec<usize>,
    pub trial_converged: Vec<bool>,
    pub parity_requested: i8,
    pub parity_measured: f64,
    pub converged: bool,
}

/// Multi-start SA + BFGS search for the sector ground state.
///
/// Trials are independent (seed + trial index) and run in parallel; the
/// winner is the minimum energy, ties broken by trial index.
pub fn optimize(cs: &CouplingSet, n_sites: usize, config: &VqeConfig, parity: i8) -> Result<VqeResult> {
    config.validate()?;
    let h = spin_hamiltonian(cs, n_sites, Boundary::Open)?;
    let n_angles = AnsatzAngles::count(n_sites, config.layers);
    // reject bad sizes before spawning trials
    tagged_gates(n_sites, config.layers, &AnsatzAngles::zeros(n_sites, config.layers), parity)?;

    struct Trial {
        energy: f64,
        angles: Vec<f64>,
        iterations: usize,
        converged: bool,
    }

    let run_trial = |trial: usize| -> Result<Trial> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial as u64));
        let mut x: Vec<f64> = (0..n_angles)
            .map(|_| (rng.gen::<f64>() - 0.5) * 2.0 * std::f64::consts::PI)
            .collect();
        let eval = |v: &[f64]| -> f64 {
            let a = AnsatzAngles {
                n_sites,
                layers: config.layers,
                values: v.to_vec(),
            };
            prepare_state(n_sites, config.layers, &a, parity)
                .and_then(|s| s.expect(&h))
                .expect("sizes validated up front")
        };
        let gradv = |v: &[f64]| -> Vec<f64> {
            let a = AnsatzAngles {
                n_sites,
                layers: config.layers,
                values: v.to_vec(),
            };
            adjoint_gradient(cs, n_sites, config.layers, &a, parity)
                .expect("sizes validated up front")
        };
        let mut f = eval;
        optim::simulated_annealing(&mut f, &mut x, &config.sa, &mut rng);
        let mut g = gradv;
        let out = optim::bfgs(&mut f, &mut g, &mut x, config.tolerance, config.max_iterations);
        Ok(Trial {
            energy: out.value,
            angles: x,
            iterations: out.iterations,
            converged: out.converged,
        })
    };

    let trials: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(run_trial)
        .collect::<Result<_>>()?;

    let best_trial = trials
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| {
            a.energy
                .partial_cmp(&b.energy)
                .unwrap()
                .then(ia.cmp(ib))
        })
        .map(|(i, _)| i)
        .expect("trials >= 1");
    let best = &trials[best_trial];
    let best_angles = AnsatzAngles {
        n_sites,
        layers: config.layers,
        values: best.angles.clone(),
    };
    let state = prepare_state(n_sites, config.layers, &best_angles, parity)?;
    let parity_measured = state.expect_string(&parity_string(n_sites)?).re;
    Ok(VqeResult {
        best_energy: best.energy,
        best_angles,
        best_trial,
        trial_energies: trials.iter().map(|t| t.energy).collect(),
        trial_iterations: trials.iter().map(|t| t.iterations).collect(),
        trial_converged: trials.iter().map(|t| t.converged).collect(),
        parity_requested: parity,
        parity_measured,
        converged: best.converged,
    })
}
