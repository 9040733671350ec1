//! Exact-diagonalization ground truth: parity-resolved spectra, ground
//! states, and exact zero-frequency Majorana Green functions (the closed form
//! of the damped time integral evaluated by the circuit pipeline).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{
    self, basis_parity, Boundary, CouplingSet, MajoranaMode, DEFAULT_DENSE_LIMIT,
};
use crate::sim::StateVector;
use crate::topo::{winding_from_zk, zk_series, WindingResult, ZkSeries};

/// Which many-body basis backs the diagonalization.
///
/// Open chains use the spin basis (shared with the circuits). Periodic chains
/// use the fermion Fock basis directly, sidestepping the parity-dependent
/// Jordan-Wigner boundary twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdBasis {
    Spin,
    Fermion,
}

impl EdBasis {
    pub fn for_boundary(boundary: Boundary) -> Self {
        match boundary {
            Boundary::Open => EdBasis::Spin,
            Boundary::Periodic => EdBasis::Fermion,
        }
    }
}

/// One parity block: basis indices, ascending energies, eigenvectors
/// (column-major, eigenvector `i` at `vectors[i*dim .. (i+1)*dim]`).
#[derive(Debug, Clone)]
pub struct ParityBlock {
    pub indices: Vec<usize>,
    pub energies: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl ParityBlock {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Eigenvector `i` embedded in the full register.
    pub fn state(&self, i: usize, n_qubits: usize) -> StateVector {
        let dim = self.dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        for (p, &g) in self.indices.iter().enumerate() {
            amps[g] = Complex64::new(self.vectors[i * dim + p], 0.0);
        }
        StateVector::from_amplitudes(n_qubits, amps).expect("sizes fixed here")
    }
}

/// Both parity blocks of one Hamiltonian.
#[derive(Debug, Clone)]
pub struct ParityBlocks {
    pub n_sites: usize,
    pub basis: EdBasis,
    pub even: ParityBlock,
    pub odd: ParityBlock,
}

/// Full spectrum with per-state parity labels, merged ascending.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub energies: Vec<f64>,
    pub parities: Vec<i8>,
    /// (block parity, index within block), parallel to `energies`.
    pub block_refs: Vec<(i8, usize)>,
}

fn parity_partition(n_sites: usize) -> (Vec<usize>, Vec<usize>) {
    let dim = 1usize << n_sites;
    let mut even = Vec::with_capacity(dim / 2);
    let mut odd = Vec::with_capacity(dim / 2);
    for b in 0..dim {
        if basis_parity(b) == 1 {
            even.push(b)
        } else {
            odd.push(b)
        }
    }
    (even, odd)
}

/// Dense symmetric block of the spin Hamiltonian on the given basis indices.
fn spin_block(cs: &CouplingSet, n_sites: usize, boundary: Boundary, indices: &[usize]) -> Result<Vec<f64>> {
    let h = model::spin_hamiltonian(cs, n_sites, boundary)?;
    let dim = indices.len();
    let full = 1usize << n_sites;
    let mut lookup = vec![u32::MAX; full];
    for (p, &g) in indices.iter().enumerate() {
        lookup[g] = p as u32;
    }
    let mut m = vec![0.0f64; dim * dim];
    for t in &h.terms {
        let xm = t.x_mask();
        for (col, &g) in indices.iter().enumerate() {
            let row = lookup[g ^ xm];
            debug_assert_ne!(row, u32::MAX, "Hamiltonian must preserve parity");
            let v = t.coefficient * t.basis_phase(g);
            debug_assert!(v.im.abs() < 1e-12);
            m[col * dim + row as usize] += v.re;
        }
    }
    Ok(m)
}

/// Same for the fermion Fock Hamiltonian (occupation basis).
fn fermion_block(
    cs: &CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    indices: &[usize],
) -> Result<Vec<f64>> {
    let full = fermion_full(cs, n_sites, boundary)?;
    let dim = indices.len();
    let fdim = 1usize << n_sites;
    let mut m = vec![0.0f64; dim * dim];
    for (col, &g) in indices.iter().enumerate() {
        for (row, &r) in indices.iter().enumerate() {
            m[col * dim + row] = full[r * fdim + g];
        }
    }
    Ok(m)
}

fn fermion_full(cs: &CouplingSet, n_sites: usize, boundary: Boundary) -> Result<Vec<f64>> {
    model::fermion_fock_matrix(cs, n_sites, boundary, DEFAULT_DENSE_LIMIT)
}

/// Diagonalize both parity blocks.
pub fn solve_parity_blocks(
    cs: &CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    basis: EdBasis,
) -> Result<ParityBlocks> {
    if n_sites > DEFAULT_DENSE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "n_sites {n_sites} exceeds dense cap {DEFAULT_DENSE_LIMIT}"
        )));
    }
    let (even_idx, odd_idx) = parity_partition(n_sites);
    let build = |idx: &[usize]| -> Result<Vec<f64>> {
        match basis {
            EdBasis::Spin => spin_block(cs, n_sites, boundary, idx),
            EdBasis::Fermion => fermion_block(cs, n_sites, boundary, idx),
        }
    };
    let (we, ve) = linalg::eigh(even_idx.len(), build(&even_idx)?)?;
    let (wo, vo) = linalg::eigh(odd_idx.len(), build(&odd_idx)?)?;
    Ok(ParityBlocks {
        n_sites,
        basis,
        even: ParityBlock {
            indices: even_idx,
            energies: we,
            vectors: ve,
        },
        odd: ParityBlock {
            indices: odd_idx,
            energies: wo,
            vectors: vo,
        },
    })
}

impl ParityBlocks {
    pub fn block(&self, parity: i8) -> &ParityBlock {
        if parity >= 0 {
            &self.even
        } else {
            &self.odd
        }
    }

    /// Merged ascending spectrum with parity labels.
    pub fn spectrum(&self) -> EigenSolution {
        let mut all: Vec<(f64, i8, usize)> = Vec::with_capacity(1 << self.n_sites);
        for (i, &e) in self.even.energies.iter().enumerate() {
            all.push((e, 1, i));
        }
        for (i, &e) in self.odd.energies.iter().enumerate() {
            all.push((e, -1, i));
        }
        all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        EigenSolution {
            energies: all.iter().map(|x| x.0).collect(),
            parities: all.iter().map(|x| x.1).collect(),
            block_refs: all.iter().map(|x| (x.1, x.2)).collect(),
        }
    }
}

/// Lowest eigenpair in the chosen parity sector (spin basis).
pub fn ground_in_parity(
    cs: &CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    parity: i8,
) -> Result<(f64, StateVector)> {
    let blocks = solve_parity_blocks(cs, n_sites, boundary, EdBasis::Spin)?;
    let b = blocks.block(parity);
    Ok((b.energies[0], b.state(0, n_sites)))
}

/// Apply `gamma_j^mode` to a complex vector over the fermion Fock basis.
fn apply_majorana_fock(amps: &[Complex64], j: usize, mode: MajoranaMode) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    let bit = 1usize << (j - 1);
    let mask = bit - 1;
    for (b, &a) in amps.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let sign = if (b & mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let occupied = b & bit != 0;
        let phase = match mode {
            MajoranaMode::Symmetric => Complex64::new(sign, 0.0),
            // i(c+ - c): +i when creating, -i when annihilating
            MajoranaMode::Antisymmetric => {
                if occupied {
                    Complex64::new(0.0, -sign)
                } else {
                    Complex64::new(0.0, sign)
                }
            }
        };
        out[b ^ bit] += phase * a;
    }
    out
}

/// Exact Green-function machinery for one parameter point.
///
/// Holds the even-sector ground state and the full odd-sector spectrum, so
/// the damped zero-frequency Green function
///
///   g_{j,j'}(delta) = -2 sum_n [Re(c_n) delta - Im(c_n) w_n] / (delta^2 + w_n^2),
///   c_n = <gs|gamma_j^s|n><n|gamma_j'^a|gs>,  w_n = E_n - E_gs
///
/// (the closed form of `-2 int_0^inf dt e^{-delta t} Re<gamma_j^s(t)|gamma_j'^a(t)>`)
/// is a cheap spectral sum per pair.
pub struct GreenOracle {
    pub n_sites: usize,
    pub e_gs: f64,
    pub even_gap: f64,
    omegas: Vec<f64>,
    /// per site (0-indexed): odd-block coordinates of gamma_j^s |gs>
    amp_s: Vec<Vec<Complex64>>,
    amp_a: Vec<Vec<Complex64>>,
}

impl GreenOracle {
    pub fn new(cs: &CouplingSet, n_sites: usize, boundary: Boundary) -> Result<Self> {
        let basis = EdBasis::for_boundary(boundary);
        let blocks = solve_parity_blocks(cs, n_sites, boundary, basis)?;
        Self::from_blocks(&blocks)
    }

    pub fn from_blocks(blocks: &ParityBlocks) -> Result<Self> {
        let n_sites = blocks.n_sites;
        let e_gs = blocks.even.energies[0];
        let even_gap = blocks.even.energies[1] - e_gs;
        let full_dim = 1usize << n_sites;
        let odd = &blocks.odd;
        let odim = odd.dim();

        // ground state over the full register
        let mut gs = vec![Complex64::new(0.0, 0.0); full_dim];
        for (p, &g) in blocks.even.indices.iter().enumerate() {
            gs[g] = Complex64::new(blocks.even.vectors[p], 0.0);
        }

        let project = |w: &[Complex64]| -> Vec<Complex64> {
            // odd-eigenbasis coordinates: amp_m = sum_p V[p, m] w[indices[p]]
            let mut gathered = vec![Complex64::new(0.0, 0.0); odim];
            for (p, &g) in odd.indices.iter().enumerate() {
                gathered[p] = w[g];
            }
            let mut out = vec![Complex64::new(0.0, 0.0); odim];
            for (m, o) in out.iter_mut().enumerate() {
                let col = &odd.vectors[m * odim..(m + 1) * odim];
                let mut acc = Complex64::new(0.0, 0.0);
                for (p, &v) in col.iter().enumerate() {
                    acc += gathered[p] * v;
                }
                *o = acc;
            }
            out
        };

        let gamma_apply = |j: usize, mode: MajoranaMode| -> Result<Vec<Complex64>> {
            match blocks.basis {
                EdBasis::Fermion => Ok(apply_majorana_fock(&gs, j, mode)),
                EdBasis::Spin => {
                    let p = model::majorana_string(j, mode, n_sites)?;
                    let mut s = StateVector::from_amplitudes(n_sites, gs.clone())?;
                    s.apply_pauli(&p)?;
                    Ok(s.amplitudes().to_vec())
                }
            }
        };

        let mut amp_s = Vec::with_capacity(n_sites);
        let mut amp_a = Vec::with_capacity(n_sites);
        for j in 1..=n_sites {
            amp_s.push(project(&gamma_apply(j, MajoranaMode::Symmetric)?));
            amp_a.push(project(&gamma_apply(j, MajoranaMode::Antisymmetric)?));
        }
        let omegas = odd.energies.iter().map(|&e| e - e_gs).collect();
        Ok(GreenOracle {
            n_sites,
            e_gs,
            even_gap,
            omegas,
            amp_s,
            amp_a,
        })
    }

    /// Damped zero-frequency Green function for sites `j, j'` (1-indexed).
    ///
    /// `delta = 0` returns the principal sum, skipping `|w_n| < 1e-12` terms;
    /// it requires a nondegenerate ground state.
    pub fn green_rs_exact(&self, j: usize, jp: usize, delta: f64) -> Result<f64> {
        if j < 1 || j > self.n_sites || jp < 1 || jp > self.n_sites {
            return Err(Error::invalid("site index out of range"));
        }
        if delta < 0.0 {
            return Err(Error::invalid("damping must be >= 0"));
        }
        if delta == 0.0 && self.even_gap < 1e-8 {
            return Err(Error::Degenerate(format!(
                "even-sector gap {:.3e} < 1e-8; pick delta > 0",
                self.even_gap
            )));
        }
        let cs = &self.amp_s[j - 1];
        let ca = &self.amp_a[jp - 1];
        let mut acc = 0.0;
        for ((&s, &a), &w) in cs.iter().zip(ca).zip(&self.omegas) {
            let c = s.conj() * a;
            if delta == 0.0 {
                if w.abs() >= 1e-12 {
                    acc += -2.0 * c.im / w;
                }
            } else {
                acc += -2.0 * (c.re * delta + c.im * w) / (delta * delta + w * w);
            }
        }
        Ok(acc)
    }

    /// Full N x N matrix `g_{j,j'}` at the given damping.
    pub fn green_matrix(&self, delta: f64) -> Result<Vec<f64>> {
        let n = self.n_sites;
        let mut g = vec![0.0f64; n * n];
        for j in 1..=n {
            for jp in 1..=n {
                g[(j - 1) * n + (jp - 1)] = self.green_rs_exact(j, jp, delta)?;
            }
        }
        Ok(g)
    }

    pub fn exact_zk(&self, delta: f64) -> Result<ZkSeries> {
        Ok(zk_series(&self.green_matrix(delta)?, self.n_sites))
    }

    pub fn exact_winding(&self, delta: f64) -> Result<WindingResult> {
        winding_from_zk(&self.exact_zk(delta)?)
    }
}

/// One-shot wrappers matching the oracle's per-operation surface.
pub fn green_rs_exact(
    cs: &CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    j: usize,
    jp: usize,
    delta: f64,
) -> Result<f64> {
    GreenOracle::new(cs, n_sites, boundary)?.green_rs_exact(j, jp, delta)
}

pub fn exact_zk(cs: &CouplingSet, n_sites: usize, boundary: Boundary, delta: f64) -> Result<ZkSeries> {
    GreenOracle::new(cs, n_sites, boundary)?.exact_zk(delta)
}

pub fn exact_winding(
    cs: &CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    delta: f64,
) -> Result<WindingResult> {
    GreenOracle::new(cs, n_sites, boundary)?.exact_winding(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_only_ground_state() {
        let cs = CouplingSet::from_spin(0.0, 0.0, 0.0, 1.0);
        let (e, state) = ground_in_parity(&cs, 12, Boundary::Open, 1).unwrap();
        assert!((e + 6.0).abs() < 1e-10);
        assert!((state.amplitudes()[0].norm() - 1.0).abs() < 1e-10);
        let (eo, _) = ground_in_parity(&cs, 12, Boundary::Open, -1).unwrap();
        assert!((eo + 5.0).abs() < 1e-10);
    }

    #[test]
    fn residual_and_parity_labels_n4() {
        let cs = CouplingSet::from_spin(1.0, 0.5, 0.3, 0.2);
        let blocks = solve_parity_blocks(&cs, 4, Boundary::Open, EdBasis::Spin).unwrap();
        let h = model::spin_hamiltonian(&cs, 4, Boundary::Open).unwrap();
        let parity = model::parity_string(4).unwrap();
        for parity_sign in [1i8, -1] {
            let b = blocks.block(parity_sign);
            for i in 0..b.dim() {
                let v = b.state(i, 4);
                // residual |Hv - Ev|
                let dense = h.dense();
                let dim = 16;
                let mut res = 0.0f64;
                for r in 0..dim {
                    let mut hv = Complex64::new(0.0, 0.0);
                    for c in 0..dim {
                        hv += dense[r * dim + c] * v.amplitudes()[c];
                    }
                    res += (hv - v.amplitudes()[r] * b.energies[i]).norm_sqr();
                }
                assert!(res.sqrt() < 1e-9);
                let p = v.expect_string(&parity);
                assert!((p.re - parity_sign as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn jw_isospectral_n6() {
        let cs = CouplingSet::from_spin(1.0, 0.5, 0.3, 0.2);
        let s = solve_parity_blocks(&cs, 6, Boundary::Open, EdBasis::Spin).unwrap();
        let f = solve_parity_blocks(&cs, 6, Boundary::Open, EdBasis::Fermion).unwrap();
        let ws = s.spectrum().energies;
        let wf = f.spectrum().energies;
        for (a, b) in ws.iter().zip(&wf) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_string_green_vanishes() {
        // parity selection: identity instead of gamma gives zero overlap with
        // the odd sector entirely
        let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.01);
        let oracle = GreenOracle::new(&cs, 4, Boundary::Open).unwrap();
        // reproduce by hand: c_n built from identity would need even-sector
        // states; all odd-sector amplitudes of |gs> itself are zero
        let blocks = solve_parity_blocks(&cs, 4, Boundary::Open, EdBasis::Spin).unwrap();
        let gs = blocks.even.state(0, 4);
        for &g in &blocks.odd.indices {
            assert_eq!(gs.amplitudes()[g], Complex64::new(0.0, 0.0));
        }
        drop(oracle);
    }

    #[test]
    fn near_degenerate_topological_pair_n12() {
        let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.0);
        let (ep, _) = ground_in_parity(&cs, 12, Boundary::Open, 1).unwrap();
        let (em, _) = ground_in_parity(&cs, 12, Boundary::Open, -1).unwrap();
        // frozen bring-up values
        assert!((ep - (-2.959377927262)).abs() < 1e-9);
        assert!((em - (-2.953512455873)).abs() < 1e-9);
        assert!((ep - em).abs() < 1e-2);
    }
}
