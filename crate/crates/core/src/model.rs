//! The interacting Kitaev chain in its three synchronized parameter views
//! (fermion, spin, Majorana), plus the operator builders: spin-Pauli
//! Hamiltonian, fermion Fock matrix, Jordan-Wigner Majorana strings and the
//! fermion-parity string.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Pauli, PauliString, PauliSum};

/// Dense exact-diagonalization cap; `2^14` amplitudes is still desk scale.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// One parameter point in three equivalent views.
///
/// fermion: hopping `t`, pairing `delta`, interaction `v`, chemical potential `mu`
/// spin:    exchange `jx`, `jy`, `jz`, field `hz`
/// Majorana: couplings `g_plus`, `g_minus`, quartic `zeta`, onsite `eta`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    pub t: f64,
    pub delta: f64,
    pub v: f64,
    pub mu: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub hz: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl CouplingSet {
    pub fn from_spin(jx: f64, jy: f64, jz: f64, hz: f64) -> Self {
        let t = (jx + jy) / 4.0;
        let delta = (jx - jy) / 4.0;
        Self::fill(t, delta, jz, hz, jx, jy)
    }

    pub fn from_fermion(t: f64, delta: f64, v: f64, mu: f64) -> Self {
        let jx = 2.0 * (t + delta);
        let jy = 2.0 * (t - delta);
        Self::fill(t, delta, v, mu, jx, jy)
    }

    fn fill(t: f64, delta: f64, v: f64, mu: f64, jx: f64, jy: f64) -> Self {
        CouplingSet {
            t,
            delta,
            v,
            mu,
            jx,
            jy,
            jz: v,
            hz: mu,
            g_plus: (t + delta) / 2.0,
            g_minus: (t - delta) / 2.0,
            zeta: v / 4.0,
            eta: mu / 2.0,
        }
    }

    /// Exchange `jx` and `jy`, i.e. flip the sign of the pairing.
    pub fn swap_xy(&self) -> Self {
        CouplingSet::from_spin(self.jy, self.jx, self.jz, self.hz)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    /// Bond list as 1-indexed site pairs.
    pub fn bonds(&self, n_sites: usize) -> Vec<(usize, usize)> {
        let mut b: Vec<(usize, usize)> = (1..n_sites).map(|j| (j, j + 1)).collect();
        if *self == Boundary::Periodic {
            b.push((n_sites, 1));
        }
        b
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" | "obc" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(Error::invalid(format!("unknown boundary '{other}'"))),
        }
    }
}

/// XYZ spin-chain Hamiltonian as a Pauli sum:
/// `-sum_a J_a sum_j S_j^a S_{j+1}^a - hz sum_j S_j^z` with `S = sigma/2`.
pub fn spin_hamiltonian(cs: &CouplingSet, n_sites: usize, boundary: Boundary) -> Result<PauliSum> {
    if n_sites < 2 {
        return Err(Error::invalid("spin chain needs at least 2 sites"));
    }
    let mut terms = Vec::new();
    for (j, jp) in boundary.bonds(n_sites) {
        let (a, b) = (j - 1, jp - 1);
        for (coupling, letter) in [(cs.jx, Pauli::X), (cs.jy, Pauli::Y), (cs.jz, Pauli::Z)] {
            if coupling != 0.0 {
                terms.push(PauliString::two(n_sites, a, b, letter, -coupling / 4.0));
            }
        }
    }
    if cs.hz != 0.0 {
        for q in 0..n_sites {
            terms.push(PauliString::single(n_sites, q, Pauli::Z, -cs.hz / 2.0));
        }
    }
    Ok(PauliSum::new(terms))
}

/// Kitaev-chain Hamiltonian as a dense real symmetric matrix in the
/// occupation-number basis (bit `j-1` of the basis index = occupation of
/// site `j`), with Jordan-Wigner sign bookkeeping for the quadratic terms.
///
/// Returned flat as `dim * dim` entries; symmetric, so the layout question
/// does not arise.
pub fn fermion_fock_matrix(
    cs: &CouplingSet,
    n_sites: usize,
    boundary: Boundary,
    dense_limit: usize,
) -> Result<Vec<f64>> {
    if n_sites < 2 {
        return Err(Error::invalid("chain needs at least 2 sites"));
    }
    if n_sites > dense_limit {
        return Err(Error::ResourceLimit(format!(
            "n_sites {n_sites} exceeds dense cap {dense_limit}"
        )));
    }
    let dim = 1usize << n_sites;
    let mut h = vec![0.0f64; dim * dim];
    let bonds = boundary.bonds(n_sites);
    let occ = |b: usize, j: usize| (b >> (j - 1)) & 1;
    // (-1)^{number of occupied sites left of j}
    let jw_sign = |b: usize, j: usize| {
        let mask = (1usize << (j - 1)) - 1;
        if (b & mask).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    for b in 0..dim {
        let mut e = 0.0;
        for &(j, jp) in &bonds {
            e -= cs.v * (occ(b, j) as f64 - 0.5) * (occ(b, jp) as f64 - 0.5);
        }
        for j in 1..=n_sites {
            e -= cs.mu * (occ(b, j) as f64 - 0.5);
        }
        h[b * dim + b] += e;
        for &(j, jp) in &bonds {
            // -t (c+_j c_jp + h.c.)
            if occ(b, jp) == 1 && occ(b, j) == 0 {
                let b1 = b ^ (1 << (jp - 1));
                let s1 = jw_sign(b, jp);
                let b2 = b1 ^ (1 << (j - 1));
                let s2 = jw_sign(b1, j);
                h[b2 * dim + b] += -cs.t * s1 * s2;
                h[b * dim + b2] += -cs.t * s1 * s2;
            }
            // -delta (c+_j c+_jp + h.c.), applying c+_jp first
            if occ(b, j) == 0 && occ(b, jp) == 0 {
                let b1 = b ^ (1 << (jp - 1));
                let s1 = jw_sign(b, jp);
                let b2 = b1 ^ (1 << (j - 1));
                let s2 = jw_sign(b1, j);
                h[b2 * dim + b] += -cs.delta * s1 * s2;
                h[b * dim + b2] += -cs.delta * s1 * s2;
            }
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MajoranaMode {
    /// `gamma^s = c+ + c`
    Symmetric,
    /// `gamma^a = i (c+ - c)`
    Antisymmetric,
}

/// Jordan-Wigner image of the Majorana operator at site `j` (1-indexed):
///
///   gamma_j^s =  [prod_{i<j} (-Z_i)] X_j
///   gamma_j^a = -[prod_{i<j} (-Z_i)] Y_j
///
/// Hermitian, squares to the identity.
pub fn majorana_string(j: usize, mode: MajoranaMode, n_sites: usize) -> Result<PauliString> {
    if j < 1 || j > n_sites {
        return Err(Error::invalid(format!(
            "site {j} out of range 1..={n_sites}"
        )));
    }
    let mut letters = vec![Pauli::I; n_sites];
    for letter in letters.iter_mut().take(j - 1) {
        *letter = Pauli::Z;
    }
    // each string factor carries the explicit (-1) from e^{i pi (S^z + 1/2)} = -sigma^z
    let string_sign = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let coefficient = match mode {
        MajoranaMode::Symmetric => {
            letters[j - 1] = Pauli::X;
            string_sign
        }
        MajoranaMode::Antisymmetric => {
            letters[j - 1] = Pauli::Y;
            -string_sign
        }
    };
    Ok(PauliString {
        coefficient: num_complex::Complex64::new(coefficient, 0.0),
        letters,
    })
}

/// Fermion parity `prod_j Z_j`. Only defined for `N = 0 (mod 4)`, where the
/// prefactor `(-i)^N` of the magnetization parity equals one.
pub fn parity_string(n_sites: usize) -> Result<PauliString> {
    if n_sites % 4 != 0 {
        return Err(Error::UnsupportedSize(format!(
            "fermion parity implemented only for N = 0 (mod 4); got N = {n_sites} \
             (other sizes carry a nontrivial (-i)^N phase)"
        )));
    }
    Ok(PauliString {
        coefficient: num_complex::Complex64::new(1.0, 0.0),
        letters: vec![Pauli::Z; n_sites],
    })
}

/// Parity (+-1) of a computational basis index: product of z = 1 - 2*bit.
pub fn basis_parity(index: usize) -> i8 {
    if index.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn triality_roundtrip() {
        let a = CouplingSet::from_spin(1.0, 0.5, 0.25, 0.125);
        let b = CouplingSet::from_fermion(a.t, a.delta, a.v, a.mu);
        assert_eq!(a, b);
        // exact relations on an exact-dyadic input
        assert_eq!(a.t, 0.375);
        assert_eq!(a.delta, 0.125);
        assert_eq!(a.g_plus, 0.25);
        assert_eq!(a.g_minus, 0.125);
        assert_eq!(a.zeta, 0.0625);
        assert_eq!(a.eta, 0.0625);
    }

    #[test]
    fn spin_examples() {
        let cs = CouplingSet::from_spin(1.0, 0.5, 0.0, 0.0);
        assert_eq!(cs.t, 0.375);
        assert_eq!(cs.delta, 0.125);
        let xy = CouplingSet::from_spin(1.0, 1.0, 0.0, 0.0);
        assert_eq!(xy.delta, 0.0);
        assert_eq!(xy.g_plus, xy.g_minus);
        let kit = CouplingSet::from_fermion(0.25, 0.25, 0.0, 0.0);
        assert_eq!(kit.g_minus, 0.0);
        assert_eq!(kit.eta, 0.0);
        assert_eq!(kit.zeta, 0.0);
    }

    #[test]
    fn single_bond_xx() {
        let cs = CouplingSet::from_spin(1.0, 0.0, 0.0, 0.0);
        let h = spin_hamiltonian(&cs, 2, Boundary::Open).unwrap();
        assert_eq!(h.terms.len(), 1);
        let t = &h.terms[0];
        assert_eq!(t.letters, vec![Pauli::X, Pauli::X]);
        assert!((t.coefficient - Complex64::new(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn fock_matrix_single_hop_and_pair() {
        // |01> has site 1 occupied (bit 0), |10> site 2
        let hop = fermion_fock_matrix(
            &CouplingSet::from_fermion(1.0, 0.0, 0.0, 0.0),
            2,
            Boundary::Open,
            DEFAULT_DENSE_LIMIT,
        )
        .unwrap();
        let dim = 4;
        for r in 0..dim {
            for c in 0..dim {
                let want = if (r, c) == (1, 2) || (r, c) == (2, 1) {
                    -1.0
                } else {
                    0.0
                };
                assert!((hop[r * dim + c] - want).abs() < 1e-15, "({r},{c})");
            }
        }
        let pair = fermion_fock_matrix(
            &CouplingSet::from_fermion(0.0, 1.0, 0.0, 0.0),
            2,
            Boundary::Open,
            DEFAULT_DENSE_LIMIT,
        )
        .unwrap();
        // couples |00> (index 0) and |11> (index 3)
        assert!(pair[0 * dim + 3].abs() > 0.5);
        assert!(pair[3 * dim + 0].abs() > 0.5);
        assert_eq!(pair[1 * dim + 2], 0.0);
    }

    #[test]
    fn majorana_site_one_is_bare_x() {
        let g = majorana_string(1, MajoranaMode::Symmetric, 4).unwrap();
        assert_eq!(g.letters, vec![Pauli::X, Pauli::I, Pauli::I, Pauli::I]);
        assert!((g.coefficient - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn majorana_anticommutation_n4() {
        // {gamma_j^t, gamma_j'^t'} = 2 delta_jj' delta_tt' as dense matrices
        let n = 4;
        let dim = 1usize << n;
        let modes = [MajoranaMode::Symmetric, MajoranaMode::Antisymmetric];
        for j in 1..=n {
            for jp in 1..=n {
                for mj in modes {
                    for mjp in modes {
                        let a = majorana_string(j, mj, n).unwrap();
                        let b = majorana_string(jp, mjp, n).unwrap();
                        let ab = a.mul(&b).unwrap().dense();
                        let ba = b.mul(&a).unwrap().dense();
                        let expect = if j == jp && mj == mjp { 2.0 } else { 0.0 };
                        for r in 0..dim {
                            for c in 0..dim {
                                let v = ab[r * dim + c] + ba[r * dim + c];
                                let want = if r == c { expect } else { 0.0 };
                                assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parity_requires_mod_4() {
        assert!(parity_string(12).is_ok());
        assert!(matches!(
            parity_string(6),
            Err(crate::error::Error::UnsupportedSize(_))
        ));
    }
}
