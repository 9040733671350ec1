//! Dense statevector simulator.
//!
//! Basis convention: for `n` qubits the state holds `2^n` amplitudes indexed
//! little-endian in the qubit index, i.e. bit `q` of the basis index is the
//! state of qubit `q`. `|0>` is the sigma-z = +1 eigenstate; site `j`
//! (1-indexed) of the chain lives on qubit `j - 1`.

pub mod gate;
pub mod pauli;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
pub use gate::{Axis, Gate};
pub use pauli::{Pauli, PauliString, PauliSum};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Basis state given as a bitstring, leftmost character = qubit 0.
    pub fn basis(n_qubits: usize, bits: &str) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("n_qubits must be >= 1"));
        }
        if bits.len() != n_qubits {
            return Err(Error::invalid(format!(
                "bitstring length {} does not match {} qubits",
                bits.len(),
                n_qubits
            )));
        }
        let mut index = 0usize;
        for (q, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                _ => return Err(Error::invalid("bitstring must contain only 0 and 1")),
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// All-zeros basis state `|0...0>`.
    pub fn zeros(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amplitudes }
    }

    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::invalid("amplitude count must be 2^n"));
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amplitudes {
                *a *= inv;
            }
        }
    }

    /// Apply a gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let amps = &mut self.amplitudes;
        match gate {
            Gate::PauliX { target } => {
                let m = 1usize << target;
                for i in 0..amps.len() {
                    if i & m == 0 {
                        amps.swap(i, i | m);
                    }
                }
            }
            Gate::Hadamard { target } => {
                let m = 1usize << target;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..amps.len() {
                    if i & m == 0 {
                        let (a0, a1) = (amps[i], amps[i | m]);
                        amps[i] = (a0 + a1) * s;
                        amps[i | m] = (a0 - a1) * s;
                    }
                }
            }
            Gate::Rotation { axis, angle, target } => {
                let m = 1usize << target;
                let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                match axis {
                    Axis::X => {
                        let is = Complex64::new(0.0, s);
                        for i in 0..amps.len() {
                            if i & m == 0 {
                                let (a0, a1) = (amps[i], amps[i | m]);
                                amps[i] = a0 * c + a1 * is;
                                amps[i | m] = a0 * is + a1 * c;
                            }
                        }
                    }
                    Axis::Y => {
                        for i in 0..amps.len() {
                            if i & m == 0 {
                                let (a0, a1) = (amps[i], amps[i | m]);
                                amps[i] = a0 * c + a1 * s;
                                amps[i | m] = a1 * c - a0 * s;
                            }
                        }
                    }
                    Axis::Z => {
                        let e0 = Complex64::new(c, s);
                        let e1 = Complex64::new(c, -s);
                        for (i, a) in amps.iter_mut().enumerate() {
                            *a *= if i & m == 0 { e0 } else { e1 };
                        }
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cm = 1usize << control;
                let tm = 1usize << target;
                for i in 0..amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Cz { a, b } => {
                let m = (1usize << a) | (1usize << b);
                for (i, amp) in amps.iter_mut().enumerate() {
                    if i & m == m {
                        *amp = -*amp;
                    }
                }
            }
            Gate::XxPlusYy { angle, targets } => {
                let (m0, m1) = (1usize << targets.0, 1usize << targets.1);
                let (c, s) = (angle.cos(), angle.sin());
                let is = Complex64::new(0.0, s);
                for i in 0..amps.len() {
                    // representative of the {|01>, |10>} block: bit0 set, bit1 clear
                    if i & m0 != 0 && i & m1 == 0 {
                        let j = i ^ m0 ^ m1;
                        let (ai, aj) = (amps[i], amps[j]);
                        amps[i] = ai * c + aj * is;
                        amps[j] = ai * is + aj * c;
                    }
                }
            }
            Gate::XxMinusYy { angle, targets } => {
                let (m0, m1) = (1usize << targets.0, 1usize << targets.1);
                let both = m0 | m1;
                let (c, s) = (angle.cos(), angle.sin());
                let is = Complex64::new(0.0, s);
                for i in 0..amps.len() {
                    if i & both == 0 {
                        let j = i | both;
                        let (ai, aj) = (amps[i], amps[j]);
                        amps[i] = ai * c + aj * is;
                        amps[j] = ai * is + aj * c;
                    }
                }
            }
            Gate::Zz { angle, targets } => {
                let (m0, m1) = (1usize << targets.0, 1usize << targets.1);
                let ep = Complex64::from_polar(1.0, *angle);
                let em = ep.conj();
                for (i, amp) in amps.iter_mut().enumerate() {
                    let same = ((i & m0 != 0) as u8) == ((i & m1 != 0) as u8);
                    *amp *= if same { ep } else { em };
                }
            }
            Gate::ControlledPauli {
                control,
                control_value,
                string,
            } => {
                let cm = 1usize << control;
                let want = if *control_value { cm } else { 0 };
                let xm = string.x_mask();
                let coef = string.coefficient;
                if xm == 0 {
                    for (i, amp) in amps.iter_mut().enumerate() {
                        if i & cm == want {
                            *amp *= coef * string.basis_phase(i);
                        }
                    }
                } else {
                    let low = xm & xm.wrapping_neg(); // lowest flipped bit
                    for i in 0..amps.len() {
                        if i & cm == want && i & low == 0 {
                            let j = i ^ xm;
                            // P|i> = coef*phase(i)|j>, P|j> = coef*phase(j)|i>
                            let (ai, aj) = (amps[i], amps[j]);
                            amps[j] = coef * string.basis_phase(i) * ai;
                            amps[i] = coef * string.basis_phase(j) * aj;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// `state <- coefficient * (Pauli product) * state`.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::invalid("PauliString length does not match state"));
        }
        let xm = p.x_mask();
        let coef = p.coefficient;
        let amps = &mut self.amplitudes;
        if xm == 0 {
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= coef * p.basis_phase(i);
            }
        } else {
            let low = xm & xm.wrapping_neg();
            for i in 0..amps.len() {
                if i & low == 0 {
                    let j = i ^ xm;
                    let (ai, aj) = (amps[i], amps[j]);
                    amps[j] = coef * p.basis_phase(i) * ai;
                    amps[i] = coef * p.basis_phase(j) * aj;
                }
            }
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::invalid("inner product size mismatch"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `<self| h |self>` for Hermitian `h`. Checks that the imaginary part is
    /// negligible and returns the real part.
    pub fn expect(&self, h: &PauliSum) -> Result<f64> {
        if !h.is_hermitian(1e-12) {
            return Err(Error::invalid("expectation of a non-Hermitian operator"));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &h.terms {
            if t.n_qubits() != self.n_qubits {
                return Err(Error::invalid("PauliSum length does not match state"));
            }
            acc += self.expect_string(t);
        }
        debug_assert!(acc.im.abs() < 1e-9, "Im<h> = {}", acc.im);
        Ok(acc.re)
    }

    /// `<self| p |self>` for a single string, no Hermiticity requirement.
    pub fn expect_string(&self, p: &PauliString) -> Complex64 {
        let xm = p.x_mask();
        let amps = &self.amplitudes;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..amps.len() {
            let j = i ^ xm;
            acc += amps[j].conj() * p.basis_phase(i) * amps[i];
        }
        p.coefficient * acc
    }

    /// Probability of observing the given basis bitstring.
    pub fn prob_basis(&self, bits: &str) -> Result<f64> {
        if bits.len() != self.n_qubits {
            return Err(Error::invalid("bitstring length mismatch"));
        }
        let mut index = 0usize;
        for (q, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                _ => return Err(Error::invalid("bitstring must contain only 0 and 1")),
            }
        }
        Ok(self.amplitudes[index].norm_sqr())
    }

    /// Sample measurement outcomes in the computational basis.
    ///
    /// Returns counts keyed by basis index; deterministic for a fixed seed.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        if shots == 0 {
            return Err(Error::invalid("shots must be >= 1"));
        }
        let weights: Vec<f64> = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        let dist = rand::distributions::WeightedIndex::new(&weights)
            .map_err(|e| Error::invalid(format!("invalid probability weights: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
        }
        Ok(counts)
    }
}
