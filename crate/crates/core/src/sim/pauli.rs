//! Sparse Pauli-string algebra.
//!
//! A `PauliString` is a complex coefficient times one Pauli letter per qubit.
//! Products of strings are strings again, which the tests exercise against
//! dense Kronecker products on small systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Single-qubit product `self * other` as `(phase, letter)`.
    fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (X, X) | (Y, Y) | (Z, Z) => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[one, z], [z, one]],
            Pauli::X => [[z, one], [one, z]],
            Pauli::Y => [[z, -i], [i, z]],
            Pauli::Z => [[one, z], [z, -one]],
        }
    }
}

/// `coefficient * letter_0 (x) letter_1 (x) ...`, one letter per qubit.
///
/// Qubit `q` corresponds to bit `q` of the basis index (little-endian), and
/// `|0>` is the sigma-z = +1 eigenstate.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: Complex64,
    pub letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            coefficient: Complex64::new(1.0, 0.0),
            letters: vec![Pauli::I; n_qubits],
        }
    }

    /// A single non-identity letter at `qubit` with a real coefficient.
    pub fn single(n_qubits: usize, qubit: usize, letter: Pauli, coefficient: f64) -> Self {
        let mut letters = vec![Pauli::I; n_qubits];
        letters[qubit] = letter;
        PauliString {
            coefficient: Complex64::new(coefficient, 0.0),
            letters,
        }
    }

    /// Two-qubit `coefficient * letter_a letter_b` term.
    pub fn two(n_qubits: usize, a: usize, b: usize, letter: Pauli, coefficient: f64) -> Self {
        assert_ne!(a, b);
        let mut letters = vec![Pauli::I; n_qubits];
        letters[a] = letter;
        letters[b] = letter;
        PauliString {
            coefficient: Complex64::new(coefficient, 0.0),
            letters,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    /// String product; closed on PauliStrings.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.letters.len() != other.letters.len() {
            return Err(Error::invalid("PauliString size mismatch in product"));
        }
        let mut coefficient = self.coefficient * other.coefficient;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (ph, l) = a.mul(b);
                coefficient *= ph;
                l
            })
            .collect();
        Ok(PauliString { coefficient, letters })
    }

    /// Bitmask of qubits whose letter flips the basis state (X or Y).
    pub fn x_mask(&self) -> usize {
        let mut m = 0usize;
        for (q, &l) in self.letters.iter().enumerate() {
            if matches!(l, Pauli::X | Pauli::Y) {
                m |= 1 << q;
            }
        }
        m
    }

    /// Phase picked up when acting on basis state `index` (excluding the
    /// coefficient): `P |index> = coefficient * phase(index) |index ^ x_mask|`.
    pub fn basis_phase(&self, index: usize) -> Complex64 {
        let mut ph = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        for (q, &l) in self.letters.iter().enumerate() {
            let bit = (index >> q) & 1;
            match l {
                Pauli::I | Pauli::X => {}
                // Y|0> = i|1>, Y|1> = -i|0>
                Pauli::Y => ph *= if bit == 0 { i } else { -i },
                Pauli::Z => {
                    if bit == 1 {
                        ph = -ph;
                    }
                }
            }
        }
        ph
    }

    /// Each tensor factor is Hermitian, so the string is Hermitian iff the
    /// coefficient is real.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coefficient.im.abs() <= tol
    }

    /// Dense matrix (tests only in spirit, but cheap enough at small n).
    pub fn dense(&self) -> Vec<Complex64> {
        let n = self.letters.len();
        let dim = 1usize << n;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        let xm = self.x_mask();
        for col in 0..dim {
            let row = col ^ xm;
            m[row * dim + col] = self.coefficient * self.basis_phase(col);
        }
        m
    }
}

/// Sum of Pauli strings; the Hamiltonian container.
#[derive(Debug, Clone, Default)]
pub struct PauliSum {
    pub terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(terms: Vec<PauliString>) -> Self {
        PauliSum { terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.first().map_or(0, |t| t.n_qubits())
    }

    /// Merge duplicate letter patterns and drop negligible terms.
    pub fn canonicalize(&mut self) {
        use std::collections::HashMap;
        let mut acc: HashMap<Vec<Pauli>, Complex64> = HashMap::new();
        let mut order: Vec<Vec<Pauli>> = Vec::new();
        for t in &self.terms {
            let e = acc.entry(t.letters.clone()).or_insert_with(|| {
                order.push(t.letters.clone());
                Complex64::new(0.0, 0.0)
            });
            *e += t.coefficient;
        }
        self.terms = order
            .into_iter()
            .filter_map(|letters| {
                let c = acc[&letters];
                (c.norm() > 1e-15).then_some(PauliString {
                    coefficient: c,
                    letters,
                })
            })
            .collect();
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let mut s = self.clone();
        s.canonicalize();
        s.terms.iter().all(|t| t.is_hermitian(tol))
    }

    pub fn dense(&self) -> Vec<Complex64> {
        let n = self.n_qubits();
        let dim = 1usize << n;
        let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
        for t in &self.terms {
            let xm = t.x_mask();
            for col in 0..dim {
                let row = col ^ xm;
                m[row * dim + col] += t.coefficient * t.basis_phase(col);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let aik = a[i * dim + k];
                if aik.norm() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    c[i * dim + j] += aik * b[k * dim + j];
                }
            }
        }
        c
    }

    #[test]
    fn product_matches_dense_kronecker() {
        use Pauli::*;
        let pats: Vec<Vec<Pauli>> = vec![
            vec![X, Y, Z, I],
            vec![Y, Y, I, Z],
            vec![Z, X, X, Y],
            vec![I, I, Z, X],
        ];
        for a in &pats {
            for b in &pats {
                let pa = PauliString {
                    coefficient: Complex64::new(0.5, -0.25),
                    letters: a.clone(),
                };
                let pb = PauliString {
                    coefficient: Complex64::new(-1.0, 2.0),
                    letters: b.clone(),
                };
                let prod = pa.mul(&pb).unwrap();
                let lhs = prod.dense();
                let rhs = dense_mul(&pa.dense(), &pb.dense(), 16);
                for (x, y) in lhs.iter().zip(&rhs) {
                    assert!((x - y).norm() < 1e-12, "{a:?} * {b:?}");
                }
            }
        }
    }

    #[test]
    fn hermitian_unit_string_squares_to_identity() {
        use Pauli::*;
        let p = PauliString {
            coefficient: Complex64::new(-1.0, 0.0),
            letters: vec![Z, Z, Y, X],
        };
        let sq = p.mul(&p).unwrap();
        assert_eq!(sq.letters, vec![I, I, I, I]);
        assert!((sq.coefficient - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn canonicalize_merges() {
        let t1 = PauliString::single(2, 0, Pauli::Z, 1.0);
        let t2 = PauliString::single(2, 0, Pauli::Z, 0.5);
        let t3 = PauliString::single(2, 1, Pauli::X, -0.5);
        let mut s = PauliSum::new(vec![t1, t2, t3]);
        s.canonicalize();
        assert_eq!(s.terms.len(), 2);
        assert!((s.terms[0].coefficient.re - 1.5).abs() < 1e-15);
    }
}
