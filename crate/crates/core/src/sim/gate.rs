//! Gate set.
//!
//! Conventions: rotation gates follow `R_alpha(theta) = exp[i (theta/2) sigma^alpha]`
//! (note the plus sign in the exponent). The two-qubit exchange gates are
//!
//!   xx_plus_yy(theta)  = exp[i theta (s+s- + s-s+)]   (|01>,|10> block)
//!   xx_minus_yy(theta) = exp[i theta (s+s+ + s-s-)]   (|00>,|11> block)
//!   zz(theta)          = exp[i theta sigma^z sigma^z]
//!
//! which are the three parity-conserving two-site unitaries of the ansatz.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sim::pauli::PauliString;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    PauliX {
        target: usize,
    },
    Hadamard {
        target: usize,
    },
    Rotation {
        axis: Axis,
        angle: f64,
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Cz {
        a: usize,
        b: usize,
    },
    XxPlusYy {
        angle: f64,
        targets: (usize, usize),
    },
    XxMinusYy {
        angle: f64,
        targets: (usize, usize),
    },
    Zz {
        angle: f64,
        targets: (usize, usize),
    },
    /// Pauli string applied when the control qubit is in state
    /// `|control_value>`. The string must have a unit-modulus coefficient.
    ControlledPauli {
        control: usize,
        control_value: bool,
        string: PauliString,
    },
}

impl Gate {
    /// Validate qubit indices against `n_qubits` (and unitarity where it is
    /// not structural: the controlled string's coefficient).
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| -> Result<()> {
            if q >= n_qubits {
                Err(Error::invalid(format!(
                    "qubit index {q} out of range for {n_qubits} qubits"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Gate::PauliX { target } | Gate::Hadamard { target } | Gate::Rotation { target, .. } => {
                check(*target)
            }
            Gate::Cnot { control, target } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::invalid("cnot control equals target"));
                }
                Ok(())
            }
            Gate::Cz { a, b } => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(Error::invalid("cz qubits must be distinct"));
                }
                Ok(())
            }
            Gate::XxPlusYy { targets, .. }
            | Gate::XxMinusYy { targets, .. }
            | Gate::Zz { targets, .. } => {
                check(targets.0)?;
                check(targets.1)?;
                if targets.0 == targets.1 {
                    return Err(Error::invalid("two-qubit gate targets must be distinct"));
                }
                Ok(())
            }
            Gate::ControlledPauli {
                control, string, ..
            } => {
                check(*control)?;
                if string.n_qubits() != n_qubits {
                    return Err(Error::invalid("controlled Pauli string length mismatch"));
                }
                if (string.coefficient.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(
                        "controlled Pauli string must have unit-modulus coefficient",
                    ));
                }
                if string.letters[*control] != crate::sim::pauli::Pauli::I {
                    return Err(Error::invalid(
                        "controlled Pauli string must act as identity on the control",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Inverse gate.
    pub fn dagger(&self) -> Gate {
        match self {
            Gate::PauliX { .. } | Gate::Hadamard { .. } | Gate::Cnot { .. } | Gate::Cz { .. } => {
                self.clone()
            }
            Gate::Rotation { axis, angle, target } => Gate::Rotation {
                axis: *axis,
                angle: -angle,
                target: *target,
            },
            Gate::XxPlusYy { angle, targets } => Gate::XxPlusYy {
                angle: -angle,
                targets: *targets,
            },
            Gate::XxMinusYy { angle, targets } => Gate::XxMinusYy {
                angle: -angle,
                targets: *targets,
            },
            Gate::Zz { angle, targets } => Gate::Zz {
                angle: -angle,
                targets: *targets,
            },
            Gate::ControlledPauli {
                control,
                control_value,
                string,
            } => {
                // Hermitian letters; inverse conjugates the coefficient.
                let mut s = string.clone();
                s.coefficient = s.coefficient.conj();
                Gate::ControlledPauli {
                    control: *control,
                    control_value: *control_value,
                    string: s,
                }
            }
        }
    }

    /// Dense matrix on the involved qubits, basis ordered little-endian in the
    /// listed qubit order. For one-qubit gates a 2x2, for two-qubit gates a
    /// 4x4 with index `b1 * 2 + b0` for qubits `(q0, q1)`. Controlled-Pauli
    /// gates are excluded (their footprint is the whole register).
    pub fn small_matrix(&self) -> Option<Vec<Complex64>> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Gate::PauliX { .. } => Some(vec![z, one, one, z]),
            Gate::Hadamard { .. } => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                Some(vec![s, s, s, -s])
            }
            Gate::Rotation { axis, angle, .. } => {
                let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                let (c, is) = (Complex64::new(c, 0.0), Complex64::new(0.0, s));
                Some(match axis {
                    Axis::X => vec![c, is, is, c],
                    Axis::Y => vec![c, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), c],
                    Axis::Z => vec![c + is, z, z, c - is],
                })
            }
            // qubit order (control, target): control is bit 0 of the index
            Gate::Cnot { .. } => Some(vec![
                one, z, z, z, //
                z, z, z, one, //
                z, z, one, z, //
                z, one, z, z,
            ]),
            Gate::Cz { .. } => Some(vec![
                one, z, z, z, //
                z, one, z, z, //
                z, z, one, z, //
                z, z, z, -one,
            ]),
            Gate::XxPlusYy { angle, .. } => {
                let (c, s) = (angle.cos(), angle.sin());
                let (c, is) = (Complex64::new(c, 0.0), i * s);
                Some(vec![
                    one, z, z, z, //
                    z, c, is, z, //
                    z, is, c, z, //
                    z, z, z, one,
                ])
            }
            Gate::XxMinusYy { angle, .. } => {
                let (c, s) = (angle.cos(), angle.sin());
                let (c, is) = (Complex64::new(c, 0.0), i * s);
                Some(vec![
                    c, z, z, is, //
                    z, one, z, z, //
                    z, z, one, z, //
                    is, z, z, c,
                ])
            }
            Gate::Zz { angle, .. } => {
                let e = |sgn: f64| Complex64::from_polar(1.0, angle * sgn);
                // z_q = +1 for bit 0: phases e^{i theta z0 z1}
                Some(vec![
                    e(1.0), z, z, z, //
                    z, e(-1.0), z, z, //
                    z, z, e(-1.0), z, //
                    z, z, z, e(1.0),
                ])
            }
            Gate::ControlledPauli { .. } => None,
        }
    }
}
