//! First-order Trotterized real-time evolution `e^{-i H t}` of the spin
//! chain, as a circuit with the same layer layout as one ansatz layer (odd
//! bonds, even bonds, fields) but with angles fixed by the couplings:
//!
//!   theta_a = (Jx + Jy) dt / 4,  theta_b = (Jx - Jy) dt / 4,
//!   theta_c = Jz dt / 4,         vartheta = hz dt / 2.

use crate::error::{Error, Result};
use crate::model::{Boundary, CouplingSet};
use crate::sim::{Axis, Gate, StateVector};

/// One-step angle set plus the layout data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    pub dt: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    pub theta_c: f64,
    pub vartheta: f64,
    pub boundary: Boundary,
}

impl TrotterPlan {
    pub fn new(cs: &CouplingSet, dt: f64, boundary: Boundary) -> Result<Self> {
        if dt <= 0.0 || !dt.is_finite() {
            return Err(Error::invalid("trotter dt must be positive and finite"));
        }
        Ok(TrotterPlan {
            dt,
            theta_a: (cs.jx + cs.jy) * dt / 4.0,
            theta_b: (cs.jx - cs.jy) * dt / 4.0,
            theta_c: cs.jz * dt / 4.0,
            vartheta: cs.hz * dt / 2.0,
            boundary,
        })
    }

    /// Gate list for one step. Odd bonds (j = 1, 3, ...), then even bonds
    /// (the periodic wrap bond joins the even group), then the field layer.
    pub fn step_gates(&self, n_sites: usize) -> Result<Vec<Gate>> {
        if n_sites < 2 {
            return Err(Error::invalid("chain needs at least 2 sites"));
        }
        let mut gates = Vec::new();
        let push_bond = |q0: usize, q1: usize, gates: &mut Vec<Gate>| {
            if self.theta_a != 0.0 {
                gates.push(Gate::XxPlusYy { angle: self.theta_a, targets: (q0, q1) });
            }
            if self.theta_b != 0.0 {
                gates.push(Gate::XxMinusYy { angle: self.theta_b, targets: (q0, q1) });
            }
            if self.theta_c != 0.0 {
                gates.push(Gate::Zz { angle: self.theta_c, targets: (q0, q1) });
            }
        };
        for j in (1..n_sites).step_by(2) {
            push_bond(j - 1, j, &mut gates);
        }
        for j in (2..n_sites).step_by(2) {
            push_bond(j - 1, j, &mut gates);
        }
        if self.boundary == Boundary::Periodic {
            push_bond(n_sites - 1, 0, &mut gates);
        }
        if self.vartheta != 0.0 {
            for q in 0..n_sites {
                gates.push(Gate::Rotation {
                    axis: Axis::Z,
                    angle: 2.0 * self.vartheta,
                    target: q,
                });
            }
        }
        Ok(gates)
    }
}

/// One first-order Trotter step as a gate list.
pub fn trotter_step(cs: &CouplingSet, n_sites: usize, dt: f64, boundary: Boundary) -> Result<Vec<Gate>> {
    TrotterPlan::new(cs, dt, boundary)?.step_gates(n_sites)
}

/// Number of steps for total time `t`; errors unless `t/dt` is an integer
/// within rounding tolerance.
pub fn step_count(t: f64, dt: f64) -> Result<usize> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::invalid("evolution time must be >= 0"));
    }
    if dt <= 0.0 {
        return Err(Error::invalid("dt must be > 0"));
    }
    let ratio = t / dt;
    let n = ratio.round();
    if (ratio - n).abs() > 1e-6 {
        return Err(Error::invalid(format!(
            "t = {t} is not commensurate with dt = {dt}"
        )));
    }
    Ok(n as usize)
}

/// Evolve a state by `round(t/dt)` repeated Trotter steps.
pub fn evolve(
    state: &StateVector,
    cs: &CouplingSet,
    t: f64,
    dt: f64,
    boundary: Boundary,
) -> Result<StateVector> {
    let n = step_count(t, dt)?;
    let gates = trotter_step(cs, state.n_qubits(), dt, boundary)?;
    let mut out = state.clone();
    for _ in 0..n {
        out.apply_all(&gates)?;
    }
    Ok(out)
}
