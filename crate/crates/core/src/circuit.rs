//! Typed gate list with cost metrics and an executor onto the statevector
//! kernels.
//!
//! Circuits are immutable once built and safe to share across threads.
//! Routing cost is an analytic surcharge over a linear-nearest-neighbor
//! line: a two-qubit gate spanning index distance `d` is charged
//! `6 * (d - 1)` extra two-qubit gates (`2 * (d - 1)` Swaps at 3 each,
//! round trip) on top of the gate itself. Executed circuits always use
//! all-to-all connectivity; the surcharge is never materialized as gates.

use crate::error::{Error, Result};
use crate::state::Statevector;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    Hadamard { target: usize },
    Rz { target: usize, angle: f64 },
    ControlledPhase { control: usize, target: usize, angle: f64 },
    ZzEntangler { a: usize, b: usize, angle: f64 },
    Swap { a: usize, b: usize },
}

impl GateOp {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            GateOp::Hadamard { target } | GateOp::Rz { target, .. } => (target, None),
            GateOp::ControlledPhase { control, target, .. } => (control, Some(target)),
            GateOp::ZzEntangler { a, b, .. } | GateOp::Swap { a, b } => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    /// Index distance |i - j| for two-qubit gates, 0 otherwise.
    pub fn distance(&self) -> usize {
        match self.qubits() {
            (a, Some(b)) => a.abs_diff(b),
            _ => 0,
        }
    }

    pub fn inverse(&self) -> GateOp {
        match *self {
            GateOp::Hadamard { target } => GateOp::Hadamard { target },
            GateOp::Rz { target, angle } => GateOp::Rz { target, angle: -angle },
            GateOp::ControlledPhase { control, target, angle } => GateOp::ControlledPhase {
                control,
                target,
                angle: -angle,
            },
            GateOp::ZzEntangler { a, b, angle } => GateOp::ZzEntangler { a, b, angle: -angle },
            GateOp::Swap { a, b } => GateOp::Swap { a, b },
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let (q0, q1) = self.qubits();
        for q in [Some(q0), q1].into_iter().flatten() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        if let Some(q1) = q1 {
            if q0 == q1 {
                return Err(Error::DuplicateQubit { qubit: q0 });
            }
        }
        Ok(())
    }

    pub fn apply(&self, state: &mut Statevector) -> Result<()> {
        match *self {
            GateOp::Hadamard { target } => state.apply_hadamard(target),
            GateOp::Rz { target, angle } => state.apply_rz(target, angle),
            GateOp::ControlledPhase { control, target, angle } => {
                state.apply_controlled_phase(control, target, angle)
            }
            GateOp::ZzEntangler { a, b, angle } => state.apply_zz_entangler(a, b, angle),
            GateOp::Swap { a, b } => state.apply_swap(a, b),
        }
    }

    fn text_line(&self) -> String {
        match *self {
            GateOp::Hadamard { target } => format!("H {target}"),
            GateOp::Rz { target, angle } => format!("RZ {target} {angle:.16e}"),
            GateOp::ControlledPhase { control, target, angle } => {
                format!("CPHASE {control} {target} {angle:.16e}")
            }
            GateOp::ZzEntangler { a, b, angle } => format!("ZZ {a} {b} {angle:.16e}"),
            GateOp::Swap { a, b } => format!("SWAP {a} {b}"),
        }
    }
}

/// Cost metrics of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GateStats {
    pub one_qubit_count: usize,
    pub two_qubit_count: usize,
    /// Greedy ASAP layering: a gate enters the earliest layer in which all
    /// of its qubits are free.
    pub logical_depth: usize,
    /// Two-qubit count after the linear-nearest-neighbor routing surcharge.
    pub lnn_routed_two_qubit_count: usize,
}

/// Extra two-qubit gates the LNN line charges for a span of distance `d`.
pub fn lnn_surcharge(distance: usize) -> usize {
    6 * distance.saturating_sub(1)
}

#[derive(Clone, Debug)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
    label: String,
    /// Phase e^{i global_phase} applied once at execution. Keeps products of
    /// gate-built diagonals pointwise equal to their closed-form unitaries
    /// after angle reduction and after dropping identity-coefficient terms.
    global_phase: f64,
    /// Parity of classical bit-reversal relabelings between raw amplitude
    /// order and logical index order. Forward Fourier builders leave their
    /// output bit-reversed (true); inverse builders expect bit-reversed
    /// input (also true, so a forward/inverse pair cancels under
    /// concatenation). Execution ignores this; it is bookkeeping for
    /// decoders and tests.
    bit_reversal_parity: bool,
}

impl Circuit {
    pub fn new(num_qubits: usize, label: impl Into<String>) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
            label: label.into(),
            global_phase: 0.0,
            bit_reversal_parity: false,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_global_phase(&mut self, phase: f64) {
        self.global_phase += phase;
    }

    pub fn bit_reversal_parity(&self) -> bool {
        self.bit_reversal_parity
    }

    pub fn set_bit_reversal_parity(&mut self, parity: bool) {
        self.bit_reversal_parity = parity;
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Applies the gates in list order, then the global phase.
    pub fn execute(&self, state: &mut Statevector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                actual: state.num_qubits(),
            });
        }
        for op in &self.ops {
            op.apply(state)?;
        }
        state.apply_global_phase(self.global_phase);
        Ok(())
    }

    /// Clone-and-execute convenience.
    pub fn executed_on(&self, state: &Statevector) -> Result<Statevector> {
        let mut out = state.clone();
        self.execute(&mut out)?;
        Ok(out)
    }

    pub fn stats(&self) -> GateStats {
        let mut one_q = 0;
        let mut two_q = 0;
        let mut routed = 0;
        let mut free_layer = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for op in &self.ops {
            let (q0, q1) = op.qubits();
            match q1 {
                Some(q1) => {
                    two_q += 1;
                    routed += 1 + lnn_surcharge(op.distance());
                    let layer = free_layer[q0].max(free_layer[q1]);
                    free_layer[q0] = layer + 1;
                    free_layer[q1] = layer + 1;
                    depth = depth.max(layer + 1);
                }
                None => {
                    one_q += 1;
                    let layer = free_layer[q0];
                    free_layer[q0] = layer + 1;
                    depth = depth.max(layer + 1);
                }
            }
        }
        GateStats {
            one_qubit_count: one_q,
            two_qubit_count: two_q,
            logical_depth: depth,
            lnn_routed_two_qubit_count: routed,
        }
    }

    /// Ops of `self` followed by ops of `other`.
    pub fn concatenate(&self, other: &Circuit) -> Result<Circuit> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        let mut ops = self.ops.clone();
        ops.extend_from_slice(&other.ops);
        Ok(Circuit {
            num_qubits: self.num_qubits,
            ops,
            label: format!("{}+{}", self.label, other.label),
            global_phase: self.global_phase + other.global_phase,
            bit_reversal_parity: self.bit_reversal_parity ^ other.bit_reversal_parity,
        })
    }

    /// Adjoint circuit: reversed op order with inverted gates.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
            label: format!("{}^-1", self.label),
            global_phase: -self.global_phase,
            bit_reversal_parity: self.bit_reversal_parity,
        }
    }

    /// Rebuilds the circuit with every qubit index mapped through `f`.
    pub fn remap_qubits(
        &self,
        new_num_qubits: usize,
        f: impl Fn(usize) -> usize,
    ) -> Result<Circuit> {
        let mut out = Circuit::new(new_num_qubits, self.label.clone());
        out.global_phase = self.global_phase;
        out.bit_reversal_parity = self.bit_reversal_parity;
        for op in &self.ops {
            let mapped = match *op {
                GateOp::Hadamard { target } => GateOp::Hadamard { target: f(target) },
                GateOp::Rz { target, angle } => GateOp::Rz { target: f(target), angle },
                GateOp::ControlledPhase { control, target, angle } => GateOp::ControlledPhase {
                    control: f(control),
                    target: f(target),
                    angle,
                },
                GateOp::ZzEntangler { a, b, angle } => GateOp::ZzEntangler {
                    a: f(a),
                    b: f(b),
                    angle,
                },
                GateOp::Swap { a, b } => GateOp::Swap { a: f(a), b: f(b) },
            };
            out.push(mapped)?;
        }
        Ok(out)
    }

    /// Line-oriented dump: one gate per line, `KIND q0 [q1] [angle]`, angles
    /// with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for op in &self.ops {
            out.push_str(&op.text_line());
            out.push('\n');
        }
        out
    }
}
