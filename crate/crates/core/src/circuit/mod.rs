//! Circuit intermediate representation and the gate catalog.
//!
//! The catalog is deliberately closed: every member's unitary has entries in
//! ℤ[i]·(1/√2)^d, which is the property the whole integer engine rests on.
//! Rotation gates only exist at the angles where that holds.

pub mod bench;
pub mod gates;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Rotation angles admitted by the catalog, as exact rational multiples of π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    PiOver2,
    NegPiOver2,
    ThreePiOver2,
    NegThreePiOver2,
    Pi,
}

impl Angle {
    pub const ALL: [Angle; 5] = [
        Angle::PiOver2,
        Angle::NegPiOver2,
        Angle::ThreePiOver2,
        Angle::NegThreePiOver2,
        Angle::Pi,
    ];

    pub fn radians(self) -> f64 {
        use core::f64::consts::PI;
        match self {
            Angle::PiOver2 => PI / 2.0,
            Angle::NegPiOver2 => -PI / 2.0,
            Angle::ThreePiOver2 => 3.0 * PI / 2.0,
            Angle::NegThreePiOver2 => -3.0 * PI / 2.0,
            Angle::Pi => PI,
        }
    }

    /// The canonical source token for this angle (what `emit` writes).
    pub fn token(self) -> &'static str {
        match self {
            Angle::PiOver2 => "pi/2",
            Angle::NegPiOver2 => "-pi/2",
            Angle::ThreePiOver2 => "3*pi/2",
            Angle::NegThreePiOver2 => "-3*pi/2",
            Angle::Pi => "pi",
        }
    }

    /// Map a numeric angle onto the catalog, tolerating the rounding of
    /// decimal literals (|Δ| ≤ 1e-9). Returns `None` for out-of-domain angles.
    pub fn from_radians(x: f64) -> Option<Self> {
        Angle::ALL
            .iter()
            .copied()
            .find(|a| (a.radians() - x).abs() <= 1e-9)
    }
}

/// A member of the gate catalog. Rotations carry their angle; nothing else
/// does, so "rotation gates carry an angle, all others none" holds by
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    RX(Angle),
    RY(Angle),
    RZ(Angle),
    CNOT,
    CZ,
    SWAP,
    CCX,
}

impl GateKind {
    /// Number of operand qubits.
    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ | GateKind::SWAP => 2,
            GateKind::CCX => 3,
            _ => 1,
        }
    }

    /// Lower-case mnemonic as used in circuit text (`cx`, not `cnot`).
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::RX(_) => "rx",
            GateKind::RY(_) => "ry",
            GateKind::RZ(_) => "rz",
            GateKind::CNOT => "cx",
            GateKind::CZ => "cz",
            GateKind::SWAP => "swap",
            GateKind::CCX => "ccx",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::RX(a) | GateKind::RY(a) | GateKind::RZ(a) => {
                write!(f, "{}({})", self.mnemonic(), a.token())
            }
            _ => f.write_str(self.mnemonic()),
        }
    }
}

/// One gate application: a catalog member plus its operand qubits
/// (order matters — controls before targets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<u32>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[u32]) -> Self {
        Self { kind, qubits: qubits.to_vec() }
    }
}

/// A circuit: qubit count, ordered gate list, and free-form metadata
/// (generator name and parameters, recorded measurements, …).
///
/// Basis-state indexing is little-endian throughout the crate: qubit 0 is
/// the least significant bit of a basis index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitIR {
    pub n_qubits: u32,
    pub ops: Vec<GateOp>,
    pub name: String,
    pub metadata: BTreeMap<String, String>,
}

impl CircuitIR {
    pub fn new(n_qubits: u32) -> Self {
        Self { n_qubits, ..Self::default() }
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[u32]) {
        self.ops.push(GateOp::new(kind, qubits));
    }

    pub fn one_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.arity() == 1).count()
    }

    pub fn multi_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind.arity() > 1).count()
    }

    /// Structural identity: same width, same op sequence. Metadata is
    /// presentation, not structure, and is deliberately excluded.
    pub fn structurally_equal(&self, other: &CircuitIR) -> bool {
        self.n_qubits == other.n_qubits && self.ops == other.ops
    }
}

/// A well-formedness violation found by [`validate`]. Violations are data,
/// not errors: callers decide whether to stop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub op_index: usize,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {}: {}", self.op_index, self.reason)
    }
}

/// Check every op against the IR invariants: operand count matches the
/// gate's arity, operands are distinct, and all indices are in range.
pub fn validate(circuit: &CircuitIR) -> Vec<Violation> {
    use alloc::format;
    let mut out = Vec::new();
    for (idx, op) in circuit.ops.iter().enumerate() {
        let arity = op.kind.arity();
        if op.qubits.len() != arity {
            out.push(Violation {
                op_index: idx,
                reason: format!(
                    "{} expects {} operand(s), got {}",
                    op.kind,
                    arity,
                    op.qubits.len()
                ),
            });
            continue;
        }
        for (i, &q) in op.qubits.iter().enumerate() {
            if q >= circuit.n_qubits {
                out.push(Violation {
                    op_index: idx,
                    reason: format!("qubit index {q} out of range (circuit has {})", circuit.n_qubits),
                });
            }
            if op.qubits[..i].contains(&q) {
                out.push(Violation {
                    op_index: idx,
                    reason: format!("duplicate operand q{q}"),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_accepts_minimal_circuit() {
        let mut c = CircuitIR::new(2);
        c.push(GateKind::H, &[0]);
        c.push(GateKind::CNOT, &[0, 1]);
        assert!(validate(&c).is_empty());
        assert_eq!(c.one_qubit_gate_count(), 1);
        assert_eq!(c.multi_qubit_gate_count(), 1);
    }

    #[test]
    fn validate_flags_duplicate_operand() {
        let mut c = CircuitIR::new(2);
        c.push(GateKind::CNOT, &[0, 0]);
        let v = validate(&c);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].op_index, 0);
        assert!(v[0].reason.contains("duplicate"));
    }

    #[test]
    fn validate_flags_out_of_range() {
        let mut c = CircuitIR::new(2);
        c.push(GateKind::H, &[5]);
        let v = validate(&c);
        assert_eq!(v.len(), 1);
        assert!(v[0].reason.contains("out of range"));
    }

    #[test]
    fn validate_flags_arity_mismatch() {
        let mut c = CircuitIR::new(3);
        c.ops.push(GateOp { kind: GateKind::CCX, qubits: alloc::vec![0, 1] });
        let v = validate(&c);
        assert_eq!(v.len(), 1);
        assert!(v[0].reason.contains("expects 3"));
    }

    #[test]
    #[allow(clippy::approx_constant)] // truncated decimals are the point
    fn angle_recovery_from_decimals() {
        assert_eq!(Angle::from_radians(1.5707963267), Some(Angle::PiOver2));
        assert_eq!(Angle::from_radians(-4.71238898038469), Some(Angle::NegThreePiOver2));
        assert_eq!(Angle::from_radians(1.0471975512), None); // pi/3
    }
}
