//! Circuit-to-program lowering: the executable step forms and the three
//! optimization passes (gate merging, permutation lowering, partitioning),
//! plus the state-quantization analysis.
//!
//! A lowered program is a flat step sequence whose product unitary equals
//! the source circuit's — passes trade step *cost*, never semantics.

mod merge;
mod partition;
mod perm;
mod quantize;

pub use merge::merge_gates;
pub use partition::{pack, partition, Component, PackError, PartitionPlan};
pub use perm::lower_permutations;
pub use quantize::{quantize, quantize_program, QuantizeError, DEFAULT_QUANTIZE_CAP};

use alloc::vec::Vec;

use crate::circuit::gates::IntForm;
use crate::circuit::{validate, CircuitIR, GateKind, Violation};
use crate::gauss::GaussInt;

/// An integer gate matrix `entries / (√2)^half_shift` bound to operand
/// qubits. `operand_qubits[0]` owns the most significant local index bit
/// (see `circuit::gates` module docs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntGateMatrix {
    pub dim: usize,
    pub entries: Vec<GaussInt>,
    pub half_shift: u32,
    pub operand_qubits: Vec<u32>,
}

impl IntGateMatrix {
    pub fn from_form(form: IntForm, qubits: &[u32]) -> Self {
        debug_assert_eq!(form.dim, 1 << qubits.len());
        Self {
            dim: form.dim,
            entries: form.entries,
            half_shift: form.half_shift,
            operand_qubits: qubits.to_vec(),
        }
    }

    /// M·M† == 2^half_shift · I, exactly. The product is what pins the
    /// half-shift: entries alone underdetermine it.
    pub fn scaled_unitarity_holds(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let mut acc = GaussInt::default();
                for k in 0..d {
                    let Some(p) = self.entries[i * d + k].checked_mul(self.entries[j * d + k].conj())
                    else {
                        return false;
                    };
                    let Some(s) = acc.checked_add(p) else { return false };
                    acc = s;
                }
                let expect = if i == j {
                    GaussInt::new(1i64 << self.half_shift, 0)
                } else {
                    GaussInt::default()
                };
                if acc != expect {
                    return false;
                }
            }
        }
        true
    }

    /// True when this is a 0/1 permutation matrix with no denominator.
    pub fn is_permutation(&self) -> bool {
        if self.half_shift != 0 {
            return false;
        }
        let d = self.dim;
        let one = GaussInt::new(1, 0);
        let mut col_seen = alloc::vec![false; d];
        for row in self.entries.chunks(d) {
            let mut row_ones = 0usize;
            for (&e, seen) in row.iter().zip(col_seen.iter_mut()) {
                if e == one {
                    row_ones += 1;
                    if *seen {
                        return false;
                    }
                    *seen = true;
                } else if !e.is_zero() {
                    return false;
                }
            }
            if row_ones != 1 {
                return false;
            }
        }
        true
    }
}

/// The gates whose unitaries are 0/1 permutation matrices; the only kinds a
/// `Perm` step may carry. CZ does not qualify (it has a −1 entry) and stays
/// a matrix step by design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermKind {
    X,
    Cnot,
    Swap,
    Ccx,
}

impl PermKind {
    pub fn arity(self) -> usize {
        match self {
            PermKind::X => 1,
            PermKind::Cnot | PermKind::Swap => 2,
            PermKind::Ccx => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PermKind::X => "X",
            PermKind::Cnot => "CNOT",
            PermKind::Swap => "SWAP",
            PermKind::Ccx => "CCX",
        }
    }

    pub fn from_gate(kind: GateKind) -> Option<Self> {
        match kind {
            GateKind::X => Some(PermKind::X),
            GateKind::CNOT => Some(PermKind::Cnot),
            GateKind::SWAP => Some(PermKind::Swap),
            GateKind::CCX => Some(PermKind::Ccx),
            _ => None,
        }
    }
}

/// One executable step of a lowered program.
#[derive(Clone, Debug, PartialEq)]
pub enum ProgramStep {
    /// Exact integer matrix application; the engine realizes the
    /// denominator through the global half-shift.
    IntMatrix(IntGateMatrix),
    /// Row swaps in the state vector — no arithmetic at all.
    Perm { kind: PermKind, qubits: Vec<u32> },
    /// A gate the integer lowering could not absorb; executed exactly but
    /// billed as software-emulated floating point.
    FloatEmu { kind: GateKind, qubits: Vec<u32> },
}

impl ProgramStep {
    pub fn qubits(&self) -> &[u32] {
        match self {
            ProgramStep::IntMatrix(m) => &m.operand_qubits,
            ProgramStep::Perm { qubits, .. } | ProgramStep::FloatEmu { qubits, .. } => qubits,
        }
    }
}

/// Pass bookkeeping: step-variant totals are recomputed from the step list;
/// the pass-specific counters accumulate as transformations apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoweredStats {
    pub int_matrix_steps: usize,
    pub perm_steps: usize,
    pub float_emu_steps: usize,
    /// Integer-matrix steps left carrying an odd half-shift.
    pub odd_residual: usize,
    /// Same-qubit runs that fused ≥ 2 gates into one matrix.
    pub fused_runs: usize,
    /// Cross-qubit tensor pairings performed.
    pub merged_pairs: usize,
    /// Steps rewritten into `Perm` by permutation lowering.
    pub perm_lowered: usize,
}

/// A circuit lowered to executable steps.
#[derive(Clone, Debug, PartialEq)]
pub struct LoweredProgram {
    pub n_qubits: u32,
    pub steps: Vec<ProgramStep>,
    /// Quantization exponent: initial amplitude is 2^scale_k. Zero unless
    /// the quantization analysis ran and found a better start.
    pub scale_k: u32,
    pub stats: LoweredStats,
}

impl LoweredProgram {
    pub(crate) fn recount(&mut self) {
        let s = &mut self.stats;
        s.int_matrix_steps = 0;
        s.perm_steps = 0;
        s.float_emu_steps = 0;
        s.odd_residual = 0;
        for step in &self.steps {
            match step {
                ProgramStep::IntMatrix(m) => {
                    s.int_matrix_steps += 1;
                    if m.half_shift % 2 == 1 {
                        s.odd_residual += 1;
                    }
                }
                ProgramStep::Perm { .. } => s.perm_steps += 1,
                ProgramStep::FloatEmu { .. } => s.float_emu_steps += 1,
            }
        }
    }

    /// Total half-shift accumulated over a full run (the engine's final `s`
    /// before canonicalization).
    pub fn total_half_shift(&self) -> u32 {
        self.steps
            .iter()
            .map(|s| match s {
                ProgramStep::IntMatrix(m) => m.half_shift,
                _ => 0,
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PassError {
    #[error("circuit fails validation: {}", fmt_violations(.0))]
    InvalidCircuit(Vec<Violation>),
}

fn fmt_violations(v: &[Violation]) -> alloc::string::String {
    use alloc::string::ToString;
    let rendered: Vec<_> = v.iter().map(|x| x.to_string()).collect();
    rendered.join("; ")
}

pub(crate) fn ensure_valid(circuit: &CircuitIR) -> Result<(), PassError> {
    let v = validate(circuit);
    if v.is_empty() {
        Ok(())
    } else {
        Err(PassError::InvalidCircuit(v))
    }
}

/// The no-optimization lowering: every gate becomes a float-emulated step.
/// This is the cost model's "Baseline" — mathematically still exact, but
/// billed at emulated-float rates.
pub fn lower_baseline(circuit: &CircuitIR) -> Result<LoweredProgram, PassError> {
    ensure_valid(circuit)?;
    let steps = circuit
        .ops
        .iter()
        .map(|op| ProgramStep::FloatEmu { kind: op.kind, qubits: op.qubits.clone() })
        .collect();
    let mut p = LoweredProgram {
        n_qubits: circuit.n_qubits,
        steps,
        scale_k: 0,
        stats: LoweredStats::default(),
    };
    p.recount();
    Ok(p)
}

/// Which passes a pipeline run applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PassSelection {
    pub gm: bool,
    pub rs: bool,
    pub vp: bool,
}

impl PassSelection {
    pub const NONE: Self = Self { gm: false, rs: false, vp: false };
    pub const GM: Self = Self { gm: true, rs: false, vp: false };
    pub const RS: Self = Self { gm: false, rs: true, vp: false };
    pub const GM_RS: Self = Self { gm: true, rs: true, vp: false };
    pub const ALL: Self = Self { gm: true, rs: true, vp: true };
}

/// Lower one circuit through the selected scalar passes (GM/RS; VP operates
/// on plans, not programs). Quantization runs when GM is active and the
/// circuit is small enough to analyze; it is skipped silently otherwise —
/// the engine is exact at scale 0 regardless.
pub fn lower(circuit: &CircuitIR, passes: PassSelection) -> Result<LoweredProgram, PassError> {
    let mut program =
        if passes.gm { merge_gates(circuit)? } else { lower_baseline(circuit)? };
    if passes.rs {
        program = lower_permutations(program);
    }
    if passes.gm && circuit.n_qubits <= DEFAULT_QUANTIZE_CAP {
        if let Ok(k) = quantize_program(&program) {
            program.scale_k = k;
        }
    }
    Ok(program)
}
