//! Row-swap lowering (RS): steps whose unitary is a 0/1 permutation matrix
//! become pure element swaps on the state vector — no arithmetic at all.

use super::{IntGateMatrix, LoweredProgram, PermKind, ProgramStep};
use crate::gauss::GaussInt;

/// Rewrite every permutation step into a `Perm` step. Idempotent; all other
/// steps pass through untouched.
pub fn lower_permutations(mut program: LoweredProgram) -> LoweredProgram {
    let mut lowered = 0usize;
    for step in &mut program.steps {
        let replacement = match step {
            ProgramStep::IntMatrix(m) => {
                perm_kind_of(m).map(|kind| (kind, m.operand_qubits.clone()))
            }
            ProgramStep::FloatEmu { kind, qubits } => {
                PermKind::from_gate(*kind).map(|k| (k, qubits.clone()))
            }
            ProgramStep::Perm { .. } => None,
        };
        if let Some((kind, qubits)) = replacement {
            *step = ProgramStep::Perm { kind, qubits };
            lowered += 1;
        }
    }
    program.stats.perm_lowered += lowered;
    program.recount();
    program
}

/// Match a matrix against the four element-swap patterns. Identity
/// matrices are permutations too, but name no swap kind — they stay put.
fn perm_kind_of(m: &IntGateMatrix) -> Option<PermKind> {
    if !m.is_permutation() {
        return None;
    }
    let one = GaussInt::new(1, 0);
    let mut image = [0usize; 8];
    for (col, img) in image.iter_mut().enumerate().take(m.dim) {
        for row in 0..m.dim {
            if m.entries[row * m.dim + col] == one {
                *img = row;
            }
        }
    }
    match (m.dim, &image[..m.dim]) {
        (2, [1, 0]) => Some(PermKind::X),
        (4, [0, 1, 3, 2]) => Some(PermKind::Cnot),
        (4, [0, 2, 1, 3]) => Some(PermKind::Swap),
        (8, [0, 1, 2, 3, 4, 5, 7, 6]) => Some(PermKind::Ccx),
        _ => None,
    }
}
