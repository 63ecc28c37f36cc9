//! Gate merging (GM): fold √2-denominator gates together until their
//! product is an integer matrix, so the engine can realize denominators as
//! binary shifts instead of per-gate divisions.
//!
//! Two phases, both strictly order-preserving:
//!
//! 1. **Run fusion** — maximal sequences of *adjacent* ops (adjacent in the
//!    op list) acting on one qubit fold into matrix products over the
//!    √2-extension ring. The longest representable prefix is emitted each
//!    time; a gate with no representable prefix at all (a bare T/Tdg)
//!    degrades to a float-emulated step.
//! 2. **Tensor pairing** — single-qubit matrices left with an odd
//!    half-shift are paired across qubits within one dependency layer into
//!    a 4×4 Kronecker product with even half-shift (lowest qubit pair
//!    first). A pair is placed at one member's position only if no step in
//!    between touches the moved member's qubit; otherwise the pair is
//!    skipped — correctness never rides on the scheduler.
//!
//! No commutation-based reordering happens anywhere: every emitted program
//! is a (trivially commuting) rearrangement of the source gate product.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::gates::{gate_ext_form, gate_int_form};
use crate::circuit::{CircuitIR, GateOp};
use crate::gauss::{classify, GaussInt, Purity, Sqrt2Ext};

use super::{
    ensure_valid, IntGateMatrix, LoweredProgram, LoweredStats, PassError, ProgramStep,
};

/// Lower a circuit with gate merging. Every op becomes an `IntMatrix` step
/// except gates with no representable prefix, which become `FloatEmu`.
pub fn merge_gates(circuit: &CircuitIR) -> Result<LoweredProgram, PassError> {
    ensure_valid(circuit)?;
    let mut stats = LoweredStats::default();
    let mut steps: Vec<ProgramStep> = Vec::with_capacity(circuit.ops.len());

    // ---- phase 1: same-qubit run fusion --------------------------------
    let ops = &circuit.ops;
    let mut i = 0;
    while i < ops.len() {
        let op = &ops[i];
        if op.kind.arity() == 1 {
            let q = op.qubits[0];
            let mut j = i;
            while j < ops.len() && ops[j].kind.arity() == 1 && ops[j].qubits[0] == q {
                j += 1;
            }
            fuse_run(&ops[i..j], q, &mut steps, &mut stats);
            i = j;
        } else {
            let form = gate_int_form(op.kind)
                .expect("all multi-qubit catalog gates have integer forms");
            steps.push(ProgramStep::IntMatrix(IntGateMatrix::from_form(form, &op.qubits)));
            i += 1;
        }
    }

    // ---- phase 2: cross-qubit tensor pairing ---------------------------
    pair_odd_residuals(circuit.n_qubits, &mut steps, &mut stats);

    let mut program =
        LoweredProgram { n_qubits: circuit.n_qubits, steps, scale_k: 0, stats };
    program.recount();
    Ok(program)
}

/// 2×2 product over the extension ring: `a · b` (entry overflow → None).
fn ext_mul2(a: &[Sqrt2Ext; 4], b: &[Sqrt2Ext; 4]) -> Option<[Sqrt2Ext; 4]> {
    let mut out = [Sqrt2Ext::default(); 4];
    for r in 0..2 {
        for c in 0..2 {
            let p0 = a[r * 2].checked_mul(b[c])?;
            let p1 = a[r * 2 + 1].checked_mul(b[2 + c])?;
            out[r * 2 + c] = p0.checked_add(p1)?;
        }
    }
    Some(out)
}

/// Emit the gates of one same-qubit run as maximal representable prefixes.
fn fuse_run(run: &[GateOp], qubit: u32, steps: &mut Vec<ProgramStep>, stats: &mut LoweredStats) {
    let mut pos = 0;
    while pos < run.len() {
        // grow the product gate-by-gate, remembering the last point where
        // it collapses to a single (√2)-power denominator
        let mut acc: Option<[Sqrt2Ext; 4]> = None;
        let mut acc_shift = 0u32;
        let mut best: Option<(usize, Vec<GaussInt>, u32)> = None;
        for (offset, op) in run[pos..].iter().enumerate() {
            let ext = gate_ext_form(op.kind).expect("1Q catalog gates all have ext forms");
            let g: [Sqrt2Ext; 4] =
                [ext.entries[0], ext.entries[1], ext.entries[2], ext.entries[3]];
            let next = match &acc {
                None => Some(g),
                // later gate multiplies from the left
                Some(prev) => ext_mul2(&g, prev),
            };
            let Some(next) = next else { break }; // overflow: stop extending
            acc_shift += ext.half_shift;
            match classify(&next) {
                Purity::PureX => {
                    best = Some((offset, next.iter().map(|e| e.x).collect(), acc_shift));
                }
                Purity::PureY => {
                    debug_assert!(acc_shift > 0, "√2 factor without any half-shift");
                    best = Some((offset, next.iter().map(|e| e.y).collect(), acc_shift - 1));
                }
                Purity::Mixed => {}
            }
            acc = Some(next);
        }
        match best {
            Some((offset, entries, half_shift)) => {
                if offset > 0 {
                    stats.fused_runs += 1;
                }
                steps.push(ProgramStep::IntMatrix(IntGateMatrix {
                    dim: 2,
                    entries,
                    half_shift,
                    operand_qubits: vec![qubit],
                }));
                pos += offset + 1;
            }
            None => {
                // no prefix representable: ship this one gate to emulation
                steps.push(ProgramStep::FloatEmu {
                    kind: run[pos].kind,
                    qubits: vec![qubit],
                });
                pos += 1;
            }
        }
    }
}

/// ASAP dependency layer per step: 1 + max layer over earlier steps sharing
/// a qubit.
fn asap_layers(n_qubits: u32, steps: &[ProgramStep]) -> Vec<i64> {
    let mut last: Vec<i64> = vec![-1; n_qubits as usize];
    steps
        .iter()
        .map(|step| {
            let l = step
                .qubits()
                .iter()
                .map(|&q| last[q as usize])
                .max()
                .unwrap_or(-1)
                + 1;
            for &q in step.qubits() {
                last[q as usize] = l;
            }
            l
        })
        .collect()
}

fn pair_odd_residuals(n_qubits: u32, steps: &mut Vec<ProgramStep>, stats: &mut LoweredStats) {
    let layers = asap_layers(n_qubits, steps);

    // candidates per layer: (qubit, step index) of odd-half-shift 2×2s
    let mut by_layer: alloc::collections::BTreeMap<i64, Vec<(u32, usize)>> =
        alloc::collections::BTreeMap::new();
    for (idx, step) in steps.iter().enumerate() {
        if let ProgramStep::IntMatrix(m) = step {
            if m.dim == 2 && m.half_shift % 2 == 1 {
                by_layer.entry(layers[idx]).or_default().push((m.operand_qubits[0], idx));
            }
        }
    }

    let mut removed = vec![false; steps.len()];
    for (_, mut cands) in by_layer {
        cands.sort_unstable();
        for pair in cands.chunks_exact(2) {
            let [(qa, ia), (qb, ib)] = [pair[0], pair[1]];
            let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
            let moved_to_lo = if ia < ib { qb } else { qa };
            let moved_to_hi = if ia < ib { qa } else { qb };
            let blocked = |qubit: u32| {
                steps[lo + 1..hi]
                    .iter()
                    .enumerate()
                    .any(|(off, s)| !removed[lo + 1 + off] && s.qubits().contains(&qubit))
            };
            let place_at = if !blocked(moved_to_lo) {
                lo
            } else if !blocked(moved_to_hi) {
                hi
            } else {
                continue; // no legal position: leave both as odd residuals
            };
            let (ProgramStep::IntMatrix(ma), ProgramStep::IntMatrix(mb)) =
                (&steps[ia], &steps[ib])
            else {
                unreachable!("candidates are IntMatrix by construction")
            };
            let merged = kron2(ma, mb);
            let drop_at = if place_at == lo { hi } else { lo };
            steps[place_at] = ProgramStep::IntMatrix(merged);
            removed[drop_at] = true;
            stats.merged_pairs += 1;
        }
    }

    if removed.iter().any(|&r| r) {
        let mut kept = Vec::with_capacity(steps.len());
        for (idx, step) in steps.drain(..).enumerate() {
            if !removed[idx] {
                kept.push(step);
            }
        }
        *steps = kept;
    }
}

/// Kronecker product of two 2×2 integer matrices; `a`'s qubit becomes the
/// most significant local bit (operands sorted ascending, so the paired
/// matrix reads as kron(U_low, U_high)).
fn kron2(a: &IntGateMatrix, b: &IntGateMatrix) -> IntGateMatrix {
    debug_assert!(a.operand_qubits[0] < b.operand_qubits[0]);
    let mut entries = vec![GaussInt::default(); 16];
    for ia in 0..2 {
        for ja in 0..2 {
            for ib in 0..2 {
                for jb in 0..2 {
                    let v = a.entries[ia * 2 + ja]
                        .checked_mul(b.entries[ib * 2 + jb])
                        .expect("pair entries are unit-scale products");
                    entries[(ia * 2 + ib) * 4 + (ja * 2 + jb)] = v;
                }
            }
        }
    }
    IntGateMatrix {
        dim: 4,
        entries,
        half_shift: a.half_shift + b.half_shift,
        operand_qubits: vec![a.operand_qubits[0], b.operand_qubits[0]],
    }
}
