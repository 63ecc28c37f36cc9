//! Shared output rendering: probability tables, trace/cost serialization,
//! state dumps, and lowered-step JSON.

use crate::{CliError, CliResult};
use num_complex::Complex64;
use pimsim_core::intstate::QState;
use pimsim_core::passes::ProgramStep;
use pimsim_core::pim::{CapacityIssue, CostReport, DpuConfig, ExecutionTrace};
use serde_json::{json, Value};

/// Reports list every basis state up to this many qubits; beyond it only
/// nonzero entries appear (with a count of the omitted zeros).
pub const FULL_TABLE_QUBITS: u32 = 10;

pub struct ProbEntry {
    pub index: u64,
    /// Reduced exact fraction; `None` on the float path.
    pub fraction: Option<(u128, u128)>,
    pub value: f64,
}

pub fn fraction_str(num: u128, den: u128) -> String {
    if num == 0 {
        "0".into()
    } else if den == 1 {
        format!("{num}")
    } else {
        format!("{num}/{den}")
    }
}

pub fn bitstring(index: u64, n_qubits: u32) -> String {
    (0..n_qubits).rev().map(|b| if index >> b & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn exact_prob_entries(state: &QState) -> CliResult<(Vec<ProbEntry>, u64)> {
    let fractions = state
        .probabilities()
        .ok_or_else(|| CliError::internal("state denominator exceeds 2^127"))?;
    let keep_all = state.n_qubits <= FULL_TABLE_QUBITS;
    let mut entries = Vec::new();
    let mut omitted = 0u64;
    for (j, (num, den)) in fractions.into_iter().enumerate() {
        if num == 0 && !keep_all {
            omitted += 1;
            continue;
        }
        entries.push(ProbEntry {
            index: j as u64,
            fraction: Some((num, den)),
            value: num as f64 / den as f64,
        });
    }
    Ok((entries, omitted))
}

pub fn float_prob_entries(amps: &[Complex64], n_qubits: u32) -> (Vec<ProbEntry>, u64) {
    let keep_all = n_qubits <= FULL_TABLE_QUBITS;
    let mut entries = Vec::new();
    let mut omitted = 0u64;
    for (j, a) in amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 && !keep_all {
            omitted += 1;
            continue;
        }
        entries.push(ProbEntry { index: j as u64, fraction: None, value: p });
    }
    (entries, omitted)
}

pub fn probabilities_json(
    entries: &[ProbEntry],
    omitted: u64,
    n_qubits: u32,
    denominator_log2: Option<u32>,
) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            let mut row = json!({
                "index": e.index,
                "bits": bitstring(e.index, n_qubits),
                "value": e.value,
            });
            if let Some((num, den)) = e.fraction {
                row["p"] = Value::String(fraction_str(num, den));
            }
            row
        })
        .collect();
    json!({
        "denominator_log2": denominator_log2,
        "entries": rows,
        "omitted_zero_entries": omitted,
    })
}

pub fn capacity_issue_text(issue: &CapacityIssue) -> String {
    match issue {
        CapacityIssue::MramOverflow { dpu_id, needed_bytes, mram_bytes } => format!(
            "DPU {dpu_id}: resident set {needed_bytes} B exceeds MRAM {mram_bytes} B"
        ),
        CapacityIssue::WramTiling { dpu_id, component, state_bytes, wram_bytes } => format!(
            "DPU {dpu_id}: component {component} state {state_bytes} B exceeds WRAM \
             {wram_bytes} B; kernels stream tiles"
        ),
    }
}

pub fn trace_json(trace: &ExecutionTrace) -> Value {
    json!({
        "num_components": trace.num_components,
        "recon_ops": trace.recon_ops,
        "inter_worker_messages": trace.inter_worker_messages,
        "warnings": trace.warnings.iter().map(capacity_issue_text).collect::<Vec<_>>(),
        "per_dpu": trace.per_dpu.iter().map(|r| json!({
            "dpu_id": r.dpu_id,
            "c2d_bytes": r.c2d_bytes,
            "int_ops": r.comp.total_int_ops(),
            "float_ops": r.comp.emulated_float_ops,
            "bytes_touched": r.comp.bytes_touched,
            "d2c_bytes": r.d2c_bytes,
            "tiling_dma_bytes": r.tiling_dma_bytes,
            "state_bytes": r.state_bytes,
        })).collect::<Vec<_>>(),
    })
}

pub fn cost_json(cost: &CostReport) -> Value {
    let phases: Vec<Value> = cost
        .phases
        .iter()
        .zip(cost.fractions)
        .map(|(p, f)| {
            json!({
                "phase": p.phase,
                "quantity": p.quantity,
                "modeled_units": p.modeled_units,
                "fraction": f,
            })
        })
        .collect();
    json!({
        "phases": phases,
        "total_units": cost.total_units,
        "per_dpu_comp_units": cost.per_dpu_comp_units
            .iter().map(|(id, u)| json!([id, u])).collect::<Vec<_>>(),
        "per_dpu_footprint_bytes": cost.per_dpu_footprint_bytes
            .iter().map(|(id, b)| json!([id, b])).collect::<Vec<_>>(),
    })
}

/// Per-DPU trace rows in the fixed six-column layout. Transfer rows convert
/// their own bytes at the configured rates; the reconstruction row is
/// host-side work and carries its op count in `int_ops`.
pub fn trace_csv(trace: &ExecutionTrace, cost: &CostReport, cfg: &DpuConfig) -> String {
    let mut out = String::from("dpu_id,phase,bytes,int_ops,float_ops,modeled_units\n");
    let rate = |bytes: u64, per_unit: u64| if bytes == 0 { 0 } else { bytes.div_ceil(per_unit) };
    for row in &trace.per_dpu {
        let comp_units = cost
            .per_dpu_comp_units
            .iter()
            .find(|(id, _)| *id == row.dpu_id)
            .map_or(0, |(_, u)| *u);
        out.push_str(&format!(
            "{},C-to-D Tran.,{},0,0,{}\n",
            row.dpu_id,
            row.c2d_bytes,
            rate(row.c2d_bytes, cfg.c2d_bytes_per_unit)
        ));
        out.push_str(&format!(
            "{},Comp.,{},{},{},{}\n",
            row.dpu_id,
            row.comp.bytes_touched + row.tiling_dma_bytes,
            row.comp.total_int_ops(),
            row.comp.emulated_float_ops,
            comp_units
        ));
        out.push_str(&format!(
            "{},D-to-C Tran.,{},0,0,{}\n",
            row.dpu_id,
            row.d2c_bytes,
            rate(row.d2c_bytes, cfg.d2c_bytes_per_unit)
        ));
    }
    out.push_str(&format!(
        "host,Recon.,0,{},0,{}\n",
        trace.recon_ops,
        cost.phases[3].modeled_units
    ));
    out
}

pub fn probabilities_csv(entries: &[ProbEntry], n_qubits: u32) -> String {
    let mut out = String::from("index,bits,probability,fraction\n");
    for e in entries {
        let frac = e.fraction.map(|(n, d)| fraction_str(n, d)).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.12},{}\n",
            e.index,
            bitstring(e.index, n_qubits),
            e.value,
            frac
        ));
    }
    out
}

pub fn cost_text(cost: &CostReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14} {:>14} {:>14} {:>8}\n",
        "phase", "quantity", "modeled units", "share"
    ));
    for (p, f) in cost.phases.iter().zip(cost.fractions) {
        let qty = match p.phase {
            "Comp." => format!("{} units", p.quantity),
            "Recon." => format!("{} ops", p.quantity),
            _ => format!("{} B", p.quantity),
        };
        out.push_str(&format!(
            "{:<14} {:>14} {:>14} {:>7.1}%\n",
            p.phase,
            qty,
            p.modeled_units,
            f * 100.0
        ));
    }
    out.push_str(&format!(
        "{:<14} {:>14} {:>14} {:>7.1}%\n",
        "total",
        "",
        cost.total_units,
        if cost.total_units == 0 { 0.0 } else { 100.0 }
    ));
    out
}

pub fn probabilities_text(entries: &[ProbEntry], omitted: u64, n_qubits: u32) -> String {
    let mut out = format!(
        "probabilities ({} entr{}, {} zero entr{} omitted):\n",
        entries.len(),
        if entries.len() == 1 { "y" } else { "ies" },
        omitted,
        if omitted == 1 { "y" } else { "ies" },
    );
    for e in entries {
        let frac = e
            .fraction
            .map(|(n, d)| format!("  {}", fraction_str(n, d)))
            .unwrap_or_default();
        out.push_str(&format!(
            "  [{:>6}] {}{}  = {:.6}\n",
            e.index,
            bitstring(e.index, n_qubits),
            frac,
            e.value
        ));
    }
    out
}

/// Exact state dump: integer amplitude pairs plus the scale bookkeeping
/// needed to rebuild the state, and probabilities as reduced fractions.
pub fn state_dump_json(state: &QState) -> CliResult<Value> {
    let fractions = state
        .probabilities()
        .ok_or_else(|| CliError::internal("state denominator exceeds 2^127"))?;
    Ok(json!({
        "format": "pimsim-state",
        "n_qubits": state.n_qubits,
        "scale_k": state.scale_k,
        "half_shift": state.half_shift,
        "nums": state.nums.iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
        "probabilities": fractions
            .iter().map(|&(n, d)| fraction_str(n, d)).collect::<Vec<_>>(),
    }))
}

pub fn float_dump_json(n_qubits: u32, amps: &[Complex64]) -> Value {
    json!({
        "format": "pimsim-state-float",
        "n_qubits": n_qubits,
        "amps": amps.iter().map(|a| json!([a.re, a.im])).collect::<Vec<_>>(),
    })
}

pub fn step_json(step: &ProgramStep) -> Value {
    match step {
        ProgramStep::IntMatrix(m) => json!({
            "type": "int_matrix",
            "dim": m.dim,
            "half_shift": m.half_shift,
            "qubits": m.operand_qubits,
            "entries": m.entries.iter().map(|e| json!([e.re, e.im])).collect::<Vec<_>>(),
        }),
        ProgramStep::Perm { kind, qubits } => json!({
            "type": "perm",
            "kind": kind.name(),
            "qubits": qubits,
        }),
        ProgramStep::FloatEmu { kind, qubits } => json!({
            "type": "float_emu",
            "gate": kind.mnemonic(),
            "qubits": qubits,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pimsim_core::circuit::bench::{gen_benchmark, BenchParams, Family};
    use pimsim_core::intstate::{run_program, RunOptions};
    use pimsim_core::passes::{lower, PassSelection};

    #[test]
    fn fraction_rendering() {
        assert_eq!(fraction_str(0, 1), "0");
        assert_eq!(fraction_str(1, 1), "1");
        assert_eq!(fraction_str(1, 16), "1/16");
    }

    #[test]
    fn bitstring_is_msb_first() {
        assert_eq!(bitstring(7, 4), "0111");
        assert_eq!(bitstring(1, 3), "001");
    }

    #[test]
    fn small_states_list_every_entry() {
        let c = gen_benchmark(Family::Qrng, 4, &BenchParams::default()).unwrap();
        let program = lower(&c, PassSelection::GM_RS).unwrap();
        let (state, _) = run_program(&program, &RunOptions::default()).unwrap();
        let (entries, omitted) = exact_prob_entries(&state).unwrap();
        assert_eq!(entries.len(), 16);
        assert_eq!(omitted, 0);
        assert!(entries.iter().all(|e| e.fraction == Some((1, 16))));
    }

    #[test]
    fn large_sparse_states_omit_zero_entries() {
        let c = gen_benchmark(Family::Xor, 12, &BenchParams::default()).unwrap();
        let program = lower(&c, PassSelection::GM_RS).unwrap();
        let (state, _) = run_program(&program, &RunOptions::default()).unwrap();
        let (entries, omitted) = exact_prob_entries(&state).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(omitted, (1 << 12) - 1);
        assert_eq!(entries[0].fraction, Some((1, 1)));
    }

    #[test]
    fn state_dump_round_trip_fields() {
        let c = gen_benchmark(Family::Bv, 4, &BenchParams::default()).unwrap();
        let program = lower(&c, PassSelection::GM_RS).unwrap();
        let (state, _) = run_program(&program, &RunOptions::default()).unwrap();
        let dump = state_dump_json(&state).unwrap();
        assert_eq!(dump["format"], "pimsim-state");
        assert_eq!(dump["n_qubits"], 4);
        assert_eq!(dump["nums"].as_array().unwrap().len(), 16);
        let k = dump["scale_k"].as_u64().unwrap() as u32;
        let s = dump["half_shift"].as_u64().unwrap() as u32;
        assert_eq!((k, s), (state.scale_k, state.half_shift));
    }
}
