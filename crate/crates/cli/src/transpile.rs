//! `pimsim transpile`: dump the lowered program — and, under vp, the
//! partition plan — as JSON, with summary statistics.

use crate::input::ResolvedInput;
use crate::{config, input, report, selection, CliError, CliResult, TranspileArgs};
use pimsim_core::passes::{
    lower, pack, partition, LoweredProgram, PackError, PartitionPlan, PassSelection,
};
use pimsim_core::pim::DpuConfig;
use serde_json::{json, Value};

fn program_json(component: usize, qubits: &[u32], program: &LoweredProgram) -> Value {
    json!({
        "component": component,
        "qubits": qubits,
        "n_qubits": program.n_qubits,
        "scale_k": program.scale_k,
        "steps": program.steps.iter().map(report::step_json).collect::<Vec<_>>(),
        "stats": stats_json(program),
    })
}

fn stats_json(program: &LoweredProgram) -> Value {
    let s = &program.stats;
    json!({
        "int_matrix_steps": s.int_matrix_steps,
        "perm_steps": s.perm_steps,
        "float_emu_steps": s.float_emu_steps,
        "odd_residual": s.odd_residual,
        "fused_runs": s.fused_runs,
        "merged_pairs": s.merged_pairs,
        "perm_lowered": s.perm_lowered,
    })
}

fn plan_json(plan: &PartitionPlan, cfg: &DpuConfig) -> Value {
    json!({
        "num_dpus": plan.num_dpus,
        "assignment": plan.assignment,
        "components": plan.components.iter().enumerate().map(|(i, c)| json!({
            "index": i,
            "qubits": c.qubits,
            "n_qubits": c.n_qubits(),
            "state_bytes": c.state_bytes(cfg),
        })).collect::<Vec<_>>(),
    })
}

pub fn cmd_transpile(args: &TranspileArgs) -> CliResult<()> {
    let sel = selection(&args.passes);
    let resolved = input::resolve(&args.input)?;
    let cfg = config::load(&args.cfg)?;

    let (plan, pieces): (Option<PartitionPlan>, Vec<(Vec<u32>, LoweredProgram)>) = if sel.vp {
        let plan = partition(&resolved.circuit)
            .map_err(|e| CliError::internal(e.to_string()))?;
        let plan = pack(&plan, args.dpus, &cfg).map_err(|e| match e {
            PackError::NoDpus => CliError::usage(e.to_string()),
            _ => CliError::capacity(e.to_string()),
        })?;
        let mut pieces = Vec::with_capacity(plan.components.len());
        for comp in &plan.components {
            let program = lower(&comp.circuit, sel)
                .map_err(|e| CliError::internal(e.to_string()))?;
            pieces.push((comp.qubits.clone(), program));
        }
        (Some(plan), pieces)
    } else {
        let program =
            lower(&resolved.circuit, sel).map_err(|e| CliError::internal(e.to_string()))?;
        let qubits: Vec<u32> = (0..resolved.circuit.n_qubits).collect();
        (None, vec![(qubits, program)])
    };

    let doc = transpile_doc(&resolved, sel, plan.as_ref(), &pieces, &cfg);
    println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
    Ok(())
}

fn transpile_doc(
    resolved: &ResolvedInput,
    sel: PassSelection,
    plan: Option<&PartitionPlan>,
    pieces: &[(Vec<u32>, LoweredProgram)],
    cfg: &DpuConfig,
) -> Value {
    let sum = |f: fn(&LoweredProgram) -> usize| pieces.iter().map(|(_, p)| f(p)).sum::<usize>();
    let quantization_k = pieces.iter().map(|(_, p)| p.scale_k).max().unwrap_or(0);
    let mut passes = Vec::new();
    if sel.gm {
        passes.push("gm");
    }
    if sel.rs {
        passes.push("rs");
    }
    if sel.vp {
        passes.push("vp");
    }
    json!({
        "command": "transpile",
        "input": {
            "kind": resolved.kind,
            "name": resolved.circuit.name,
            "source": resolved.display,
        },
        "passes": passes,
        "n_qubits": resolved.circuit.n_qubits,
        "plan": plan.map(|p| plan_json(p, cfg)),
        "programs": pieces
            .iter()
            .enumerate()
            .map(|(i, (qubits, p))| program_json(i, qubits, p))
            .collect::<Vec<_>>(),
        "stats": {
            "components": pieces.len(),
            "quantization_k": quantization_k,
            "total_steps": pieces.iter().map(|(_, p)| p.steps.len()).sum::<usize>(),
            "int_matrix_steps": sum(|p| p.stats.int_matrix_steps),
            "perm_steps": sum(|p| p.stats.perm_steps),
            "float_emu_steps": sum(|p| p.stats.float_emu_steps),
            "odd_residual": sum(|p| p.stats.odd_residual),
            "fused_runs": sum(|p| p.stats.fused_runs),
            "merged_pairs": sum(|p| p.stats.merged_pairs),
            "perm_lowered": sum(|p| p.stats.perm_lowered),
        },
    })
}
