//! `pimsim run`: simulate and report probabilities, the four-phase transfer
//! trace, and the modeled cost breakdown.

use crate::input::{self, ResolvedInput};
use crate::{
    config, passes_label, report, sample, selection, CliError, CliResult, EngineKind,
    OutputFormat, RunArgs,
};
use pimsim_core::circuit::CircuitIR;
use pimsim_core::intstate::QState;
use pimsim_core::oracle::{self, OracleError};
use pimsim_core::passes::{
    lower, pack, partition, Component, PackError, PartitionPlan, PassSelection,
};
use pimsim_core::pim::{
    assemble_trace, cost_report, plan_worker_tasks, reconstruct, run_worker_task, CostReport,
    DpuConfig, ExecError, ExecutionTrace, WorkerOutput, WorkerTask,
};
use serde_json::{json, Value};
use std::path::Path;

fn map_pack(e: PackError) -> CliError {
    match e {
        PackError::NoDpus => CliError::usage(e.to_string()),
        _ => CliError::capacity(e.to_string()),
    }
}

fn map_exec(e: ExecError) -> CliError {
    match e {
        ExecError::Capacity(_) => CliError::capacity(e.to_string()),
        ExecError::Config(_) => CliError::usage(e.to_string()),
        _ => CliError::internal(e.to_string()),
    }
}

/// Wrap a whole circuit as a one-component plan so unpartitioned runs share
/// the packing, capacity, and trace machinery.
fn whole_plan(circuit: &CircuitIR) -> PartitionPlan {
    PartitionPlan {
        n_qubits: circuit.n_qubits,
        components: vec![Component {
            qubits: (0..circuit.n_qubits).collect(),
            circuit: circuit.clone(),
        }],
        assignment: Vec::new(),
        num_dpus: 0,
    }
}

pub struct PimRun {
    pub plan: PartitionPlan,
    pub state: QState,
    pub trace: ExecutionTrace,
    pub cost: CostReport,
}

fn run_tasks(tasks: Vec<WorkerTask>, parallelism: u32) -> CliResult<Vec<WorkerOutput>> {
    let threads = (parallelism.max(1) as usize).min(tasks.len().max(1));
    if threads <= 1 {
        return tasks.into_iter().map(|t| run_worker_task(t).map_err(map_exec)).collect();
    }
    // Round-robin tasks over threads. Workers share nothing and the trace
    // assembly sorts rows by DPU id, so the split never shows in output.
    let mut buckets: Vec<Vec<WorkerTask>> = (0..threads).map(|_| Vec::new()).collect();
    for (i, task) in tasks.into_iter().enumerate() {
        buckets[i % threads].push(task);
    }
    let results: Vec<Result<Vec<WorkerOutput>, ExecError>> = std::thread::scope(|scope| {
        let joins: Vec<_> = buckets
            .into_iter()
            .map(|bucket| {
                scope.spawn(move || {
                    bucket.into_iter().map(run_worker_task).collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        joins.into_iter().map(|j| j.join().expect("worker thread panicked")).collect()
    });
    let mut outputs = Vec::new();
    for r in results {
        outputs.extend(r.map_err(map_exec)?);
    }
    Ok(outputs)
}

pub fn run_pim(
    circuit: &CircuitIR,
    sel: PassSelection,
    dpus: u32,
    cfg: &DpuConfig,
    parallelism: u32,
) -> CliResult<PimRun> {
    let plan = if sel.vp {
        partition(circuit).map_err(|e| CliError::internal(e.to_string()))?
    } else {
        whole_plan(circuit)
    };
    let plan = pack(&plan, dpus, cfg).map_err(map_pack)?;
    let mut programs = Vec::with_capacity(plan.components.len());
    for comp in &plan.components {
        programs.push(lower(&comp.circuit, sel).map_err(|e| CliError::internal(e.to_string()))?);
    }
    let tasks = plan_worker_tasks(&plan, &programs, cfg).map_err(map_exec)?;
    let outputs = run_tasks(tasks, parallelism)?;
    let rows = outputs.iter().map(|o| o.row).collect();
    let trace = assemble_trace(&plan, cfg, rows);

    let mut slots: Vec<Option<QState>> = vec![None; plan.components.len()];
    for out in outputs {
        for (idx, state) in out.states {
            slots[idx] = Some(state);
        }
    }
    let states: Vec<QState> =
        slots.into_iter().map(|s| s.expect("every component executes")).collect();
    let state = reconstruct(&states, &plan).map_err(map_exec)?;
    let cost = cost_report(&trace, cfg);
    Ok(PimRun { plan, state, trace, cost })
}

fn sel_names(sel: PassSelection) -> Vec<&'static str> {
    let mut v = Vec::new();
    if sel.gm {
        v.push("gm");
    }
    if sel.rs {
        v.push("rs");
    }
    if sel.vp {
        v.push("vp");
    }
    v
}

fn input_json(resolved: &ResolvedInput) -> Value {
    json!({
        "kind": resolved.kind,
        "name": resolved.circuit.name,
        "source": resolved.display,
    })
}

fn write_dump(path: &Path, doc: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(doc).expect("state dump serializes");
    std::fs::write(path, text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn cmd_run(args: &RunArgs) -> CliResult<()> {
    let sel = selection(&args.passes);
    if sel.vp && args.engine != EngineKind::Pim {
        return Err(CliError::usage("--passes vp requires --engine pim"));
    }
    if args.samples > 0 && args.seed.is_none() {
        return Err(CliError::usage(
            "--samples requires --seed; unseeded sampling is not reproducible",
        ));
    }
    let resolved = input::resolve(&args.input)?;
    let cfg = config::load(&args.cfg)?;
    match args.engine {
        EngineKind::Pim => run_pim_cmd(args, &resolved, sel, &cfg),
        EngineKind::Oracle => run_oracle_cmd(args, &resolved),
    }
}

fn run_pim_cmd(
    args: &RunArgs,
    resolved: &ResolvedInput,
    sel: PassSelection,
    cfg: &DpuConfig,
) -> CliResult<()> {
    let r = run_pim(&resolved.circuit, sel, args.dpus, cfg, args.parallelism)?;
    let n = r.state.n_qubits;
    let (entries, omitted) = report::exact_prob_entries(&r.state)?;
    let samples = match args.seed {
        Some(seed) if args.samples > 0 => {
            Some((seed, sample::sample_exact(&r.state, args.samples, seed)?))
        }
        _ => None,
    };
    if let Some(path) = &args.dump_state {
        write_dump(path, &report::state_dump_json(&r.state)?)?;
    }

    match args.format {
        OutputFormat::Json => {
            let doc = json!({
                "command": "run",
                "input": input_json(resolved),
                "engine": "pim",
                "passes": sel_names(sel),
                "n_qubits": n,
                "num_dpus": r.plan.num_dpus,
                "num_components": r.plan.components.len(),
                "state": {
                    "scale_k": r.state.scale_k,
                    "half_shift": r.state.half_shift,
                },
                "probabilities": report::probabilities_json(
                    &entries, omitted, n, Some(r.state.total_log2_den())),
                "trace": report::trace_json(&r.trace),
                "cost": report::cost_json(&r.cost),
                "samples": samples.as_ref().map(|(seed, values)| json!({
                    "seed": seed,
                    "values": values,
                })),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
        }
        OutputFormat::Csv => {
            print!("{}", report::trace_csv(&r.trace, &r.cost, cfg));
        }
        OutputFormat::Text => {
            println!(
                "{}  engine=pim  passes={}  dpus={}  components={}",
                resolved.circuit.name,
                passes_label(sel),
                r.plan.num_dpus,
                r.plan.components.len()
            );
            println!(
                "state: {} qubits, scale k={}, half-shift s={}",
                n, r.state.scale_k, r.state.half_shift
            );
            for w in &r.trace.warnings {
                println!("warning: {}", report::capacity_issue_text(w));
            }
            println!();
            print!("{}", report::cost_text(&r.cost));
            println!();
            print!("{}", report::probabilities_text(&entries, omitted, n));
            if let Some((seed, values)) = &samples {
                let rendered: Vec<String> =
                    values.iter().map(|v| report::bitstring(*v, n)).collect();
                println!("\nsamples (seed {seed}): {}", rendered.join(" "));
            }
        }
    }
    Ok(())
}

fn run_oracle_cmd(args: &RunArgs, resolved: &ResolvedInput) -> CliResult<()> {
    let fs = oracle::simulate(&resolved.circuit).map_err(|e| match e {
        OracleError::TooLarge { .. } => CliError::capacity(e.to_string()),
        OracleError::Invalid(_) => CliError::usage(e.to_string()),
    })?;
    let n = fs.n_qubits;
    let (entries, omitted) = report::float_prob_entries(&fs.amps, n);
    let samples = match args.seed {
        Some(seed) if args.samples > 0 => {
            Some((seed, sample::sample_float(&fs.amps, args.samples, seed)))
        }
        _ => None,
    };
    if let Some(path) = &args.dump_state {
        write_dump(path, &report::float_dump_json(n, &fs.amps))?;
    }

    match args.format {
        OutputFormat::Json => {
            let doc = json!({
                "command": "run",
                "input": input_json(resolved),
                "engine": "oracle",
                "passes": [],
                "n_qubits": n,
                "num_dpus": null,
                "num_components": null,
                "state": null,
                "probabilities": report::probabilities_json(&entries, omitted, n, None),
                "trace": null,
                "cost": null,
                "samples": samples.as_ref().map(|(seed, values)| json!({
                    "seed": seed,
                    "values": values,
                })),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
        }
        OutputFormat::Csv => {
            print!("{}", report::probabilities_csv(&entries, n));
        }
        OutputFormat::Text => {
            println!("{}  engine=oracle", resolved.circuit.name);
            println!("state: {n} qubits (float amplitudes)");
            println!();
            print!("{}", report::probabilities_text(&entries, omitted, n));
            if let Some((seed, values)) = &samples {
                let rendered: Vec<String> =
                    values.iter().map(|v| report::bitstring(*v, n)).collect();
                println!("\nsamples (seed {seed}): {}", rendered.join(" "));
            }
        }
    }
    Ok(())
}
