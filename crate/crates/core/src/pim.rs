//! Simulated multi-DPU execution.
//!
//! A packed `PartitionPlan` turns into share-nothing worker tasks: each
//! task owns its components' programs outright and runs the exact engine
//! in isolation — the API offers workers no reference to any peer, so the
//! no-communication contract holds by construction and the trace's
//! `inter_worker_messages` counter can only ever read zero.
//!
//! Accounting follows a four-phase breakdown — host-to-DPU transfer,
//! on-DPU computation, DPU-to-host transfer, host-side reconstruction —
//! and everything is reported in configurable *model units*, never
//! wall-clock claims.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::CircuitIR;
use crate::gauss::{ONE, ZERO};
use crate::intstate::{
    run_program, EngineError, KernelLedger, QState, RunOptions,
};
use crate::passes::{LoweredProgram, PartitionPlan, ProgramStep};

/// Fixed phase names, in execution order.
pub const PHASE_NAMES: [&str; 4] = ["C-to-D Tran.", "Comp.", "D-to-C Tran.", "Recon."];

/// Hardware shape and cost parameters of one simulated DPU system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpuConfig {
    /// Per-DPU main memory slice.
    pub mram_bytes: u64,
    /// Per-DPU working scratchpad.
    pub wram_bytes: u64,
    /// Per-DPU instruction memory (shape only; no code-size model).
    pub iram_bytes: u64,
    /// DPUs available in the whole system.
    pub max_dpus: u32,
    /// Stored amplitude width.
    pub bytes_per_amplitude: u64,
    /// Model units per whitelisted integer kernel op.
    pub int_op_cost: u64,
    /// Model units per software-emulated float op.
    pub float_emu_cost: u64,
    /// Host→DPU bytes moved per model unit.
    pub c2d_bytes_per_unit: u64,
    /// DPU→host bytes moved per model unit.
    pub d2c_bytes_per_unit: u64,
    /// Model units per host-side reconstruction product.
    pub recon_op_cost: u64,
}

impl Default for DpuConfig {
    fn default() -> Self {
        DpuConfig {
            mram_bytes: 64 << 20,
            wram_bytes: 64 << 10,
            iram_bytes: 24 << 10,
            max_dpus: 2560,
            bytes_per_amplitude: 16,
            int_op_cost: 1,
            float_emu_cost: 32,
            c2d_bytes_per_unit: 16,
            d2c_bytes_per_unit: 8,
            recon_op_cost: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("configuration field {0} must be positive")]
    NonPositive(&'static str),
    #[error("float_emu_cost ({float_emu_cost}) must exceed int_op_cost ({int_op_cost})")]
    FloatNotSlower { float_emu_cost: u64, int_op_cost: u64 },
}

impl DpuConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = [
            (self.mram_bytes, "mram_bytes"),
            (self.wram_bytes, "wram_bytes"),
            (self.iram_bytes, "iram_bytes"),
            (u64::from(self.max_dpus), "max_dpus"),
            (self.bytes_per_amplitude, "bytes_per_amplitude"),
            (self.int_op_cost, "int_op_cost"),
            (self.float_emu_cost, "float_emu_cost"),
            (self.c2d_bytes_per_unit, "c2d_bytes_per_unit"),
            (self.d2c_bytes_per_unit, "d2c_bytes_per_unit"),
            (self.recon_op_cost, "recon_op_cost"),
        ];
        for (value, name) in fields {
            if value == 0 {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if self.float_emu_cost <= self.int_op_cost {
            return Err(ConfigError::FloatNotSlower {
                float_emu_cost: self.float_emu_cost,
                int_op_cost: self.int_op_cost,
            });
        }
        Ok(())
    }

    /// Full state-vector bytes for an n-qubit system.
    pub fn state_bytes(&self, n_qubits: u32) -> u64 {
        self.bytes_per_amplitude << n_qubits
    }
}

/// Serialized size of a lowered program: a 16-byte step header plus the
/// integer matrix entries (16 bytes each) where a step carries them.
pub fn gate_payload_bytes(program: &LoweredProgram, cfg: &DpuConfig) -> u64 {
    program
        .steps
        .iter()
        .map(|s| match s {
            ProgramStep::IntMatrix(m) => 16 + (m.dim * m.dim) as u64 * cfg.bytes_per_amplitude,
            ProgramStep::Perm { .. } | ProgramStep::FloatEmu { .. } => 16,
        })
        .sum()
}

/// Payload estimate for a not-yet-lowered circuit (used by the capacity
/// audit, which runs on plans): every op ships a header plus a dense
/// matrix for its arity.
pub fn circuit_payload_estimate(circuit: &CircuitIR, cfg: &DpuConfig) -> u64 {
    circuit
        .ops
        .iter()
        .map(|op| {
            let dim = 1u64 << op.qubits.len();
            16 + dim * dim * cfg.bytes_per_amplitude
        })
        .sum()
}

/// One capacity audit finding. MRAM overflow is fatal; a working set
/// larger than WRAM only means the kernel must stream tiles, which the
/// cost model charges but execution tolerates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapacityIssue {
    MramOverflow { dpu_id: u32, needed_bytes: u64, mram_bytes: u64 },
    WramTiling { dpu_id: u32, component: usize, state_bytes: u64, wram_bytes: u64 },
}

impl CapacityIssue {
    pub fn is_error(&self) -> bool {
        matches!(self, CapacityIssue::MramOverflow { .. })
    }
}

/// Audit a packed plan against the memory shape: per-DPU state bytes plus
/// gate payload against MRAM (error), per-component working set against
/// WRAM (warning).
pub fn capacity_check(plan: &PartitionPlan, cfg: &DpuConfig) -> Vec<CapacityIssue> {
    let mut issues = Vec::new();
    for &dpu_id in &plan.dpus_used() {
        let mut needed = 0u64;
        for (idx, comp) in plan.components.iter().enumerate() {
            if plan.assignment[idx] != dpu_id {
                continue;
            }
            let state = comp.state_bytes(cfg);
            needed += state + circuit_payload_estimate(&comp.circuit, cfg);
            if state > cfg.wram_bytes {
                issues.push(CapacityIssue::WramTiling {
                    dpu_id,
                    component: idx,
                    state_bytes: state,
                    wram_bytes: cfg.wram_bytes,
                });
            }
        }
        if needed > cfg.mram_bytes {
            issues.push(CapacityIssue::MramOverflow {
                dpu_id,
                needed_bytes: needed,
                mram_bytes: cfg.mram_bytes,
            });
        }
    }
    issues
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExecError {
    #[error("plan has no DPU assignment; pack it first")]
    NotPacked,
    #[error("invalid DPU configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("{0} MRAM capacity violations")]
    Capacity(usize),
    #[error("plan has {components} components but {programs} programs were supplied")]
    ProgramCountMismatch { components: usize, programs: usize },
    #[error("program {component} is for {got} qubits, component has {expected}")]
    ProgramShapeMismatch { component: usize, expected: u32, got: u32 },
    #[error("worker fault: {0}")]
    Worker(#[from] EngineError),
    #[error("component qubit sets do not partition the qubit range")]
    NotAPartition,
    #[error("expected {expected} sub-states, got {got}")]
    StateCountMismatch { expected: usize, got: usize },
    #[error("reconstruction product overflowed the amplitude width")]
    ReconOverflow,
}

/// One unit of DPU work: a component's program, plus its precomputed
/// transfer sizes. Owned outright by a worker task.
#[derive(Clone, Debug)]
pub struct WorkItem {
    pub component: usize,
    pub program: LoweredProgram,
    pub state_bytes: u64,
    pub payload_bytes: u64,
    /// Working set exceeds WRAM: every step streams the state through the
    /// scratchpad and back.
    pub tiled: bool,
}

/// Everything one DPU runs, detached from the plan: tasks share no data,
/// so any scheduling of them (sequential or threaded) yields the same
/// counted trace.
#[derive(Clone, Debug)]
pub struct WorkerTask {
    pub dpu_id: u32,
    pub items: Vec<WorkItem>,
}

/// Per-DPU accounting row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpuRow {
    pub dpu_id: u32,
    /// Host→DPU: initial states plus serialized programs.
    pub c2d_bytes: u64,
    /// On-DPU kernel ledger, summed over this DPU's components.
    pub comp: KernelLedger,
    /// DPU→host: result states.
    pub d2c_bytes: u64,
    /// MRAM↔WRAM streaming traffic for oversized working sets.
    pub tiling_dma_bytes: u64,
    /// State-vector bytes resident on this DPU (memory footprint).
    pub state_bytes: u64,
}

/// A finished worker: its accounting row and the component states it
/// produced.
#[derive(Clone, Debug)]
pub struct WorkerOutput {
    pub row: DpuRow,
    pub states: Vec<(usize, QState)>,
}

/// Split a packed plan into per-DPU tasks. Fails on MRAM overflow; WRAM
/// pressure only marks items as tiled.
pub fn plan_worker_tasks(
    plan: &PartitionPlan,
    programs: &[LoweredProgram],
    cfg: &DpuConfig,
) -> Result<Vec<WorkerTask>, ExecError> {
    cfg.validate()?;
    if !plan.is_assigned() {
        return Err(ExecError::NotPacked);
    }
    if programs.len() != plan.components.len() {
        return Err(ExecError::ProgramCountMismatch {
            components: plan.components.len(),
            programs: programs.len(),
        });
    }
    for (idx, (comp, prog)) in plan.components.iter().zip(programs).enumerate() {
        if prog.n_qubits != comp.n_qubits() {
            return Err(ExecError::ProgramShapeMismatch {
                component: idx,
                expected: comp.n_qubits(),
                got: prog.n_qubits,
            });
        }
    }
    let errors = capacity_check(plan, cfg).iter().filter(|i| i.is_error()).count();
    if errors > 0 {
        return Err(ExecError::Capacity(errors));
    }

    let mut tasks: Vec<WorkerTask> = plan
        .dpus_used()
        .iter()
        .map(|&dpu_id| WorkerTask { dpu_id, items: Vec::new() })
        .collect();
    for (idx, comp) in plan.components.iter().enumerate() {
        let dpu_id = plan.assignment[idx];
        let task = tasks.iter_mut().find(|t| t.dpu_id == dpu_id).unwrap();
        let state_bytes = comp.state_bytes(cfg);
        task.items.push(WorkItem {
            component: idx,
            program: programs[idx].clone(),
            state_bytes,
            payload_bytes: gate_payload_bytes(&programs[idx], cfg),
            tiled: state_bytes > cfg.wram_bytes,
        });
    }
    Ok(tasks)
}

/// Run one DPU's components sequentially and in isolation. Consumes the
/// task — a worker physically cannot read another worker's data.
pub fn run_worker_task(task: WorkerTask) -> Result<WorkerOutput, ExecError> {
    let mut row = DpuRow { dpu_id: task.dpu_id, ..DpuRow::default() };
    let mut states = Vec::with_capacity(task.items.len());
    for item in task.items {
        row.c2d_bytes += item.state_bytes + item.payload_bytes;
        row.state_bytes += item.state_bytes;
        let (state, ledger) = run_program(&item.program, &RunOptions::default())?;
        row.comp.absorb(&ledger);
        if item.tiled {
            row.tiling_dma_bytes += 2 * item.state_bytes * item.program.steps.len() as u64;
        }
        row.d2c_bytes += item.state_bytes;
        states.push((item.component, state));
    }
    Ok(WorkerOutput { row, states })
}

/// Four-phase execution accounting for one plan run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExecutionTrace {
    pub n_qubits: u32,
    pub num_components: usize,
    /// Sorted by dpu_id; no entry for idle DPUs.
    pub per_dpu: Vec<DpuRow>,
    /// Host-side tensor-product multiplications.
    pub recon_ops: u64,
    /// Always zero: the runtime has no inter-worker channel.
    pub inter_worker_messages: u64,
    pub warnings: Vec<CapacityIssue>,
}

impl ExecutionTrace {
    pub fn total_c2d_bytes(&self) -> u64 {
        self.per_dpu.iter().map(|r| r.c2d_bytes).sum()
    }

    pub fn total_d2c_bytes(&self) -> u64 {
        self.per_dpu.iter().map(|r| r.d2c_bytes).sum()
    }

    pub fn total_comp(&self) -> KernelLedger {
        let mut total = KernelLedger::default();
        for row in &self.per_dpu {
            total.absorb(&row.comp);
        }
        total
    }

    pub fn total_tiling_dma_bytes(&self) -> u64 {
        self.per_dpu.iter().map(|r| r.tiling_dma_bytes).sum()
    }
}

/// Reconstruction multiplications: each of the 2^n full-state numerators
/// is a product of one factor per component.
fn recon_op_count(n_qubits: u32, num_components: usize) -> u64 {
    if num_components > 1 {
        (1u64 << n_qubits) * (num_components as u64 - 1)
    } else {
        0
    }
}

/// Execute a packed plan: every component runs on its assigned DPU under
/// the exact engine, and the four-phase trace is assembled. Returns the
/// per-component final states (plan order).
pub fn execute(
    plan: &PartitionPlan,
    programs: &[LoweredProgram],
    cfg: &DpuConfig,
) -> Result<(Vec<QState>, ExecutionTrace), ExecError> {
    let tasks = plan_worker_tasks(plan, programs, cfg)?;
    let mut outputs = Vec::with_capacity(tasks.len());
    for task in tasks {
        outputs.push(run_worker_task(task)?);
    }
    let trace = assemble_trace(plan, cfg, outputs.iter().map(|o| o.row).collect());
    let mut states: Vec<Option<QState>> = vec![None; plan.components.len()];
    for output in outputs {
        for (idx, state) in output.states {
            states[idx] = Some(state);
        }
    }
    let states = states.into_iter().map(|s| s.expect("every component ran")).collect();
    Ok((states, trace))
}

/// Build the trace from collected per-DPU rows (any completion order).
pub fn assemble_trace(
    plan: &PartitionPlan,
    cfg: &DpuConfig,
    mut rows: Vec<DpuRow>,
) -> ExecutionTrace {
    rows.sort_unstable_by_key(|r| r.dpu_id);
    ExecutionTrace {
        n_qubits: plan.n_qubits,
        num_components: plan.components.len(),
        per_dpu: rows,
        recon_ops: recon_op_count(plan.n_qubits, plan.components.len()),
        inter_worker_messages: 0,
        warnings: capacity_check(plan, cfg).into_iter().filter(|i| !i.is_error()).collect(),
    }
}

/// Tensor-product reconstruction: full numerator at index j is the product
/// over components of their numerator at j's bits — in each component's
/// qubit positions; scales and half-shifts add.
pub fn reconstruct(sub_states: &[QState], plan: &PartitionPlan) -> Result<QState, ExecError> {
    if !plan.is_partition() {
        return Err(ExecError::NotAPartition);
    }
    if sub_states.len() != plan.components.len() {
        return Err(ExecError::StateCountMismatch {
            expected: plan.components.len(),
            got: sub_states.len(),
        });
    }
    for (comp, state) in plan.components.iter().zip(sub_states) {
        if state.n_qubits != comp.n_qubits() {
            return Err(ExecError::ProgramShapeMismatch {
                component: plan.components.iter().position(|c| c == comp).unwrap_or(0),
                expected: comp.n_qubits(),
                got: state.n_qubits,
            });
        }
    }

    let mut half_shift = 0u32;
    let mut scale_k = 0u32;
    for s in sub_states {
        half_shift += s.half_shift;
        scale_k += s.scale_k;
    }

    let size = 1usize << plan.n_qubits;
    let mut nums = vec![ZERO; size];
    for (j, out) in nums.iter_mut().enumerate() {
        let mut acc = ONE;
        for (comp, state) in plan.components.iter().zip(sub_states) {
            let mut local = 0usize;
            for (l, &q) in comp.qubits.iter().enumerate() {
                local |= (j >> q & 1) << l;
            }
            acc = acc
                .checked_mul(state.nums[local])
                .ok_or(ExecError::ReconOverflow)?;
        }
        *out = acc;
    }
    Ok(QState { n_qubits: plan.n_qubits, nums, half_shift, scale_k })
}

/// One phase of the cost report: the raw counted quantity and its model
/// units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseCost {
    pub phase: &'static str,
    /// Bytes for the transfer phases, kernel/recon ops for the others.
    pub quantity: u64,
    pub modeled_units: u64,
}

/// Modeled cost of one trace. All figures are model units under the given
/// config — relative comparisons only, never wall-clock estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub phases: [PhaseCost; 4],
    pub total_units: u64,
    /// Per-phase share of total units, in phase order.
    pub fractions: [f64; 4],
    pub per_dpu_comp_units: Vec<(u32, u64)>,
    pub per_dpu_footprint_bytes: Vec<(u32, u64)>,
}

fn comp_units(row_comp: &KernelLedger, tiling_dma_bytes: u64, cfg: &DpuConfig) -> u64 {
    let ops = row_comp.total_int_ops() * cfg.int_op_cost
        + row_comp.emulated_float_ops * cfg.float_emu_cost;
    // tile streaming shares the transfer engine's byte rate
    let dma = if tiling_dma_bytes > 0 {
        tiling_dma_bytes.div_ceil(cfg.c2d_bytes_per_unit)
    } else {
        0
    };
    ops + dma
}

pub fn cost_report(trace: &ExecutionTrace, cfg: &DpuConfig) -> CostReport {
    let c2d = trace.total_c2d_bytes();
    let d2c = trace.total_d2c_bytes();
    let per_dpu_comp_units: Vec<(u32, u64)> = trace
        .per_dpu
        .iter()
        .map(|r| (r.dpu_id, comp_units(&r.comp, r.tiling_dma_bytes, cfg)))
        .collect();
    let comp: u64 = per_dpu_comp_units.iter().map(|(_, u)| u).sum();
    let recon = trace.recon_ops * cfg.recon_op_cost;

    let units = |bytes: u64, rate: u64| if bytes == 0 { 0 } else { bytes.div_ceil(rate) };
    let phases = [
        PhaseCost {
            phase: PHASE_NAMES[0],
            quantity: c2d,
            modeled_units: units(c2d, cfg.c2d_bytes_per_unit),
        },
        PhaseCost { phase: PHASE_NAMES[1], quantity: comp, modeled_units: comp },
        PhaseCost {
            phase: PHASE_NAMES[2],
            quantity: d2c,
            modeled_units: units(d2c, cfg.d2c_bytes_per_unit),
        },
        PhaseCost { phase: PHASE_NAMES[3], quantity: trace.recon_ops, modeled_units: recon },
    ];
    let total_units: u64 = phases.iter().map(|p| p.modeled_units).sum();
    let fractions = if total_units == 0 {
        [0.0; 4]
    } else {
        let t = total_units as f64;
        [
            phases[0].modeled_units as f64 / t,
            phases[1].modeled_units as f64 / t,
            phases[2].modeled_units as f64 / t,
            phases[3].modeled_units as f64 / t,
        ]
    };
    CostReport {
        phases,
        total_units,
        fractions,
        per_dpu_comp_units,
        per_dpu_footprint_bytes: trace.per_dpu.iter().map(|r| (r.dpu_id, r.state_bytes)).collect(),
    }
}
