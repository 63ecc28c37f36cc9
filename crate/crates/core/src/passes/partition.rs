//! Vector partitioning (VP): qubits that never interact through a
//! multi-qubit gate form independent subsystems. Each connected component
//! of the interaction graph becomes its own sub-circuit, small enough to
//! simulate in isolation; the host later rebuilds the full vector as a
//! tensor product.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{CircuitIR, GateOp};
use crate::pim::DpuConfig;

use super::{ensure_valid, PassError};

/// One separable subsystem: its global qubits (ascending) and the source
/// ops restricted to them, with operands renamed to local indices. Local
/// qubit ℓ is global qubit `qubits[ℓ]` — the vector doubles as the
/// reconstruction order map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub qubits: Vec<u32>,
    pub circuit: CircuitIR,
}

impl Component {
    pub fn n_qubits(&self) -> u32 {
        self.qubits.len() as u32
    }

    /// State-vector bytes this component needs on a DPU.
    pub fn state_bytes(&self, cfg: &DpuConfig) -> u64 {
        cfg.bytes_per_amplitude << self.qubits.len()
    }
}

/// A circuit split into separable components, optionally packed onto DPUs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPlan {
    pub n_qubits: u32,
    /// Ordered by smallest global qubit.
    pub components: Vec<Component>,
    /// Per-component DPU id; empty until `pack` runs.
    pub assignment: Vec<u32>,
    /// DPU budget the assignment was packed for; 0 until `pack` runs.
    pub num_dpus: u32,
}

impl PartitionPlan {
    pub fn is_assigned(&self) -> bool {
        self.assignment.len() == self.components.len() && self.num_dpus > 0
    }

    /// Component qubit sets are disjoint and cover [0, n).
    pub fn is_partition(&self) -> bool {
        let mut seen = vec![false; self.n_qubits as usize];
        for c in &self.components {
            for &q in &c.qubits {
                if q >= self.n_qubits || seen[q as usize] {
                    return false;
                }
                seen[q as usize] = true;
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Distinct DPUs actually used by the assignment.
    pub fn dpus_used(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.assignment.clone();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

fn find(parent: &mut [u32], x: u32) -> u32 {
    let mut root = x;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    let mut cur = x;
    while parent[cur as usize] != root {
        let next = parent[cur as usize];
        parent[cur as usize] = root;
        cur = next;
    }
    root
}

/// Split a circuit along the connected components of its qubit-interaction
/// graph (an edge per multi-qubit op operand pair). Assignment is left
/// empty — see `pack`.
pub fn partition(circuit: &CircuitIR) -> Result<PartitionPlan, PassError> {
    ensure_valid(circuit)?;
    let n = circuit.n_qubits;
    let mut parent: Vec<u32> = (0..n).collect();
    for op in &circuit.ops {
        for &q in &op.qubits[1..] {
            let (a, b) = (find(&mut parent, op.qubits[0]), find(&mut parent, q));
            if a != b {
                parent[b as usize] = a;
            }
        }
    }

    // group by root; qubits ascending makes each group ascending and the
    // group list ordered by smallest member
    let mut groups: Vec<(u32, Vec<u32>)> = Vec::new();
    for q in 0..n {
        let root = find(&mut parent, q);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(q),
            None => groups.push((root, vec![q])),
        }
    }

    let mut local_of = vec![0u32; n as usize];
    let mut comp_of = vec![0usize; n as usize];
    for (idx, (_, members)) in groups.iter().enumerate() {
        for (local, &q) in members.iter().enumerate() {
            local_of[q as usize] = local as u32;
            comp_of[q as usize] = idx;
        }
    }

    let mut components: Vec<Component> = groups
        .iter()
        .enumerate()
        .map(|(idx, (_, members))| {
            let mut sub = CircuitIR::new(members.len() as u32);
            sub.name = format!("{}#c{}", circuit.name, idx);
            sub.metadata.insert("source".into(), circuit.name.clone());
            sub.metadata.insert("component".into(), idx.to_string());
            let csv: Vec<_> = members.iter().map(|q| q.to_string()).collect();
            sub.metadata.insert("global_qubits".into(), csv.join(","));
            Component { qubits: members.clone(), circuit: sub }
        })
        .collect();

    for op in &circuit.ops {
        let idx = comp_of[op.qubits[0] as usize];
        debug_assert!(op.qubits.iter().all(|&q| comp_of[q as usize] == idx));
        let local: Vec<u32> = op.qubits.iter().map(|&q| local_of[q as usize]).collect();
        components[idx].circuit.ops.push(GateOp { kind: op.kind, qubits: local });
    }

    Ok(PartitionPlan { n_qubits: n, components, assignment: Vec::new(), num_dpus: 0 })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PackError {
    #[error("component {component} needs {needed} bytes, exceeding the {mram} byte MRAM slice")]
    ComponentTooLarge { component: usize, needed: u64, mram: u64 },
    #[error("{num_dpus} DPUs cannot hold the plan: {needed} bytes spill over at component {component}")]
    InsufficientDpus { num_dpus: u32, component: usize, needed: u64 },
    #[error("num_dpus must be ≥ 1")]
    NoDpus,
    #[error("requested {requested} DPUs but the configuration provides {max}")]
    ExceedsMaxDpus { requested: u32, max: u32 },
}

/// Assign components to DPUs: largest state first onto the least-loaded
/// DPU (lowest id on ties), so equal-size components spread out evenly.
/// Loads are state-vector bytes; a DPU never exceeds its MRAM slice.
pub fn pack(
    plan: &PartitionPlan,
    num_dpus: u32,
    cfg: &DpuConfig,
) -> Result<PartitionPlan, PackError> {
    if num_dpus == 0 {
        return Err(PackError::NoDpus);
    }
    if num_dpus > cfg.max_dpus {
        return Err(PackError::ExceedsMaxDpus { requested: num_dpus, max: cfg.max_dpus });
    }

    let mut order: Vec<usize> = (0..plan.components.len()).collect();
    // stable sort: size descending, original (smallest-qubit) order on ties
    order.sort_by_key(|&i| core::cmp::Reverse(plan.components[i].state_bytes(cfg)));

    let mut load = vec![0u64; num_dpus as usize];
    let mut assignment = vec![0u32; plan.components.len()];
    for &i in &order {
        let bytes = plan.components[i].state_bytes(cfg);
        if bytes > cfg.mram_bytes {
            return Err(PackError::ComponentTooLarge {
                component: i,
                needed: bytes,
                mram: cfg.mram_bytes,
            });
        }
        let dpu = (0..num_dpus).min_by_key(|&d| load[d as usize]).unwrap();
        if load[dpu as usize] + bytes > cfg.mram_bytes {
            return Err(PackError::InsufficientDpus {
                num_dpus,
                component: i,
                needed: load[dpu as usize] + bytes,
            });
        }
        load[dpu as usize] += bytes;
        assignment[i] = dpu;
    }

    Ok(PartitionPlan {
        n_qubits: plan.n_qubits,
        components: plan.components.clone(),
        assignment,
        num_dpus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::bench::{gen_benchmark, BenchParams, Family};
    use crate::circuit::GateKind;

    fn bench(family: Family, n: u32) -> CircuitIR {
        gen_benchmark(family, n, &BenchParams::default()).unwrap()
    }

    #[test]
    fn disjoint_gate_groups_split() {
        let mut c = CircuitIR::new(4);
        c.push(GateKind::H, &[0]);
        c.push(GateKind::CNOT, &[0, 1]);
        c.push(GateKind::H, &[2]);
        c.push(GateKind::CNOT, &[2, 3]);
        let plan = partition(&c).unwrap();
        assert!(plan.is_partition());
        assert_eq!(plan.components.len(), 2);
        assert_eq!(plan.components[0].qubits, [0, 1]);
        assert_eq!(plan.components[1].qubits, [2, 3]);
        assert_eq!(plan.components[0].circuit.ops.len(), 2);
        assert_eq!(plan.components[1].circuit.ops[1].qubits, [0, 1]); // remapped
    }

    #[test]
    fn interleaved_components_keep_global_order_maps() {
        let mut c = CircuitIR::new(4);
        c.push(GateKind::CNOT, &[0, 2]);
        c.push(GateKind::CNOT, &[3, 1]);
        let plan = partition(&c).unwrap();
        assert_eq!(plan.components.len(), 2);
        assert_eq!(plan.components[0].qubits, [0, 2]);
        assert_eq!(plan.components[1].qubits, [1, 3]);
        assert_eq!(plan.components[0].circuit.ops[0].qubits, [0, 1]);
        assert_eq!(plan.components[1].circuit.ops[0].qubits, [1, 0]);
    }

    #[test]
    fn qrng_splits_one_component_per_qubit() {
        let plan = partition(&bench(Family::Qrng, 16)).unwrap();
        assert!(plan.is_partition());
        assert_eq!(plan.components.len(), 16);
        for (i, comp) in plan.components.iter().enumerate() {
            assert_eq!(comp.qubits, [i as u32]);
            assert_eq!(comp.circuit.ops.len(), 1);
        }
    }

    #[test]
    fn connected_circuits_stay_whole() {
        for family in [Family::Bv, Family::Edc, Family::Xor] {
            let c = bench(family, 4);
            let plan = partition(&c).unwrap();
            assert_eq!(plan.components.len(), 1, "{}", c.name);
            let sub = &plan.components[0].circuit;
            assert!(sub.structurally_equal(&c), "{}: identity remap expected", c.name);
        }
    }

    #[test]
    fn hidden_shift_splits_into_wire_pairs() {
        // its CNOTs only ever connect qubit i to qubit i + n/2
        let plan = partition(&bench(Family::Hs, 4)).unwrap();
        assert_eq!(plan.components.len(), 2);
        assert_eq!(plan.components[0].qubits, [0, 2]);
        assert_eq!(plan.components[1].qubits, [1, 3]);
    }

    #[test]
    fn no_op_spans_two_components() {
        for family in Family::ALL {
            let c = bench(family, 8);
            let plan = partition(&c).unwrap();
            assert!(plan.is_partition());
            let mut comp_of = [usize::MAX; 8];
            for (i, comp) in plan.components.iter().enumerate() {
                for &q in &comp.qubits {
                    comp_of[q as usize] = i;
                }
            }
            for op in &c.ops {
                let owner = comp_of[op.qubits[0] as usize];
                assert!(op.qubits.iter().all(|&q| comp_of[q as usize] == owner));
            }
        }
    }

    #[test]
    fn equal_components_spread_evenly() {
        let plan = partition(&bench(Family::Qrng, 16)).unwrap();
        let packed = pack(&plan, 4, &DpuConfig::default()).unwrap();
        assert!(packed.is_assigned());
        assert_eq!(packed.dpus_used(), [0, 1, 2, 3]);
        for d in 0..4 {
            let held = packed.assignment.iter().filter(|&&a| a == d).count();
            assert_eq!(held, 4, "four single-qubit systems per DPU");
        }
    }

    #[test]
    fn oversized_component_is_rejected() {
        let c = bench(Family::Xor, 23); // one connected 23-qubit chain
        let plan = partition(&c).unwrap();
        let err = pack(&plan, 2560, &DpuConfig::default()).unwrap_err();
        assert!(matches!(err, PackError::ComponentTooLarge { needed, .. }
            if needed == 1 << 27));
    }

    #[test]
    fn boundary_component_exactly_fills_mram() {
        let c = bench(Family::Xor, 22); // 2^26 B = the whole MRAM slice
        let plan = partition(&c).unwrap();
        let packed = pack(&plan, 1, &DpuConfig::default()).unwrap();
        assert_eq!(packed.assignment, [0]);
    }

    #[test]
    fn packing_detects_spill() {
        // two 22-qubit systems cannot share one 64 MB slice
        let mut c = CircuitIR::new(44);
        for q in 0..21 {
            c.push(GateKind::CNOT, &[q, q + 1]);
            c.push(GateKind::CNOT, &[22 + q, 23 + q]);
        }
        let plan = partition(&c).unwrap();
        assert_eq!(plan.components.len(), 2);
        assert!(matches!(
            pack(&plan, 1, &DpuConfig::default()),
            Err(PackError::InsufficientDpus { .. })
        ));
        let two = pack(&plan, 2, &DpuConfig::default()).unwrap();
        assert_eq!(two.dpus_used().len(), 2);
    }

    #[test]
    fn dpu_budget_limits() {
        let plan = partition(&bench(Family::Qrng, 4)).unwrap();
        assert!(matches!(pack(&plan, 0, &DpuConfig::default()), Err(PackError::NoDpus)));
        let cfg = DpuConfig::default();
        assert!(matches!(
            pack(&plan, cfg.max_dpus + 1, &cfg),
            Err(PackError::ExceedsMaxDpus { .. })
        ));
    }

    #[test]
    fn split_footprint_never_exceeds_unsplit() {
        let cfg = DpuConfig::default();
        for family in Family::ALL {
            let c = bench(family, 12);
            let plan = partition(&c).unwrap();
            let split: u64 = plan.components.iter().map(|x| x.state_bytes(&cfg)).sum();
            let unsplit = cfg.bytes_per_amplitude << c.n_qubits;
            assert!(split <= unsplit, "{}", c.name);
            if plan.components.len() > 1 {
                assert!(split < unsplit, "{}", c.name);
            } else {
                assert_eq!(split, unsplit, "{}", c.name);
            }
        }
    }
}
