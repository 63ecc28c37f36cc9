//! The exact integer state-vector engine.
//!
//! A state holds Gaussian-integer numerators against a global denominator
//! `2^scale_k · (√2)^half_shift`; every step preserves the integer
//! normalization Σ|num|² = 4^k·2^s exactly. Matrix steps are executed by
//! shift-and-add decomposition of the (constant) matrix entries, so the
//! kernel only ever adds, subtracts, negates, swaps re/im lanes, shifts,
//! and swaps elements — the operation whitelist the ledger enforces.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::gates::gate_int_form;
use crate::circuit::GateKind;
use crate::gauss::{GaussInt, ZERO};
use crate::passes::{IntGateMatrix, LoweredProgram, PermKind, ProgramStep};

/// Hard ceiling on host-side simulation width: 2^(26+4) bytes = 1 GiB of
/// amplitudes.
pub const MAX_SIM_QUBITS: u32 = 26;

/// Bytes per stored amplitude: two 8-byte integer lanes.
pub const AMP_BYTES: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("amplitude magnitude exceeded the 64-bit lane width")]
    Overflow,
    #[error("{0} has no exact realization in the integer engine")]
    UnsupportedGate(GateKind),
    #[error("operand qubit {qubit} out of range for {n_qubits} qubits")]
    OperandOutOfRange { qubit: u32, n_qubits: u32 },
    #[error("{n_qubits} qubits exceed the host simulation budget of {max}")]
    TooLarge { n_qubits: u32, max: u32 },
    #[error("integer normalization invariant violated after a step")]
    NormViolation,
}

/// Ledger of primitive kernel operations. Only whitelisted native ops are
/// counted; `emulated_float_ops` tracks work billed at software-float
/// rates. A bare element copy costs nothing beyond its bytes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KernelLedger {
    pub adds: u64,
    pub subs: u64,
    pub negs: u64,
    /// Multiplications by ±i: one re/im lane exchange (plus a counted
    /// negation where the sign demands it).
    pub reim_swaps: u64,
    pub shifts: u64,
    pub element_swaps: u64,
    pub emulated_float_ops: u64,
    pub bytes_touched: u64,
}

impl KernelLedger {
    /// Total whitelisted integer operations (excludes emulated floats).
    pub fn total_int_ops(&self) -> u64 {
        self.adds + self.subs + self.negs + self.reim_swaps + self.shifts + self.element_swaps
    }

    /// Merge a worker-local ledger into this one by summation.
    pub fn absorb(&mut self, other: &KernelLedger) {
        self.adds += other.adds;
        self.subs += other.subs;
        self.negs += other.negs;
        self.reim_swaps += other.reim_swaps;
        self.shifts += other.shifts;
        self.element_swaps += other.element_swaps;
        self.emulated_float_ops += other.emulated_float_ops;
        self.bytes_touched += other.bytes_touched;
    }
}

/// Dense exact quantum state: `nums[j] / (2^scale_k · (√2)^half_shift)` is
/// the amplitude of basis state j (qubit 0 = least significant index bit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QState {
    pub n_qubits: u32,
    pub nums: Vec<GaussInt>,
    pub half_shift: u32,
    pub scale_k: u32,
}

impl QState {
    /// |0…0⟩ scaled to 2^scale_k.
    pub fn init_state(n_qubits: u32, scale_k: u32) -> Result<Self, EngineError> {
        if n_qubits == 0 || n_qubits > MAX_SIM_QUBITS {
            return Err(EngineError::TooLarge { n_qubits, max: MAX_SIM_QUBITS });
        }
        if scale_k >= 62 {
            return Err(EngineError::Overflow);
        }
        let mut nums = vec![ZERO; 1usize << n_qubits];
        nums[0] = GaussInt::new(1i64 << scale_k, 0);
        Ok(QState { n_qubits, nums, half_shift: 0, scale_k })
    }

    /// Exponent of the full power-of-two denominator: |amp|² denominators
    /// are 2^total_log2_den.
    pub fn total_log2_den(&self) -> u32 {
        2 * self.scale_k + self.half_shift
    }

    /// Exact integer normalization: Σ|num|² == 4^k · 2^s.
    pub fn norm_check(&self) -> bool {
        let mut sum: u128 = 0;
        for v in &self.nums {
            let Some(next) = sum.checked_add(v.norm_sqr()) else { return false };
            sum = next;
        }
        let den = self.total_log2_den();
        den < 128 && sum == 1u128 << den
    }

    /// Exact measurement probabilities as reduced fractions (num, den),
    /// denominators powers of two. None if the denominator exceeds u128.
    pub fn probabilities(&self) -> Option<Vec<(u128, u128)>> {
        let den_log2 = self.total_log2_den();
        if den_log2 >= 128 {
            return None;
        }
        Some(
            self.nums
                .iter()
                .map(|v| {
                    let p = v.norm_sqr();
                    if p == 0 {
                        return (0, 1);
                    }
                    let reduce = p.trailing_zeros().min(den_log2);
                    (p >> reduce, 1u128 << (den_log2 - reduce))
                })
                .collect(),
        )
    }

    /// Factor common powers of two out of the numerators, two half-shifts
    /// at a time. Amplitude-preserving; keeps magnitudes small. Returns
    /// the number of halving passes applied.
    pub fn canonicalize(&mut self, ledger: &mut KernelLedger) -> u32 {
        let mut passes = 0;
        while self.half_shift >= 2 && self.nums.iter().all(|v| v.divisible_by_pow2(1)) {
            for v in &mut self.nums {
                *v = v.half();
            }
            self.half_shift -= 2;
            passes += 1;
            ledger.shifts += self.nums.len() as u64;
            ledger.bytes_touched += 2 * AMP_BYTES * self.nums.len() as u64;
        }
        passes
    }
}

/// Exact amplitude equality between two states that may sit at different
/// scales: cross-multiplies by the power-of-two scale difference. States
/// whose total denominators differ by an odd √2 power can never be equal
/// (a nonzero Gaussian integer times √2 leaves the ring).
pub fn semantically_equal(a: &QState, b: &QState) -> bool {
    if a.n_qubits != b.n_qubits {
        return false;
    }
    let (da, db) = (a.total_log2_den(), b.total_log2_den());
    if (da ^ db) & 1 == 1 {
        return false;
    }
    let (sh_a, sh_b) = if db >= da { ((db - da) / 2, 0) } else { (0, (da - db) / 2) };
    a.nums.iter().zip(&b.nums).all(|(x, y)| {
        i128::from(x.re) << sh_a == i128::from(y.re) << sh_b
            && i128::from(x.im) << sh_a == i128::from(y.im) << sh_b
    })
}

fn check_operands(state: &QState, qubits: &[u32]) -> Result<(), EngineError> {
    for &q in qubits {
        if q >= state.n_qubits {
            return Err(EngineError::OperandOutOfRange { qubit: q, n_qubits: state.n_qubits });
        }
    }
    Ok(())
}

/// Multiply-accumulate `acc (+|-)= entry · v` by shift-and-add over the
/// entry's binary digits, counting each primitive. `acc = None` means the
/// accumulator has not been written yet (a first positive unshifted term
/// is a bare copy and costs nothing).
fn mac_entry(
    acc: &mut Option<GaussInt>,
    entry: GaussInt,
    v: GaussInt,
    ledger: &mut KernelLedger,
) -> Result<(), EngineError> {
    for (coef, is_imag) in [(entry.re, false), (entry.im, true)] {
        if coef == 0 {
            continue;
        }
        let base = if is_imag {
            ledger.reim_swaps += 1;
            v.checked_mul_i().ok_or(EngineError::Overflow)?
        } else {
            v
        };
        let mag = coef.unsigned_abs();
        let mut bit = 0u32;
        while bit < 64 {
            if mag & (1 << bit) != 0 {
                let term = if bit == 0 {
                    base
                } else {
                    ledger.shifts += 1;
                    base.checked_shl(bit).ok_or(EngineError::Overflow)?
                };
                *acc = Some(match (acc.take(), coef >= 0) {
                    (None, true) => term,
                    (None, false) => {
                        ledger.negs += 1;
                        term.checked_neg().ok_or(EngineError::Overflow)?
                    }
                    (Some(a), true) => {
                        ledger.adds += 1;
                        a.checked_add(term).ok_or(EngineError::Overflow)?
                    }
                    (Some(a), false) => {
                        ledger.subs += 1;
                        a.checked_sub(term).ok_or(EngineError::Overflow)?
                    }
                });
            }
            bit += 1;
        }
    }
    Ok(())
}

fn matrix_kernel(
    state: &mut QState,
    m: &IntGateMatrix,
    ledger: &mut KernelLedger,
) -> Result<(), EngineError> {
    #![allow(clippy::needless_range_loop)] // indices are matrix coordinates
    check_operands(state, &m.operand_qubits)?;
    let k = m.operand_qubits.len();
    let dim = m.dim;
    debug_assert_eq!(dim, 1 << k);

    // operand_qubits[0] owns the most significant local bit
    let mut offs = [0usize; 8];
    for local in 0..dim {
        let mut off = 0usize;
        for (t, &q) in m.operand_qubits.iter().enumerate() {
            if local >> (k - 1 - t) & 1 == 1 {
                off |= 1usize << q;
            }
        }
        offs[local] = off;
    }
    let qmask: usize = m.operand_qubits.iter().map(|&q| 1usize << q).sum();

    let size = state.nums.len();
    let mut vin = [ZERO; 8];
    let mut base = 0usize;
    while base < size {
        if base & qmask != 0 {
            base += 1;
            continue;
        }
        for local in 0..dim {
            vin[local] = state.nums[base + offs[local]];
        }
        for row in 0..dim {
            let mut acc: Option<GaussInt> = None;
            for col in 0..dim {
                let e = m.entries[row * dim + col];
                if e.is_zero() || vin[col].is_zero() {
                    continue;
                }
                mac_entry(&mut acc, e, vin[col], ledger)?;
            }
            state.nums[base + offs[row]] = acc.unwrap_or(ZERO);
        }
        ledger.bytes_touched += 2 * AMP_BYTES * dim as u64;
        base += 1;
    }
    state.half_shift += m.half_shift;
    Ok(())
}

/// Apply an integer gate matrix exactly; `s += m.half_shift`.
pub fn apply_int_matrix(
    state: &mut QState,
    m: &IntGateMatrix,
    ledger: &mut KernelLedger,
) -> Result<(), EngineError> {
    matrix_kernel(state, m, ledger)
}

/// Apply an element-swap gate: pure data movement, no arithmetic, `s`
/// unchanged.
pub fn apply_permutation(
    state: &mut QState,
    kind: PermKind,
    qubits: &[u32],
    ledger: &mut KernelLedger,
) -> Result<(), EngineError> {
    check_operands(state, qubits)?;
    debug_assert_eq!(qubits.len(), kind.arity());
    let size = state.nums.len();
    let mut swaps = 0u64;
    match kind {
        PermKind::X => {
            let t = 1usize << qubits[0];
            for j in 0..size {
                if j & t == 0 {
                    state.nums.swap(j, j | t);
                    swaps += 1;
                }
            }
        }
        PermKind::Cnot => {
            let (c, t) = (1usize << qubits[0], 1usize << qubits[1]);
            for j in 0..size {
                if j & c != 0 && j & t == 0 {
                    state.nums.swap(j, j | t);
                    swaps += 1;
                }
            }
        }
        PermKind::Swap => {
            let (a, b) = (1usize << qubits[0], 1usize << qubits[1]);
            for j in 0..size {
                if j & a != 0 && j & b == 0 {
                    state.nums.swap(j, j ^ a ^ b);
                    swaps += 1;
                }
            }
        }
        PermKind::Ccx => {
            let (c1, c2, t) =
                (1usize << qubits[0], 1usize << qubits[1], 1usize << qubits[2]);
            for j in 0..size {
                if j & c1 != 0 && j & c2 != 0 && j & t == 0 {
                    state.nums.swap(j, j | t);
                    swaps += 1;
                }
            }
        }
    }
    ledger.element_swaps += swaps;
    ledger.bytes_touched += 2 * AMP_BYTES * swaps;
    Ok(())
}

/// Apply a gate billed as software-emulated floating point. The result is
/// still mathematically exact (the kernel runs the integer path under the
/// hood), but the ledger charges one emulated float op per amplitude
/// instead of native counters. T/Tdg have no exact realization here and
/// are rejected.
pub fn apply_float_emu(
    state: &mut QState,
    kind: GateKind,
    qubits: &[u32],
    ledger: &mut KernelLedger,
) -> Result<(), EngineError> {
    let form = gate_int_form(kind).ok_or(EngineError::UnsupportedGate(kind))?;
    let m = IntGateMatrix::from_form(form, qubits);
    let mut scratch = KernelLedger::default();
    matrix_kernel(state, &m, &mut scratch)?;
    ledger.emulated_float_ops += state.nums.len() as u64;
    ledger.bytes_touched += 2 * AMP_BYTES * state.nums.len() as u64;
    Ok(())
}

/// Apply one lowered step.
pub fn apply_step(
    state: &mut QState,
    step: &ProgramStep,
    ledger: &mut KernelLedger,
) -> Result<(), EngineError> {
    match step {
        ProgramStep::IntMatrix(m) => apply_int_matrix(state, m, ledger),
        ProgramStep::Perm { kind, qubits } => apply_permutation(state, *kind, qubits, ledger),
        ProgramStep::FloatEmu { kind, qubits } => apply_float_emu(state, *kind, qubits, ledger),
    }
}

/// Execution knobs for a full program run.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Override the program's quantization exponent.
    pub scale_override: Option<u32>,
    /// Factor common 2s out of the numerators at step boundaries.
    pub canonicalize: bool,
    /// Verify the integer normalization after every step (O(2^n) per
    /// step; meant for tests and small n).
    pub check_norm: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { scale_override: None, canonicalize: true, check_norm: false }
    }
}

/// Run a lowered program from |0…0⟩ and return the final state plus the
/// kernel ledger.
pub fn run_program(
    program: &LoweredProgram,
    opts: &RunOptions,
) -> Result<(QState, KernelLedger), EngineError> {
    let k = opts.scale_override.unwrap_or(program.scale_k);
    let mut state = QState::init_state(program.n_qubits, k)?;
    let mut ledger = KernelLedger::default();
    for step in &program.steps {
        apply_step(&mut state, step, &mut ledger)?;
        if opts.canonicalize {
            state.canonicalize(&mut ledger);
        }
        if opts.check_norm && !state.norm_check() {
            return Err(EngineError::NormViolation);
        }
    }
    Ok((state, ledger))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::bench::{gen_benchmark, BenchParams, Family};
    use crate::circuit::{CircuitIR, GateKind};
    use crate::passes::{lower, lower_baseline, PassSelection};

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    fn h_matrix(q: u32) -> IntGateMatrix {
        IntGateMatrix::from_form(gate_int_form(GateKind::H).unwrap(), &[q])
    }

    #[test]
    fn init_examples() {
        let s = QState::init_state(2, 0).unwrap();
        assert_eq!(s.nums, [g(1, 0), g(0, 0), g(0, 0), g(0, 0)]);
        assert!(s.norm_check());

        let s = QState::init_state(4, 2).unwrap();
        assert_eq!(s.nums[0], g(4, 0));
        assert!(s.nums[1..].iter().all(|v| v.is_zero()));
        assert!(s.norm_check());

        let s = QState::init_state(1, 1).unwrap();
        assert_eq!(s.nums, [g(2, 0), g(0, 0)]);
        assert_eq!(s.nums.iter().map(|v| v.norm_sqr()).sum::<u128>(), 4);

        assert!(matches!(
            QState::init_state(MAX_SIM_QUBITS + 1, 0),
            Err(EngineError::TooLarge { .. })
        ));
    }

    #[test]
    fn hadamard_on_zero_counts_one_add_one_sub() {
        let mut s = QState::init_state(1, 0).unwrap();
        let mut l = KernelLedger::default();
        apply_int_matrix(&mut s, &h_matrix(0), &mut l).unwrap();
        assert_eq!(s.nums, [g(1, 0), g(1, 0)]);
        assert_eq!(s.half_shift, 1);
        assert!(s.norm_check());
        // row 0: copy + skip-zero; row 1: copy + skip-zero — the |1⟩ input
        // lane is zero, so nothing is ever added on this state
        assert_eq!(l.total_int_ops(), 0);
        assert_eq!(l.bytes_touched, 64);

        // second H: both lanes populated now
        apply_int_matrix(&mut s, &h_matrix(0), &mut l).unwrap();
        assert_eq!(s.nums, [g(2, 0), g(0, 0)]);
        assert_eq!((l.adds, l.subs, l.shifts, l.reim_swaps), (1, 1, 0, 0));
    }

    #[test]
    fn scaled_identity_shifts_then_canonicalizes() {
        let mut s = QState { n_qubits: 1, nums: vec![g(1, 0), g(1, 0)], half_shift: 1, scale_k: 0 };
        let two_i = IntGateMatrix {
            dim: 2,
            entries: vec![g(2, 0), g(0, 0), g(0, 0), g(2, 0)],
            half_shift: 2,
            operand_qubits: vec![0],
        };
        let mut l = KernelLedger::default();
        apply_int_matrix(&mut s, &two_i, &mut l).unwrap();
        assert_eq!(s.nums, [g(2, 0), g(2, 0)]);
        assert_eq!(s.half_shift, 3);
        assert!(s.norm_check());
        assert_eq!(l.shifts, 2);

        let passes = s.canonicalize(&mut l);
        assert_eq!(passes, 1);
        assert_eq!(s.nums, [g(1, 0), g(1, 0)]);
        assert_eq!(s.half_shift, 1);
        assert!(s.norm_check());
    }

    #[test]
    fn merged_pair_column_readoff() {
        let mut c = CircuitIR::new(2);
        c.push(GateKind::H, &[0]);
        c.push(GateKind::RY(crate::circuit::Angle::PiOver2), &[1]);
        let p = lower(&c, PassSelection::GM).unwrap();
        let mut s = QState::init_state(2, 0).unwrap();
        let mut l = KernelLedger::default();
        for step in &p.steps {
            apply_step(&mut s, step, &mut l).unwrap();
        }
        assert_eq!(s.nums, [g(1, 0); 4]);
        assert_eq!(s.half_shift, 2);
        assert!(s.norm_check());
    }

    #[test]
    fn permutation_examples() {
        let mut l = KernelLedger::default();

        let mut s = QState { n_qubits: 1, nums: vec![g(1, 2), g(3, 4)], half_shift: 0, scale_k: 0 };
        apply_permutation(&mut s, PermKind::X, &[0], &mut l).unwrap();
        assert_eq!(s.nums, [g(3, 4), g(1, 2)]);
        assert_eq!(l.element_swaps, 1);

        let a = |v: i64| g(v, 0);
        let mut s = QState {
            n_qubits: 2,
            nums: vec![a(10), a(11), a(12), a(13)],
            half_shift: 0,
            scale_k: 0,
        };
        apply_permutation(&mut s, PermKind::Cnot, &[0, 1], &mut l).unwrap();
        assert_eq!(s.nums, [a(10), a(13), a(12), a(11)]);

        let mut s = QState {
            n_qubits: 2,
            nums: vec![a(10), a(11), a(12), a(13)],
            half_shift: 0,
            scale_k: 0,
        };
        apply_permutation(&mut s, PermKind::Swap, &[0, 1], &mut l).unwrap();
        assert_eq!(s.nums, [a(10), a(12), a(11), a(13)]);
        assert_eq!(l.adds + l.subs + l.shifts + l.reim_swaps, 0);
    }

    #[test]
    fn toffoli_swaps_the_double_controlled_pair() {
        let mut s = QState::init_state(3, 0).unwrap();
        let mut l = KernelLedger::default();
        s.nums.fill(g(0, 0));
        s.nums[0b011] = g(1, 0); // q0=1, q1=1, q2=0
        apply_permutation(&mut s, PermKind::Ccx, &[0, 1, 2], &mut l).unwrap();
        assert!(s.nums[0b011].is_zero());
        assert_eq!(s.nums[0b111], g(1, 0));
        assert_eq!(l.element_swaps, 1);
    }

    #[test]
    fn float_emu_matches_exact_and_charges_floats() {
        let mut a = QState::init_state(2, 0).unwrap();
        let mut b = a.clone();
        let mut la = KernelLedger::default();
        let mut lb = KernelLedger::default();

        apply_float_emu(&mut a, GateKind::H, &[1], &mut la).unwrap();
        apply_int_matrix(&mut b, &h_matrix(1), &mut lb).unwrap();
        assert_eq!(a, b);
        assert_eq!(la.emulated_float_ops, 4);
        assert_eq!(la.total_int_ops(), 0);
        assert!(lb.emulated_float_ops == 0);

        let mut c = QState { n_qubits: 1, nums: vec![g(5, 0), g(7, 0)], half_shift: 0, scale_k: 0 };
        let mut d = c.clone();
        apply_float_emu(&mut c, GateKind::X, &[0], &mut la).unwrap();
        apply_permutation(&mut d, PermKind::X, &[0], &mut lb).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn t_gate_is_rejected_by_the_integer_engine() {
        let mut s = QState::init_state(1, 0).unwrap();
        let mut l = KernelLedger::default();
        assert_eq!(
            apply_float_emu(&mut s, GateKind::T, &[0], &mut l),
            Err(EngineError::UnsupportedGate(GateKind::T))
        );
    }

    #[test]
    fn int_matrix_application_is_linear() {
        let u = QState { n_qubits: 1, nums: vec![g(3, -1), g(0, 2)], half_shift: 2, scale_k: 0 };
        let v = QState { n_qubits: 1, nums: vec![g(-2, 5), g(4, 1)], half_shift: 2, scale_k: 0 };
        let sum = QState {
            n_qubits: 1,
            nums: vec![u.nums[0].checked_add(v.nums[0]).unwrap(), u.nums[1].checked_add(v.nums[1]).unwrap()],
            half_shift: 2,
            scale_k: 0,
        };
        let m = h_matrix(0);
        let mut l = KernelLedger::default();
        let apply = |mut s: QState, l: &mut KernelLedger| {
            apply_int_matrix(&mut s, &m, l).unwrap();
            s
        };
        let (au, av, asum) = (apply(u, &mut l), apply(v, &mut l), apply(sum, &mut l));
        for j in 0..2 {
            assert_eq!(au.nums[j].checked_add(av.nums[j]).unwrap(), asum.nums[j]);
        }
    }

    #[test]
    fn bv4_probability_concentrates_on_the_secret() {
        let c = gen_benchmark(Family::Bv, 4, &BenchParams::default()).unwrap();
        let p = lower(&c, PassSelection::GM_RS).unwrap();
        let opts = RunOptions { check_norm: true, ..RunOptions::default() };
        let (s, ledger) = run_program(&p, &opts).unwrap();
        assert_eq!(ledger.emulated_float_ops, 0);
        let probs = s.probabilities().unwrap();
        // data bits (q0..q2) = secret 111 regardless of the ancilla bit
        let on_secret: Vec<_> =
            (0..16).filter(|j| j & 0b111 == 0b111).map(|j| probs[j]).collect();
        assert_eq!(on_secret, [(1, 2), (1, 2)]);
        let total: u128 = probs
            .iter()
            .map(|&(num, den)| num * (probs.iter().map(|x| x.1).max().unwrap() / den))
            .sum();
        let max_den = probs.iter().map(|x| x.1).max().unwrap();
        assert_eq!(total, max_den, "probabilities sum to exactly 1");
    }

    #[test]
    fn norm_invariant_holds_stepwise_for_benchmarks() {
        for family in Family::ALL {
            let c = gen_benchmark(family, 6, &BenchParams::default()).unwrap();
            for passes in [PassSelection::NONE, PassSelection::GM, PassSelection::GM_RS] {
                let p = lower(&c, passes).unwrap();
                let opts = RunOptions { check_norm: true, ..RunOptions::default() };
                run_program(&p, &opts).unwrap_or_else(|e| panic!("{}: {e}", c.name));
            }
        }
    }

    #[test]
    fn permutations_preserve_the_numerator_multiset() {
        let c = gen_benchmark(Family::Xor, 5, &BenchParams::default()).unwrap();
        let p = lower(&c, PassSelection::RS).unwrap();
        let mut s = QState::init_state(5, 0).unwrap();
        for (i, v) in s.nums.iter_mut().enumerate() {
            *v = g(i as i64, -(i as i64)); // synthetic distinct values
        }
        s.nums[0] = g(0, 0);
        let before: alloc::collections::BTreeSet<(i64, i64)> =
            s.nums.iter().map(|v| (v.re, v.im)).collect();
        let mut l = KernelLedger::default();
        for step in &p.steps {
            apply_step(&mut s, step, &mut l).unwrap();
        }
        let after: alloc::collections::BTreeSet<(i64, i64)> =
            s.nums.iter().map(|v| (v.re, v.im)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn overflow_is_detected_not_wrapped() {
        let mut s = QState {
            n_qubits: 1,
            nums: vec![g(i64::MAX, 0), g(i64::MAX, 0)],
            half_shift: 0,
            scale_k: 0,
        };
        let mut l = KernelLedger::default();
        assert_eq!(apply_int_matrix(&mut s, &h_matrix(0), &mut l), Err(EngineError::Overflow));
    }

    #[test]
    fn semantic_equality_crosses_scales() {
        let a = QState { n_qubits: 1, nums: vec![g(1, 0), g(0, 0)], half_shift: 0, scale_k: 0 };
        let b = QState { n_qubits: 1, nums: vec![g(4, 0), g(0, 0)], half_shift: 4, scale_k: 0 };
        let c = QState { n_qubits: 1, nums: vec![g(4, 0), g(0, 0)], half_shift: 0, scale_k: 2 };
        let d = QState { n_qubits: 1, nums: vec![g(2, 0), g(0, 0)], half_shift: 1, scale_k: 0 };
        assert!(semantically_equal(&a, &b));
        assert!(semantically_equal(&a, &c));
        assert!(semantically_equal(&b, &c));
        assert!(!semantically_equal(&a, &d), "odd √2 difference");
        let e = QState { n_qubits: 1, nums: vec![g(0, 4), g(0, 0)], half_shift: 4, scale_k: 0 };
        assert!(!semantically_equal(&a, &e), "phase differs");
    }

    #[test]
    fn baseline_and_optimized_runs_agree_semantically() {
        for family in Family::ALL {
            let c = gen_benchmark(family, 6, &BenchParams::default()).unwrap();
            let base = lower_baseline(&c).unwrap();
            let opt = lower(&c, PassSelection::ALL).unwrap();
            let (sb, lb) = run_program(&base, &RunOptions::default()).unwrap();
            let (so, lo) = run_program(&opt, &RunOptions::default()).unwrap();
            assert!(semantically_equal(&sb, &so), "{}", c.name);
            assert!(lb.emulated_float_ops > 0);
            assert_eq!(lo.emulated_float_ops, 0, "{}", c.name);
        }
    }
}
