//! State quantization: pick the starting amplitude 2^k that keeps every
//! intermediate numerator a Gaussian integer once the accumulated √2
//! denominator is folded in at even exponents.
//!
//! The analysis literally runs the exact engine at k = 0, 1, 2, … with
//! canonicalization off and checks divisibility by 2^⌊s/2⌋ after every
//! step (s = accumulated half-shift). By linearity the numerators at scale
//! k are 2^k times the scale-0 ones, so k = ⌈s_total/2⌉ always succeeds
//! and the scan terminates.

use crate::circuit::CircuitIR;
use crate::intstate::{apply_step, EngineError, KernelLedger, QState};

use super::{lower_permutations, merge_gates, LoweredProgram, PassError};

/// Widest circuit the build-time quantization analysis will simulate.
/// Above this the pipeline skips the analysis (the engine is exact at
/// k = 0 regardless, so skipping costs nothing but the shift trick).
pub const DEFAULT_QUANTIZE_CAP: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QuantizeError {
    #[error("{n_qubits} qubits exceed the quantization analysis cap of {cap}")]
    TooLarge { n_qubits: u32, cap: u32 },
    #[error("lowering failed: {0}")]
    Lowering(#[from] PassError),
    #[error("analysis run failed: {0}")]
    Engine(#[from] EngineError),
}

/// Quantization exponent of a circuit's GM+RS lowering.
pub fn quantize(circuit: &CircuitIR) -> Result<u32, QuantizeError> {
    let program = lower_permutations(merge_gates(circuit)?);
    quantize_program(&program)
}

/// Minimal k such that a run starting from 2^k·|0…0⟩ keeps
/// `nums[j] / 2^⌊s/2⌋` integral after every step.
pub fn quantize_program(program: &LoweredProgram) -> Result<u32, QuantizeError> {
    if program.n_qubits > DEFAULT_QUANTIZE_CAP {
        return Err(QuantizeError::TooLarge {
            n_qubits: program.n_qubits,
            cap: DEFAULT_QUANTIZE_CAP,
        });
    }
    let k_max = program.total_half_shift().div_ceil(2);
    for k in 0..=k_max {
        if scale_stays_integral(program, k)? {
            return Ok(k);
        }
    }
    unreachable!("k_max = ⌈s_total/2⌉ always satisfies the divisibility condition")
}

/// One analysis run at a fixed scale; canonicalization stays off so the
/// raw accumulation is what gets checked.
fn scale_stays_integral(program: &LoweredProgram, k: u32) -> Result<bool, QuantizeError> {
    let mut state = QState::init_state(program.n_qubits, k)?;
    let mut ledger = KernelLedger::default();
    for step in &program.steps {
        apply_step(&mut state, step, &mut ledger)?;
        let need = state.half_shift / 2;
        if !state.nums.iter().all(|v| v.divisible_by_pow2(need)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::bench::{gen_benchmark, BenchParams, Family};
    use crate::circuit::{CircuitIR, GateKind};

    fn bench(family: Family, n: u32) -> CircuitIR {
        gen_benchmark(family, n, &BenchParams::default()).unwrap()
    }

    #[test]
    fn bv4_needs_times_four() {
        assert_eq!(quantize(&bench(Family::Bv, 4)).unwrap(), 2);
        // same with the closing Hadamard layer widened to all four qubits
        let params = BenchParams { final_layer_width: Some(4), ..BenchParams::default() };
        let wide = gen_benchmark(Family::Bv, 4, &params).unwrap();
        assert_eq!(quantize(&wide).unwrap(), 2);
    }

    #[test]
    fn bv4_at_k1_hits_a_non_integral_intermediate() {
        let program = lower_permutations(merge_gates(&bench(Family::Bv, 4)).unwrap());
        assert!(!scale_stays_integral(&program, 1).unwrap());
        assert!(scale_stays_integral(&program, 2).unwrap());
    }

    #[test]
    fn permutation_only_circuits_need_no_scaling() {
        assert_eq!(quantize(&bench(Family::Xor, 4)).unwrap(), 0);
        assert_eq!(quantize(&bench(Family::Xor, 9)).unwrap(), 0);
    }

    #[test]
    fn qrng_scales_with_the_unpaired_layers() {
        // two H fuse into one 4×4 with s=2 → halve once; four H → s=4.
        assert_eq!(quantize(&bench(Family::Qrng, 2)).unwrap(), 1);
        assert_eq!(quantize(&bench(Family::Qrng, 4)).unwrap(), 2);
    }

    #[test]
    fn analysis_cap_is_enforced() {
        let c = bench(Family::Qrng, DEFAULT_QUANTIZE_CAP + 1);
        assert!(matches!(quantize(&c), Err(QuantizeError::TooLarge { .. })));
    }

    #[test]
    fn unfusable_t_gate_fails_the_analysis() {
        let mut c = CircuitIR::new(1);
        c.push(GateKind::T, &[0]);
        assert!(matches!(quantize(&c), Err(QuantizeError::Engine(_))));
    }

    #[test]
    fn returned_scale_is_minimal_for_every_family() {
        for family in Family::ALL {
            let c = bench(family, 4);
            let program = lower_permutations(merge_gates(&c).unwrap());
            let k = quantize_program(&program).unwrap();
            assert!(scale_stays_integral(&program, k).unwrap(), "{}", c.name);
            if k > 0 {
                assert!(!scale_stays_integral(&program, k - 1).unwrap(), "{}", c.name);
            }
        }
    }
}
