//! Double-precision reference simulator. Slow compared to the integer
//! engine but structurally independent of it: gates are applied straight
//! from the complex catalog unitaries, so the two implementations share no
//! arithmetic. Verification compares amplitudes directly — passes preserve
//! amplitudes exactly, so no up-to-global-phase slack is allowed.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::circuit::gates::gate_unitary;
use crate::circuit::{validate, CircuitIR, Violation};
use crate::intstate::{QState, MAX_SIM_QUBITS};

/// Dense complex state; amplitude of basis j at `amps[j]`, qubit 0 least
/// significant.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatState {
    pub n_qubits: u32,
    pub amps: Vec<Complex64>,
}

impl FloatState {
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{n_qubits} qubits exceed the host simulation budget of {max}")]
    TooLarge { n_qubits: u32, max: u32 },
    #[error("circuit fails validation ({} violations)", .0.len())]
    Invalid(Vec<Violation>),
}

/// Simulate a circuit gate-by-gate with strided dense updates.
pub fn simulate(circuit: &CircuitIR) -> Result<FloatState, OracleError> {
    #![allow(clippy::needless_range_loop)] // indices are matrix coordinates
    let violations = validate(circuit);
    if !violations.is_empty() {
        return Err(OracleError::Invalid(violations));
    }
    let n = circuit.n_qubits;
    if n == 0 || n > MAX_SIM_QUBITS {
        return Err(OracleError::TooLarge { n_qubits: n, max: MAX_SIM_QUBITS });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << n];
    amps[0] = Complex64::new(1.0, 0.0);

    for op in &circuit.ops {
        let u = gate_unitary(op.kind);
        let k = op.qubits.len();
        let dim = u.dim;

        // op.qubits[0] owns the most significant local index bit — the
        // same operand convention the integer engine uses
        let mut offs = [0usize; 8];
        for local in 0..dim {
            let mut off = 0usize;
            for (t, &q) in op.qubits.iter().enumerate() {
                if local >> (k - 1 - t) & 1 == 1 {
                    off |= 1usize << q;
                }
            }
            offs[local] = off;
        }
        let qmask: usize = op.qubits.iter().map(|&q| 1usize << q).sum();

        let mut vin = [Complex64::new(0.0, 0.0); 8];
        for base in 0..amps.len() {
            if base & qmask != 0 {
                continue;
            }
            for local in 0..dim {
                vin[local] = amps[base + offs[local]];
            }
            for row in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..dim {
                    acc += u.entries[row * dim + col] * vin[col];
                }
                amps[base + offs[row]] = acc;
            }
        }
    }
    Ok(FloatState { n_qubits: n, amps })
}

/// Convert an exact state to complex doubles: nums / (2^k · (√2)^s).
pub fn qstate_amplitudes(state: &QState) -> Vec<Complex64> {
    let whole = state.scale_k + state.half_shift / 2;
    let mut scale = libm::exp2(-f64::from(whole));
    if state.half_shift % 2 == 1 {
        scale /= libm::sqrt(2.0);
    }
    state
        .nums
        .iter()
        .map(|v| {
            let (re, im) = v.to_f64_pair();
            Complex64::new(re * scale, im * scale)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub max_deviation: f64,
    pub within_tol: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("amplitude vectors differ in length: {a} vs {b}")]
pub struct DimensionMismatch {
    pub a: usize,
    pub b: usize,
}

/// Max elementwise |a_j − b_j| against a tolerance.
pub fn compare(
    a: &[Complex64],
    b: &[Complex64],
    tol: f64,
) -> Result<Comparison, DimensionMismatch> {
    if a.len() != b.len() {
        return Err(DimensionMismatch { a: a.len(), b: b.len() });
    }
    let mut max_deviation = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = libm::sqrt((x - y).norm_sqr());
        if d > max_deviation {
            max_deviation = d;
        }
    }
    Ok(Comparison { max_deviation, within_tol: max_deviation <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::bench::{gen_benchmark, BenchParams, Family};
    use crate::circuit::{CircuitIR, GateKind};
    use crate::intstate::{run_program, RunOptions};
    use crate::passes::{lower, PassSelection};

    const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn hadamard_splits_evenly() {
        let mut c = CircuitIR::new(1);
        c.push(GateKind::H, &[0]);
        let s = simulate(&c).unwrap();
        assert!((s.amps[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amps[1].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(s.amps[0].im.abs() < 1e-15 && s.amps[1].im.abs() < 1e-15);
    }

    #[test]
    fn bell_pair_sits_on_the_diagonal() {
        let mut c = CircuitIR::new(2);
        c.push(GateKind::H, &[0]);
        c.push(GateKind::CNOT, &[0, 1]);
        let s = simulate(&c).unwrap();
        assert!((s.amps[0].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amps[3].re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(s.amps[1].norm_sqr() < 1e-24);
        assert!(s.amps[2].norm_sqr() < 1e-24);
    }

    #[test]
    fn bv_concentrates_on_the_secret() {
        let c = gen_benchmark(Family::Bv, 4, &BenchParams::default()).unwrap();
        let s = simulate(&c).unwrap();
        let on_secret: f64 =
            (0..16).filter(|j| j & 0b111 == 0b111).map(|j| s.amps[j].norm_sqr()).sum();
        assert!((on_secret - 1.0).abs() < 1e-9);
    }

    #[test]
    fn permutation_circuits_stay_exactly_integral() {
        let c = gen_benchmark(Family::Xor, 4, &BenchParams::default()).unwrap();
        let s = simulate(&c).unwrap();
        assert_eq!(s.amps[0], Complex64::new(1.0, 0.0));
        assert!(s.amps[1..].iter().all(|a| *a == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn norm_holds_across_benchmarks() {
        for family in Family::ALL {
            let c = gen_benchmark(family, 8, &BenchParams::default()).unwrap();
            let s = simulate(&c).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-9, "{}", c.name);
        }
    }

    #[test]
    fn engine_and_oracle_agree_on_every_pass_combination() {
        for family in Family::ALL {
            let c = gen_benchmark(family, 6, &BenchParams::default()).unwrap();
            let reference = simulate(&c).unwrap();
            for passes in
                [PassSelection::NONE, PassSelection::GM, PassSelection::RS, PassSelection::GM_RS]
            {
                let p = lower(&c, passes).unwrap();
                let (state, _) = run_program(&p, &RunOptions::default()).unwrap();
                let cmp = compare(&qstate_amplitudes(&state), &reference.amps, 1e-9).unwrap();
                assert!(cmp.within_tol, "{} {:?}: dev {}", c.name, passes, cmp.max_deviation);
            }
        }
    }

    #[test]
    fn comparison_reports_distance_and_dimension_errors() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let b = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let same = compare(&a, &a, 1e-9).unwrap();
        assert_eq!(same.max_deviation, 0.0);
        let diff = compare(&a, &b, 1e-9).unwrap();
        assert!((diff.max_deviation - 1.0).abs() < 1e-15);
        assert!(!diff.within_tol);
        assert!(compare(&a, &b[..1], 1e-9).is_err());
    }
}
