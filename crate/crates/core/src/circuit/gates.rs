//! Gate matrices in three guises: double-precision unitaries for the
//! oracle, integer forms over a (√2)-power denominator for the exact
//! engine, and √2-extension forms for merge analysis.
//!
//! Multi-qubit matrix layout: `operand_qubits[0]` owns the **most
//! significant** bit of the local matrix index. So CNOT's control is the
//! high bit and the matrix is the familiar block-diag(I, X); a merged pair
//! on (q_low, q_high) is kron(U_low, U_high). Combined with little-endian
//! basis indexing this makes the engine, the oracle, and printed matrices
//! agree without per-call-site reshuffling.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use num_complex::Complex64;

use super::{Angle, GateKind};
use crate::gauss::{GaussInt, Sqrt2Ext, ONE, ZERO};

/// A dense row-major complex matrix of dimension `dim` × `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

/// Integer matrix plus half-shift: the gate equals `entries / (√2)^half_shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntForm {
    pub dim: usize,
    pub entries: Vec<GaussInt>,
    pub half_shift: u32,
}

/// Matrix over the √2-extension ring with its own half-shift; every catalog
/// gate has one (T/Tdg included), which is what lets merge windows slide
/// across T and recover representability at T·T = S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtForm {
    pub dim: usize,
    pub entries: Vec<Sqrt2Ext>,
    pub half_shift: u32,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (cos, sin) of θ/2 for the catalog angles — constants, no libm.
fn half_angle_cos_sin(a: Angle) -> (f64, f64) {
    let r = FRAC_1_SQRT_2;
    match a {
        Angle::PiOver2 => (r, r),
        Angle::NegPiOver2 => (r, -r),
        Angle::ThreePiOver2 => (-r, r),
        Angle::NegThreePiOver2 => (-r, -r),
        Angle::Pi => (0.0, 1.0),
    }
}

/// The standard unitary of a catalog gate (see module docs for the
/// multi-qubit index convention).
pub fn gate_unitary(kind: GateKind) -> Unitary {
    let r = FRAC_1_SQRT_2;
    let (dim, entries) = match kind {
        GateKind::H => (2, vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]),
        GateKind::X => (2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        GateKind::Y => (2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        GateKind::Z => (2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
        GateKind::S => (2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
        GateKind::Sdg => (2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]),
        GateKind::T => (2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, r)]),
        GateKind::Tdg => (2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, -r)]),
        GateKind::RX(a) => {
            let (cos, sin) = half_angle_cos_sin(a);
            (2, vec![c(cos, 0.0), c(0.0, -sin), c(0.0, -sin), c(cos, 0.0)])
        }
        GateKind::RY(a) => {
            let (cos, sin) = half_angle_cos_sin(a);
            (2, vec![c(cos, 0.0), c(-sin, 0.0), c(sin, 0.0), c(cos, 0.0)])
        }
        GateKind::RZ(a) => {
            let (cos, sin) = half_angle_cos_sin(a);
            (2, vec![c(cos, -sin), c(0.0, 0.0), c(0.0, 0.0), c(cos, sin)])
        }
        GateKind::CNOT => (4, permutation_entries(4, &[0, 1, 3, 2])),
        GateKind::SWAP => (4, permutation_entries(4, &[0, 2, 1, 3])),
        GateKind::CZ => {
            let mut e = permutation_entries(4, &[0, 1, 2, 3]);
            e[15] = c(-1.0, 0.0);
            (4, e)
        }
        GateKind::CCX => (8, permutation_entries(8, &[0, 1, 2, 3, 4, 5, 7, 6])),
    };
    Unitary { dim, entries }
}

/// Row-major 0/1 matrix sending basis column j to row `image[j]`.
fn permutation_entries(dim: usize, image: &[usize]) -> Vec<Complex64> {
    let mut e = vec![c(0.0, 0.0); dim * dim];
    for (col, &row) in image.iter().enumerate() {
        e[row * dim + col] = c(1.0, 0.0);
    }
    e
}

/// The exact integer form, when the gate admits a *uniform* half-shift.
///
/// T and Tdg do not: (√2)^d·diag(1, e^{±iπ/4}) puts the (0,0) entry in ℤ[i]
/// only for even d and the (1,1) entry only for odd d, so they return `None`
/// and are handled by merge analysis (or float emulation) instead.
pub fn gate_int_form(kind: GateKind) -> Option<IntForm> {
    let g = |re, im| GaussInt::new(re, im);
    let z = ZERO;
    let (dim, entries, half_shift) = match kind {
        GateKind::H => (2, vec![g(1, 0), g(1, 0), g(1, 0), g(-1, 0)], 1),
        GateKind::X => (2, vec![z, g(1, 0), g(1, 0), z], 0),
        GateKind::Y => (2, vec![z, g(0, -1), g(0, 1), z], 0),
        GateKind::Z => (2, vec![g(1, 0), z, z, g(-1, 0)], 0),
        GateKind::S => (2, vec![g(1, 0), z, z, g(0, 1)], 0),
        GateKind::Sdg => (2, vec![g(1, 0), z, z, g(0, -1)], 0),
        GateKind::T | GateKind::Tdg => return None,
        GateKind::RX(a) => match a {
            Angle::PiOver2 => (2, vec![g(1, 0), g(0, -1), g(0, -1), g(1, 0)], 1),
            Angle::NegPiOver2 => (2, vec![g(1, 0), g(0, 1), g(0, 1), g(1, 0)], 1),
            Angle::ThreePiOver2 => (2, vec![g(-1, 0), g(0, -1), g(0, -1), g(-1, 0)], 1),
            Angle::NegThreePiOver2 => (2, vec![g(-1, 0), g(0, 1), g(0, 1), g(-1, 0)], 1),
            Angle::Pi => (2, vec![z, g(0, -1), g(0, -1), z], 0),
        },
        GateKind::RY(a) => match a {
            Angle::PiOver2 => (2, vec![g(1, 0), g(-1, 0), g(1, 0), g(1, 0)], 1),
            Angle::NegPiOver2 => (2, vec![g(1, 0), g(1, 0), g(-1, 0), g(1, 0)], 1),
            Angle::ThreePiOver2 => (2, vec![g(-1, 0), g(-1, 0), g(1, 0), g(-1, 0)], 1),
            Angle::NegThreePiOver2 => (2, vec![g(-1, 0), g(1, 0), g(-1, 0), g(-1, 0)], 1),
            Angle::Pi => (2, vec![z, g(-1, 0), g(1, 0), z], 0),
        },
        GateKind::RZ(a) => match a {
            Angle::PiOver2 => (2, vec![g(1, -1), z, z, g(1, 1)], 1),
            Angle::NegPiOver2 => (2, vec![g(1, 1), z, z, g(1, -1)], 1),
            Angle::ThreePiOver2 => (2, vec![g(-1, -1), z, z, g(-1, 1)], 1),
            Angle::NegThreePiOver2 => (2, vec![g(-1, 1), z, z, g(-1, -1)], 1),
            Angle::Pi => (2, vec![g(0, -1), z, z, g(0, 1)], 0),
        },
        GateKind::CNOT => (4, int_permutation(4, &[0, 1, 3, 2]), 0),
        GateKind::SWAP => (4, int_permutation(4, &[0, 2, 1, 3]), 0),
        GateKind::CZ => {
            let mut e = int_permutation(4, &[0, 1, 2, 3]);
            e[15] = g(-1, 0);
            (4, e, 0)
        }
        GateKind::CCX => (8, int_permutation(8, &[0, 1, 2, 3, 4, 5, 7, 6]), 0),
    };
    Some(IntForm { dim, entries, half_shift })
}

fn int_permutation(dim: usize, image: &[usize]) -> Vec<GaussInt> {
    let mut e = vec![ZERO; dim * dim];
    for (col, &row) in image.iter().enumerate() {
        e[row * dim + col] = ONE;
    }
    e
}

/// Extension-ring form for single-qubit gates (merge analysis operates on
/// 1Q runs only, so 2Q/3Q gates are not needed here).
pub fn gate_ext_form(kind: GateKind) -> Option<ExtForm> {
    if kind.arity() != 1 {
        return None;
    }
    if let Some(int) = gate_int_form(kind) {
        return Some(ExtForm {
            dim: int.dim,
            entries: int.entries.iter().map(|&e| Sqrt2Ext::from_gauss(e)).collect(),
            half_shift: int.half_shift,
        });
    }
    // T = diag(√2, 1+i)/√2, Tdg = diag(√2, 1−i)/√2.
    let one_pm_i = match kind {
        GateKind::T => GaussInt::new(1, 1),
        GateKind::Tdg => GaussInt::new(1, -1),
        _ => unreachable!("all non-T 1Q gates have an int form"),
    };
    let zero = Sqrt2Ext::default();
    Some(ExtForm {
        dim: 2,
        entries: vec![
            Sqrt2Ext::new(ZERO, ONE),
            zero,
            zero,
            Sqrt2Ext::from_gauss(one_pm_i),
        ],
        half_shift: 1,
    })
}

/// Every catalog member, for exhaustive table tests.
pub fn catalog() -> Vec<GateKind> {
    let mut all = vec![
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::CNOT,
        GateKind::CZ,
        GateKind::SWAP,
        GateKind::CCX,
    ];
    for a in Angle::ALL {
        all.push(GateKind::RX(a));
        all.push(GateKind::RY(a));
        all.push(GateKind::RZ(a));
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_2: f64 = core::f64::consts::SQRT_2;

    fn mat_mul_dag(u: &Unitary) -> Vec<Complex64> {
        let d = u.dim;
        let mut out = vec![c(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = c(0.0, 0.0);
                for k in 0..d {
                    acc += u.entries[i * d + k] * u.entries[j * d + k].conj();
                }
                out[i * d + j] = acc;
            }
        }
        out
    }

    #[test]
    fn unitaries_are_unitary() {
        for kind in catalog() {
            let u = gate_unitary(kind);
            let uu = mat_mul_dag(&u);
            for i in 0..u.dim {
                for j in 0..u.dim {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    let got = uu[i * u.dim + j];
                    assert!(
                        (got.re - expect).abs() <= 1e-12 && got.im.abs() <= 1e-12,
                        "{kind}: U·U† deviates at ({i},{j}): {got}"
                    );
                }
            }
        }
    }

    /// Independent scan: smallest d ≤ 8 with (√2)^d·U elementwise within
    /// 1e-12 of ℤ[i], plus the rounded entries at that d.
    fn scan_int_form(u: &Unitary) -> Option<(u32, Vec<GaussInt>)> {
        for d in 0..=8u32 {
            let scale = SQRT_2.powi(d as i32);
            let mut ints = Vec::with_capacity(u.entries.len());
            let mut ok = true;
            for e in &u.entries {
                let re = (e.re * scale).round();
                let im = (e.im * scale).round();
                if (e.re * scale - re).abs() > 1e-12 || (e.im * scale - im).abs() > 1e-12 {
                    ok = false;
                    break;
                }
                ints.push(GaussInt::new(re as i64, im as i64));
            }
            if ok {
                return Some((d, ints));
            }
        }
        None
    }

    #[test]
    fn int_forms_match_minimal_scan() {
        for kind in catalog() {
            let scanned = scan_int_form(&gate_unitary(kind));
            match gate_int_form(kind) {
                Some(form) => {
                    let (d, ints) = scanned.expect("scan must succeed where a form exists");
                    assert_eq!(form.half_shift, d, "{kind}: half-shift not minimal");
                    assert_eq!(form.entries, ints, "{kind}: entries");
                }
                None => {
                    assert!(
                        matches!(kind, GateKind::T | GateKind::Tdg),
                        "{kind} unexpectedly lacks an int form"
                    );
                    assert_eq!(scanned, None, "{kind}: scan found a uniform d after all");
                }
            }
        }
    }

    #[test]
    fn int_forms_satisfy_scaled_unitarity() {
        // M·M† = 2^d·I in exact integer arithmetic.
        for kind in catalog() {
            let Some(form) = gate_int_form(kind) else { continue };
            let d = form.dim;
            for i in 0..d {
                for j in 0..d {
                    let mut acc = ZERO;
                    for k in 0..d {
                        let prod = form.entries[i * d + k]
                            .checked_mul(form.entries[j * d + k].conj())
                            .unwrap();
                        acc = acc.checked_add(prod).unwrap();
                    }
                    let expect = if i == j {
                        GaussInt::new(1 << form.half_shift, 0)
                    } else {
                        ZERO
                    };
                    assert_eq!(acc, expect, "{kind} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn ext_forms_cover_all_one_qubit_gates() {
        for kind in catalog() {
            let ext = gate_ext_form(kind);
            assert_eq!(ext.is_some(), kind.arity() == 1, "{kind}");
        }
        // T·T must multiply out to (a matrix equal to) 2·S over (√2)².
        let t = gate_ext_form(GateKind::T).unwrap();
        let prod: Vec<_> = {
            // diagonal × diagonal — just multiply entries pointwise here
            t.entries
                .iter()
                .zip(&t.entries)
                .map(|(a, b)| a.checked_mul(*b).unwrap())
                .collect()
        };
        assert_eq!(prod[0], Sqrt2Ext::from_gauss(GaussInt::new(2, 0)));
        assert_eq!(prod[3], Sqrt2Ext::from_gauss(GaussInt::new(0, 2)));
    }

    #[test]
    fn paper_family_entries_read_back() {
        // The √2-denominator family the merge pass exploits.
        let h = gate_int_form(GateKind::H).unwrap();
        assert_eq!(h.entries, vec![ONE, ONE, ONE, GaussInt::new(-1, 0)]);
        assert_eq!(h.half_shift, 1);
        let rx = gate_int_form(GateKind::RX(Angle::PiOver2)).unwrap();
        assert_eq!(
            rx.entries,
            vec![ONE, GaussInt::new(0, -1), GaussInt::new(0, -1), ONE]
        );
        let ry = gate_int_form(GateKind::RY(Angle::PiOver2)).unwrap();
        assert_eq!(
            ry.entries,
            vec![ONE, GaussInt::new(-1, 0), ONE, ONE]
        );
    }
}
