//! `pimsim verify`: cross-check the integer engine (with and without the
//! selected passes) against the float oracle, and optionally against a
//! golden state dump.

use crate::{config, input, passes_label, run, selection, CliError, CliResult, VerifyArgs};
use pimsim_core::gauss::GaussInt;
use pimsim_core::intstate::QState;
use pimsim_core::oracle::{self, OracleError};
use pimsim_core::passes::PassSelection;
use serde_json::Value;
use std::path::Path;

fn load_golden(path: &Path) -> CliResult<QState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))?;
    if doc["format"] != "pimsim-state" {
        return Err(CliError::usage(format!(
            "{}: not a pimsim-state dump",
            path.display()
        )));
    }
    let field_u32 = |name: &str| -> CliResult<u32> {
        doc[name]
            .as_u64()
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| CliError::usage(format!("{}: bad field {name:?}", path.display())))
    };
    let n_qubits = field_u32("n_qubits")?;
    let scale_k = field_u32("scale_k")?;
    let half_shift = field_u32("half_shift")?;
    let raw = doc["nums"]
        .as_array()
        .ok_or_else(|| CliError::usage(format!("{}: bad field \"nums\"", path.display())))?;
    let mut nums = Vec::with_capacity(raw.len());
    for pair in raw {
        let (re, im) = match (pair[0].as_i64(), pair[1].as_i64()) {
            (Some(re), Some(im)) => (re, im),
            _ => {
                return Err(CliError::usage(format!(
                    "{}: amplitude entries must be [re, im] integer pairs",
                    path.display()
                )))
            }
        };
        nums.push(GaussInt::new(re, im));
    }
    if n_qubits == 0 || n_qubits > 32 || nums.len() != 1usize << n_qubits {
        return Err(CliError::usage(format!(
            "{}: expected 2^{n_qubits} amplitudes, found {}",
            path.display(),
            nums.len()
        )));
    }
    Ok(QState { n_qubits, nums, half_shift, scale_k })
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    if !args.tol.is_finite() || args.tol < 0.0 {
        return Err(CliError::usage("--tol must be a finite non-negative number"));
    }
    let sel = selection(&args.passes);
    let resolved = input::resolve(&args.input)?;
    let cfg = config::load(&args.cfg)?;

    let fs = oracle::simulate(&resolved.circuit).map_err(|e| match e {
        OracleError::TooLarge { .. } => CliError::capacity(e.to_string()),
        OracleError::Invalid(_) => CliError::usage(e.to_string()),
    })?;

    let base = run::run_pim(&resolved.circuit, PassSelection::NONE, args.dpus, &cfg, 1)?;
    let with = run::run_pim(&resolved.circuit, sel, args.dpus, &cfg, 1)?;
    let base_amps = oracle::qstate_amplitudes(&base.state);
    let with_amps = oracle::qstate_amplitudes(&with.state);

    let against_oracle = |amps: &[_]| {
        oracle::compare(amps, &fs.amps, args.tol)
            .map_err(|e| CliError::internal(e.to_string()))
    };
    let cmp_base = against_oracle(&base_amps)?;
    let cmp_with = against_oracle(&with_amps)?;
    println!(
        "oracle vs engine (no passes):    max deviation {:.3e}",
        cmp_base.max_deviation
    );
    println!(
        "oracle vs engine ({}):  max deviation {:.3e}",
        passes_label(sel),
        cmp_with.max_deviation
    );
    let mut max_dev = cmp_base.max_deviation.max(cmp_with.max_deviation);

    if let Some(path) = &args.golden {
        let golden = load_golden(path)?;
        if golden.n_qubits != resolved.circuit.n_qubits {
            return Err(CliError::verify(format!(
                "golden state is for {} qubits, circuit has {}",
                golden.n_qubits, resolved.circuit.n_qubits
            )));
        }
        if !golden.norm_check() {
            return Err(CliError::verify(
                "golden state fails exact normalization; the dump is corrupt",
            ));
        }
        let g_amps = oracle::qstate_amplitudes(&golden);
        let cmp_g = oracle::compare(&g_amps, &with_amps, args.tol)
            .map_err(|e| CliError::internal(e.to_string()))?;
        println!(
            "golden vs engine ({}):  max deviation {:.3e}",
            passes_label(sel),
            cmp_g.max_deviation
        );
        max_dev = max_dev.max(cmp_g.max_deviation);
    }

    println!("max deviation {:.3e}, tolerance {:.3e}", max_dev, args.tol);
    if max_dev <= args.tol {
        println!("OK");
        Ok(())
    } else {
        Err(CliError::verify(format!(
            "deviation {max_dev:.3e} exceeds tolerance {:.3e}",
            args.tol
        )))
    }
}
