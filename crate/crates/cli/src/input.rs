//! Circuit source resolution: benchmark selectors and `.qasm` files.

use crate::{CliError, CliResult, InputArgs};
use pimsim_core::circuit::bench::{gen_benchmark, BenchParams, Family};
use pimsim_core::circuit::{validate, CircuitIR};
use pimsim_core::qasm::{self, Severity};
use std::path::Path;

#[derive(Debug)]
pub struct ResolvedInput {
    pub circuit: CircuitIR,
    /// "bench" or "file"
    pub kind: &'static str,
    /// The selector string or the file path, for reports.
    pub display: String,
}

pub fn resolve(args: &InputArgs) -> CliResult<ResolvedInput> {
    match (&args.input, &args.bench) {
        (Some(path), None) => {
            let circuit = load_file(path)?;
            check_valid(&circuit)?;
            Ok(ResolvedInput {
                circuit,
                kind: "file",
                display: path.display().to_string(),
            })
        }
        (None, Some(sel)) => {
            let circuit = from_selector(sel, args)?;
            check_valid(&circuit)?;
            Ok(ResolvedInput { circuit, kind: "bench", display: sel.clone() })
        }
        (None, None) => {
            Err(CliError::usage("no input: pass a .qasm file or --bench family:n"))
        }
        // clap's conflicts_with already rejects this; keep a guard anyway.
        (Some(_), Some(_)) => {
            Err(CliError::usage("pass either a .qasm file or --bench, not both"))
        }
    }
}

fn check_valid(circuit: &CircuitIR) -> CliResult<()> {
    let violations = validate(circuit);
    if violations.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    Err(CliError::usage(format!("invalid circuit:\n  {}", lines.join("\n  "))))
}

fn from_selector(sel: &str, args: &InputArgs) -> CliResult<CircuitIR> {
    let mut parts = sel.split(':');
    let family_str = parts.next().unwrap_or("");
    let family = Family::from_str_ci(family_str).ok_or_else(|| {
        CliError::usage(format!(
            "unknown benchmark family {family_str:?} (expected bb, bv, edc, hs, qrng, or xor)"
        ))
    })?;
    let n_str = parts
        .next()
        .ok_or_else(|| CliError::usage(format!("selector {sel:?} is missing the qubit count")))?;
    let n: u32 = n_str
        .parse()
        .map_err(|_| CliError::usage(format!("selector qubit count {n_str:?} is not a number")))?;

    let mut params = BenchParams {
        secret: None,
        final_layer_width: args.final_layer_width,
        bits: None,
        bases: None,
        seed: args.bench_seed,
    };
    if let Some(extra) = parts.next() {
        if family != Family::Bv {
            return Err(CliError::usage(format!(
                "selector parameter {extra:?} is only meaningful for bv (the oracle secret)"
            )));
        }
        params.secret = Some(parse_bits(extra)?);
    }
    if parts.next().is_some() {
        return Err(CliError::usage(format!("selector {sel:?} has too many fields")));
    }
    if let Some(s) = &args.secret {
        if family != Family::Bv {
            return Err(CliError::usage("--secret only applies to bv benchmarks"));
        }
        params.secret = Some(parse_bits(s)?);
    }

    gen_benchmark(family, n, &params).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_bits(s: &str) -> CliResult<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::usage(format!(
                "bit string may only contain 0 and 1, found {other:?}"
            ))),
        })
        .collect()
}

fn load_file(path: &Path) -> CliResult<CircuitIR> {
    if path.extension().and_then(|e| e.to_str()) != Some("qasm") {
        return Err(CliError::usage(format!(
            "{}: input files must use the .qasm extension",
            path.display()
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    match qasm::parse(&text) {
        Ok(parsed) => {
            for w in &parsed.warnings {
                eprintln!(
                    "{}:{}:{}: warning: {}",
                    path.display(),
                    w.span.line,
                    w.span.col,
                    w.message
                );
            }
            Ok(parsed.circuit)
        }
        Err(diags) => {
            let mut msg = String::new();
            for d in &diags {
                let sev = match d.severity {
                    Severity::Error => "error",
                    Severity::Warning => "warning",
                };
                msg.push_str(&format!(
                    "\n{}:{}:{}: {sev}: {}",
                    path.display(),
                    d.span.line,
                    d.span.col,
                    d.message
                ));
            }
            Err(CliError::usage(format!("parse failed:{msg}")))
        }
    }
}
