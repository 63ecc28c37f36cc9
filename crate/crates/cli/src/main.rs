//! `pimsim` — command-line front end for the integer state-vector engine
//! and its processing-in-memory cost model.
//!
//! Exit codes: 0 success, 1 usage/parse errors, 2 capacity/packing failures,
//! 3 internal simulation errors (overflow, unsupported gates), 4 verification
//! above tolerance.

mod config;
mod input;
mod report;
mod run;
mod sample;
mod transpile;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pimsim_core::passes::PassSelection;
use std::path::PathBuf;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
    pub fn capacity(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
    pub fn internal(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
    pub fn verify(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Oracle,
    Pim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PassName {
    Gm,
    Rs,
    Vp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

pub fn selection(passes: &[PassName]) -> PassSelection {
    let mut sel = PassSelection::NONE;
    for p in passes {
        match p {
            PassName::Gm => sel.gm = true,
            PassName::Rs => sel.rs = true,
            PassName::Vp => sel.vp = true,
        }
    }
    sel
}

pub fn passes_label(sel: PassSelection) -> String {
    let mut names = Vec::new();
    if sel.gm {
        names.push("gm");
    }
    if sel.rs {
        names.push("rs");
    }
    if sel.vp {
        names.push("vp");
    }
    if names.is_empty() {
        "none".into()
    } else {
        names.join(",")
    }
}

/// Circuit source: a `.qasm` file or a generated benchmark.
#[derive(Args, Debug)]
pub struct InputArgs {
    /// OpenQASM 2.0 input file (subset; must end in .qasm)
    pub input: Option<PathBuf>,

    /// Benchmark selector `family:n[:secret]`, e.g. `bv:4:101` or `qrng:16`
    #[arg(long, conflicts_with = "input")]
    pub bench: Option<String>,

    /// BV oracle secret as a 0/1 string (overrides the selector's third field)
    #[arg(long)]
    pub secret: Option<String>,

    /// Width of BV's closing Hadamard layer (default n-1)
    #[arg(long)]
    pub final_layer_width: Option<u32>,

    /// Seed for deriving BB84 payload/basis strings
    #[arg(long)]
    pub bench_seed: Option<u64>,
}

/// DPU model overrides. Defaults follow the modeled hardware; the
/// PIMSIM_DPU_CONFIG environment variable (a JSON object) is applied first,
/// then these flags.
#[derive(Args, Debug, Default)]
pub struct CfgArgs {
    #[arg(long)]
    pub mram_bytes: Option<u64>,
    #[arg(long)]
    pub wram_bytes: Option<u64>,
    #[arg(long)]
    pub iram_bytes: Option<u64>,
    #[arg(long)]
    pub max_dpus: Option<u32>,
    #[arg(long)]
    pub bytes_per_amplitude: Option<u64>,
    #[arg(long)]
    pub int_op_cost: Option<u64>,
    #[arg(long)]
    pub float_emu_cost: Option<u64>,
    #[arg(long)]
    pub c2d_bytes_per_unit: Option<u64>,
    #[arg(long)]
    pub d2c_bytes_per_unit: Option<u64>,
    #[arg(long)]
    pub recon_op_cost: Option<u64>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Simulation engine
    #[arg(long, value_enum, default_value_t = EngineKind::Pim)]
    pub engine: EngineKind,

    /// Lowering passes, comma separated (gm,rs,vp); vp requires --engine pim
    #[arg(long, value_enum, value_delimiter = ',')]
    pub passes: Vec<PassName>,

    /// DPU budget for packing (pim engine)
    #[arg(long, default_value_t = 1)]
    pub dpus: u32,

    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Number of measurement samples to draw (requires --seed)
    #[arg(long, default_value_t = 0)]
    pub samples: u64,

    /// RNG seed for sampling; runs are deterministic given flags plus seed
    #[arg(long)]
    pub seed: Option<u64>,

    /// Worker threads for per-DPU execution (trace is identical at any value)
    #[arg(long, default_value_t = 1)]
    pub parallelism: u32,

    /// Write the final state to this JSON file
    #[arg(long)]
    pub dump_state: Option<PathBuf>,

    #[command(flatten)]
    pub cfg: CfgArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Passes whose output to verify against the float oracle
    #[arg(long, value_enum, value_delimiter = ',')]
    pub passes: Vec<PassName>,

    /// Maximum allowed elementwise amplitude deviation
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Golden state dump (from run --dump-state) to compare against
    #[arg(long)]
    pub golden: Option<PathBuf>,

    /// DPU budget when verifying a vp lowering
    #[arg(long, default_value_t = 1)]
    pub dpus: u32,

    #[command(flatten)]
    pub cfg: CfgArgs,
}

#[derive(Args, Debug)]
pub struct TranspileArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Passes to apply before dumping
    #[arg(long, value_enum, value_delimiter = ',')]
    pub passes: Vec<PassName>,

    /// DPU budget for the partition plan's assignment (vp only)
    #[arg(long, default_value_t = 1)]
    pub dpus: u32,

    #[command(flatten)]
    pub cfg: CfgArgs,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Simulate a circuit and report probabilities, trace, and modeled cost
    Run(RunArgs),
    /// Cross-check the integer engine against the float oracle
    Verify(VerifyArgs),
    /// Dump the lowered program and partition plan as JSON
    Transpile(TranspileArgs),
}

#[derive(Parser, Debug)]
#[command(
    name = "pimsim",
    version,
    about = "Exact integer state-vector simulator with a processing-in-memory cost model"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn main() {
    // Die quietly when a downstream pipe closes (`pimsim ... | head`), like
    // any Unix filter; Rust's default ignores SIGPIPE and println! panics.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap reports usage errors with status 2, which this tool
            // reserves for capacity failures; remap them to 1.
            let is_error = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_error { 1 } else { 0 });
        }
    };
    let result = match cli.cmd {
        Cmd::Run(args) => run::cmd_run(&args),
        Cmd::Verify(args) => verify::cmd_verify(&args),
        Cmd::Transpile(args) => transpile::cmd_transpile(&args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
