//! DPU config assembly: defaults, then the PIMSIM_DPU_CONFIG environment
//! variable (a JSON object of field overrides), then command-line flags.

use crate::{CfgArgs, CliError, CliResult};
use pimsim_core::pim::DpuConfig;
use serde::Deserialize;

pub const ENV_VAR: &str = "PIMSIM_DPU_CONFIG";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    mram_bytes: Option<u64>,
    wram_bytes: Option<u64>,
    iram_bytes: Option<u64>,
    max_dpus: Option<u32>,
    bytes_per_amplitude: Option<u64>,
    int_op_cost: Option<u64>,
    float_emu_cost: Option<u64>,
    c2d_bytes_per_unit: Option<u64>,
    d2c_bytes_per_unit: Option<u64>,
    recon_op_cost: Option<u64>,
}

fn apply(cfg: &mut DpuConfig, o: &Overrides) {
    if let Some(v) = o.mram_bytes {
        cfg.mram_bytes = v;
    }
    if let Some(v) = o.wram_bytes {
        cfg.wram_bytes = v;
    }
    if let Some(v) = o.iram_bytes {
        cfg.iram_bytes = v;
    }
    if let Some(v) = o.max_dpus {
        cfg.max_dpus = v;
    }
    if let Some(v) = o.bytes_per_amplitude {
        cfg.bytes_per_amplitude = v;
    }
    if let Some(v) = o.int_op_cost {
        cfg.int_op_cost = v;
    }
    if let Some(v) = o.float_emu_cost {
        cfg.float_emu_cost = v;
    }
    if let Some(v) = o.c2d_bytes_per_unit {
        cfg.c2d_bytes_per_unit = v;
    }
    if let Some(v) = o.d2c_bytes_per_unit {
        cfg.d2c_bytes_per_unit = v;
    }
    if let Some(v) = o.recon_op_cost {
        cfg.recon_op_cost = v;
    }
}

fn flag_overrides(args: &CfgArgs) -> Overrides {
    Overrides {
        mram_bytes: args.mram_bytes,
        wram_bytes: args.wram_bytes,
        iram_bytes: args.iram_bytes,
        max_dpus: args.max_dpus,
        bytes_per_amplitude: args.bytes_per_amplitude,
        int_op_cost: args.int_op_cost,
        float_emu_cost: args.float_emu_cost,
        c2d_bytes_per_unit: args.c2d_bytes_per_unit,
        d2c_bytes_per_unit: args.d2c_bytes_per_unit,
        recon_op_cost: args.recon_op_cost,
    }
}

pub fn load(args: &CfgArgs) -> CliResult<DpuConfig> {
    let mut cfg = DpuConfig::default();
    if let Ok(raw) = std::env::var(ENV_VAR) {
        if !raw.trim().is_empty() {
            let o: Overrides = serde_json::from_str(&raw)
                .map_err(|e| CliError::usage(format!("{ENV_VAR}: invalid JSON: {e}")))?;
            apply(&mut cfg, &o);
        }
    }
    apply(&mut cfg, &flag_overrides(args));
    cfg.validate()
        .map_err(|e| CliError::usage(format!("invalid DPU config: {e}")))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_defaults() {
        let args = CfgArgs { mram_bytes: Some(1 << 20), ..CfgArgs::default() };
        let cfg = load(&args).unwrap();
        assert_eq!(cfg.mram_bytes, 1 << 20);
        assert_eq!(cfg.wram_bytes, DpuConfig::default().wram_bytes);
    }

    #[test]
    fn invalid_combinations_are_usage_errors() {
        // float emulation must stay slower than integer ops
        let args = CfgArgs {
            float_emu_cost: Some(1),
            int_op_cost: Some(1),
            ..CfgArgs::default()
        };
        assert_eq!(load(&args).unwrap_err().code, 1);

        let args = CfgArgs { mram_bytes: Some(0), ..CfgArgs::default() };
        assert_eq!(load(&args).unwrap_err().code, 1);
    }

    #[test]
    fn env_json_shape_is_parsed() {
        // avoid touching process env in tests: exercise the JSON layer directly
        let o: Overrides =
            serde_json::from_str(r#"{"wram_bytes": 1024, "float_emu_cost": 64}"#).unwrap();
        let mut cfg = DpuConfig::default();
        apply(&mut cfg, &o);
        assert_eq!(cfg.wram_bytes, 1024);
        assert_eq!(cfg.float_emu_cost, 64);
        assert!(serde_json::from_str::<Overrides>(r#"{"mystery": 1}"#).is_err());
    }
}
