//! Turning the shared flags into wavepackets, couplings and sinks.

use cdw_core::{Preset, Wavepacket};

use crate::args::{parse_coeffs, parse_g_list, StateArgs};
use crate::config::Resolved;
use crate::error::{CliError, CliResult};

pub type Packets = Vec<(String, Wavepacket<f64>)>;

/// Packets from `--coeffs`, `--preset`, the config file, or `fallback` presets.
pub fn packets(state: &StateArgs, cfg: &Resolved, fallback: &str) -> CliResult<Packets> {
    let coeffs = state.coeffs.clone().or_else(|| {
        // A preset flag on the command line outranks coefficients from the file.
        state
            .preset
            .is_none()
            .then(|| cfg.file.coeffs.clone())
            .flatten()
    });
    if let Some(c) = coeffs {
        let w = Wavepacket::new(parse_coeffs(&c)?)?;
        return Ok(vec![("custom".to_string(), w)]);
    }
    let spec = state
        .preset
        .clone()
        .or_else(|| cfg.file.preset.clone())
        .unwrap_or_else(|| fallback.to_string());
    let presets: Vec<Preset> = if spec.trim().eq_ignore_ascii_case("all") {
        Preset::ALL.to_vec()
    } else {
        spec.split(',')
            .map(str::parse)
            .collect::<cdw_core::Result<_>>()?
    };
    let mut out: Packets = Vec::new();
    for p in presets {
        if !out.iter().any(|(l, _)| l == p.name()) {
            out.push((p.name().to_string(), Wavepacket::from_preset(p)));
        }
    }
    Ok(out)
}

/// Sorted, deduplicated couplings from the flag, the config file, or `fallback`.
pub fn couplings(flag: &Option<String>, cfg: &Resolved, fallback: &str) -> CliResult<Vec<f64>> {
    let spec = flag
        .clone()
        .or_else(|| cfg.file.g.clone())
        .unwrap_or_else(|| fallback.to_string());
    let gs = parse_g_list(&spec)?;
    Ok(cdw_core::sweep::normalize_couplings(&gs)?)
}

pub fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

/// File-name token for a coupling, e.g. `0.1`.
pub fn g_tag(g: f64) -> String {
    format!("{g}")
}
