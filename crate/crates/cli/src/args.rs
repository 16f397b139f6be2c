//! Command-line surface and the parsers for its compact list syntaxes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use cdw_core::wavepacket::GridSpec;

use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cdw",
    version,
    about = "Coupled Razavy double wells: spectrum, dynamics, entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-well data and coupled eigenvalues, mixing angle, frequencies versus g.
    Spectrum(SpectrumArgs),
    /// Γ(t) and C(t) time series plus the scalar report for one state and coupling.
    Dynamics(DynamicsArgs),
    /// τ, τ_min, C(0), C_av and ⟨C⟩ for each preset across a list of couplings.
    Sweep(SweepArgs),
    /// |Ψ(x₁, x₂, t)|² grid dumps.
    Field(FieldArgs),
    /// Oracle comparisons and reference-value regressions.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Key-value (TOML) file with defaults; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; without it results go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Preset name(s): A, B, C, D, comma separated, or `all`.
    #[arg(long)]
    pub preset: Option<String>,
    /// Custom real coefficients a0,a1,a2,a3.
    #[arg(long, conflicts_with = "preset", allow_hyphen_values = true)]
    pub coeffs: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Couplings: `0.1,0.2`, `start:stop:n`, or a mix such as `1e-4,0:0.3:31`.
    #[arg(long)]
    pub g: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub g: Option<String>,
    /// End of the time series and of the orthogonality scan.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Sampling step of the time series.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Γ threshold for the numeric orthogonality search.
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub g: Option<String>,
    /// Orthogonality scan window.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Orthogonality scan step (default: Nyquist rule).
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub g: Option<String>,
    /// Times: numbers and multiples of τ, e.g. `0,tau,3tau,5tau`.
    #[arg(long)]
    pub times: Option<String>,
    /// Grid `n,lo,hi` applied to both axes.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("cannot parse {what} {s:?}")))
}

/// Comma-separated items, each a number or an inclusive `start:stop:n` range.
pub fn parse_g_list(s: &str) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        if !item.contains(':') {
            out.push(parse_f64(item, "g")?);
            continue;
        }
        let parts: Vec<&str> = item.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(CliError::Usage(format!(
                "expected start:stop:n, got {item:?}"
            )));
        };
        let (a, b) = (parse_f64(a, "g start")?, parse_f64(b, "g stop")?);
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse point count {n:?}")))?;
        match n {
            0 => return Err(CliError::Usage("a range needs n >= 1".into())),
            1 => out.push(a),
            _ => out.extend((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64)),
        }
    }
    Ok(out)
}

pub fn parse_coeffs(s: &str) -> CliResult<[f64; 4]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| parse_f64(x, "coefficient"))
        .collect::<CliResult<_>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| CliError::Usage(format!("expected 4 coefficients, got {}", v.len())))
}

pub fn parse_grid(s: &str) -> CliResult<GridSpec> {
    let parts: Vec<&str> = s.split(',').collect();
    let [n, lo, hi] = parts.as_slice() else {
        return Err(CliError::Usage(format!("expected n,lo,hi, got {s:?}")));
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse grid size {n:?}")))?;
    let grid = GridSpec {
        n,
        lo: parse_f64(lo, "grid lo")?,
        hi: parse_f64(hi, "grid hi")?,
    };
    grid.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(grid)
}

/// A requested dump time: absolute, or a multiple of the orthogonality time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    Absolute(f64),
    TauMultiple(f64),
}

pub fn parse_times(s: &str) -> CliResult<Vec<TimeSpec>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok.strip_suffix("tau") {
                Some(prefix) => {
                    let k = prefix.trim_end_matches('*');
                    if k.is_empty() {
                        Ok(TimeSpec::TauMultiple(1.0))
                    } else {
                        parse_f64(k, "tau multiple").map(TimeSpec::TauMultiple)
                    }
                }
                None => parse_f64(tok, "time").map(TimeSpec::Absolute),
            }
        })
        .collect()
}
