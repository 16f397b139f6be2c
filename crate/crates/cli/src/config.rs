//! Layered settings: built-in defaults < config file < command-line flags.

use std::path::Path;

use serde::Deserialize;

use cdw_core::PotentialParams;

use crate::args::Common;
use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub xi: Option<f64>,
    pub kappa: Option<f64>,
    pub g: Option<String>,
    pub preset: Option<String>,
    pub coeffs: Option<String>,
    pub tmax: Option<f64>,
    pub dt: Option<f64>,
    pub threshold: Option<f64>,
    pub grid: Option<String>,
    pub times: Option<String>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Settings after merging all layers.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub file: FileConfig,
    pub params: PotentialParams<f64>,
    pub out: Option<std::path::PathBuf>,
    pub format: Format,
}

pub fn resolve(common: &Common, default_format: Format) -> CliResult<Resolved> {
    let file = match &common.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let pick = |flag: Option<f64>, from_file: Option<f64>| flag.or(from_file).unwrap_or(1.0);
    let params = PotentialParams::new(
        pick(common.hbar, file.hbar),
        pick(common.mass, file.mass),
        pick(common.xi, file.xi),
        pick(common.kappa, file.kappa),
        0.0,
    )?;
    let out = common
        .out
        .clone()
        .or_else(|| file.out.clone().map(Into::into));
    let format = common.format.or(file.format).unwrap_or(default_format);
    Ok(Resolved {
        file,
        params,
        out,
        format,
    })
}
