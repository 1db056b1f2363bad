//! TOML run configuration. Every key is optional; command-line flags take
//! precedence over values read from the file, and unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lat: Option<f64>,
    pub lon: Option<f64>,
    pub scale_mm: Option<f64>,
    pub diameter_mm: Option<f64>,
    pub obliquity: Option<f64>,
    pub almucantar_step: Option<f64>,
    pub azimuth_step: Option<f64>,
    pub hour_lines: Option<bool>,
    pub catalog: Option<PathBuf>,
    pub localities: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub mirror_ew: Option<bool>,
    pub precision: Option<usize>,
    pub layers: Option<Vec<String>>,
    pub mecca_lat: Option<f64>,
    pub mecca_lon: Option<f64>,
    pub montecarlo: Option<MonteCarloFile>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloFile {
    pub trials: Option<usize>,
    pub center_sigma: Option<f64>,
    pub radius_sigma: Option<f64>,
    pub graduation_sigma: Option<f64>,
    pub dec: Option<f64>,
    pub hour_angle: Option<f64>,
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        CliError::Config(format!("config line {line}, column {col}: {}", e.message()))
    })
}

pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}
