//! Flat key=value experiment files mirroring the command-line flags, so a
//! sweep can be re-run from a checked-in record. Lines starting with `#` and
//! blank lines are skipped; flags given on the command line win over file
//! values.

use std::path::PathBuf;

use qteleport::channels::NoiseKind;
use qteleport::{Error, Result};

use crate::output::OutputFormat;

/// Which sweep columns to emit. `avg_fidelity` covers both the quadrature
/// and the closed-form column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputSet {
    pub avg_fidelity: bool,
    pub concurrence: bool,
    pub eof: bool,
    pub groverian: bool,
    pub ppt: bool,
}

impl Default for OutputSet {
    fn default() -> Self {
        Self { avg_fidelity: true, concurrence: true, eof: true, groverian: true, ppt: true }
    }
}

impl OutputSet {
    pub fn parse(list: &str) -> Result<Self> {
        let mut set =
            Self { avg_fidelity: false, concurrence: false, eof: false, groverian: false, ppt: false };
        let mut any = false;
        for name in list.split(',') {
            let name = name.trim();
            match name {
                "avg_fidelity" => set.avg_fidelity = true,
                "concurrence" => set.concurrence = true,
                "eof" => set.eof = true,
                "groverian" => set.groverian = true,
                "ppt" => set.ppt = true,
                "" => continue,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown output '{other}' (choose from avg_fidelity, concurrence, eof, groverian, ppt)"
                    )))
                }
            }
            any = true;
        }
        if !any {
            return Err(Error::InvalidArgument("output list is empty".into()));
        }
        Ok(set)
    }
}

/// Quadrature grid given as `NxM` (polar times azimuthal node count).
pub fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::InvalidArgument(format!("grid '{text}' is not of the form NxM")))?;
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("grid '{text}' is not of the form NxM")))
    };
    let (n_theta, n_phi) = (parse(a)?, parse(b)?);
    if n_theta < 8 || n_phi < 8 {
        return Err(Error::InvalidArgument(format!(
            "grid {n_theta}x{n_phi} is too coarse; need at least 8x8"
        )));
    }
    Ok((n_theta, n_phi))
}

/// Values read from a config file; every field optional so the flag layer
/// can fill the gaps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub noise: Option<NoiseKind>,
    pub kt_min: Option<f64>,
    pub kt_max: Option<f64>,
    pub kt_step: Option<f64>,
    pub outputs: Option<OutputSet>,
    pub format: Option<OutputFormat>,
    pub grid: Option<(usize, usize)>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

pub fn parse_config_file(text: &str) -> Result<PartialConfig> {
    let mut cfg = PartialConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("config line {lineno}: expected key=value"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(Error::InvalidArgument(format!(
                "config line {lineno}: duplicate key '{key}'"
            )));
        }
        seen.push(key.to_string());
        let at = |e: Error| -> Error {
            match e {
                Error::InvalidArgument(m) => {
                    Error::InvalidArgument(format!("config line {lineno}: {m}"))
                }
                other => other,
            }
        };
        match key {
            "noise" => cfg.noise = Some(NoiseKind::parse(value).map_err(at)?),
            "kt_min" => cfg.kt_min = Some(parse_real(key, value, lineno)?),
            "kt_max" => cfg.kt_max = Some(parse_real(key, value, lineno)?),
            "kt_step" => cfg.kt_step = Some(parse_real(key, value, lineno)?),
            "outputs" => cfg.outputs = Some(OutputSet::parse(value).map_err(at)?),
            "format" => cfg.format = Some(OutputFormat::parse(value).map_err(at)?),
            "grid" => cfg.grid = Some(parse_grid(value).map_err(at)?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "seed" => {
                cfg.seed = Some(value.parse::<u64>().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "config line {lineno}: seed '{value}' is not an unsigned integer"
                    ))
                })?)
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "config line {lineno}: unknown key '{other}'"
                )))
            }
        }
    }
    Ok(cfg)
}

fn parse_real(key: &str, value: &str, lineno: usize) -> Result<f64> {
    let v = value.parse::<f64>().map_err(|_| {
        Error::InvalidArgument(format!("config line {lineno}: {key} '{value}' is not a number"))
    })?;
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "config line {lineno}: {key} must be finite"
        )));
    }
    Ok(v)
}
