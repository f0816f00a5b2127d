//! Run configuration: flat `key = value` text.
//!
//! Blank lines and lines starting with `#` are ignored. Every key may appear
//! at most once and unknown keys are rejected.
//!
//! ```text
//! log_format = {X.X.X.X} * {AAA} [{DD/MMM/YYYY}:{HH:MM:SS} *] "{GET} {PAGE} *" {RETURN} {BYTES} * "{PLATFORM}"
//! max_daily = 120
//! ds = 60
//! out_dir = out
//! inputs = logs/access.log, logs/access.log.1
//! ```

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{ConfigError, Error, Result};
use crate::ingest::FormatSpec;
use crate::policy::PolicyParams;
use crate::visualize::{PlotSpec, YAxis};
use crate::workload::WorkloadConfig;

const OTHER_KEYS: [&str; 7] = [
    "log_format",
    "ds",
    "out_dir",
    "inputs",
    "plot_width",
    "plot_height",
    "plot_y_axis",
];

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    /// Required by `analyze`; `synth` falls back to the combined format.
    pub log_format: Option<FormatSpec>,
    pub params: PolicyParams,
    pub workload: WorkloadConfig,
    pub out_dir: Option<PathBuf>,
    pub inputs: Vec<PathBuf>,
    pub plot: PlotSpec,
}

fn number<T>(key: &str, value: &str, min: T) -> Result<T, ConfigError>
where
    T: std::str::FromStr + PartialOrd + std::fmt::Display,
{
    let v: T = value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.into(),
        reason: format!("`{value}` is not a valid integer"),
    })?;
    if v < min {
        return Err(ConfigError::InvalidValue {
            key: key.into(),
            reason: format!("must be at least {min}"),
        });
    }
    Ok(v)
}

impl RunConfig {
    /// Parse configuration text. Relative input paths are kept as written.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: line_no })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: line_no }.into());
            }
            if !PolicyParams::KEYS.contains(&key) && !OTHER_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line: line_no,
                    key: key.into(),
                }
                .into());
            }
            if !seen.insert(key.to_owned()) {
                return Err(ConfigError::DuplicateKey {
                    line: line_no,
                    key: key.into(),
                }
                .into());
            }
            if cfg.params.set(key, value)? {
                continue;
            }
            match key {
                "log_format" => cfg.log_format = Some(FormatSpec::compile(value)?),
                "ds" => cfg.workload.ds = number(key, value, 1u32)?,
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                "inputs" => {
                    cfg.inputs = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(PathBuf::from)
                        .collect()
                }
                "plot_width" => cfg.plot.width = number(key, value, 200u32)?,
                "plot_height" => cfg.plot.height = number(key, value, 150u32)?,
                "plot_y_axis" => {
                    cfg.plot.y_axis = match value {
                        "rank" => YAxis::Rank,
                        "raw" => YAxis::Raw,
                        _ => {
                            return Err(ConfigError::InvalidValue {
                                key: key.into(),
                                reason: "expected `rank` or `raw`".into(),
                            }
                            .into())
                        }
                    }
                }
                _ => unreachable!("key list checked above"),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text)
    }

    pub fn require_format(&self) -> Result<&FormatSpec, ConfigError> {
        self.log_format.as_ref().ok_or(ConfigError::MissingKey("log_format"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::COMBINED_LOG_FORMAT;

    #[test]
    fn full_config() {
        let text = format!(
            "# comment\n\nlog_format = {COMBINED_LOG_FORMAT}\nmax_daily = 120\nds=30\n\
             inputs = a.log, b.log\nout_dir = out\nplot_y_axis = raw\nplot_width = 800\n"
        );
        let cfg = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg.require_format().unwrap().template(), COMBINED_LOG_FORMAT);
        assert_eq!(cfg.params.max_daily, 120);
        assert_eq!(cfg.params.max_daily_ppm, 40);
        assert_eq!(cfg.workload.ds, 30);
        assert_eq!(cfg.inputs, [PathBuf::from("a.log"), PathBuf::from("b.log")]);
        assert_eq!(cfg.out_dir, Some(PathBuf::from("out")));
        assert_eq!(cfg.plot.y_axis, YAxis::Raw);
        assert_eq!(cfg.plot.width, 800);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_fatal() {
        let err = RunConfig::parse("max_dialy = 3").unwrap_err();
        assert!(matches!(err, Error::Config(ConfigError::UnknownKey { line: 1, .. })));
        let err = RunConfig::parse("ds = 60\nds = 30").unwrap_err();
        assert!(matches!(err, Error::Config(ConfigError::DuplicateKey { line: 2, .. })));
        let err = RunConfig::parse("just words").unwrap_err();
        assert!(matches!(err, Error::Config(ConfigError::Syntax { line: 1 })));
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(RunConfig::parse("ds = 0").is_err());
        assert!(RunConfig::parse("max_daily = -1").is_err());
        assert!(RunConfig::parse("plot_y_axis = log").is_err());
        assert!(matches!(
            RunConfig::parse("log_format = {HH:MM:SS}").unwrap_err(),
            Error::Format(_)
        ));
    }

    #[test]
    fn missing_format_names_the_key() {
        let cfg = RunConfig::parse("max_daily = 120").unwrap();
        let err = cfg.require_format().unwrap_err();
        assert!(err.to_string().contains("log_format"));
    }
}
