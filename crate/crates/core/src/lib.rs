//! Separate mechanical crawler traffic from human visitors in web server
//! access logs.
//!
//! Records are parsed with a user-supplied format template, grouped by
//! address and by enclosing /24, /16 and /8 subnets, and scored against
//! behavioral thresholds at each level. The result is a compact blocklist,
//! per-subnet reports, plots and an estimate of the load each filtering
//! stage removes.
//!
//! ```
//! use logsieve::{ingest, policy::PolicyParams, workload::WorkloadConfig, Analysis};
//!
//! let spec = ingest::compile_format(ingest::COMBINED_LOG_FORMAT).unwrap();
//! let line = r#"203.0.113.9 - - [12/Jan/2025:14:03:22 +0000] "GET /index.html HTTP/1.1" 200 512 "-" "curl/8.0""#;
//! let report = ingest::parse_log(&spec, [line]);
//! let analysis = Analysis::run(report.records, &PolicyParams::default(), &WorkloadConfig::default());
//! assert!(analysis.entries.is_empty());
//! ```

pub mod blocklist;
pub mod cli;
pub mod config;
pub mod error;
pub mod hierarchy;
pub mod ingest;
pub mod policy;
pub mod subnet;
pub mod synthgen;
pub mod timeline;
pub mod visualize;
pub mod workload;

pub use cli::Analysis;
pub use config::RunConfig;
pub use error::{ConfigError, Error, FormatError, Result};
