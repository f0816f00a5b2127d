//! C ABI over the logsieve pipeline.
//!
//! Handles (`LsFormat`, `LsAnalysis`) are opaque and owned by the caller once
//! returned; release them with the matching `_free` function. Strings
//! returned by the library are released with [`ls_string_free`]. Every
//! fallible call returns an [`LsStatus`]; on failure [`ls_last_error`] gives a
//! message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use logsieve::ingest::{self, FormatSpec};
use logsieve::policy::PolicyParams;
use logsieve::synthgen::{self, Region, SynthOptions};
use logsieve::visualize::PlotSpec;
use logsieve::workload::WorkloadConfig;
use logsieve::{Analysis, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    FormatError = 3,
    ConfigError = 4,
    IoError = 5,
    NoMatch = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Compiled log format template.
pub struct LsFormat(FormatSpec);

/// Result of scoring one log.
pub struct LsAnalysis {
    analysis: Analysis,
    skipped: usize,
}

/// One parsed line. Optional fields are -1 when absent.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LsRecord {
    /// Face-value seconds since 1970-01-01 00:00:00.
    pub timestamp: i64,
    /// IPv4 address, most significant octet first.
    pub ip: u32,
    pub status: i32,
    pub bytes: i64,
}

/// Policy thresholds; see [`ls_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LsParams {
    pub min_ip_b: u32,
    pub min_ip_c: u32,
    pub max_ip_c: u32,
    pub max_robot: u32,
    pub max_daily: u32,
    pub max_daily_range: u32,
    pub max_consec_days: u32,
    pub max_consec_range: u32,
    pub max_daily_ave: u32,
    pub max_daily_ppm: u32,
}

impl From<PolicyParams> for LsParams {
    fn from(p: PolicyParams) -> Self {
        LsParams {
            min_ip_b: p.min_ip_b,
            min_ip_c: p.min_ip_c,
            max_ip_c: p.max_ip_c,
            max_robot: p.max_robot,
            max_daily: p.max_daily,
            max_daily_range: p.max_daily_range,
            max_consec_days: p.max_consec_days,
            max_consec_range: p.max_consec_range,
            max_daily_ave: p.max_daily_ave,
            max_daily_ppm: p.max_daily_ppm,
        }
    }
}

impl From<LsParams> for PolicyParams {
    fn from(p: LsParams) -> Self {
        PolicyParams {
            min_ip_b: p.min_ip_b,
            min_ip_c: p.min_ip_c,
            max_ip_c: p.max_ip_c,
            max_robot: p.max_robot,
            max_daily: p.max_daily,
            max_daily_range: p.max_daily_range,
            max_consec_days: p.max_consec_days,
            max_consec_range: p.max_consec_range,
            max_daily_ave: p.max_daily_ave,
            max_daily_ppm: p.max_daily_ppm,
        }
    }
}

/// One row of the stage table. `name` is a static string.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LsStageRow {
    pub name: *const c_char,
    pub workload: f64,
    pub stage_pct: f64,
    pub cumulative_pct: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: LsStatus, msg: impl Into<String>) -> LsStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> LsStatus {
    let status = match e {
        Error::Format(_) => LsStatus::FormatError,
        Error::Config(_) => LsStatus::ConfigError,
        Error::Io { .. } | Error::Image { .. } => LsStatus::IoError,
        Error::Invalid(_) => LsStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> LsStatus) -> LsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LsStatus::Panic, "internal panic"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, LsStatus> {
    if p.is_null() {
        return Err(fail(LsStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(LsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ls_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Compile a format template such as the combined log format.
///
/// # Safety
/// `template` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ls_format_compile(template: *const c_char, out: *mut *mut LsFormat) -> LsStatus {
    guard(|| {
        if out.is_null() {
            return fail(LsStatus::NullArgument, "out is null");
        }
        let template = tri!(str_arg(template, "template"));
        match FormatSpec::compile(template) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(LsFormat(spec)));
                LsStatus::Ok
            }
            Err(e) => fail(LsStatus::FormatError, e.to_string()),
        }
    })
}

/// The built-in combined log format template, as a static string.
#[no_mangle]
pub extern "C" fn ls_combined_log_format() -> *const c_char {
    static TEXT: &CStr = c"{X.X.X.X} * {AAA} [{DD/MMM/YYYY}:{HH:MM:SS} *] \"{GET} {PAGE} *\" {RETURN} {BYTES} * \"{PLATFORM}\"";
    TEXT.as_ptr()
}

/// # Safety
/// `format` must come from [`ls_format_compile`] or be null.
#[no_mangle]
pub unsafe extern "C" fn ls_format_free(format: *mut LsFormat) {
    if !format.is_null() {
        drop(Box::from_raw(format));
    }
}

/// Parse one line. Returns `LS_STATUS_NO_MATCH` when the line does not fit
/// the template.
///
/// # Safety
/// Pointers must be valid; `line` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ls_parse_line(format: *const LsFormat, line: *const c_char, out: *mut LsRecord) -> LsStatus {
    guard(|| {
        if format.is_null() || out.is_null() {
            return fail(LsStatus::NullArgument, "format or out is null");
        }
        let line = tri!(str_arg(line, "line"));
        let Some(rec) = ingest::parse_line(&(*format).0, line) else {
            return fail(LsStatus::NoMatch, "line does not match the format");
        };
        *out = LsRecord {
            timestamp: rec.timestamp,
            ip: rec.ip_u32(),
            status: rec.status.map_or(-1, i32::from),
            bytes: rec.bytes.map_or(-1, |b| i64::try_from(b).unwrap_or(i64::MAX)),
        };
        LsStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn ls_params_default() -> LsParams {
    PolicyParams::default().into()
}

unsafe fn run(
    format: *const LsFormat,
    params: *const LsParams,
    ds: u32,
    out: *mut *mut LsAnalysis,
    bytes: impl FnOnce() -> Result<Vec<u8>, LsStatus>,
) -> LsStatus {
    if format.is_null() || out.is_null() {
        return fail(LsStatus::NullArgument, "format or out is null");
    }
    if ds == 0 {
        return fail(LsStatus::InvalidArgument, "ds must be at least 1");
    }
    let params: PolicyParams = if params.is_null() {
        PolicyParams::default()
    } else {
        (*params).into()
    };
    let bytes = tri!(bytes());
    let report = ingest::parse_bytes(&(*format).0, &bytes);
    let skipped = report.skipped;
    let analysis = Analysis::run(report.records, &params, &WorkloadConfig { ds });
    *out = Box::into_raw(Box::new(LsAnalysis { analysis, skipped }));
    LsStatus::Ok
}

/// Score an in-memory log. `params` may be null for the defaults.
///
/// # Safety
/// `data` must point to `len` readable bytes; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ls_analyze_buffer(
    format: *const LsFormat,
    data: *const u8,
    len: usize,
    params: *const LsParams,
    ds: u32,
    out: *mut *mut LsAnalysis,
) -> LsStatus {
    guard(|| {
        run(format, params, ds, out, || {
            if data.is_null() && len > 0 {
                return Err(fail(LsStatus::NullArgument, "data is null"));
            }
            if len == 0 {
                return Ok(Vec::new());
            }
            Ok(std::slice::from_raw_parts(data, len).to_vec())
        })
    })
}

/// Score a log file. `params` may be null for the defaults.
///
/// # Safety
/// Pointers must be valid; `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ls_analyze_file(
    format: *const LsFormat,
    path: *const c_char,
    params: *const LsParams,
    ds: u32,
    out: *mut *mut LsAnalysis,
) -> LsStatus {
    guard(|| {
        let path = tri!(str_arg(path, "path"));
        run(format, params, ds, out, || {
            std::fs::read(path).map_err(|e| fail(LsStatus::IoError, format!("{path}: {e}")))
        })
    })
}

/// # Safety
/// `analysis` must come from an `ls_analyze_*` call or be null.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_free(analysis: *mut LsAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// # Safety
/// `analysis` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_record_count(analysis: *const LsAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.analysis.records.len())
}

/// # Safety
/// `analysis` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_skipped_count(analysis: *const LsAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.skipped)
}

/// Number of records the pipeline blocks.
///
/// # Safety
/// `analysis` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_blocked_count(analysis: *const LsAnalysis) -> usize {
    analysis
        .as_ref()
        .map_or(0, |a| a.analysis.stages.iter().filter(|s| s.is_some()).count())
}

/// Blocklist text, one entry per line. Free with [`ls_string_free`].
///
/// # Safety
/// `analysis` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_blocklist(analysis: *const LsAnalysis) -> *mut c_char {
    let Some(a) = analysis.as_ref() else {
        set_error("analysis is null");
        return ptr::null_mut();
    };
    let text = logsieve::blocklist::blocklist_text(&a.analysis.entries);
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Rows in the stage table: the unfiltered baseline plus one per stage.
///
/// # Safety
/// `analysis` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_stage_count(analysis: *const LsAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.analysis.table.rows.len())
}

fn stage_name(name: &str) -> *const c_char {
    let s: &CStr = match name {
        "None" => c"None",
        "Throttling" => c"Throttling",
        "Consecutive" => c"Consecutive",
        "Daily range" => c"Daily range",
        "Daily max" => c"Daily max",
        "Robots" => c"Robots",
        "C Subnet" => c"C Subnet",
        "B Subnet" => c"B Subnet",
        _ => c"?",
    };
    s.as_ptr()
}

/// # Safety
/// `analysis` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_stage(analysis: *const LsAnalysis, index: usize, out: *mut LsStageRow) -> LsStatus {
    guard(|| {
        let (Some(a), false) = (analysis.as_ref(), out.is_null()) else {
            return fail(LsStatus::NullArgument, "analysis or out is null");
        };
        let Some(row) = a.analysis.table.rows.get(index) else {
            return fail(LsStatus::InvalidArgument, format!("stage index {index} out of range"));
        };
        *out = LsStageRow {
            name: stage_name(row.name),
            workload: row.workload,
            stage_pct: row.stage_pct,
            cumulative_pct: row.cumulative_pct,
        };
        LsStatus::Ok
    })
}

/// Write every analysis artifact into `dir`, creating it if needed.
///
/// # Safety
/// Pointers must be valid; `dir` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ls_analysis_write(analysis: *const LsAnalysis, dir: *const c_char) -> LsStatus {
    guard(|| {
        let Some(a) = analysis.as_ref() else {
            return fail(LsStatus::NullArgument, "analysis is null");
        };
        let dir = Path::new(tri!(str_arg(dir, "dir")));
        if let Err(e) = std::fs::create_dir_all(dir) {
            return fail(LsStatus::IoError, format!("{}: {e}", dir.display()));
        }
        match a.analysis.write(dir, &PlotSpec::default()) {
            Ok(()) => LsStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Write a labeled synthetic corpus (`corpus.log`, `labels.csv`) into `dir`.
/// `regions` is a comma-separated list of region letters or `ALL`.
///
/// # Safety
/// Strings must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ls_synth_write(regions: *const c_char, humans: usize, seed: u64, dir: *const c_char) -> LsStatus {
    guard(|| {
        let regions = tri!(str_arg(regions, "regions"));
        let dir = Path::new(tri!(str_arg(dir, "dir")));
        let regions = match Region::parse_list(regions) {
            Ok(r) => r,
            Err(e) => return fail(LsStatus::InvalidArgument, e),
        };
        let corpus = synthgen::generate_with(&SynthOptions {
            regions,
            humans,
            seed,
            format: None,
        });
        let write = || -> std::io::Result<()> {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("corpus.log"), corpus.log_text())?;
            std::fs::write(dir.join("labels.csv"), corpus.labels_csv())
        };
        match write() {
            Ok(()) => LsStatus::Ok,
            Err(e) => fail(LsStatus::IoError, format!("{}: {e}", dir.display())),
        }
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ls_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
