//! Access log ingestion: template compilation, line parsing and rendering.

mod format;

use std::fmt;
use std::fs;
use std::net::Ipv4Addr;
use std::path::Path;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, NaiveTime, Timelike};

use crate::error::{Error, FormatError};

pub use format::{FormatSpec, Segment, SlotKind};

/// The combined log format used by Apache and nginx by default.
pub const COMBINED_LOG_FORMAT: &str =
    "{X.X.X.X} * {AAA} [{DD/MMM/YYYY}:{HH:MM:SS} *] \"{GET} {PAGE} *\" {RETURN} {BYTES} * \"{PLATFORM}\"";

/// How many skipped line numbers a [`ParseReport`] keeps.
pub const MAX_SKIPPED_LINES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Get,
    Post,
    Head,
    Unknown,
}

impl Method {
    fn from_token(text: &str) -> Method {
        match text {
            "GET" => Method::Get,
            "POST" => Method::Post,
            "HEAD" => Method::Head,
            _ => Method::Unknown,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Get => "GET",
            Method::Post => "POST",
            Method::Head => "HEAD",
            Method::Unknown => "UNKNOWN",
        })
    }
}

/// One parsed log line.
///
/// `timestamp` is the face-value wall clock of the log line expressed as
/// seconds since 1970-01-01 00:00:00; any timezone suffix is ignored.
/// Optional fields are `None` exactly when the template has no slot for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessRecord {
    pub timestamp: i64,
    pub ip: Ipv4Addr,
    pub page: Option<String>,
    pub method: Option<Method>,
    pub status: Option<u16>,
    /// `None` also when the log writes `-` for an empty body.
    pub bytes: Option<u64>,
    pub client: Option<String>,
    pub platform: Option<String>,
    /// Values of `{NNN}` slots, in template order.
    pub numbers: Vec<u64>,
}

impl AccessRecord {
    pub fn new(timestamp: i64, ip: Ipv4Addr) -> Self {
        AccessRecord {
            timestamp,
            ip,
            page: None,
            method: None,
            status: None,
            bytes: None,
            client: None,
            platform: None,
            numbers: Vec::new(),
        }
    }

    pub fn ip_u32(&self) -> u32 {
        u32::from(self.ip)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    /// Sorted ascending by timestamp; ties keep input order.
    pub records: Vec<AccessRecord>,
    pub skipped: usize,
    /// 1-based line numbers of the first [`MAX_SKIPPED_LINES`] skipped lines.
    pub skipped_lines: Vec<usize>,
}

impl ParseReport {
    pub fn line_count(&self) -> usize {
        self.records.len() + self.skipped
    }
}

pub fn compile_format(template: &str) -> Result<FormatSpec, FormatError> {
    FormatSpec::compile(template)
}

/// Parse one line. Returns `None` when the line does not fit the template or
/// any captured date, time, address or number is invalid.
pub fn parse_line(spec: &FormatSpec, line: &str) -> Option<AccessRecord> {
    let caps = spec.regex().captures(line)?;

    let mut ip = None;
    let mut date = None;
    let mut time = None;
    let mut rec = AccessRecord::new(0, Ipv4Addr::UNSPECIFIED);

    for (i, kind) in spec.slot_kinds().enumerate() {
        let text = caps.get(i + 1)?.as_str();
        match kind {
            SlotKind::Ip => ip = Some(text.parse::<Ipv4Addr>().ok()?),
            SlotKind::Client => rec.client = Some(text.to_owned()),
            SlotKind::Method => rec.method = Some(Method::from_token(text)),
            SlotKind::Page => rec.page = Some(text.to_owned()),
            SlotKind::Platform => rec.platform = Some(text.to_owned()),
            SlotKind::DateDmy => date = Some(parse_dmy(text)?),
            SlotKind::DateYmd => date = Some(NaiveDate::parse_from_str(text, "%Y-%m-%d").ok()?),
            SlotKind::Time => time = Some(parse_hms(text)?),
            SlotKind::Return => rec.status = Some(text.parse().ok()?),
            SlotKind::Bytes => {
                rec.bytes = if text == "-" {
                    None
                } else {
                    Some(text.parse().ok()?)
                }
            }
            SlotKind::Number => rec.numbers.push(text.parse().ok()?),
        }
    }

    rec.ip = ip?;
    rec.timestamp = date?.and_time(time?).and_utc().timestamp();
    if rec.timestamp <= 0 {
        return None;
    }
    Some(rec)
}

/// Parse a sequence of lines and sort the matches by time.
pub fn parse_log<I, S>(spec: &FormatSpec, lines: I) -> ParseReport
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut report = ParseReport::default();
    for (n, line) in lines.into_iter().enumerate() {
        match parse_line(spec, line.as_ref()) {
            Some(rec) => report.records.push(rec),
            None => {
                report.skipped += 1;
                if report.skipped_lines.len() < MAX_SKIPPED_LINES {
                    report.skipped_lines.push(n + 1);
                }
            }
        }
    }
    report.records.sort_by_key(|r| r.timestamp);
    report
}

/// Split raw bytes into lines, decoding invalid UTF-8 with replacement
/// characters. A trailing newline does not start an extra line, and a
/// `\r` before the newline is dropped.
pub fn split_lines(bytes: &[u8]) -> Vec<String> {
    if bytes.is_empty() {
        return Vec::new();
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    body.split(|b| *b == b'\n')
        .map(|l| String::from_utf8_lossy(l.strip_suffix(b"\r").unwrap_or(l)).into_owned())
        .collect()
}

pub fn parse_bytes(spec: &FormatSpec, bytes: &[u8]) -> ParseReport {
    parse_log(spec, split_lines(bytes))
}

/// Parse several files as one log. Line numbers in `skipped_lines` run on
/// across files in the given order.
pub fn parse_files<P: AsRef<Path>>(spec: &FormatSpec, paths: &[P]) -> Result<ParseReport, Error> {
    let mut lines = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        lines.extend(split_lines(&bytes));
    }
    Ok(parse_log(spec, lines))
}

/// Render a record back into a line of this format. Each `*` is filled
/// from `wildcards` in turn, cycling, or with `-` when the list is empty.
///
/// Returns `None` if the record lacks a value for one of the template's slots.
pub fn render_line(spec: &FormatSpec, rec: &AccessRecord, wildcards: &[&str]) -> Option<String> {
    let dt = DateTime::from_timestamp(rec.timestamp, 0)?.naive_utc();
    let mut out = String::new();
    let mut wild = 0usize;
    let mut numbers = rec.numbers.iter();

    for seg in spec.segments() {
        match seg {
            Segment::Literal(text) => out.push_str(text),
            Segment::Wildcard => {
                out.push_str(if wildcards.is_empty() {
                    "-"
                } else {
                    wildcards[wild % wildcards.len()]
                });
                wild += 1;
            }
            Segment::Slot(kind) => match kind {
                SlotKind::Ip => out.push_str(&rec.ip.to_string()),
                SlotKind::Client => out.push_str(rec.client.as_deref()?),
                SlotKind::Method => out.push_str(&rec.method?.to_string()),
                SlotKind::Page => out.push_str(rec.page.as_deref()?),
                SlotKind::Platform => out.push_str(rec.platform.as_deref()?),
                SlotKind::DateDmy => out.push_str(&format_dmy(&dt)),
                SlotKind::DateYmd => out.push_str(&dt.format("%Y-%m-%d").to_string()),
                SlotKind::Time => out.push_str(&dt.format("%H:%M:%S").to_string()),
                SlotKind::Return => out.push_str(&rec.status?.to_string()),
                SlotKind::Bytes => match rec.bytes {
                    Some(b) => out.push_str(&b.to_string()),
                    None => out.push('-'),
                },
                SlotKind::Number => out.push_str(&numbers.next()?.to_string()),
            },
        }
    }
    Some(out)
}

const MONTHS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

fn parse_dmy(text: &str) -> Option<NaiveDate> {
    let mut parts = text.split('/');
    let day: u32 = parts.next()?.parse().ok()?;
    let mon = parts.next()?;
    let year: i32 = parts.next()?.parse().ok()?;
    let month = MONTHS
        .iter()
        .position(|m| m.eq_ignore_ascii_case(mon))? as u32
        + 1;
    NaiveDate::from_ymd_opt(year, month, day)
}

fn format_dmy(dt: &NaiveDateTime) -> String {
    format!(
        "{:02}/{}/{:04}",
        dt.day(),
        MONTHS[dt.month0() as usize],
        dt.year()
    )
}

fn parse_hms(text: &str) -> Option<NaiveTime> {
    let mut parts = text.split(':').map(|p| p.parse::<u32>().ok());
    let (h, m, s) = (parts.next()??, parts.next()??, parts.next()??);
    // from_hms_opt accepts neither 24:00:00 nor leap seconds
    NaiveTime::from_hms_opt(h, m, s)
}

/// Days since 1970-01-01 of a face-value timestamp.
pub fn day_number(timestamp: i64) -> i64 {
    timestamp.div_euclid(86_400)
}

/// Seconds since midnight of a face-value timestamp.
pub fn second_of_day(timestamp: i64) -> u32 {
    timestamp.rem_euclid(86_400) as u32
}

pub fn date_of_day(day: i64) -> NaiveDate {
    DateTime::from_timestamp(day * 86_400, 0)
        .map(|d| d.date_naive())
        .unwrap_or_default()
}

/// Format a face-value timestamp as `YYYY-MM-DD HH:MM:SS`.
pub fn format_timestamp(timestamp: i64) -> String {
    match DateTime::from_timestamp(timestamp, 0) {
        Some(dt) => {
            let dt = dt.naive_utc();
            format!(
                "{} {:02}:{:02}:{:02}",
                dt.date(),
                dt.hour(),
                dt.minute(),
                dt.second()
            )
        }
        None => timestamp.to_string(),
    }
}
