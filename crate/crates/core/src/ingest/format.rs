//! Log format templates built from capture-group tokens.
//!
//! A template is a line pattern made of three kinds of pieces:
//!
//! * capture groups in braces, e.g. `{X.X.X.X}` or `{DD/MMM/YYYY}`;
//! * `*`, which matches any run of characters (non-greedy) and is discarded;
//! * everything else, matched literally.
//!
//! The combined log format, for example, is
//!
//! ```text
//! {X.X.X.X} * * [{DD/MMM/YYYY}:{HH:MM:SS} *] "{GET} {PAGE} *" {RETURN} {BYTES} *
//! ```

use std::fmt;

use regex::Regex;

use crate::error::FormatError;

/// One of the recognised capture groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotKind {
    Ip,
    Client,
    Method,
    Page,
    Platform,
    DateDmy,
    DateYmd,
    Time,
    Return,
    Bytes,
    Number,
}

impl SlotKind {
    pub const ALL: [SlotKind; 11] = [
        SlotKind::Ip,
        SlotKind::Client,
        SlotKind::Method,
        SlotKind::Page,
        SlotKind::Platform,
        SlotKind::DateDmy,
        SlotKind::DateYmd,
        SlotKind::Time,
        SlotKind::Return,
        SlotKind::Bytes,
        SlotKind::Number,
    ];

    pub fn token(self) -> &'static str {
        match self {
            SlotKind::Ip => "{X.X.X.X}",
            SlotKind::Client => "{AAA}",
            SlotKind::Method => "{GET}",
            SlotKind::Page => "{PAGE}",
            SlotKind::Platform => "{PLATFORM}",
            SlotKind::DateDmy => "{DD/MMM/YYYY}",
            SlotKind::DateYmd => "{YYYY-MM-DD}",
            SlotKind::Time => "{HH:MM:SS}",
            SlotKind::Return => "{RETURN}",
            SlotKind::Bytes => "{BYTES}",
            SlotKind::Number => "{NNN}",
        }
    }

    pub fn from_token(token: &str) -> Option<SlotKind> {
        SlotKind::ALL.into_iter().find(|k| k.token() == token)
    }

    fn pattern(self) -> &'static str {
        match self {
            SlotKind::Ip => r"(\d{1,3}(?:\.\d{1,3}){3})",
            SlotKind::Client | SlotKind::Page => r"(\S+)",
            SlotKind::Method => r"([A-Za-z]+)",
            SlotKind::Platform => r"(.*?)",
            SlotKind::DateDmy => r"(\d{1,2}/[A-Za-z]{3}/\d{4})",
            SlotKind::DateYmd => r"(\d{4}-\d{2}-\d{2})",
            SlotKind::Time => r"(\d{2}:\d{2}:\d{2})",
            SlotKind::Return | SlotKind::Number => r"(\d+)",
            SlotKind::Bytes => r"(\d+|-)",
        }
    }

    fn is_date(self) -> bool {
        matches!(self, SlotKind::DateDmy | SlotKind::DateYmd)
    }
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Slot(SlotKind),
    Wildcard,
    Literal(String),
}

/// A compiled log format template.
#[derive(Debug, Clone)]
pub struct FormatSpec {
    template: String,
    segments: Vec<Segment>,
    regex: Regex,
}

impl FormatSpec {
    pub fn compile(template: &str) -> Result<FormatSpec, FormatError> {
        if template.is_empty() {
            return Err(FormatError::Empty);
        }
        let segments = tokenize(template)?;
        validate(&segments)?;

        let mut pattern = String::from("^");
        for seg in &segments {
            match seg {
                Segment::Slot(kind) => pattern.push_str(kind.pattern()),
                Segment::Wildcard => pattern.push_str(".*?"),
                Segment::Literal(text) => pattern.push_str(&regex::escape(text)),
            }
        }
        pattern.push('$');
        let regex = Regex::new(&pattern).expect("escaped template always forms a valid regex");

        Ok(FormatSpec {
            template: template.to_owned(),
            segments,
            regex,
        })
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Capture slots in template order, with their index among all segments.
    pub fn slots(&self) -> Vec<(SlotKind, usize)> {
        self.segments
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Segment::Slot(k) => Some((*k, i)),
                _ => None,
            })
            .collect()
    }

    pub fn has_slot(&self, kind: SlotKind) -> bool {
        self.segments.contains(&Segment::Slot(kind))
    }

    pub(crate) fn regex(&self) -> &Regex {
        &self.regex
    }

    pub(crate) fn slot_kinds(&self) -> impl Iterator<Item = SlotKind> + '_ {
        self.segments.iter().filter_map(|s| match s {
            Segment::Slot(k) => Some(*k),
            _ => None,
        })
    }
}

fn tokenize(template: &str) -> Result<Vec<Segment>, FormatError> {
    let mut segments = Vec::new();
    let mut literal = String::new();
    let mut rest = template;

    while let Some(c) = rest.chars().next() {
        if c == '*' {
            flush(&mut literal, &mut segments);
            segments.push(Segment::Wildcard);
            rest = &rest[1..];
        } else if c == '{' {
            match rest.find('}') {
                Some(end) => {
                    let token = &rest[..=end];
                    let kind = SlotKind::from_token(token)
                        .ok_or_else(|| FormatError::UnknownCaptureGroup(token.to_owned()))?;
                    flush(&mut literal, &mut segments);
                    segments.push(Segment::Slot(kind));
                    rest = &rest[end + 1..];
                }
                None => {
                    literal.push(c);
                    rest = &rest[1..];
                }
            }
        } else {
            literal.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }
    flush(&mut literal, &mut segments);
    Ok(segments)
}

fn flush(literal: &mut String, segments: &mut Vec<Segment>) {
    if !literal.is_empty() {
        segments.push(Segment::Literal(std::mem::take(literal)));
    }
}

fn validate(segments: &[Segment]) -> Result<(), FormatError> {
    let mut seen: Vec<SlotKind> = Vec::new();
    let mut date: Option<SlotKind> = None;
    for seg in segments {
        let Segment::Slot(kind) = seg else { continue };
        if *kind == SlotKind::Number {
            continue;
        }
        if kind.is_date() {
            if date.is_some() {
                return Err(FormatError::DuplicateSlot(kind.token().to_owned()));
            }
            date = Some(*kind);
        }
        if seen.contains(kind) {
            return Err(FormatError::DuplicateSlot(kind.token().to_owned()));
        }
        seen.push(*kind);
    }
    if !seen.contains(&SlotKind::Ip) {
        return Err(FormatError::MissingIpSlot);
    }
    if date.is_none() || !seen.contains(&SlotKind::Time) {
        return Err(FormatError::MissingTimestamp);
    }
    Ok(())
}
