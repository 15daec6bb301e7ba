//! Encoders for the three log layouts, the compressed-format schema header,
//! and the decoder/query tool that expands compressed lines on demand.
//!
//! Grammars (ABNF, `LF` line endings):
//!
//! ```text
//! line-a   = date SP time SP level-name SP "[" service "]" SP sentence LF *frame-a
//! frame-a  = 4SP "at" SP symbol "(" file ":" line ")" LF
//!
//! line-b   = epoch "|" level-name "|" service "|" kind *("|" key "=" value-b) ["|trace=" frames-b] LF
//! frames-b = frame-b *(";" frame-b)
//! frame-b  = symbol "(" file ":" line ")"
//!
//! file-c   = header *line-c
//! header   = 1*("# " namespace ": " [entry *("; " entry)] LF)
//! entry    = code "=" full-name
//! line-c   = epoch "|" level-code "|" service-code "|" kind-code *("|" key-code "=" value-c)
//!            ["|tr=" exception-class "@" top-symbol "+" frame-count] LF
//!
//! epoch    = 1*DIGIT ["." 3DIGIT]          ; seconds, millis only when non-zero
//! ```
//!
//! In B and C values, `\`, `|`, CR and LF are backslash-escaped. B writes
//! registry-enumerated values with spaces turned into underscores. C replaces
//! enumerated values by their abbreviation and passes free text through; a free
//! text value that collides with an abbreviation is prefixed with `\.`.

mod decode;
mod header;
mod query;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use chrono::DateTime;
use serde::Serialize;

use crate::logmodel::{placeholders, CodeRegistry, LogEvent, Namespace, RegistryError};

pub use decode::{decode_c_line, DecodeError};
pub use header::{emit_schema_header, parse_schema_header, undeclared_codes, SchemaHeader};
pub use query::{query_compressed_log, query_compressed_text, QueryError, QueryFilter};

/// Attribute whose value names the exception class of a traced event.
pub const EXCEPTION_ATTR: &str = "exception";
/// Attribute key that carries the collapsed trace in the compressed format.
pub const TRACE_ATTR: &str = "trace";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FormatId {
    /// Human-readable sentences with formatted timestamps.
    A,
    /// Pipe-delimited, epoch seconds, full names.
    B,
    /// Pipe-delimited with abbreviated codes and a schema header.
    C,
}

impl FormatId {
    pub const ALL: [FormatId; 3] = [FormatId::A, FormatId::B, FormatId::C];

    pub fn letter(self) -> char {
        match self {
            FormatId::A => 'A',
            FormatId::B => 'B',
            FormatId::C => 'C',
        }
    }
}

impl FromStr for FormatId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(FormatId::A),
            "B" => Ok(FormatId::B),
            "C" => Ok(FormatId::C),
            other => Err(format!("unknown format {other:?}; expected A, B or C")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EncodeError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("events are not sorted by timestamp (index {0})")]
    Unsorted(usize),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Encodes one event. Format A may yield several lines (one per frame).
pub fn encode_event(
    event: &LogEvent,
    format: FormatId,
    registry: &CodeRegistry,
) -> Result<Vec<String>, RegistryError> {
    Ok(match format {
        FormatId::A => encode_a(event, registry),
        FormatId::B => vec![encode_b(event, registry)],
        FormatId::C => vec![encode_c(event, registry)?],
    })
}

fn encode_a(event: &LogEvent, registry: &CodeRegistry) -> Vec<String> {
    let mut line = format!(
        "{} {} [{}] {}",
        format_utc(event.timestamp_ms),
        event.level.name(),
        event.service,
        sentence(event, registry)
    );
    line = line.replace('\n', "\\n").replace('\r', "\\r");
    let mut lines = vec![line];
    if let Some(trace) = &event.stack_trace {
        lines.extend(trace.iter().map(|f| format!("    at {f}")));
    }
    lines
}

/// The natural-language message of an event (Format A without the prefix).
pub fn sentence(event: &LogEvent, registry: &CodeRegistry) -> String {
    let mut used: Vec<&str> = Vec::new();
    let mut text = match registry.template(&event.kind) {
        Some(template) => {
            let mut out = template.to_string();
            for key in placeholders(template) {
                if let Some(v) = event.attr(key) {
                    out = out.replace(&format!("{{{key}}}"), v);
                    used.push(key);
                }
            }
            out
        }
        None => humanize(&event.kind),
    };
    let rest: Vec<String> = event
        .attributes
        .iter()
        .filter(|(k, _)| !used.contains(&k.as_str()))
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if !rest.is_empty() {
        if registry.template(&event.kind).is_some() {
            let _ = write!(text, " ({})", rest.join(", "));
        } else {
            let _ = write!(text, ": {}", rest.join(", "));
        }
    }
    text
}

fn humanize(kind: &str) -> String {
    let words = kind.replace('_', " ");
    let mut chars = words.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn encode_b(event: &LogEvent, registry: &CodeRegistry) -> String {
    let mut line = format!(
        "{}|{}|{}|{}",
        format_epoch(event.timestamp_ms),
        event.level.name(),
        escape(&event.service),
        escape(&event.kind)
    );
    for (k, v) in &event.attributes {
        let value = if registry.map(Namespace::Value).code(v).is_some() {
            escape(&v.replace(' ', "_"))
        } else {
            escape(v)
        };
        let _ = write!(line, "|{}={}", escape(k), value);
    }
    if let Some(trace) = &event.stack_trace {
        let frames: Vec<String> = trace.iter().map(|f| escape(&f.to_string())).collect();
        let _ = write!(line, "|trace={}", frames.join(";"));
    }
    line
}

fn encode_c(event: &LogEvent, registry: &CodeRegistry) -> Result<String, RegistryError> {
    let mut line = format!(
        "{}|{}|{}|{}",
        format_epoch(event.timestamp_ms),
        event.level.code(),
        registry.resolve_code(Namespace::Service, &event.service)?,
        registry.resolve_code(Namespace::Kind, &event.kind)?
    );
    let values = registry.map(Namespace::Value);
    for (k, v) in &event.attributes {
        let key = registry.resolve_code(Namespace::AttrKey, k)?;
        let value = match values.code(v) {
            Some(code) => code.to_string(),
            None if values.full(v).is_some() || v.starts_with("\\.") => format!("\\.{}", escape(v)),
            None => escape(v),
        };
        let _ = write!(line, "|{key}={value}");
    }
    if event.stack_trace.is_some() {
        let key = registry.resolve_code(Namespace::AttrKey, TRACE_ATTR)?;
        let _ = write!(line, "|{key}={}", escape(&collapse_trace(event)));
    }
    Ok(line)
}

/// `<ExceptionClass>@<top-frame-symbol>+<frame-count>`.
pub fn collapse_trace(event: &LogEvent) -> String {
    let class = event
        .attr(EXCEPTION_ATTR)
        .map(|e| e.rsplit('.').next().unwrap_or(e))
        .unwrap_or("Exception");
    let frames = event.stack_trace.as_deref().unwrap_or_default();
    let top = frames.first().map(|f| f.symbol.as_str()).unwrap_or("?");
    format!("{class}@{top}+{}", frames.len())
}

/// `YYYY-MM-DD HH:MM:SS` in UTC.
pub fn format_utc(timestamp_ms: i64) -> String {
    match DateTime::from_timestamp_millis(timestamp_ms) {
        Some(dt) => dt.format("%Y-%m-%d %H:%M:%S").to_string(),
        None => timestamp_ms.to_string(),
    }
}

/// Epoch seconds, with `.mmm` only when the milliseconds are non-zero.
pub fn format_epoch(timestamp_ms: i64) -> String {
    let secs = timestamp_ms.div_euclid(1000);
    let millis = timestamp_ms.rem_euclid(1000);
    if millis == 0 {
        secs.to_string()
    } else {
        format!("{secs}.{millis:03}")
    }
}

pub(crate) fn parse_epoch(s: &str) -> Option<i64> {
    let (secs, millis) = match s.split_once('.') {
        Some((secs, frac)) if frac.len() == 3 && frac.bytes().all(|b| b.is_ascii_digit()) => {
            (secs, frac.parse::<i64>().ok()?)
        }
        Some(_) => return None,
        None => (s, 0),
    };
    if secs.is_empty() || !secs.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(secs.parse::<i64>().ok()? * 1000 + millis)
}

pub(crate) fn escape(s: &str) -> String {
    if !s.contains(['\\', '|', '\n', '\r']) {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len() + 4);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '|' => out.push_str("\\|"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// Renders a whole log file in memory.
pub fn render_log(
    events: &[LogEvent],
    format: FormatId,
    registry: &CodeRegistry,
) -> Result<String, EncodeError> {
    if let Some(i) = events
        .windows(2)
        .position(|w| w[0].timestamp_ms > w[1].timestamp_ms)
    {
        return Err(EncodeError::Unsorted(i + 1));
    }
    let mut out = String::new();
    if format == FormatId::C {
        out.push_str(&emit_schema_header(registry).to_text());
    }
    for e in events {
        for line in encode_event(e, format, registry)? {
            out.push_str(&line);
            out.push('\n');
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FileSummary {
    pub format: FormatId,
    pub lines: usize,
    pub header_lines: usize,
    pub events: usize,
    pub bytes: usize,
}

pub fn summarize(text: &str, format: FormatId, events: usize) -> FileSummary {
    let lines = crate::tokenizer::count_lines(text);
    let header_lines = text.lines().take_while(|l| l.starts_with('#')).count();
    FileSummary {
        format,
        lines,
        header_lines,
        events,
        bytes: text.len(),
    }
}

pub fn write_log_file(
    events: &[LogEvent],
    format: FormatId,
    registry: &CodeRegistry,
    path: impl AsRef<Path>,
) -> Result<FileSummary, EncodeError> {
    let path = path.as_ref();
    let text = render_log(events, format, registry)?;
    fs::write(path, &text).map_err(|source| EncodeError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(summarize(&text, format, events.len()))
}
