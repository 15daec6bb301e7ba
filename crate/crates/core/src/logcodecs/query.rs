use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::logmodel::{CodeRegistry, Level, LogEvent};

use super::decode::{decode_c_line, DecodeError};
use super::{encode_event, parse_schema_header, FormatId};

/// Conjunctive filter over decoded events. Unset fields match everything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryFilter {
    pub level: Option<Level>,
    /// Full service name.
    pub service: Option<String>,
    /// Full kind name.
    pub kind: Option<String>,
    /// Half-open range `[from, to)` in epoch milliseconds.
    pub time_range: Option<(i64, i64)>,
    /// Substring of any decoded attribute value.
    pub value_substring: Option<String>,
}

impl QueryFilter {
    pub fn matches(&self, e: &LogEvent) -> bool {
        self.level.is_none_or(|l| e.level == l)
            && self.service.as_deref().is_none_or(|s| e.service == s)
            && self.kind.as_deref().is_none_or(|k| e.kind == k)
            && self
                .time_range
                .is_none_or(|(from, to)| (from..to).contains(&e.timestamp_ms))
            && self
                .value_substring
                .as_deref()
                .is_none_or(|needle| e.attributes.iter().any(|(_, v)| v.contains(needle)))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum QueryError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Decodes every matching event of a compressed log and renders it in the
/// human-readable layout, preserving file order.
pub fn query_compressed_text(
    text: &str,
    registry: &CodeRegistry,
    filter: &QueryFilter,
) -> Result<Vec<String>, QueryError> {
    parse_schema_header(text)?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let event = decode_c_line(line, registry).map_err(|e| e.at_line(idx + 1))?;
        if filter.matches(&event) {
            out.extend(encode_event(&event, FormatId::A, registry).expect("format A never fails"));
        }
    }
    Ok(out)
}

pub fn query_compressed_log(
    path: impl AsRef<Path>,
    registry: &CodeRegistry,
    filter: &QueryFilter,
) -> Result<Vec<String>, QueryError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| QueryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    query_compressed_text(&text, registry, filter)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FILE: &str = "# levels: D=DEBUG; I=INFO; W=WARN; E=ERROR\n\
1736936000|I|PS|pa|o=4521|amt=10.00|cur=USD|pm=cc\n\
1736936002|E|PS|pf|o=4521|rs=insuf_funds\n\
1736936090|E|OS|pf|o=7000|rs=card_decl\n";

    #[test]
    fn empty_filter_decodes_everything() {
        let reg = CodeRegistry::builtin();
        let lines = query_compressed_text(FILE, &reg, &QueryFilter::default()).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[1],
            "2025-01-15 10:13:22 ERROR [payment-service] Payment failed for order #4521: insufficient funds"
        );
    }

    #[test]
    fn filters_are_conjunctive() {
        let reg = CodeRegistry::builtin();
        let filter = QueryFilter {
            service: Some("payment-service".into()),
            value_substring: Some("4521".into()),
            ..Default::default()
        };
        let lines = query_compressed_text(FILE, &reg, &filter).unwrap();
        assert_eq!(lines.len(), 2);
        let filter = QueryFilter {
            level: Some(Level::Error),
            service: Some("payment-service".into()),
            ..Default::default()
        };
        let lines = query_compressed_text(FILE, &reg, &filter).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].contains("insufficient funds"));
        let filter = QueryFilter {
            time_range: Some((1_736_936_001_000, 1_736_936_090_000)),
            ..Default::default()
        };
        assert_eq!(query_compressed_text(FILE, &reg, &filter).unwrap().len(), 1);
    }

    #[test]
    fn missing_header_and_bad_codes() {
        let reg = CodeRegistry::builtin();
        let err = query_compressed_text("1|E|PS|pf\n", &reg, &QueryFilter::default()).unwrap_err();
        assert!(matches!(err, QueryError::Decode(DecodeError::Malformed { .. })));
        let text = format!("{FILE}1736936100|E|ZZ|pf\n");
        let err = query_compressed_text(&text, &reg, &QueryFilter::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 5") && msg.contains("ZZ"), "{msg}");
    }
}
