use crate::logmodel::{CodeRegistry, Level, LogEvent, Namespace, RegistryError};

use super::parse_epoch;

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("{}malformed line: {reason}", line_prefix(*.line))]
    Malformed { line: Option<usize>, reason: String },
    #[error("{}{source}", line_prefix(*.line))]
    Registry {
        line: Option<usize>,
        #[source]
        source: RegistryError,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

impl DecodeError {
    pub(crate) fn at_line(self, n: usize) -> Self {
        match self {
            DecodeError::Malformed { reason, .. } => DecodeError::Malformed {
                line: Some(n),
                reason,
            },
            DecodeError::Registry { source, .. } => DecodeError::Registry {
                line: Some(n),
                source,
            },
        }
    }

    /// True when the failure is an undefined code rather than bad structure.
    pub fn is_undefined_code(&self) -> bool {
        matches!(
            self,
            DecodeError::Registry {
                source: RegistryError::UndefinedCode { .. },
                ..
            }
        )
    }
}

impl From<RegistryError> for DecodeError {
    fn from(source: RegistryError) -> Self {
        DecodeError::Registry { line: None, source }
    }
}

fn malformed(reason: impl Into<String>) -> DecodeError {
    DecodeError::Malformed {
        line: None,
        reason: reason.into(),
    }
}

/// Splits on `|` not preceded by an escaping backslash. Fields stay escaped.
pub(crate) fn split_fields(line: &str) -> Vec<&str> {
    let bytes = line.as_bytes();
    let mut fields = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'|' => {
                fields.push(&line[start..i]);
                i += 1;
                start = i;
            }
            _ => i += 1,
        }
    }
    fields.push(&line[start.min(line.len())..]);
    fields
}

fn unescape(s: &str) -> Result<String, DecodeError> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('|') => out.push('|'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(malformed(format!("bad escape \\{}", other.unwrap_or(' ')))),
        }
    }
    Ok(out)
}

/// Expands one compressed body line back into an event. Collapsed traces come
/// back as a plain `trace` attribute.
pub fn decode_c_line(line: &str, registry: &CodeRegistry) -> Result<LogEvent, DecodeError> {
    let line = line.trim_end_matches(['\n', '\r']);
    if line.starts_with('#') {
        return Err(malformed("header line is not an event"));
    }
    let fields = split_fields(line);
    if fields.len() < 4 {
        return Err(malformed(format!(
            "expected at least 4 `|`-separated fields, found {}",
            fields.len()
        )));
    }
    let timestamp_ms =
        parse_epoch(fields[0]).ok_or_else(|| malformed(format!("bad timestamp {:?}", fields[0])))?;
    let level =
        Level::from_code(fields[1]).ok_or_else(|| malformed(format!("bad level code {:?}", fields[1])))?;
    let service = registry.resolve_full(Namespace::Service, fields[2])?.to_string();
    let kind = registry.resolve_full(Namespace::Kind, fields[3])?.to_string();

    let values = registry.map(Namespace::Value);
    let mut attributes = Vec::new();
    for field in &fields[4..] {
        if field.is_empty() {
            continue;
        }
        let (key, raw) = field
            .split_once('=')
            .ok_or_else(|| malformed(format!("attribute {field:?} lacks `=`")))?;
        let key = registry.resolve_full(Namespace::AttrKey, key)?.to_string();
        let value = if let Some(literal) = raw.strip_prefix("\\.") {
            unescape(literal)?
        } else if let Some(full) = values.full(raw) {
            full.to_string()
        } else {
            unescape(raw)?
        };
        attributes.push((key, value));
    }
    Ok(LogEvent {
        timestamp_ms,
        level,
        service,
        kind,
        attributes,
        stack_trace: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payment_failure_line() {
        let reg = CodeRegistry::builtin();
        let e = decode_c_line("1736936002|E|PS|pf|o=4521|rs=insuf_funds", &reg).unwrap();
        assert_eq!(e.level, Level::Error);
        assert_eq!(e.service, "payment-service");
        assert_eq!(e.kind, "payment_failed");
        assert_eq!(e.attr("order_id"), Some("4521"));
        assert_eq!(e.attr("reason"), Some("insufficient funds"));
        assert_eq!(e.timestamp_ms, 1_736_936_002_000);
    }

    #[test]
    fn undefined_service_code_is_named() {
        let reg = CodeRegistry::builtin();
        let err = decode_c_line("1736936002|E|ZZ|pf|", &reg).unwrap_err();
        assert!(err.is_undefined_code());
        let msg = err.to_string();
        assert!(msg.contains("undefined code") && msg.contains("ZZ"), "{msg}");
    }

    #[test]
    fn structural_errors() {
        let reg = CodeRegistry::builtin();
        for bad in ["", "1|E|PS", "x|E|PS|pf", "1|Q|PS|pf", "1|E|PS|pf|novalue", "# header"] {
            let err = decode_c_line(bad, &reg).unwrap_err();
            assert!(!err.is_undefined_code(), "{bad}: {err}");
        }
        assert!(decode_c_line("1|E|PS|pf|zz=1", &reg).unwrap_err().is_undefined_code());
    }

    #[test]
    fn escaped_pipes_and_literals() {
        let reg = CodeRegistry::builtin();
        let e = decode_c_line(r"1|I|GW|hrj|msg=a\|b|rid=\.cc", &reg).unwrap();
        assert_eq!(e.attr("message"), Some("a|b"));
        assert_eq!(e.attr("request_id"), Some("cc"));
        let e = decode_c_line("1|I|PS|pa|pm=cc", &reg).unwrap();
        assert_eq!(e.attr("payment_method"), Some("credit card"));
    }

    #[test]
    fn field_split() {
        assert_eq!(split_fields(r"a|b\|c|"), vec!["a", r"b\|c", ""]);
        assert_eq!(split_fields("a"), vec!["a"]);
    }
}
