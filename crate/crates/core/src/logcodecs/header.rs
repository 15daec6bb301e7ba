use crate::logmodel::{CodeRegistry, Level, Namespace};

use super::decode::{split_fields, DecodeError};

/// Comment block that opens a compressed log file and declares every code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaHeader {
    pub lines: Vec<String>,
}

impl SchemaHeader {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

fn section_label(ns: Namespace) -> &'static str {
    match ns {
        Namespace::Service => "services",
        Namespace::Kind => "kinds",
        Namespace::AttrKey => "keys",
        Namespace::Value => "values",
    }
}

fn escape_entry(s: &str) -> String {
    s.replace('\\', "\\\\").replace(';', "\\;").replace('\n', "\\n")
}

fn unescape_entry(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Splits on `; ` separators that are not escaped.
fn split_entries(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b';' => {
                parts.push(&s[start..i]);
                i += 1;
                if bytes.get(i) == Some(&b' ') {
                    i += 1;
                }
                start = i;
            }
            _ => i += 1,
        }
    }
    if start < s.len() {
        parts.push(&s[start..]);
    }
    parts
}

/// Header covering every registry entry: levels first, then services, kinds,
/// keys and values, each ordered by full name. Empty namespaces are omitted.
pub fn emit_schema_header(registry: &CodeRegistry) -> SchemaHeader {
    let levels: Vec<String> = Level::ALL
        .iter()
        .map(|l| format!("{}={}", l.code(), l.name()))
        .collect();
    let mut lines = vec![format!("# levels: {}", levels.join("; "))];
    for ns in Namespace::ALL {
        let map = registry.map(ns);
        if map.is_empty() {
            continue;
        }
        let entries: Vec<String> = map
            .iter()
            .map(|(full, code)| format!("{code}={}", escape_entry(full)))
            .collect();
        lines.push(format!("# {}: {}", section_label(ns), entries.join("; ")));
    }
    SchemaHeader { lines }
}

/// Rebuilds the code tables declared by the leading `#` lines of a file.
/// Templates are not part of the header.
pub fn parse_schema_header(text: &str) -> Result<CodeRegistry, DecodeError> {
    let mut registry = CodeRegistry::empty();
    let mut seen = false;
    for (idx, line) in text.lines().enumerate() {
        let Some(body) = line.strip_prefix('#') else {
            break;
        };
        seen = true;
        let body = body.trim_start();
        let Some((label, entries)) = body.split_once(':') else {
            continue;
        };
        let ns = match label.trim() {
            "levels" => continue,
            "services" => Namespace::Service,
            "kinds" => Namespace::Kind,
            "keys" => Namespace::AttrKey,
            "values" => Namespace::Value,
            _ => continue,
        };
        for entry in split_entries(entries.trim_start()) {
            let Some((code, full)) = entry.split_once('=') else {
                return Err(DecodeError::Malformed {
                    line: Some(idx + 1),
                    reason: format!("header entry {entry:?} lacks `=`"),
                });
            };
            registry
                .insert(ns, &unescape_entry(full), code)
                .map_err(|e| DecodeError::Malformed {
                    line: Some(idx + 1),
                    reason: e.to_string(),
                })?;
        }
    }
    if !seen {
        return Err(DecodeError::Malformed {
            line: Some(1),
            reason: "missing schema header".into(),
        });
    }
    Ok(registry)
}

/// Service, kind, key and level codes used in body lines but absent from the
/// file's own header, as `(namespace, code)` pairs (levels report as kind
/// `None`).
pub fn undeclared_codes(text: &str) -> Result<Vec<(Option<Namespace>, String)>, DecodeError> {
    let header = parse_schema_header(text)?;
    let mut missing = Vec::new();
    let mut note = |ns: Option<Namespace>, code: &str| {
        let known = match ns {
            None => Level::from_code(code).is_some(),
            Some(ns) => header.map(ns).full(code).is_some(),
        };
        if !known && !missing.iter().any(|(n, c)| *n == ns && c == code) {
            missing.push((ns, code.to_string()));
        }
    };
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let fields = split_fields(line);
        if fields.len() < 4 {
            continue;
        }
        note(None, fields[1]);
        note(Some(Namespace::Service), fields[2]);
        note(Some(Namespace::Kind), fields[3]);
        for f in &fields[4..] {
            if let Some((k, _)) = f.split_once('=') {
                note(Some(Namespace::AttrKey), k);
            }
        }
    }
    Ok(missing)
}
