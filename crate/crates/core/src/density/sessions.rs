use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

/// `n/d` judged outcomes, e.g. correctness 5/5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    pub numerator: u32,
    pub denominator: u32,
}

impl FromStr for Fraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (n, d) = s.split_once('/').ok_or_else(|| format!("expected n/d, got {s:?}"))?;
        let parse = |x: &str| x.trim().parse::<u32>().map_err(|_| format!("expected n/d, got {s:?}"));
        let f = Fraction {
            numerator: parse(n)?,
            denominator: parse(d)?,
        };
        if f.denominator == 0 || f.numerator > f.denominator {
            return Err(format!("fraction {s:?} outside 0..=1"));
        }
        Ok(f)
    }
}

impl TryFrom<String> for Fraction {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Exact count, or an observed `[min, max]` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ToolCalls {
    Exact(u32),
    Range([u32; 2]),
}

impl fmt::Display for ToolCalls {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToolCalls::Exact(n) => write!(f, "{n}"),
            ToolCalls::Range([lo, hi]) => write!(f, "~{lo}-{hi}"),
        }
    }
}

/// One measured agent session over one log format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionRecord {
    /// `A`, `B`, `C` or `D`.
    pub format: char,
    pub session_tokens: u64,
    /// Context already in use when the session starts.
    pub baseline_tokens: u64,
    pub file_tokens: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_calls: Option<ToolCalls>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correctness: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_high: Option<Fraction>,
}

impl SessionRecord {
    fn validate(&self) -> Result<(), String> {
        if !('A'..='D').contains(&self.format) {
            return Err(format!("format must be A, B, C or D, got {:?}", self.format));
        }
        if self.session_tokens < self.baseline_tokens {
            return Err(format!(
                "session_tokens {} below baseline_tokens {}",
                self.session_tokens, self.baseline_tokens
            ));
        }
        if self.file_tokens == 0 {
            return Err("file_tokens must be positive".into());
        }
        if let Some(ToolCalls::Range([lo, hi])) = self.tool_calls {
            if lo > hi {
                return Err(format!("tool_calls range [{lo}, {hi}] is reversed"));
            }
        }
        Ok(())
    }
}

/// One JSON object per non-blank line; errors name the 1-based line.
pub fn parse_session_records(text: &str) -> Result<Vec<SessionRecord>, SessionError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let record: SessionRecord = serde_json::from_str(raw).map_err(|e| SessionError::Parse {
            line,
            message: e.to_string(),
        })?;
        record.validate().map_err(|message| SessionError::Invalid { line, message })?;
        out.push(record);
    }
    Ok(out)
}

pub fn ingest_session_records(path: impl AsRef<Path>) -> Result<Vec<SessionRecord>, SessionError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SessionError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_session_records(&text)
}
