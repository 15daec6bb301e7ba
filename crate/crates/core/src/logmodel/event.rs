use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Level {
    Debug,
    Info,
    Warn,
    Error,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Debug, Level::Info, Level::Warn, Level::Error];

    pub fn name(self) -> &'static str {
        match self {
            Level::Debug => "DEBUG",
            Level::Info => "INFO",
            Level::Warn => "WARN",
            Level::Error => "ERROR",
        }
    }

    /// Single-letter code used by the compressed format.
    pub fn code(self) -> &'static str {
        match self {
            Level::Debug => "D",
            Level::Info => "I",
            Level::Warn => "W",
            Level::Error => "E",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.code() == code)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown level {0:?}")]
pub struct UnknownLevel(pub String);

impl FromStr for Level {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        Self::ALL
            .into_iter()
            .find(|l| l.name() == upper || l.code() == upper || (upper == "WARNING" && *l == Level::Warn))
            .ok_or_else(|| UnknownLevel(s.to_string()))
    }
}

/// One stack frame: `symbol(file:line)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub symbol: String,
    pub file: String,
    pub line: u32,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}:{})", self.symbol, self.file, self.line)
    }
}

/// A single application log event.
///
/// Serialized as one JSON object per line with fields in the order
/// `ts, level, service, kind, attrs, trace`; `attrs` is an array of
/// `[key, value]` pairs and `trace` is omitted when absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEvent {
    /// Unix epoch milliseconds.
    #[serde(rename = "ts")]
    pub timestamp_ms: i64,
    pub level: Level,
    pub service: String,
    pub kind: String,
    #[serde(rename = "attrs", default)]
    pub attributes: Vec<(String, String)>,
    #[serde(rename = "trace", default, skip_serializing_if = "Option::is_none")]
    pub stack_trace: Option<Vec<Frame>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EventError {
    #[error("duplicate attribute key {0:?}")]
    DuplicateKey(String),
    #[error("stack trace on a {0} event; only ERROR events carry traces")]
    TraceOnNonError(Level),
}

impl LogEvent {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn validate(&self) -> Result<(), EventError> {
        for (i, (k, _)) in self.attributes.iter().enumerate() {
            if self.attributes[..i].iter().any(|(prev, _)| prev == k) {
                return Err(EventError::DuplicateKey(k.clone()));
            }
        }
        if self.stack_trace.is_some() && self.level != Level::Error {
            return Err(EventError::TraceOnNonError(self.level));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn event() -> LogEvent {
        LogEvent {
            timestamp_ms: 1_736_935_200_000,
            level: Level::Error,
            service: "payment-service".into(),
            kind: "payment_failed".into(),
            attributes: vec![
                ("order_id".into(), "4521".into()),
                ("reason".into(), "insufficient funds".into()),
            ],
            stack_trace: None,
        }
    }

    #[test]
    fn json_line_field_order() {
        let line = serde_json::to_string(&event()).unwrap();
        assert_eq!(
            line,
            r#"{"ts":1736935200000,"level":"ERROR","service":"payment-service","kind":"payment_failed","attrs":[["order_id","4521"],["reason","insufficient funds"]]}"#
        );
        let back: LogEvent = serde_json::from_str(&line).unwrap();
        assert_eq!(back, event());
    }

    #[test]
    fn validation() {
        assert!(event().validate().is_ok());
        let mut dup = event();
        dup.attributes.push(("reason".into(), "x".into()));
        assert_eq!(dup.validate(), Err(EventError::DuplicateKey("reason".into())));
        let mut traced = event();
        traced.level = Level::Warn;
        traced.stack_trace = Some(vec![]);
        assert!(matches!(traced.validate(), Err(EventError::TraceOnNonError(Level::Warn))));
    }

    #[test]
    fn level_parsing() {
        assert_eq!("error".parse::<Level>().unwrap(), Level::Error);
        assert_eq!("W".parse::<Level>().unwrap(), Level::Warn);
        assert_eq!("warning".parse::<Level>().unwrap(), Level::Warn);
        assert!("fatal".parse::<Level>().is_err());
        assert_eq!(Level::from_code("E"), Some(Level::Error));
    }
}
