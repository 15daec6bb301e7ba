//! Log-event schema, the name/code registry and the seeded corpus generator.

mod event;
mod generator;
mod registry;

use std::io::{BufRead, Write};

pub use event::{EventError, Frame, Level, LogEvent, UnknownLevel};
pub use generator::{
    check_registry, draw_categories, generate_corpus, is_framework_frame, Category,
    CategoryWeights, CorpusSpec, GenerateError,
};
pub use registry::{placeholders, BiMap, CodeRegistry, Namespace, RegistryError, DEFAULT_REGISTRY};

#[derive(Debug, thiserror::Error)]
pub enum EventFileError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes events as JSON lines.
pub fn write_events<W: Write>(mut out: W, events: &[LogEvent]) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Reads JSON-line events, validating each one. Blank lines are skipped.
pub fn read_events<R: BufRead>(input: R) -> Result<Vec<LogEvent>, EventFileError> {
    let mut events = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event: LogEvent =
            serde_json::from_str(&line).map_err(|e| EventFileError::Malformed {
                line: idx + 1,
                message: e.to_string(),
            })?;
        event.validate().map_err(|e| EventFileError::Malformed {
            line: idx + 1,
            message: e.to_string(),
        })?;
        events.push(event);
    }
    Ok(events)
}
