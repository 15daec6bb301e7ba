//! Byte-pair-encoding token counting against tiktoken-style rank files
//! (cl100k_base by default).
//!
//! The vocabulary is always read from disk at runtime; nothing is embedded.

mod bpe;
mod vocab;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use bpe::UnknownTokenId;
pub use vocab::{
    Vocabulary, VocabularyConfig, VocabularyError, CL100K_PATTERN, CL100K_SPECIAL_TOKENS,
};

/// Per-file token accounting: the Tokens, Lines and Tok/Line columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub tokens: usize,
    pub lines: usize,
    /// `None` when the file has no lines.
    pub tokens_per_line: Option<f64>,
}

impl TokenStats {
    pub fn new(tokens: usize, lines: usize) -> Self {
        let tokens_per_line = (lines > 0).then(|| tokens as f64 / lines as f64);
        Self {
            tokens,
            lines,
            tokens_per_line,
        }
    }

    pub fn of_text(vocab: &Vocabulary, text: &str) -> Self {
        Self::new(vocab.count(text), count_lines(text))
    }
}

impl fmt::Display for TokenStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tokens={} lines={} tok/line=", self.tokens, self.lines)?;
        match self.tokens_per_line {
            Some(v) => write!(f, "{v:.2}"),
            None => f.write_str("n/a"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot read {path}: {source}")]
pub struct ReadError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

/// Newline-delimited line count; a trailing newline does not open a new line.
pub fn count_lines(text: &str) -> usize {
    if text.is_empty() {
        return 0;
    }
    let newlines = text.bytes().filter(|&b| b == b'\n').count();
    if text.ends_with('\n') {
        newlines
    } else {
        newlines + 1
    }
}

pub fn file_stats(vocab: &Vocabulary, path: impl AsRef<Path>) -> Result<TokenStats, ReadError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| ReadError {
        path: path.to_path_buf(),
        source,
    })?;
    let tokens = vocab.encode_bytes(&bytes).len();
    let lines = count_lines(&String::from_utf8_lossy(&bytes));
    Ok(TokenStats::new(tokens, lines))
}
