use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use fancy_regex::Regex;

/// Split pattern published with cl100k_base, copied verbatim.
pub const CL100K_PATTERN: &str = r"'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s";

/// Special tokens that cl100k_base reserves above the regular ranks.
pub const CL100K_SPECIAL_TOKENS: [(&str, u32); 5] = [
    ("<|endoftext|>", 100257),
    ("<|fim_prefix|>", 100258),
    ("<|fim_middle|>", 100259),
    ("<|fim_suffix|>", 100260),
    ("<|endofprompt|>", 100276),
];

#[derive(Debug, thiserror::Error)]
pub enum VocabularyError {
    #[error("cannot read vocabulary {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("empty vocabulary")]
    Empty,
    #[error("malformed vocabulary line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("duplicate token id {id} on line {line}")]
    DuplicateId { line: usize, id: u32 },
    #[error("duplicate byte sequence on line {line}")]
    DuplicateToken { line: usize },
    #[error("special token {token:?} reuses id {id}")]
    SpecialCollision { token: String, id: u32 },
    #[error("invalid pre-token pattern: {0}")]
    Pattern(String),
}

/// Pre-tokenization and special-token settings that accompany a rank file.
#[derive(Debug, Clone)]
pub struct VocabularyConfig {
    pub pretoken_pattern: String,
    pub special_tokens: Vec<(String, u32)>,
}

impl VocabularyConfig {
    pub fn cl100k_base() -> Self {
        Self {
            pretoken_pattern: CL100K_PATTERN.to_string(),
            special_tokens: CL100K_SPECIAL_TOKENS
                .iter()
                .map(|(s, id)| (s.to_string(), *id))
                .collect(),
        }
    }
}

impl Default for VocabularyConfig {
    fn default() -> Self {
        Self::cl100k_base()
    }
}

/// A loaded byte-pair-encoding vocabulary.
///
/// The rank of a byte sequence doubles as its token id and as the merge
/// priority of any pair that concatenates to it, which is how tiktoken-style
/// rank files encode their merge table.
#[derive(Debug)]
pub struct Vocabulary {
    token_table: HashMap<Vec<u8>, u32>,
    decoder: HashMap<u32, Vec<u8>>,
    pretoken_pattern: String,
    pub(crate) splitter: Regex,
    special_tokens: HashMap<String, u32>,
}

impl Vocabulary {
    /// Loads a rank file with the cl100k_base pattern and special tokens.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, VocabularyError> {
        Self::load_with(path, VocabularyConfig::cl100k_base())
    }

    pub fn load_with(
        path: impl AsRef<Path>,
        config: VocabularyConfig,
    ) -> Result<Self, VocabularyError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| VocabularyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, config)
    }

    /// Parses `base64(bytes) rank` lines. Blank lines are skipped.
    pub fn parse(text: &str, config: VocabularyConfig) -> Result<Self, VocabularyError> {
        let mut token_table = HashMap::new();
        let mut decoder = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() {
                continue;
            }
            let mut fields = raw.split(' ');
            let (Some(encoded), Some(rank), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(VocabularyError::Malformed {
                    line,
                    reason: "expected `<base64> <rank>`".into(),
                });
            };
            let bytes = STANDARD
                .decode(encoded)
                .map_err(|e| VocabularyError::Malformed {
                    line,
                    reason: format!("bad base64: {e}"),
                })?;
            if bytes.is_empty() {
                return Err(VocabularyError::Malformed {
                    line,
                    reason: "empty byte sequence".into(),
                });
            }
            let rank: u32 = rank.parse().map_err(|_| VocabularyError::Malformed {
                line,
                reason: format!("bad rank {rank:?}"),
            })?;
            if decoder.contains_key(&rank) {
                return Err(VocabularyError::DuplicateId { line, id: rank });
            }
            if token_table.contains_key(&bytes) {
                return Err(VocabularyError::DuplicateToken { line });
            }
            decoder.insert(rank, bytes.clone());
            token_table.insert(bytes, rank);
        }
        if token_table.is_empty() {
            return Err(VocabularyError::Empty);
        }
        Self::from_parts(token_table, decoder, config)
    }

    fn from_parts(
        token_table: HashMap<Vec<u8>, u32>,
        decoder: HashMap<u32, Vec<u8>>,
        config: VocabularyConfig,
    ) -> Result<Self, VocabularyError> {
        if config.pretoken_pattern.is_empty() {
            return Err(VocabularyError::Pattern("empty pattern".into()));
        }
        let splitter = Regex::new(&config.pretoken_pattern)
            .map_err(|e| VocabularyError::Pattern(e.to_string()))?;
        let mut special_tokens = HashMap::new();
        for (token, id) in config.special_tokens {
            if decoder.contains_key(&id) || special_tokens.values().any(|v| *v == id) {
                return Err(VocabularyError::SpecialCollision { token, id });
            }
            special_tokens.insert(token, id);
        }
        Ok(Self {
            token_table,
            decoder,
            pretoken_pattern: config.pretoken_pattern,
            splitter,
            special_tokens,
        })
    }

    /// Number of regular (non-special) entries.
    pub fn len(&self) -> usize {
        self.token_table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.token_table.is_empty()
    }

    pub fn pretoken_pattern(&self) -> &str {
        &self.pretoken_pattern
    }

    pub fn rank(&self, bytes: &[u8]) -> Option<u32> {
        self.token_table.get(bytes).copied()
    }

    /// Merge priority of the pair `(left, right)`: the rank of their
    /// concatenation, if that sequence is itself a token.
    pub fn merge_rank(&self, left: &[u8], right: &[u8]) -> Option<u32> {
        let mut joined = Vec::with_capacity(left.len() + right.len());
        joined.extend_from_slice(left);
        joined.extend_from_slice(right);
        self.rank(&joined)
    }

    pub fn token_bytes(&self, id: u32) -> Option<&[u8]> {
        self.decoder.get(&id).map(Vec::as_slice).or_else(|| {
            self.special_tokens
                .iter()
                .find(|(_, v)| **v == id)
                .map(|(k, _)| k.as_bytes())
        })
    }

    pub fn special_tokens(&self) -> &HashMap<String, u32> {
        &self.special_tokens
    }

    /// Multi-byte tokens that cannot be split into two shorter tokens.
    /// A vocabulary produced by BPE training returns an empty list.
    pub fn unreachable_tokens(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .token_table
            .iter()
            .filter(|(bytes, _)| bytes.len() > 1)
            .filter(|(bytes, _)| {
                !(1..bytes.len()).any(|cut| {
                    self.token_table.contains_key(&bytes[..cut])
                        && self.token_table.contains_key(&bytes[cut..])
                })
            })
            .map(|(_, id)| *id)
            .collect();
        out.sort_unstable();
        out
    }
}
