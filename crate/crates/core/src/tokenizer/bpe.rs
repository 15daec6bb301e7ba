use super::vocab::Vocabulary;

#[derive(Debug, thiserror::Error)]
#[error("unknown token id {0}")]
pub struct UnknownTokenId(pub u32);

impl Vocabulary {
    /// Encodes text as ordinary text: special-token literals are split like
    /// any other characters.
    pub fn encode(&self, text: &str) -> Vec<u32> {
        let mut out = Vec::new();
        self.encode_into(text, &mut out);
        out
    }

    /// Encodes arbitrary bytes. Valid UTF-8 runs go through the normal path;
    /// each invalid byte becomes its single-byte token.
    pub fn encode_bytes(&self, bytes: &[u8]) -> Vec<u32> {
        let mut out = Vec::new();
        for chunk in bytes.utf8_chunks() {
            self.encode_into(chunk.valid(), &mut out);
            for b in chunk.invalid() {
                out.push(self.single_byte(*b));
            }
        }
        out
    }

    /// Encodes text, mapping special-token literals to their reserved ids.
    pub fn encode_with_special_tokens(&self, text: &str) -> Vec<u32> {
        let mut out = Vec::new();
        let mut rest = text;
        loop {
            let next = self
                .special_tokens()
                .iter()
                .filter_map(|(lit, id)| rest.find(lit.as_str()).map(|pos| (pos, lit.len(), *id)))
                .min_by_key(|(pos, len, _)| (*pos, usize::MAX - len));
            match next {
                Some((pos, len, id)) => {
                    self.encode_into(&rest[..pos], &mut out);
                    out.push(id);
                    rest = &rest[pos + len..];
                }
                None => {
                    self.encode_into(rest, &mut out);
                    return out;
                }
            }
        }
    }

    pub fn count(&self, text: &str) -> usize {
        let mut n = 0;
        self.for_each_piece(text, |piece| {
            n += if self.rank(piece).is_some() {
                1
            } else {
                merge_boundaries(self, piece).len() - 1
            };
        });
        n
    }

    pub fn decode(&self, ids: &[u32]) -> Result<Vec<u8>, UnknownTokenId> {
        let mut out = Vec::new();
        for &id in ids {
            out.extend_from_slice(self.token_bytes(id).ok_or(UnknownTokenId(id))?);
        }
        Ok(out)
    }

    fn encode_into(&self, text: &str, out: &mut Vec<u32>) {
        self.for_each_piece(text, |piece| {
            if let Some(id) = self.rank(piece) {
                out.push(id);
                return;
            }
            let bounds = merge_boundaries(self, piece);
            for w in bounds.windows(2) {
                let part = &piece[w[0]..w[1]];
                out.push(self.rank(part).unwrap_or_else(|| self.single_byte(part[0])));
            }
        });
    }

    fn for_each_piece(&self, text: &str, mut f: impl FnMut(&[u8])) {
        let mut last = 0;
        for m in self.splitter.find_iter(text) {
            match m {
                Ok(m) => {
                    f(m.as_str().as_bytes());
                    last = m.end();
                }
                // Backtrack limit: fall back to treating the remainder as one piece.
                Err(_) => break,
            }
        }
        if last < text.len() {
            f(text[last..].as_bytes());
        }
    }

    fn single_byte(&self, b: u8) -> u32 {
        self.rank(&[b])
            .expect("vocabulary lacks a single-byte token")
    }
}

/// Runs rank-ordered pair merging over one pre-token and returns the byte
/// offsets of the resulting token boundaries (first 0, last `piece.len()`).
///
/// At each step the adjacent pair whose concatenation has the lowest rank is
/// merged; ties go to the leftmost pair.
fn merge_boundaries(vocab: &Vocabulary, piece: &[u8]) -> Vec<usize> {
    debug_assert!(piece.len() > 1);
    // (start offset, rank of the pair starting here)
    let mut parts: Vec<(usize, u32)> = Vec::with_capacity(piece.len() + 1);
    for i in 0..piece.len() - 1 {
        parts.push((i, vocab.rank(&piece[i..i + 2]).unwrap_or(u32::MAX)));
    }
    parts.push((piece.len() - 1, u32::MAX));
    parts.push((piece.len(), u32::MAX));

    let pair_rank = |parts: &[(usize, u32)], i: usize| -> u32 {
        if i + 3 < parts.len() {
            vocab
                .rank(&piece[parts[i].0..parts[i + 3].0])
                .unwrap_or(u32::MAX)
        } else {
            u32::MAX
        }
    };

    loop {
        let Some((i, rank)) = parts[..parts.len() - 1]
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.1))
            .min_by_key(|&(i, r)| (r, i))
        else {
            break;
        };
        if rank == u32::MAX {
            break;
        }
        if i > 0 {
            parts[i - 1].1 = pair_rank(&parts, i - 1);
        }
        parts[i].1 = pair_rank(&parts, i);
        parts.remove(i + 1);
    }
    parts.into_iter().map(|(start, _)| start).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::vocab::VocabularyConfig;
    use base64::engine::general_purpose::STANDARD;
    use base64::Engine;

    fn toy() -> Vocabulary {
        let mut text = String::new();
        for b in 0u8..=255 {
            text.push_str(&format!("{} {}\n", STANDARD.encode([b]), b as u32));
        }
        for (i, tok) in ["ab", "bc", "abc", "cd"].iter().enumerate() {
            text.push_str(&format!("{} {}\n", STANDARD.encode(tok), 256 + i));
        }
        Vocabulary::parse(&text, VocabularyConfig::default()).unwrap()
    }

    #[test]
    fn lowest_rank_pair_merges_first() {
        let v = toy();
        // "ab" (256) beats "bc" (257), then "abc" (258); "d" stays alone.
        assert_eq!(v.encode("abcd"), vec![258, b'd' as u32]);
        // "bcd": "bc" (257) beats "cd" (259).
        assert_eq!(v.encode("bcd"), vec![257, b'd' as u32]);
    }

    #[test]
    fn empty_input_is_empty() {
        let v = toy();
        assert!(v.encode("").is_empty());
        assert_eq!(v.count(""), 0);
    }

    #[test]
    fn invalid_bytes_encode_bytewise() {
        let v = toy();
        let bytes = [b'a', 0xff, b'b', b'c'];
        let ids = v.encode_bytes(&bytes);
        assert_eq!(ids, vec![b'a' as u32, 0xff, 257]);
        assert_eq!(v.decode(&ids).unwrap(), bytes);
    }

    #[test]
    fn unknown_id_fails_decode() {
        assert!(toy().decode(&[999_999]).is_err());
    }
}
