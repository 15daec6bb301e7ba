mod common;

use std::fs;

use proptest::prelude::*;
use semdense::tokenizer::{file_stats, TokenStats};
use serde::Deserialize;

#[derive(Deserialize)]
struct VectorFile {
    vectors: Vec<Vector>,
}

#[derive(Deserialize)]
struct Vector {
    text: String,
    ids: Vec<u32>,
}

fn vectors() -> Vec<Vector> {
    let path = common::workspace_root().join("crates/core/tests/data/tokenizer_vectors.json");
    let file: VectorFile = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    file.vectors
}

#[test]
fn vocabulary_entry_count_matches_file() {
    let text = fs::read_to_string(common::vocab_path()).unwrap();
    let oracle = text.lines().filter(|l| !l.trim().is_empty()).count();
    assert_eq!(oracle, 100_256);
    assert_eq!(common::vocab().len(), oracle);
}

#[test]
fn cl100k_tokens_are_merge_reachable() {
    assert!(common::vocab().unreachable_tokens().is_empty());
}

#[test]
fn reference_vectors_match() {
    let vocab = common::vocab();
    let vectors = vectors();
    assert_eq!(vectors.len(), 50);
    for v in &vectors {
        assert_eq!(vocab.encode(&v.text), v.ids, "text {:?}", v.text);
        assert_eq!(vocab.count(&v.text), v.ids.len());
    }
}

#[test]
fn count_examples() {
    let vocab = common::vocab();
    assert_eq!(vocab.count(""), 0);
    assert_eq!(vocab.count("a"), 1);
    // reference tokenizer: 10 tokens
    assert_eq!(
        vocab.count("Payment failed for order #4521: insufficient funds"),
        10
    );
}

#[test]
fn special_tokens_are_plain_text_by_default() {
    let vocab = common::vocab();
    let plain = vocab.encode("<|endoftext|>");
    assert!(plain.len() > 1);
    assert_eq!(vocab.encode_with_special_tokens("hi<|endoftext|>"), {
        let mut ids = vocab.encode("hi");
        ids.push(100257);
        ids
    });
}

#[test]
fn file_stats_counts_whole_file() {
    let vocab = common::vocab();
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.log");
    fs::write(&empty, "").unwrap();
    assert_eq!(file_stats(vocab, &empty).unwrap(), TokenStats::new(0, 0));

    let p = dir.path().join("two.log");
    fs::write(&p, "hello world\nhello world\n").unwrap();
    let stats = file_stats(vocab, &p).unwrap();
    assert_eq!(stats.lines, 2);
    assert_eq!(stats.tokens, vocab.count("hello world\nhello world\n"));

    assert!(file_stats(vocab, dir.path().join("missing")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip_is_byte_exact(s in "\\PC{0,64}|[ \t\r\n]{0,12}|[a-zA-Z0-9 .,'\n]{0,80}") {
        let vocab = common::vocab();
        let ids = vocab.encode(&s);
        prop_assert_eq!(vocab.decode(&ids).unwrap(), s.as_bytes());
        prop_assert_eq!(ids.len() == 0, s.is_empty());
        prop_assert_eq!(vocab.encode(&s), ids);
    }

    #[test]
    fn arbitrary_bytes_round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
        let vocab = common::vocab();
        let ids = vocab.encode_bytes(&bytes);
        prop_assert_eq!(vocab.decode(&ids).unwrap(), bytes);
    }
}
